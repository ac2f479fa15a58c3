"""Command-line driver: polytope facts, manifold invariants, orbit verdicts, reproduction suite."""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import json
import logging
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import fibration, gosset, manifold, symmetry
from .cache import CACHE_ENV, cache_dir, load_polytope
from .gosset import GossetPolytope, ValidationError
from .parallel import default_workers
from .pi1 import DEFAULT_BUDGET

log = logging.getLogger("gosset_fibering")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_VALIDATION = 2
EXIT_UNDETERMINED = 3
EXIT_IO = 4

EXPECTED_VERDICT = {
    3: fibration.Verdict.ONE_LEGAL,
    4: fibration.Verdict.LEGAL,
    5: fibration.Verdict.LEGAL,
    6: fibration.Verdict.LEGAL,
    7: fibration.Verdict.ONE_LEGAL,
    8: fibration.Verdict.ONE_LEGAL,
}
EXPECTED_CLASSES = {3: 2, 4: 4, 5: 7, 7: 106, 8: 185}
EXPECTED_CHI = {3: (Fraction(0), 0), 4: (Fraction(1, 16), 2), 5: (Fraction(0), 0),
                6: (Fraction(-1, 8), -64), 7: (Fraction(0), 0), 8: (Fraction(17, 2), 278528)}
EXPECTED_MIS = {3: 2, 4: 2, 5: 2, 6: 3, 7: 4, 8: 16}


@dataclass
class RunConfig:
    n: int
    colouring: str | None = None
    state: str | None = None
    threads: int = 1
    pi1_budget: int = DEFAULT_BUDGET
    cache: Path | None = None
    fmt: str = "human"


def _emit(doc: dict[str, Any], fmt: str, human: Callable[[], None]) -> None:
    if fmt == "json":
        doc = {**doc, "generated_at": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")}
        json.dump(doc, sys.stdout, indent=2, sort_keys=True)
        sys.stdout.write("\n")
    else:
        human()


def _polytope(cfg: RunConfig) -> GossetPolytope:
    return load_polytope(cfg.n, cfg.cache)


def _colouring(cfg: RunConfig, q: GossetPolytope) -> manifold.Colouring:
    if cfg.colouring:
        col = manifold.load_colouring(cfg.colouring)
        col.validate(q)
        return col
    return manifold.builtin_colouring(q)


def cmd_polytope_info(cfg: RunConfig) -> int:
    q = _polytope(cfg)
    f = gosset.face_vector(q)
    chi = gosset.euler_characteristic(q)
    facets, ideal, finite = q.counts()
    doc = {
        "n": q.n,
        "dual": gosset.GOSSET_NAME[q.n],
        "facets": facets,
        "ideal_vertices": ideal,
        "finite_vertices": finite,
        "degree": q.degrees()[0],
        "face_vector": f,
        "chi_P": str(chi),
    }

    def human() -> None:
        print(f"P^{q.n} (dual {gosset.GOSSET_NAME[q.n]})")
        print(f"  facets {facets}  ideal {ideal}  finite {finite}  degree {q.degrees()[0]}")
        print(f"  f-vector {f}")
        print(f"  chi(P) = {chi}")

    _emit(doc, cfg.fmt, human)
    return EXIT_OK


def cmd_colouring_validate(cfg: RunConfig) -> int:
    q = _polytope(cfg)
    col = manifold.load_colouring(cfg.colouring or "")
    col.validate(q)
    print(f"valid: {col.c} colours, class sizes {sorted(set(col.class_sizes()))}")
    return EXIT_OK


def cmd_manifold(cfg: RunConfig, use_symmetry: bool = True) -> int:
    q = _polytope(cfg)
    col = _colouring(cfg, q)
    perms = symmetry.colour_permutations(q.neighbours, col.colours) if use_symmetry else None
    report = manifold.manifold_report(q, col, perms, cfg.threads)
    if cfg.fmt == "csv":
        w = csv.writer(sys.stdout)
        w.writerow(manifold.ManifoldReport.csv_header())
        w.writerow(report.csv_row())
        return EXIT_OK

    def human() -> None:
        print(f"M^{q.n}: {col.c} colours, chi(P) = {report.chi_p}, chi(M) = {report.chi_m}")
        print(f"  betti {list(report.betti.values)}")
        print(f"  cusps {report.total_cusps}  breakdown (c', vertices, cusps each) {report.census.breakdown()}")
        print(f"  volume {report.volume.label} ~ {float(report.volume.manifold):.6g}")
        for name, ok in report.checks().items():
            print(f"  {name}: {'ok' if ok else 'FAILED'}")

    _emit(report.to_json(), cfg.fmt, human)
    return EXIT_OK if all(report.checks().values()) else EXIT_VALIDATION


def cmd_orbit(cfg: RunConfig, euler_check: bool = False) -> int:
    q = _polytope(cfg)
    col = _colouring(cfg, q)
    s0 = fibration.load_state(cfg.state) if cfg.state else fibration.builtin_state(q, col)
    if s0.size != q.size:
        raise ValidationError(f"state has {s0.size} entries, polytope has {q.size} facets")
    t0 = time.perf_counter()
    report = fibration.check_orbit(q, col, s0, cfg.pi1_budget, cfg.threads)
    elapsed = time.perf_counter() - t0

    def human() -> None:
        print(f"P^{q.n} orbit of {report.orbit_size} states ({report.distinct_states} distinct), {elapsed:.1f}s")
        print(f"  verdict {report.verdict.value}" + (f" (witness vector {report.witness})" if report.witness is not None else ""))
        print(f"  link classes {len(report.classes)}")
        if euler_check:
            print(f"  chi sum ascending {report.chi_ascending}  descending {report.chi_descending}  chi(M) {report.chi_expected}")
        if report.cusps is not None:
            print(f"  null-homotopic cusp restrictions at {len(report.cusps.null_homotopic)} ideal vertices")

    _emit(report.to_json(), cfg.fmt, human)
    if report.verdict is fibration.Verdict.UNDETERMINED:
        return EXIT_UNDETERMINED
    if euler_check and not report.euler_check:
        return EXIT_MISMATCH
    if cfg.state or cfg.colouring:
        return EXIT_OK if report.legal else EXIT_MISMATCH
    return EXIT_OK if report.verdict is EXPECTED_VERDICT[q.n] else EXIT_MISMATCH


def cmd_cusps(cfg: RunConfig) -> int:
    q = _polytope(cfg)
    col = _colouring(cfg, q)
    census = manifold.cusp_census(q, col)
    doc = census.to_json() | {"n": q.n, "entries": [e.to_json() for e in census.entries]}

    def human() -> None:
        print(f"P^{q.n}: {census.total} cusps")
        for cp, count, each in census.breakdown():
            print(f"  {count} ideal vertices with c' = {cp}, {each} cusps each")

    _emit(doc, cfg.fmt, human)
    return EXIT_OK


def cmd_volumes(fmt: str) -> int:
    vols = [manifold.volume(n) for n in range(3, 9)]
    doc = {"volumes": [v.to_json() for v in vols]}

    def human() -> None:
        for v in vols:
            print(f"M^{v.n}: {v.label:>20}  ~ {float(v.manifold):.6g}   (P^{v.n} ~ {float(v.polytope):.6g})")

    _emit(doc, fmt, human)
    return EXIT_OK


@dataclass
class Check:
    name: str
    ok: bool
    detail: str


def reproduce(skip_heavy: bool, threads: int = 1, cache: Path | None = None) -> list[Check]:
    """Recompute every reference invariant; the heavy tier adds the 4_21 orbit and unreduced sums."""
    checks: list[Check] = []

    def add(name: str, ok: bool, detail: Any) -> None:
        checks.append(Check(name, bool(ok), str(detail)))
        log.info("%-40s %s  %s", name, "ok" if ok else "FAIL", detail)

    for n in range(3, 9):
        q = load_polytope(n, cache)
        add(f"P^{n} counts", q.counts() == gosset.FACET_COUNTS[n], q.counts())
        col = manifold.builtin_colouring(q)
        chi = manifold.euler_characteristics(q, col.c)
        add(f"P^{n} euler", chi == EXPECTED_CHI[n], f"{chi[0]}, {chi[1]}")
        perms = symmetry.colour_permutations(q.neighbours, col.colours) if n >= 7 else None
        b = manifold.betti_of_manifold(q, col, perms, threads)
        add(f"M^{n} betti", b.values == manifold.REFERENCE_BETTI[n], list(b.values))
        if n >= 7 and not skip_heavy:
            full = manifold.betti_of_manifold(q, col, None, threads)
            add(f"M^{n} betti (unreduced sum)", full.values == manifold.REFERENCE_BETTI[n], list(full.values))
        census = manifold.cusp_census(q, col)
        add(f"M^{n} cusps", census.total == manifold.REFERENCE_CUSPS[n], census.breakdown())
        alpha = manifold.max_disjoint_facets(q)
        add(f"P^{n} max disjoint facets", alpha == EXPECTED_MIS[n], alpha)
        if n == 8 and skip_heavy:
            continue
        s0 = fibration.builtin_state(q, col)
        rep = fibration.check_orbit(q, col, s0, workers=threads)
        ok = rep.verdict is EXPECTED_VERDICT[n] and rep.euler_check
        if n in EXPECTED_CLASSES:
            ok = ok and len(rep.classes) == EXPECTED_CLASSES[n]
        add(f"P^{n} orbit", ok, f"{rep.verdict.value}, {len(rep.classes)} classes, chi {rep.chi_ascending}/{rep.chi_descending}")
        if n >= 5:
            null = len(rep.cusps.null_homotopic) if rep.cusps else 0
            add(f"P^{n} null-homotopic cusp", null > 0, null)
    for n in range(3, 9):
        v = manifold.volume(n)
        add(f"M^{n} volume", True, f"{v.label} ~ {float(v.manifold):.6g}")
    return checks


def cmd_reproduce(skip_heavy: bool, threads: int, cache: Path | None, fmt: str) -> int:
    checks = reproduce(skip_heavy, threads, cache)
    doc = {"skip_heavy": skip_heavy, "checks": [c.__dict__ for c in checks]}

    def human() -> None:
        for c in checks:
            print(f"{'PASS' if c.ok else 'FAIL'}  {c.name:<34} {c.detail}")

    _emit(doc, fmt, human)
    return EXIT_OK if all(c.ok for c in checks) else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    def global_options(parser: argparse.ArgumentParser, default: Any) -> argparse.ArgumentParser:
        # accepted before or after the subcommand; subcommands never overwrite with a default
        parser.add_argument("--cache-dir", default=default(None), help=f"polytope cache directory (default: ${CACHE_ENV})")
        parser.add_argument("--format", dest="fmt", choices=("human", "json", "csv"), default=default("human"))
        parser.add_argument("-v", "--verbose", action="store_true", default=default(False))
        return parser

    common = global_options(argparse.ArgumentParser(add_help=False), lambda _: argparse.SUPPRESS)
    p = global_options(argparse.ArgumentParser(prog="gosset-fib", description=__doc__), lambda x: x)
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name: str, **kw: Any) -> argparse.ArgumentParser:
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser  # type: ignore[method-assign]

    poly = sub.add_parser("polytope", help="polytope facts").add_subparsers(dest="action", required=True)
    info = poly.add_parser("info", parents=[common])
    info.add_argument("n", type=int, choices=range(3, 9))

    colp = sub.add_parser("colouring").add_subparsers(dest="action", required=True)
    val = colp.add_parser("validate", parents=[common])
    val.add_argument("n", type=int, choices=range(3, 9))
    val.add_argument("file")

    man = sub.add_parser("manifold", help="Betti numbers, Euler characteristic, cusps, volume")
    man.add_argument("n", type=int, choices=range(3, 9))
    man.add_argument("--colouring")
    man.add_argument("--threads", type=int, default=default_workers())
    man.add_argument("--no-symmetry", action="store_true", help="sum over every colour subset")

    orb = sub.add_parser("orbit").add_subparsers(dest="action", required=True)
    chk = orb.add_parser("check", parents=[common])
    chk.add_argument("n", type=int, choices=range(3, 9))
    chk.add_argument("--colouring")
    chk.add_argument("--state")
    chk.add_argument("--pi1-budget", type=int, default=DEFAULT_BUDGET)
    chk.add_argument("--threads", type=int, default=default_workers())
    chk.add_argument("--euler-check", action="store_true")

    cus = sub.add_parser("cusps")
    cus.add_argument("n", type=int, choices=range(3, 9))
    cus.add_argument("--colouring")

    sub.add_parser("volumes")

    rep = sub.add_parser("reproduce-paper", aliases=["reproduce"], help="recompute every reference invariant")
    rep.add_argument("--skip-heavy", action="store_true")
    rep.add_argument("--threads", type=int, default=default_workers())
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    cache = cache_dir(args.cache_dir)
    try:
        if args.command == "volumes":
            return cmd_volumes(args.fmt)
        if args.command in ("reproduce-paper", "reproduce"):
            return cmd_reproduce(args.skip_heavy, args.threads, cache, args.fmt)
        cfg = RunConfig(
            n=args.n,
            colouring=getattr(args, "colouring", None) or getattr(args, "file", None),
            state=getattr(args, "state", None),
            threads=getattr(args, "threads", 1),
            pi1_budget=getattr(args, "pi1_budget", DEFAULT_BUDGET),
            cache=cache,
            fmt=args.fmt,
        )
        if args.command == "polytope":
            return cmd_polytope_info(cfg)
        if args.command == "colouring":
            return cmd_colouring_validate(cfg)
        if args.command == "manifold":
            return cmd_manifold(cfg, not args.no_symmetry)
        if args.command == "orbit":
            return cmd_orbit(cfg, args.euler_check)
        if args.command == "cusps":
            return cmd_cusps(cfg)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as exc:
        print(f"malformed JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
