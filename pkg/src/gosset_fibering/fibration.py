"""States, their orbits under colour flips, and the link conditions for algebraic fibering.

A state marks every facet I or O.  Flipping all facets of a colour class is
the action of a basis vector of Z_2^c.  For every state in an orbit the
ascending link (O-vertices) and descending link (I-vertices) are full
subcomplexes of the nerve; the orbit is legal when all of them are connected
and 1-legal when all are simply connected.
"""

from __future__ import annotations

import json
import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Sequence

from .canonical import canonical_form
from .complex import BettiVector, FlagComplex, InducedSubcomplex, betti_numbers, euler_characteristic, is_connected
from .gosset import GossetPolytope, ValidationError
from .manifold import Colouring, euler_characteristics, listed_triplets
from .octonion import Octonion, p8_state_seed
from .parallel import chunked, run_chunks
from .pi1 import DEFAULT_BUDGET, Pi1Kind, Pi1Verdict, pi1_trivial
from .status import Status

log = logging.getLogger(__name__)

STATE_SCHEMA = "gosset-fibering/state"
ORBIT_SCHEMA = "gosset-fibering/orbit"
SCHEMA_VERSION = 1

CLASS_SIZE = {3: 2, 4: 2, 5: 2, 6: 3, 7: 4, 8: 16}


@dataclass(frozen=True)
class State:
    """Status of each facet, stored as the bitmask of O facets."""

    size: int
    out_mask: int

    @classmethod
    def from_statuses(cls, statuses: Sequence[Status]) -> "State":
        mask = 0
        for v, st in enumerate(statuses):
            if Status(st) is Status.OUT:
                mask |= 1 << v
        return cls(len(statuses), mask)

    def status(self, v: int) -> Status:
        return Status.OUT if self.out_mask >> v & 1 else Status.IN

    def statuses(self) -> list[Status]:
        return [self.status(v) for v in range(self.size)]

    @property
    def in_mask(self) -> int:
        return ((1 << self.size) - 1) & ~self.out_mask

    def complement(self) -> "State":
        return State(self.size, self.in_mask)

    def is_balanced(self, col: Colouring) -> bool:
        return all(2 * (self.out_mask & m).bit_count() == m.bit_count() for m in col.class_masks())

    def class_split(self, col: Colouring) -> list[tuple[int, int]]:
        """(I count, O count) per colour class."""
        out = []
        for m in col.class_masks():
            o = (self.out_mask & m).bit_count()
            out.append((m.bit_count() - o, o))
        return out

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": STATE_SCHEMA,
            "version": SCHEMA_VERSION,
            "status": {str(v): self.status(v).value for v in range(self.size)},
        }

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "State":
        table = doc["status"] if "status" in doc else doc
        try:
            pairs = sorted((int(v), Status(s)) for v, s in table.items())
        except (TypeError, ValueError) as exc:
            raise ValidationError(f"malformed state entry: {exc}") from exc
        if [v for v, _ in pairs] != list(range(len(pairs))):
            raise ValidationError("state must list every vertex index 0..N-1 exactly once")
        return cls.from_statuses([s for _, s in pairs])


def load_state(path: str) -> State:
    with open(path) as fh:
        return State.from_json(json.load(fh))


def act_on_state(v: int, s: State, col: Colouring) -> State:
    """Flip the status of every facet whose colour is in the support of v."""
    if v >> col.c:
        raise ValueError(f"vector {v:b} has more than {col.c} coordinates")
    return State(s.size, s.out_mask ^ col.subset_mask(v))


def _pair_state(col: Colouring, size: int) -> State:
    mask = 0
    for cls in col.classes():
        mask |= 1 << min(cls)
    return State(size, mask)


def builtin_state(q: GossetPolytope, col: Colouring) -> State:
    """Initial state for the built-in colouring of P^n."""
    sizes = col.class_sizes()
    want = CLASS_SIZE[q.n]
    if any(k != want for k in sizes):
        raise ValidationError(f"P^{q.n} state needs colour classes of size {want}, got {sorted(set(sizes))}")
    if q.n <= 5:
        return _pair_state(col, q.size)
    if q.n == 6:
        firsts = [t[0] for t in listed_triplets(q)]
        if sorted(col.colours[v] for v in firsts) != list(range(col.c)):
            raise ValidationError("colouring does not have the listed triplets as its classes")
        return State(q.size, sum(1 << v for v in firsts))
    seed = p8_state_seed()
    return State.from_statuses([seed[Octonion(v)] for v in q.vertices])


def ascending_link(parent: FlagComplex, s: State) -> InducedSubcomplex:
    return parent.induced(s.out_mask)


def descending_link(parent: FlagComplex, s: State) -> InducedSubcomplex:
    return parent.induced(s.in_mask)


class Triviality(str, Enum):
    TRIVIAL = "Trivial"
    IMAGE_2Z = "Image2Z"


def state_map_triviality(colours: Sequence[int], statuses: Sequence[Status]) -> Triviality:
    """Trivial iff facets of equal colour always carry equal status."""
    seen: dict[int, Status] = {}
    for k, st in zip(colours, statuses):
        if seen.setdefault(k, st) is not st:
            return Triviality.IMAGE_2Z
    return Triviality.TRIVIAL


class CuspVerdict(str, Enum):
    NULL_HOMOTOPIC = "NullHomotopic"
    NON_TRIVIAL = "NonTrivialImage2Z"


@dataclass(frozen=True)
class CuspRestriction:
    verdicts: tuple[CuspVerdict, ...]
    distinct_colours: tuple[int, ...]

    @property
    def null_homotopic(self) -> list[int]:
        return [i for i, v in enumerate(self.verdicts) if v is CuspVerdict.NULL_HOMOTOPIC]

    def to_json(self) -> dict[str, Any]:
        by_cprime = Counter((c, v.value) for c, v in zip(self.distinct_colours, self.verdicts))
        return {
            "ideal_vertices": len(self.verdicts),
            "null_homotopic": len(self.null_homotopic),
            "by_c_prime": [
                {"c_prime": c, "verdict": v, "count": k} for (c, v), k in sorted(by_cprime.items())
            ],
        }


def cusp_restriction_analysis(q: GossetPolytope, col: Colouring, s: State) -> CuspRestriction:
    """Apply the triviality test to the coloured cube link of every ideal vertex."""
    verdicts = []
    distinct = []
    for facet in q.orthoplex_facets:
        members = [x for p in facet for x in p]
        cols = [col.colours[x] for x in members]
        t = state_map_triviality(cols, [s.status(x) for x in members])
        verdicts.append(CuspVerdict.NULL_HOMOTOPIC if t is Triviality.TRIVIAL else CuspVerdict.NON_TRIVIAL)
        distinct.append(len(set(cols)))
    return CuspRestriction(tuple(verdicts), tuple(distinct))


class Verdict(str, Enum):
    ONE_LEGAL = "OneLegal"
    LEGAL = "Legal"
    ILLEGAL = "Illegal"
    UNDETERMINED = "Undetermined"


@dataclass
class LinkClass:
    certificate: str
    vertices: int
    ascending: int
    descending: int
    representative: int
    connected: bool
    betti: BettiVector
    euler: int
    pi1: Pi1Verdict | None

    @property
    def contribution(self) -> int:
        return 1 - self.euler

    def to_json(self) -> dict[str, Any]:
        return {
            "certificate": self.certificate,
            "vertices": self.vertices,
            "ascending": self.ascending,
            "descending": self.descending,
            "representative_vector": self.representative,
            "connected": self.connected,
            "reduced_betti": list(self.betti.values),
            "euler": self.euler,
            "pi1": None if self.pi1 is None else self.pi1.to_json(),
        }


@dataclass
class OrbitReport:
    n: int
    orbit_size: int
    distinct_states: int
    classes: list[LinkClass]
    chi_ascending: int
    chi_descending: int
    chi_expected: int
    verdict: Verdict
    witness: int | None = None
    unknown: list[int] = field(default_factory=list)
    cusps: CuspRestriction | None = None

    @property
    def legal(self) -> bool:
        return self.verdict in (Verdict.LEGAL, Verdict.ONE_LEGAL, Verdict.UNDETERMINED)

    @property
    def euler_check(self) -> bool:
        return self.chi_ascending == self.chi_expected == self.chi_descending

    def betti_types(self) -> Counter:
        """Ascending multiplicity of each reduced Betti vector."""
        tally: Counter = Counter()
        for k in self.classes:
            tally[k.betti.values] += k.ascending
        return tally

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": ORBIT_SCHEMA,
            "version": SCHEMA_VERSION,
            "n": self.n,
            "orbit_size": self.orbit_size,
            "distinct_states": self.distinct_states,
            "verdict": self.verdict.value,
            "witness_vector": self.witness,
            "unknown_classes": self.unknown,
            "class_count": len(self.classes),
            "classes": [k.to_json() for k in self.classes],
            "euler": {
                "ascending_sum": self.chi_ascending,
                "descending_sum": self.chi_descending,
                "expected": self.chi_expected,
                "ok": self.euler_check,
            },
            "cusp_restriction": None if self.cusps is None else self.cusps.to_json(),
        }


_PARENT: FlagComplex | None = None


def _init_parent(neighbours: Sequence[int]) -> None:
    global _PARENT
    _PARENT = FlagComplex(neighbours)


def _certify(masks: Sequence[int]) -> list[str]:
    assert _PARENT is not None
    return [canonical_form(_PARENT.induced(m)).digest() for m in masks]


def check_orbit(
    q: GossetPolytope,
    col: Colouring,
    s0: State,
    pi1_budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    with_pi1: bool = True,
) -> OrbitReport:
    """Classify every ascending and descending link over the orbit of s0."""
    c = col.c
    size = 1 << c
    parent = FlagComplex(q.neighbours)
    masks = [act_on_state(v, s0, col).out_mask for v in range(size)]
    distinct = len(set(masks))
    full = (1 << q.size) - 1
    position = {m: v for v, m in enumerate(masks)}
    partner = []
    for v, m in enumerate(masks):
        w = position.get(full & ~m)
        if w is None:
            raise AssertionError("complement of a state is missing from its orbit")
        partner.append(w)

    log.info("P^%d: canonical forms for %d ascending links", q.n, size)
    certs = [d for batch in run_chunks(_certify, chunked(masks, 256), workers, _init_parent, (tuple(q.neighbours),)) for d in batch]

    asc = Counter(certs)
    desc = Counter(certs[partner[v]] for v in range(size))
    first: dict[str, int] = {}
    for v, d in enumerate(certs):
        first.setdefault(d, v)

    classes: list[LinkClass] = []
    for d in sorted(first, key=lambda x: first[x]):
        v = first[d]
        sub = parent.induced(masks[v])
        conn = is_connected(sub)
        pi1 = pi1_trivial(sub, pi1_budget) if with_pi1 and conn else None
        classes.append(
            LinkClass(d, sub.size, asc[d], desc[d], v, conn, betti_numbers(sub), euler_characteristic(sub), pi1)
        )
    by_cert = {k.certificate: k for k in classes}
    chi_up = sum(by_cert[certs[v]].contribution for v in range(size))
    chi_down = sum(by_cert[certs[partner[v]]].contribution for v in range(size))
    _, chi_m = euler_characteristics(q, c)

    verdict, witness, unknown = _verdict(classes, with_pi1)
    return OrbitReport(
        q.n, size, distinct, classes, chi_up, chi_down, chi_m, verdict, witness, unknown,
        cusp_restriction_analysis(q, col, s0),
    )


def _verdict(classes: list[LinkClass], with_pi1: bool) -> tuple[Verdict, int | None, list[int]]:
    for k in classes:
        if not k.connected:
            return Verdict.ILLEGAL, k.representative, []
    if not with_pi1:
        return Verdict.LEGAL, None, []
    for k in classes:
        if k.pi1 is not None and k.pi1.kind is Pi1Kind.NOT_SIMPLY_CONNECTED:
            return Verdict.LEGAL, k.representative, []
    unknown = [k.representative for k in classes if k.pi1 is None or k.pi1.kind is Pi1Kind.UNKNOWN]
    if unknown:
        return Verdict.UNDETERMINED, None, unknown
    return Verdict.ONE_LEGAL, None, []


def orbit_is_legal(q: GossetPolytope, col: Colouring, s0: State, parent: FlagComplex | None = None) -> bool:
    """Connectivity of every ascending link in the orbit (descending links are ascending links of partners)."""
    parent = parent or FlagComplex(q.neighbours)
    for v in range(1 << col.c):
        if not is_connected(parent.induced(act_on_state(v, s0, col).out_mask)):
            return False
    return True


def random_state(size: int, rng: random.Random, col: Colouring | None = None) -> State:
    """Uniform random state, or a random balanced one when a colouring with even classes is given."""
    if col is None:
        return State(size, rng.getrandbits(size))
    mask = 0
    for cls in col.classes():
        if len(cls) % 2:
            raise ValueError("balanced states need even colour classes")
        for v in rng.sample(list(cls), len(cls) // 2):
            mask |= 1 << v
    return State(size, mask)


@dataclass
class SearchSummary:
    trials: int
    legal: int
    legal_seeds: list[int]

    def to_json(self) -> dict[str, Any]:
        return {"trials": self.trials, "legal": self.legal, "legal_state_masks": [hex(m) for m in self.legal_seeds]}


def search_legal_orbits(q: GossetPolytope, col: Colouring, trials: int, seed: int = 0) -> SearchSummary:
    """Bounded random search for legal orbits; makes no completeness claim."""
    rng = random.Random(seed)
    parent = FlagComplex(q.neighbours)
    found = []
    for _ in range(trials):
        s = random_state(q.size, rng)
        if orbit_is_legal(q, col, s, parent):
            found.append(s.out_mask)
    return SearchSummary(trials, len(found), found)


def expected_chi(q: GossetPolytope, c: int) -> Fraction:
    return euler_characteristics(q, c)[0] * 2**c
