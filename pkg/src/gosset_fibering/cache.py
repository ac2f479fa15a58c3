"""On-disk cache of built polytopes, keyed by dimension and construction version."""

from __future__ import annotations

import json
import logging
import os
import tempfile
from pathlib import Path

from . import gosset
from .gosset import GossetPolytope

log = logging.getLogger(__name__)

CACHE_ENV = "GOSSET_FIBERING_CACHE"


def cache_dir(override: str | os.PathLike | None = None) -> Path | None:
    """Directory from the argument or the environment; None disables caching."""
    raw = override if override is not None else os.environ.get(CACHE_ENV)
    return Path(raw) if raw else None


def _path(root: Path, n: int) -> Path:
    return root / f"polytope-n{n}-v{gosset.CONSTRUCTION_VERSION}.json"


def load_polytope(n: int, root: Path | None = None) -> GossetPolytope:
    """Build P^n's dual, or read it from the cache (revalidating counts on load)."""
    if root is None:
        return _built(n)
    path = _path(root, n)
    if path.exists():
        with open(path) as fh:
            doc = json.load(fh)
        q = gosset.from_json(doc, check=True)
        if q.n != n:
            raise gosset.ValidationError(f"cache file {path} holds n={q.n}, expected {n}")
        log.debug("loaded %s", path)
        return q
    q = _built(n)
    root.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(gosset.dumps(q))
    os.replace(tmp, path)
    return q


def _built(n: int) -> GossetPolytope:
    q = gosset.build(n)
    gosset.validate(q)
    return q
