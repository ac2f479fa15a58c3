"""Memoised polytopes and colourings shared for the test modules."""

from __future__ import annotations

from functools import lru_cache

from gosset_fibering import gosset, manifold
from gosset_fibering.gosset import GossetPolytope
from gosset_fibering.manifold import Colouring

# criterion number -> (passed, detail); printed in the terminal summary
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@lru_cache(maxsize=None)
def polytope(n: int) -> GossetPolytope:
    return gosset.build(n)


@lru_cache(maxsize=None)
def colouring(n: int) -> Colouring:
    return manifold.builtin_colouring(polytope(n))
