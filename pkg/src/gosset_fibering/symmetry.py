"""Graph automorphisms that permute colour classes, and the induced orbits on colour subsets."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .canonical import automorphism_generators
from .complex import bits


def _augmented(neighbours: Sequence[int], colours: Sequence[int], c: int) -> tuple[np.ndarray, list[int]]:
    # one extra vertex per colour class, joined to its members
    n = len(neighbours)
    a = np.zeros((n + c, n + c), dtype=np.uint8)
    for u, m in enumerate(neighbours):
        a[u, bits(m)] = 1
    for u, k in enumerate(colours):
        a[u, n + k] = a[n + k, u] = 1
    return a, [0] * n + [1] * c


def class_automorphisms(neighbours: Sequence[int], colours: Sequence[int]) -> list[np.ndarray]:
    """Vertex permutations preserving adjacency and mapping colour classes onto colour classes."""
    c = max(colours) + 1
    n = len(neighbours)
    a, marks = _augmented(neighbours, colours, c)
    out = []
    for g in automorphism_generators(a, marks):
        perm = g[:n]
        if not verify_class_automorphism(neighbours, colours, perm):
            raise AssertionError("automorphism search returned an invalid map")
        out.append(perm)
    return out


def verify_class_automorphism(neighbours: Sequence[int], colours: Sequence[int], perm: Sequence[int]) -> bool:
    n = len(neighbours)
    if sorted(int(x) for x in perm) != list(range(n)):
        return False
    for u, m in enumerate(neighbours):
        image = 0
        for v in bits(m):
            image |= 1 << int(perm[v])
        if image != neighbours[int(perm[u])]:
            return False
    return induced_colour_permutation(colours, perm) is not None


def induced_colour_permutation(colours: Sequence[int], perm: Sequence[int]) -> tuple[int, ...] | None:
    """The colour map k -> k' with perm(class k) = class k', or None if classes are not preserved."""
    c = max(colours) + 1
    target: list[int | None] = [None] * c
    for u, k in enumerate(colours):
        k2 = colours[int(perm[u])]
        if target[k] is None:
            target[k] = k2
        elif target[k] != k2:
            return None
    if None in target or len(set(target)) != c:
        return None
    return tuple(int(t) for t in target)  # type: ignore[arg-type]


def colour_permutations(neighbours: Sequence[int], colours: Sequence[int]) -> list[tuple[int, ...]]:
    """Distinct non-identity colour permutations realised by class automorphisms."""
    c = max(colours) + 1
    ident = tuple(range(c))
    perms = set()
    for g in class_automorphisms(neighbours, colours):
        p = induced_colour_permutation(colours, g)
        if p is not None and p != ident:
            perms.add(p)
    return sorted(perms)


def subset_orbits(c: int, perms: Sequence[Sequence[int]]) -> list[tuple[int, int]]:
    """Orbits of the group generated by `perms` on subsets of {0..c-1}, as (least member, size)."""
    w = np.arange(1 << c, dtype=np.int64)
    images = []
    for p in perms:
        img = np.zeros_like(w)
        for j in range(c):
            img |= ((w >> j) & 1) << p[j]
        images.append(img)
    labels = w.copy()
    changed = True
    while changed:
        changed = False
        for img in images:
            pulled = np.minimum(labels, labels[img])
            pushed = pulled.copy()
            np.minimum.at(pushed, img, pulled)
            if not np.array_equal(pushed, labels):
                labels = pushed
                changed = True
    reps, sizes = np.unique(labels, return_counts=True)
    return [(int(r), int(s)) for r, s in zip(reps, sizes)]
