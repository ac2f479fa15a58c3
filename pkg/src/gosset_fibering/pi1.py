"""Simple-connectivity checks for flag complexes via edge-path presentations.

A BFS spanning tree of the 1-skeleton is contracted; every remaining edge is
a generator and every triangle gives a relator of length at most 3.  The
presentation is then simplified by repeatedly using relators of length 1
(kill a generator) and 2 (identify two generators up to inversion).  The
procedure is a semi-decision: it proves triviality or gives up.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .complex import InducedSubcomplex, betti_numbers, bits, is_connected

DEFAULT_BUDGET = 1_000_000


class Pi1Kind(str, Enum):
    SIMPLY_CONNECTED = "SimplyConnected"
    NOT_SIMPLY_CONNECTED = "NotSimplyConnected"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Pi1Verdict:
    kind: Pi1Kind
    h1_rank: int | None = None
    generators_left: int = 0
    steps: int = 0

    @property
    def simply_connected(self) -> bool:
        return self.kind is Pi1Kind.SIMPLY_CONNECTED

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind.value, "steps": self.steps}
        if self.h1_rank is not None:
            out["h1_rank"] = self.h1_rank
        if self.generators_left:
            out["generators_left"] = self.generators_left
        return out


class _Identifications:
    """Union-find over generators with orientation; root 0 is the identity."""

    def __init__(self, m: int):
        self.parent = list(range(m + 1))
        self.sign = [1] * (m + 1)

    def find(self, x: int) -> tuple[int, int]:
        s = 1
        path = []
        while self.parent[x] != x:
            path.append(x)
            s *= self.sign[x]
            x = self.parent[x]
        root = x
        # path compression, keeping each node's sign relative to the root
        acc = s
        for y in path:
            ys = self.sign[y]
            self.parent[y] = root
            self.sign[y] = acc
            acc *= ys
        return root, s

    def set_equal(self, x: int, y: int, s: int) -> bool:
        """Record x = y^s (y = 0 means x is trivial); False if nothing changed."""
        rx, sx = self.find(x)
        ry, sy = self.find(y) if y else (0, 1)
        if rx == ry:
            return False
        # root rx = (x)^sx = y^(s*sx) = ry^(sy*s*sx)
        if rx == 0:
            rx, ry = ry, rx
            self.parent[rx] = 0
            self.sign[rx] = 1
        else:
            self.parent[rx] = ry
            self.sign[rx] = sy * s * sx
        return True


def _spanning_tree(neighbours: list[int]) -> set[tuple[int, int]]:
    tree = set()
    seen = 1
    queue = deque([0])
    while queue:
        u = queue.popleft()
        fresh = neighbours[u] & ~seen
        seen |= fresh
        for v in bits(fresh):
            tree.add((min(u, v), max(u, v)))
            queue.append(v)
    return tree


def presentation(sub: InducedSubcomplex) -> tuple[int, list[list[int]]]:
    """Edge-path group presentation: (number of generators, relators as signed words)."""
    nb = sub.local_neighbours
    tree = _spanning_tree(nb)
    gen: dict[tuple[int, int], int] = {}
    for u, m in enumerate(nb):
        for v in bits(m >> (u + 1) << (u + 1)):
            if (u, v) not in tree:
                gen[(u, v)] = len(gen) + 1
    relators = []
    for a, m in enumerate(nb):
        above = m >> (a + 1) << (a + 1)
        for b in bits(above):
            for c in bits(above & nb[b] >> (b + 1) << (b + 1)):
                word = []
                if (a, b) in gen:
                    word.append(gen[(a, b)])
                if (b, c) in gen:
                    word.append(gen[(b, c)])
                if (a, c) in gen:
                    word.append(-gen[(a, c)])
                relators.append(word)
    return len(gen), relators


def _rewrite(word: list[int], ids: _Identifications) -> list[int]:
    out: list[int] = []
    for x in word:
        root, s = ids.find(abs(x))
        if root == 0:
            continue
        y = root * s * (1 if x > 0 else -1)
        if out and out[-1] == -y:
            out.pop()
        else:
            out.append(y)
    while len(out) > 1 and out[0] == -out[-1]:
        out = out[1:-1]
    return out


def simplify(generators: int, relators: list[list[int]], budget: int) -> tuple[int, int, bool]:
    """Return (surviving generator count, steps used, budget exhausted)."""
    ids = _Identifications(generators)
    steps = 0
    live = relators
    changed = True
    while changed:
        changed = False
        keep = []
        for word in live:
            steps += 1
            if steps > budget:
                alive = sum(1 for g in range(1, generators + 1) if ids.find(g)[0] == g)
                return alive, steps, True
            w = _rewrite(word, ids)
            if not w:
                continue
            if len(w) == 1:
                changed |= ids.set_equal(abs(w[0]), 0, 1)
                continue
            if len(w) == 2 and abs(w[0]) != abs(w[1]):
                # a b = 1  =>  a = b^-1
                x, y = w
                s = -1 if (x > 0) == (y > 0) else 1
                changed |= ids.set_equal(abs(x), abs(y), s)
                continue
            keep.append(w)
        live = keep
    alive = sum(1 for g in range(1, generators + 1) if ids.find(g)[0] == g)
    return alive, steps, False


def pi1_trivial(sub: InducedSubcomplex, budget: int = DEFAULT_BUDGET) -> Pi1Verdict:
    """Decide simple connectivity where the presentation collapses; otherwise fall back to H_1."""
    if not is_connected(sub):
        raise ValueError("fundamental group check needs a connected complex")
    m, relators = presentation(sub)
    alive, steps, _ = simplify(m, relators, budget)
    if alive == 0:
        return Pi1Verdict(Pi1Kind.SIMPLY_CONNECTED, 0, 0, steps)
    b1 = betti_numbers(sub)[1]
    if b1 > 0:
        return Pi1Verdict(Pi1Kind.NOT_SIMPLY_CONNECTED, b1, alive, steps)
    return Pi1Verdict(Pi1Kind.UNKNOWN, 0, alive, steps)
