"""Graph separations, the exact iterated separation number, and separator strategies."""

from __future__ import annotations

import math
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from spernerlab.complex import SkeletonGraph

EXACT_CAP = 12


class SeparationError(ValueError):
    pass


class TooLargeForExact(ValueError):
    pass


@dataclass(frozen=True)
class Separation:
    a: frozenset[int]
    c: frozenset[int]

    @property
    def separator(self) -> frozenset[int]:
        return self.a & self.c

    @property
    def left(self) -> frozenset[int]:
        return self.a - self.c

    @property
    def right(self) -> frozenset[int]:
        return self.c - self.a

    @classmethod
    def from_parts(cls, left: Iterable[int], separator: Iterable[int], right: Iterable[int]) -> Separation:
        sep = frozenset(separator)
        return cls(frozenset(left) | sep, frozenset(right) | sep)


def validate_separation(g: SkeletonGraph, a: Iterable[int], c: Iterable[int]) -> Separation:
    a, c = frozenset(a), frozenset(c)
    if a | c != g.vertices:
        missing = sorted(g.vertices - (a | c))
        extra = sorted((a | c) - g.vertices)
        raise SeparationError(f"A and C do not cover the vertex set (missing {missing}, foreign {extra})")
    left, right = a - c, c - a
    for u, v in sorted(g.edges):
        if (u in left and v in right) or (u in right and v in left):
            raise SeparationError(f"edge {(u, v)} crosses the separation")
    return Separation(a, c)


def is_admissible(g: SkeletonGraph, sep: Separation) -> bool:
    return sep.left != g.vertices and sep.right != g.vertices


# -- exact iterated separation number ------------------------------------


@dataclass(frozen=True)
class SeparationTree:
    """Witness for s(G): a best separation at the root and witnesses for both sides."""

    vertices: frozenset[int]
    value: int
    separation: Separation | None = None
    left: SeparationTree | None = None
    right: SeparationTree | None = None

    def check(self, g: SkeletonGraph) -> None:
        """Re-verify the tree against the recursive definition (raises AssertionError)."""
        sub = g.induced(self.vertices)
        if not self.vertices:
            assert self.value == 0 and self.separation is None
            return
        sep = self.separation
        assert sep is not None
        validate_separation(sub, sep.a, sep.c)
        assert is_admissible(sub, sep)
        assert self.left is not None and self.right is not None
        assert self.left.vertices == sep.left and self.right.vertices == sep.right
        self.left.check(g)
        self.right.check(g)
        assert self.value == len(sep.separator) + max(self.left.value, self.right.value)


class _Exact:
    """Memoized s(G[X]) over vertex bitmasks of one graph.

    Uses s(X) = min(max over components, when X is disconnected;
    min over v of 1 + s(X - v)).  The reduction relies on s being monotone
    under induced subgraphs and on s of a disjoint union being the max over
    its parts; the brute-force route in :func:`_s_by_definition` checks it.
    """

    def __init__(self, g: SkeletonGraph) -> None:
        self.order = sorted(g.vertices)
        self.index = {v: k for k, v in enumerate(self.order)}
        self.nbr = [0] * len(self.order)
        for u, v in g.edges:
            self.nbr[self.index[u]] |= 1 << self.index[v]
            self.nbr[self.index[v]] |= 1 << self.index[u]
        self.s = lru_cache(maxsize=None)(self._s)

    def components(self, mask: int) -> list[int]:
        out = []
        rest = mask
        while rest:
            low = rest & -rest
            comp = low
            frontier = low
            while frontier:
                bit = frontier & -frontier
                frontier ^= bit
                new = self.nbr[bit.bit_length() - 1] & mask & ~comp
                comp |= new
                frontier |= new
            out.append(comp)
            rest &= ~comp
        return out

    def _s(self, mask: int) -> int:
        if mask == 0:
            return 0
        comps = self.components(mask)
        if len(comps) > 1:
            return max(self.s(c) for c in comps)
        best = None
        rest = mask
        while rest:
            bit = rest & -rest
            rest ^= bit
            val = 1 + self.s(mask ^ bit)
            if best is None or val < best:
                best = val
        return best

    def to_set(self, mask: int) -> frozenset[int]:
        return frozenset(v for k, v in enumerate(self.order) if mask >> k & 1)

    def tree(self, mask: int) -> SeparationTree:
        verts = self.to_set(mask)
        target = self.s(mask)
        if mask == 0:
            return SeparationTree(verts, 0)
        members = [1 << k for k in range(len(self.order)) if mask >> k & 1]
        # smallest separator first, then lexicographic on vertex ids
        for size in range(len(members) + 1):
            for chosen in combinations(members, size):
                sep = sum(chosen)
                comps = self.components(mask & ~sep)
                if size == 0 and len(comps) < 2:
                    continue
                if size + max((self.s(c) for c in comps), default=0) != target:
                    continue
                left, right = _balance(comps)
                return SeparationTree(
                    verts,
                    target,
                    Separation.from_parts(self.to_set(left), self.to_set(sep), self.to_set(right)),
                    self.tree(left),
                    self.tree(right),
                )
        raise AssertionError("no separation attains s(G)")  # pragma: no cover


def _balance(comps: list[int]) -> tuple[int, int]:
    left = right = 0
    for c in sorted(comps, key=lambda c: -c.bit_count()):
        if left.bit_count() <= right.bit_count():
            left |= c
        else:
            right |= c
    return left, right


def iterated_separation_number(g: SkeletonGraph, cap: int = EXACT_CAP) -> tuple[int, SeparationTree]:
    if len(g.vertices) > cap:
        raise TooLargeForExact(f"{len(g.vertices)} vertices exceed the exact cap of {cap}")
    ex = _Exact(g)
    full = (1 << len(ex.order)) - 1
    return ex.s(full), ex.tree(full)


def _s_by_definition(g: SkeletonGraph) -> int:
    """s(G) straight from the definition: every admissible (A, C), no shortcuts.

    Exponential in 3^n; meant as a test oracle for graphs of at most 7 vertices.
    """
    order = sorted(g.vertices)
    adj = g.adjacency

    @lru_cache(maxsize=None)
    def s(verts: frozenset[int]) -> int:
        if not verts:
            return 0
        vs = sorted(verts)
        best = math.inf
        # assign each vertex to left (0), separator (1) or right (2)
        for code in range(3 ** len(vs)):
            left, sep, right = set(), set(), set()
            x = code
            for v in vs:
                (left, sep, right)[x % 3].add(v)
                x //= 3
            if left == verts or right == verts:
                continue
            if any(w in right for u in left for w in adj[u]):
                continue
            best = min(best, len(sep) + max(s(frozenset(left)), s(frozenset(right))))
        return best

    return s(frozenset(order))


# -- heuristic strategies ------------------------------------------------


@dataclass(frozen=True)
class SeparatorStrategy:
    """How the solver picks its separation.

    ``kind`` is one of ``"exact"``, ``"gridline"`` and ``"bfslevel"``;
    ``coords`` (vertex id -> (i, j)) is required by ``"gridline"``.
    """

    kind: str
    coords: Mapping[int, tuple[int, int]] | None = field(default=None, compare=False)
    cap: int = EXACT_CAP

    def __post_init__(self) -> None:
        if self.kind not in ("exact", "gridline", "bfslevel"):
            raise ValueError(f"unknown strategy {self.kind!r}")
        if self.kind == "gridline" and self.coords is None:
            raise ValueError("gridline needs grid coordinates")


EXACT = SeparatorStrategy("exact")
BFS_LEVEL = SeparatorStrategy("bfslevel")


def grid_line(coords: Mapping[int, tuple[int, int]]) -> SeparatorStrategy:
    return SeparatorStrategy("gridline", coords)


def best_separation(g: SkeletonGraph, strategy: SeparatorStrategy) -> Separation:
    if not g.vertices:
        return Separation(frozenset(), frozenset())
    comps = g.components()
    if len(comps) > 1:
        left, right = set(), set()
        for comp in sorted(comps, key=lambda c: (-len(c), min(c))):
            (left if len(left) <= len(right) else right).update(comp)
        return Separation.from_parts(left, (), right)
    if strategy.kind == "exact":
        return iterated_separation_number(g, strategy.cap)[1].separation
    if strategy.kind == "gridline":
        return _grid_line(g, strategy.coords)
    return _bfs_level(g)


def _grid_line(g: SkeletonGraph, coords: Mapping[int, tuple[int, int]]) -> Separation:
    """Cut along a lattice line through the middle of the widest direction.

    The triangular grid's edges change each of i, j and i + j by at most one,
    so every line {key == c} in those three directions separates key < c from
    key > c.
    """
    keys = (lambda p: p[0], lambda p: p[1], lambda p: p[0] + p[1])
    best = None
    for direction, key in enumerate(keys):
        values = sorted(key(coords[v]) for v in g.vertices)
        lo, hi = values[0], values[-1]
        if lo == hi:
            continue
        cut = values[len(values) // 2]
        score = (-(hi - lo), direction)
        if best is None or score < best[0]:
            best = (score, key, cut)
    if best is None:
        return Separation.from_parts((), g.vertices, ())
    _, key, cut = best
    left = {v for v in g.vertices if key(coords[v]) < cut}
    sep = {v for v in g.vertices if key(coords[v]) == cut}
    right = {v for v in g.vertices if key(coords[v]) > cut}
    return Separation.from_parts(left, sep, right)


def _bfs_levels(g: SkeletonGraph, root: int) -> list[list[int]]:
    levels = [[root]]
    seen = {root}
    while True:
        nxt = sorted({w for u in levels[-1] for w in g.adjacency[u] if w not in seen})
        if not nxt:
            return levels
        seen.update(nxt)
        levels.append(nxt)


def _bfs_level(g: SkeletonGraph) -> Separation:
    # start from a pseudo-peripheral vertex so that the levels are long
    root = min(g.vertices)
    root = _bfs_levels(g, root)[-1][0]
    levels = _bfs_levels(g, root)
    n = len(g.vertices)
    if len(levels) < 3:
        return Separation.from_parts((), g.vertices, ())
    candidates = []
    before = 0
    for k, level in enumerate(levels):
        after = n - before - len(level)
        if k > 0 and k < len(levels) - 1:
            balanced = before <= 2 * n / 3 and after <= 2 * n / 3
            candidates.append((not balanced, len(level) if balanced else max(before, after), max(before, after), k))
        before += len(level)
    k = min(candidates)[-1]
    left = [v for lv in levels[:k] for v in lv]
    right = [v for lv in levels[k + 1:] for v in lv]
    return Separation.from_parts(left, levels[k], right)


def separator_budget(n: int, genus: int = 0) -> float:
    """Separator size guaranteed on an n-vertex graph of the given genus."""
    if n < 1 or genus < 0:
        raise ValueError("need n >= 1 and genus >= 0")
    return 6 * math.sqrt(genus * n) + 2 * math.sqrt(2 * n) + 1


# fixed point of lam = 1 + lam * sqrt(2/3)
SEPARATION_LAMBDA = 1 / (1 - math.sqrt(2 / 3))


def separation_number_bound(n: int, genus: int = 0) -> float:
    """Upper bound on s(G) for an n-vertex graph of the given genus."""
    return SEPARATION_LAMBDA * (6 * math.sqrt(genus * n) + 2 * math.sqrt(2 * n)) + math.log(n, 1.5)
