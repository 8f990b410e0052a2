"""Simplices, oriented simplices and pseudo d-manifolds.

A simplex is a strictly increasing tuple of integer vertex ids.  An oriented
simplex is stored canonically as ``(sorted vertices, sign)`` where ``sign`` is
the parity of the permutation taking the sorted order to a representative
ordering.  A pseudo-manifold is stored by its facets only; lower faces are
derived on demand.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path

Simplex = tuple[int, ...]


class NotPseudoManifold(ValueError):
    def __init__(self, message: str, ridge: Simplex | None = None) -> None:
        super().__init__(message)
        self.ridge = ridge


class NotOrientable(ValueError):
    def __init__(self, message: str, cycle: list[Simplex]) -> None:
        super().__init__(message)
        self.cycle = cycle


def permutation_parity(seq: Sequence[int]) -> int:
    """Return +1 if sorting ``seq`` takes an even number of transpositions, else -1.

    ``seq`` must have distinct entries.
    """
    seen = [False] * len(seq)
    order = sorted(range(len(seq)), key=lambda k: seq[k])
    sign = 1
    for start in range(len(seq)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = order[k]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def make_simplex(vertices: Iterable[int]) -> Simplex:
    s = tuple(sorted(vertices))
    if not s:
        raise ValueError("a simplex needs at least one vertex")
    if any(a == b for a, b in zip(s, s[1:])):
        raise ValueError(f"duplicate vertex in {s}")
    if s[0] < 0:
        raise ValueError("vertex ids must be non-negative")
    return s


@dataclass(frozen=True, order=True)
class OrientedSimplex:
    vertices: Simplex
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @classmethod
    def from_ordering(cls, ordering: Sequence[int]) -> OrientedSimplex:
        return cls(make_simplex(ordering), permutation_parity(ordering))

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def reversed(self) -> OrientedSimplex:
        return OrientedSimplex(self.vertices, -self.sign)

    def ordering(self) -> Simplex:
        """A representative vertex ordering of this orientation."""
        if self.sign == 1 or len(self.vertices) < 2:
            return self.vertices
        v = self.vertices
        return (v[1], v[0]) + v[2:]


def faces(s: Simplex, k: int) -> set[Simplex]:
    if not 0 <= k <= len(s) - 1:
        raise ValueError(f"face dimension {k} out of range for a {len(s) - 1}-simplex")
    return set(combinations(s, k + 1))


def induced_orientation(s: OrientedSimplex | Sequence[int], i: int) -> OrientedSimplex:
    """Orientation induced on the face that omits the i-th vertex of ``s``.

    ``s`` may be an ordering; for an :class:`OrientedSimplex` the index refers
    to its canonical ordering (sorted vertices, carrying ``s.sign``).
    """
    if not isinstance(s, OrientedSimplex):
        s = tuple(s)
        make_simplex(s)
        if not 0 <= i < len(s):
            raise IndexError(f"index {i} out of range for {s}")
        out = OrientedSimplex.from_ordering(s[:i] + s[i + 1:])
        return out.reversed() if i % 2 else out
    vertices, sign = s.vertices, s.sign
    if not 0 <= i < len(vertices):
        raise IndexError(f"index {i} out of range for {vertices}")
    if len(vertices) == 1:
        raise ValueError("a 0-simplex has no faces")
    face = vertices[:i] + vertices[i + 1:]
    return OrientedSimplex(face, sign if i % 2 == 0 else -sign)


def induced_faces(facet: Simplex, sign: int = 1) -> list[OrientedSimplex]:
    return [induced_orientation(OrientedSimplex(facet, sign), i) for i in range(len(facet))]


@dataclass(frozen=True)
class SkeletonGraph:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    @cached_property
    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def induced(self, keep: Iterable[int]) -> SkeletonGraph:
        keep = frozenset(keep) & self.vertices
        return SkeletonGraph(keep, frozenset(e for e in self.edges if e[0] in keep and e[1] in keep))

    def components(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        out = []
        for root in sorted(self.vertices):
            if root in seen:
                continue
            comp = {root}
            queue = deque([root])
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if w not in comp:
                        comp.add(w)
                        queue.append(w)
            seen |= comp
            out.append(frozenset(comp))
        return out


class PseudoManifold:
    """A validated pseudo d-manifold given by its facets.

    Build instances with :func:`validate_pseudo_manifold`.  ``orientation``
    maps each facet to the sign of its orientation relative to the sorted
    vertex order, or is ``None`` for a non-oriented manifold.
    """

    def __init__(self, d: int, facets: Iterable[Simplex], orientation: Mapping[Simplex, int] | None = None):
        self.d = d
        self.facets: tuple[Simplex, ...] = tuple(sorted(set(facets)))
        self.orientation = None if orientation is None else {f: orientation[f] for f in self.facets}

    def __repr__(self) -> str:
        tag = "oriented" if self.oriented else "non-oriented"
        return f"PseudoManifold(d={self.d}, facets={len(self.facets)}, {tag})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PseudoManifold):
            return NotImplemented
        return (self.d, self.facets, self.orientation) == (other.d, other.facets, other.orientation)

    def __hash__(self) -> int:
        return hash((self.d, self.facets))

    @property
    def oriented(self) -> bool:
        return self.orientation is not None

    @cached_property
    def facet_set(self) -> frozenset[Simplex]:
        return frozenset(self.facets)

    @cached_property
    def vertices(self) -> frozenset[int]:
        return frozenset(v for f in self.facets for v in f)

    @cached_property
    def ridges(self) -> dict[Simplex, list[Simplex]]:
        """Every (d-1)-simplex mapped to the facets containing it."""
        table: dict[Simplex, list[Simplex]] = defaultdict(list)
        for f in self.facets:
            for r in combinations(f, self.d):
                table[r].append(f)
        return dict(table)

    def sign(self, facet: Simplex) -> int:
        return 1 if self.orientation is None else self.orientation[facet]

    def sub(self, facets: Iterable[Simplex]) -> PseudoManifold:
        """The sub-manifold on a subset of the facets, keeping their orientation."""
        facets = list(facets)
        orientation = None if self.orientation is None else {f: self.orientation[f] for f in facets}
        return PseudoManifold(self.d, facets, orientation)

    def to_json(self) -> dict:
        out: dict = {"dimension": self.d, "facets": [list(f) for f in self.facets]}
        if self.orientation is not None:
            out["orientation"] = [self.orientation[f] for f in self.facets]
        return out


def validate_pseudo_manifold(
    facets: Iterable[Iterable[int]], d: int, orientation: Mapping[Simplex, int] | None = None
) -> PseudoManifold:
    if d < 1:
        raise NotPseudoManifold(f"dimension must be positive, got {d}")
    canon = []
    for f in facets:
        s = make_simplex(f)
        if len(s) != d + 1:
            raise NotPseudoManifold(f"facet {s} has dimension {len(s) - 1}, expected {d}")
        canon.append(s)
    m = PseudoManifold(d, canon, None)
    for ridge, owners in m.ridges.items():
        if len(owners) > 2:
            raise NotPseudoManifold(f"ridge {ridge} lies in {len(owners)} facets", ridge)
    if orientation is not None:
        orientation = {make_simplex(f): s for f, s in orientation.items()}
        missing = [f for f in m.facets if f not in orientation]
        if missing:
            raise ValueError(f"no orientation given for facet {missing[0]}")
        bad = _incoherent_ridge(m, orientation)
        if bad is not None:
            raise NotOrientable(f"orientation is not coherent across ridge {bad}", list(m.ridges[bad]))
        m = PseudoManifold(d, m.facets, orientation)
    return m


def _ridge_sign(facet: Simplex, sign: int, ridge: Simplex) -> int:
    i = next(k for k, v in enumerate(facet) if v not in ridge)
    return sign if i % 2 == 0 else -sign


def _incoherent_ridge(m: PseudoManifold, orientation: Mapping[Simplex, int]) -> Simplex | None:
    for ridge, owners in m.ridges.items():
        if len(owners) == 2:
            a, b = owners
            if _ridge_sign(a, orientation[a], ridge) == _ridge_sign(b, orientation[b], ridge):
                return ridge
    return None


def boundary_complex(m: PseudoManifold) -> frozenset[OrientedSimplex]:
    out = set()
    for ridge, owners in m.ridges.items():
        if len(owners) == 1:
            facet = owners[0]
            sign = _ridge_sign(facet, m.sign(facet), ridge) if m.oriented else 1
            out.add(OrientedSimplex(ridge, sign))
    return frozenset(out)


def boundary_vertices(m: PseudoManifold) -> frozenset[int]:
    return frozenset(v for ridge, owners in m.ridges.items() if len(owners) == 1 for v in ridge)


def skeleton(m: PseudoManifold) -> SkeletonGraph:
    edges = {e for f in m.facets for e in combinations(f, 2)}
    return SkeletonGraph(m.vertices, frozenset(edges))


def check_orientability(m: PseudoManifold) -> dict[Simplex, int]:
    """Coherent orientation for every facet, by flood fill over shared ridges.

    Raises :class:`NotOrientable` carrying a closed cycle of facets along which
    the propagated signs disagree.
    """
    neighbours: dict[Simplex, list[tuple[Simplex, Simplex]]] = defaultdict(list)
    for ridge, owners in m.ridges.items():
        if len(owners) == 2:
            a, b = owners
            neighbours[a].append((b, ridge))
            neighbours[b].append((a, ridge))

    sign: dict[Simplex, int] = {}
    parent: dict[Simplex, Simplex | None] = {}
    for root in m.facets:
        if root in sign:
            continue
        sign[root] = 1
        parent[root] = None
        queue = deque([root])
        while queue:
            f = queue.popleft()
            for g, ridge in neighbours[f]:
                # g must induce the opposite orientation on the shared ridge
                want = -_ridge_sign(f, sign[f], ridge) * _ridge_sign(g, 1, ridge)
                if g not in sign:
                    sign[g] = want
                    parent[g] = f
                    queue.append(g)
                elif sign[g] != want:
                    raise NotOrientable(f"inconsistent orientation across ridge {ridge}", _cycle(parent, f, g))
    return sign


def _cycle(parent: Mapping[Simplex, Simplex | None], a: Simplex, b: Simplex) -> list[Simplex]:
    def path(x: Simplex | None) -> list[Simplex]:
        out = []
        while x is not None:
            out.append(x)
            x = parent[x]
        return out

    pa, pb = path(a), path(b)
    common = set(pa) & set(pb)
    head = [x for x in pa if x not in common]
    tail = [x for x in pb if x not in common]
    meet = next(x for x in pa if x in common)
    return head + [meet] + tail[::-1]


def orient(m: PseudoManifold) -> PseudoManifold:
    """Return ``m`` with a coherent orientation attached (or raise NotOrientable)."""
    return PseudoManifold(m.d, m.facets, check_orientability(m))


def manifold_from_json(data: Mapping) -> PseudoManifold:
    d = int(data["dimension"])
    facets = [make_simplex(int(v) for v in f) for f in data["facets"]]
    orientation = None
    if data.get("orientation") is not None:
        signs = [int(s) for s in data["orientation"]]
        if len(signs) != len(facets):
            raise ValueError("orientation list must have one sign per facet")
        # signs refer to the facet as listed, so fold in the parity of that listing
        orientation = {}
        for raw, f, s in zip(data["facets"], facets, signs):
            orientation[f] = s * permutation_parity([int(v) for v in raw])
    return validate_pseudo_manifold(facets, d, orientation)


def load_manifold(path: str | Path) -> PseudoManifold:
    return manifold_from_json(json.loads(Path(path).read_text()))
