"""Instance families: the regular subdivision of a triangle, the C_b and O_b
labelings driven by a bit string, the SNAKE-to-Sperner reduction, and random
pseudo-manifolds for fuzzing.

Grid point (i, j) of V_m gets vertex id ``i * (2m + 3 - i) // 2 + j``: rows of
constant i are stored one after another.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from spernerlab.complex import (
    NotOrientable,
    PseudoManifold,
    Simplex,
    check_orientability,
    validate_pseudo_manifold,
)
from spernerlab.oracle import LabelingOracle
from spernerlab.rng import SplitMix64

Point = tuple[int, int]


def grid_id(i: int, j: int, m: int) -> int:
    if i < 0 or j < 0 or i + j > m:
        raise ValueError(f"({i}, {j}) is not in V_{m}")
    return i * (2 * m + 3 - i) // 2 + j


def grid_points(m: int) -> list[Point]:
    return [(i, j) for i in range(m + 1) for j in range(m + 1 - i)]


def grid_coords(m: int) -> dict[int, Point]:
    return {grid_id(i, j, m): (i, j) for i, j in grid_points(m)}


def on_boundary(p: Point, m: int) -> bool:
    return p[0] == 0 or p[1] == 0 or p[0] + p[1] == m


def regular_subdivision(m: int) -> PseudoManifold:
    """The regular m-subdivision of a triangle, coherently oriented.

    Each facet is oriented counter-clockwise in the (i, j) plane.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    tris: list[tuple[Point, Point, Point]] = []
    for i in range(m):
        for j in range(m - i):
            tris.append(((i, j), (i + 1, j), (i, j + 1)))
            if i + j <= m - 2:
                tris.append(((i + 1, j), (i + 1, j + 1), (i, j + 1)))
    facets = []
    orientation = {}
    for tri in tris:
        ids = [grid_id(i, j, m) for i, j in tri]
        order = sorted(range(3), key=lambda k: ids[k])
        a, b, c = (tri[k] for k in order)
        det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        f = tuple(ids[k] for k in order)
        facets.append(f)
        orientation[f] = 1 if det > 0 else -1
    return validate_pseudo_manifold(facets, 2, orientation)


# -- bit strings ----------------------------------------------------------


def _check_bits(b: str) -> str:
    if any(c not in "01" for c in b):
        raise ValueError(f"not a bit string: {b!r}")
    return b


def expected_bits(m: int) -> int:
    return max(m - 2, 0)


def snake_cells(b: str) -> list[Point]:
    """The points (w0(b^t) + 1, w1(b^t)) for every prefix length t = 0..|b|."""
    cells = []
    w0 = w1 = 0
    cells.append((1, 0))
    for bit in b:
        if bit == "0":
            w0 += 1
        else:
            w1 += 1
        cells.append((w0 + 1, w1))
    return cells


def snake_endpoint(b: str) -> Point:
    return b.count("0"), b.count("1")


def _prefix_cells(b: str, m: int) -> list[Point]:
    # V_1 has no room for the path, so m = 1 carries no snake at all
    return snake_cells(b) if m >= 2 else []


def labeling_cb(b: str, m: int) -> dict[int, int]:
    """C_b on V_m, keyed by vertex id."""
    b = _check_bits(b)
    if len(b) != expected_bits(m):
        raise ValueError(f"C_b on V_{m} needs {expected_bits(m)} bits, got {len(b)}")
    ones = set(_prefix_cells(b, m))
    twos = {(i - 1, j + 1) for i, j in ones}
    out = {}
    for i, j in grid_points(m):
        if j == 0 and i != 0:
            label = 1
        elif i == 0 and j != m:
            label = 2
        elif i + j == m and j != 0:
            label = 0
        elif (i, j) in ones:
            label = 1
        elif (i, j) in twos:
            label = 2
        else:
            label = 0
        out[grid_id(i, j, m)] = label
    return out


def cb_solution(b: str, m: int) -> Simplex:
    """The unique fully labeled facet of C_b, as sorted vertex ids."""
    w0, w1 = snake_endpoint(b)
    if m == 1:
        return tuple(sorted(grid_id(i, j, 1) for i, j in ((0, 0), (1, 0), (0, 1))))
    return tuple(sorted(grid_id(i, j, m) for i, j in ((w0 + 1, w1), (w0, w1 + 1), (w0 + 1, w1 + 1))))


def regular_promise_violations(labels: dict[int, int], m: int) -> list[str]:
    """Boundary points breaking the classical Sperner boundary condition."""
    out = []
    for k in range(m + 1):
        if labels[grid_id(0, k, m)] == 1:
            out.append(f"label(0,{k}) = 1")
        if labels[grid_id(k, 0, m)] == 0:
            out.append(f"label({k},0) = 0")
        if labels[grid_id(k, m - k, m)] == 2:
            out.append(f"label({k},{m - k}) = 2")
    return out


# -- SNAKE ------------------------------------------------------------------


def snake_values(b: str, m: int) -> dict[int, int]:
    """O_b on V_m, keyed by vertex id."""
    b = _check_bits(b)
    if len(b) != expected_bits(m):
        raise ValueError(f"O_b on V_{m} needs {expected_bits(m)} bits, got {len(b)}")
    ones = set(_prefix_cells(b, m))
    return {grid_id(i, j, m): int((i, j) in ones) for i, j in grid_points(m)}


@dataclass
class SnakeOracle:
    """Black-box O_b with its own query counter."""

    b: str
    m: int

    @cached_property
    def oracle(self) -> LabelingOracle:
        return LabelingOracle(snake_values(self.b, self.m))

    def query(self, p: Point) -> int:
        return self.oracle.query(grid_id(p[0], p[1], self.m))

    @property
    def count(self) -> int:
        return self.oracle.count

    def answer(self) -> Point:
        return snake_endpoint(self.b)


def gamma(a1: int, a2: int, a3: int) -> int:
    """Sperner label of an interior point from O_b at its (down-left, self, down-right) neighbours."""
    if (a1, a2, a3) == (0, 1, 0):
        return 1
    if (a1, a2, a3) == (1, 0, 0):
        return 2
    return 0


def snake_reduce(snake: SnakeOracle) -> tuple[LabelingOracle, Callable[[Iterable[int]], Point]]:
    """A C_b oracle answered through SNAKE queries, and the answer translator.

    Boundary labels are fixed by the boundary cases of C_b and cost nothing.
    Each interior label costs at most three SNAKE queries.
    """
    m = snake.m
    coords = grid_coords(m)

    def ask(p: Point) -> int:
        i, j = p
        if i < 0 or j < 0 or i + j > m:
            return 0
        return snake.query(p)

    def label(v: int) -> int:
        i, j = coords[v]
        if j == 0 and i != 0:
            return 1
        if i == 0 and j != m:
            return 2
        if i + j == m:
            return 0
        return gamma(ask((i + 1, j - 1)), ask((i, j)), ask((i - 1, j + 1)))

    def beta(facet: Iterable[int]) -> Point:
        pts = [coords[v] for v in facet]
        return min(p[0] for p in pts), min(p[1] for p in pts)

    return LabelingOracle(label, coords.keys()), beta


# -- random pseudo-manifolds ---------------------------------------------


def random_manifold(seed: int, size: int, d: int = 2, reuse: float = 0.3) -> PseudoManifold:
    """Grow ``size`` d-simplices by gluing each new one onto a free ridge.

    With probability ``reuse`` the apex is an existing vertex (when that keeps
    the complex a pseudo-manifold), which produces closed-up and twisted
    surfaces; otherwise it is a fresh vertex.
    """
    if size < 1:
        raise ValueError("size must be positive")
    rng = SplitMix64(seed)
    facets = [tuple(range(d + 1))]
    owners: dict[Simplex, int] = {r: 1 for r in combinations(facets[0], d)}
    present = set(facets)
    nxt = d + 1
    while len(facets) < size:
        free = sorted(r for r, k in owners.items() if k == 1)
        if not free:
            # closed surface: start a new component
            base = tuple(range(nxt, nxt + d + 1))
            nxt += d + 1
            _add(base, facets, owners, present)
            continue
        ridge = rng.choice(free)
        apex = None
        if rng.random() < reuse and nxt > d + 1:
            cand = rng.below(nxt)
            f = tuple(sorted(ridge + (cand,)))
            if cand not in ridge and f not in present and all(owners.get(r, 0) < 2 for r in combinations(f, d)):
                apex = cand
        if apex is None:
            apex = nxt
            nxt += 1
        _add(tuple(sorted(ridge + (apex,))), facets, owners, present)
    return validate_pseudo_manifold(facets, d)


def _add(f: Simplex, facets: list, owners: dict, present: set) -> None:
    facets.append(f)
    present.add(f)
    for r in combinations(f, len(f) - 1):
        owners[r] = owners.get(r, 0) + 1


def random_labeling(m: PseudoManifold, seed: int, labels: int | None = None) -> dict[int, int]:
    rng = SplitMix64(seed ^ 0x5DEECE66D)
    k = m.d + 1 if labels is None else labels
    return {v: rng.below(k) for v in sorted(m.vertices)}


def random_manifold_2d(seed: int, size: int) -> tuple[PseudoManifold, dict[int, int]]:
    m = random_manifold(seed, size, 2)
    return m, random_labeling(m, seed)


def random_oriented_manifold(seed: int, size: int, d: int = 2) -> PseudoManifold:
    """First orientable draw from the seeded stream, with a coherent orientation."""
    for attempt in range(1000):
        m = random_manifold(seed * 1000 + attempt, size, d)
        try:
            orientation = check_orientability(m)
        except NotOrientable:
            continue
        return PseudoManifold(m.d, m.facets, orientation)
    raise RuntimeError("no orientable draw found")  # pragma: no cover


def mobius_strip() -> PseudoManifold:
    """Six triangles around a twisted band: top row t0..t2, bottom row b0..b2."""
    t0, t1, t2, b0, b1, b2 = range(6)
    tris = [(t0, b0, t1), (b0, t1, b1), (t1, b1, t2), (b1, t2, b2), (t2, b2, b0), (b2, b0, t0)]
    return validate_pseudo_manifold(tris, 2)
