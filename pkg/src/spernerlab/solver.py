"""Divide-and-conquer search for fully labeled facets, plus a brute-force reference.

The solver only ever learns labels through the oracle.  Each round splits the
current piece along a separation of its unlabeled interior, pays for the
separator, and keeps the piece whose boundary flow certifies a solution.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from spernerlab.chains import Labeling, MissingLabel, Ring, boundary_standard_chain, flow, simplex_flow
from spernerlab.complex import OrientedSimplex, PseudoManifold, Simplex, boundary_vertices, skeleton
from spernerlab.oracle import LabelingOracle
from spernerlab.separation import (
    EXACT,
    Separation,
    SeparatorStrategy,
    best_separation,
    iterated_separation_number,
    is_admissible,
    validate_separation,
)


class PromiseViolation(RuntimeError):
    pass


class NotOriented(ValueError):
    pass


class InternalInconsistency(AssertionError):
    pass


@dataclass(frozen=True)
class SpmInstance:
    manifold: PseudoManifold
    start: Simplex
    oracle: LabelingOracle
    oriented: bool = False

    def __post_init__(self) -> None:
        if self.start not in self.manifold.facet_set:
            raise ValueError(f"start facet {self.start} is not a facet of the manifold")
        if self.oriented and not self.manifold.oriented:
            raise NotOriented("the oriented problem needs an oriented manifold")


@dataclass(frozen=True)
class Split:
    """The three pieces of one divide step and the ridges spanned by B."""

    known: frozenset[int]
    b_piece: PseudoManifold
    left_piece: PseudoManifold
    right_piece: PseudoManifold
    b_ridges: frozenset[Simplex]

    @property
    def pieces(self) -> tuple[PseudoManifold, PseudoManifold, PseudoManifold]:
        return self.b_piece, self.left_piece, self.right_piece


def split(m: PseudoManifold, h: frozenset[int] | set[int], sep: Separation) -> Split:
    h = frozenset(h) & m.vertices
    interior = skeleton(m).induced(m.vertices - h)
    validate_separation(interior, sep.a, sep.c)
    known = h | sep.separator
    side_a, side_c = sep.left, sep.right
    b_facets, left, right = [], [], []
    for f in m.facets:
        if any(v in side_a for v in f):
            left.append(f)
        elif any(v in side_c for v in f):
            right.append(f)
        else:
            b_facets.append(f)
    b_ridges = frozenset(r for r in m.ridges if all(v in known for v in r))
    return Split(known, m.sub(b_facets), m.sub(left), m.sub(right), b_ridges)


@dataclass(frozen=True)
class Round:
    """One divide step, kept for auditing query use and flow bookkeeping."""

    facets: int
    interior: int
    separator: int
    piece_facets: tuple[int, int, int]
    flow: int
    piece_flows: tuple[int, int, int]
    chosen: int | None


@dataclass(frozen=True)
class SolveResult:
    facet: Simplex
    flow_value: int
    queries: int
    boundary_queries: int = 0
    interior_queries: int = 0
    rounds: tuple[Round, ...] = field(default=(), repr=False)


def _boundary_flow(m: PseudoManifold, ring: Ring, labels: Labeling) -> int:
    if not m.facets:
        return 0
    try:
        return flow(boundary_standard_chain(m, ring), labels)
    except MissingLabel as exc:
        raise InternalInconsistency(f"boundary vertex {exc.args[0]} has no known label") from None


def _facet_flow(m: PseudoManifold, f: Simplex, labels: Labeling, ring: Ring) -> int:
    return ring.reduce(simplex_flow(OrientedSimplex(f, m.sign(f)), labels))


def _search(
    m: PseudoManifold,
    start: Simplex,
    oracle: LabelingOracle,
    known: dict[int, int],
    strategy: SeparatorStrategy,
    oriented: bool,
) -> tuple[Simplex, int, list[Round]]:
    ring = Ring.Z if oriented else Ring.Z2
    sign_d = (-1) ** m.d
    rounds: list[Round] = []
    h = frozenset(known) & m.vertices
    while True:
        labels = {v: known[v] for v in h}
        total = ring.reduce(sign_d * _boundary_flow(m, ring, labels))
        if oriented:
            if total > 0:
                raise PromiseViolation(f"oriented boundary flow is {total}, expected at most 0")
            case_a = total < 0
        else:
            case_a = total == 1

        interior = skeleton(m).induced(m.vertices - h)
        sep = _choose_separation(interior, strategy)
        for v in sorted(sep.separator):
            known[v] = oracle.query(v)
        parts = split(m, h, sep)
        labels = {v: known[v] for v in parts.known}

        flows = tuple(ring.reduce(sign_d * _boundary_flow(p, ring, labels)) for p in parts.pieces)
        for f in parts.b_piece.facets:
            value = _facet_flow(m, f, labels, ring)
            if f == start and not case_a and value != 1:
                raise PromiseViolation(f"start facet {start} does not carry flow 1")
            if value == ring.reduce(-1 if oriented else 1) and (case_a or oriented or f != start):
                rounds.append(_round(m, interior, sep, parts, total, flows, 0))
                return f, value, rounds

        chosen = _choose_piece(parts.pieces, flows, start, case_a, oriented)
        rounds.append(_round(m, interior, sep, parts, total, flows, chosen))
        if chosen is None or chosen == 0:
            # B is fully labeled and was just scanned, so recursing there cannot help
            raise PromiseViolation("flow accounting found no piece that must hold a solution")

        piece = parts.pieces[chosen]
        h = parts.known & piece.vertices
        # a one-sided separation may keep every facet, but it always labels
        # at least one more vertex, so the unlabeled interior shrinks
        if len(piece.facets) > len(m.facets) or len(piece.vertices - h) >= len(interior.vertices):
            raise InternalInconsistency("recursion made no progress")
        if not boundary_vertices(piece) <= h:
            raise InternalInconsistency("piece boundary reaches outside the known labels")
        if start not in piece.facet_set:
            start = piece.facets[0]
        m = piece


def _choose_separation(interior, strategy: SeparatorStrategy) -> Separation:
    sep = best_separation(interior, strategy)
    validate_separation(interior, sep.a, sep.c)
    if interior.vertices and not is_admissible(interior, sep):
        raise InternalInconsistency("strategy returned an inadmissible separation")
    return sep


def _choose_piece(pieces, flows, start: Simplex, case_a: bool, oriented: bool) -> int | None:
    def certifies(k: int) -> bool:
        return flows[k] < 0 if oriented else flows[k] == 1

    for k in range(3):
        if certifies(k) and (case_a or oriented or start not in pieces[k].facet_set):
            return k
    if case_a:
        return None
    for k in range(3):
        if start in pieces[k].facet_set:
            return k if flows[k] == 0 else None
    return None


def _round(m, interior, sep, parts: Split, total, flows, chosen) -> Round:
    return Round(
        facets=len(m.facets),
        interior=len(interior.vertices),
        separator=len(sep.separator),
        piece_facets=tuple(len(p.facets) for p in parts.pieces),
        flow=total,
        piece_flows=tuple(flows),
        chosen=chosen,
    )


def _solve(inst: SpmInstance, strategy: SeparatorStrategy, oriented: bool) -> SolveResult:
    m, oracle = inst.manifold, inst.oracle
    before = oracle.count
    known: dict[int, int] = {}
    for v in sorted(boundary_vertices(m)):
        known[v] = oracle.query(v)
    after_boundary = oracle.count
    facet, value, rounds = _search(m, inst.start, oracle, known, strategy, oriented)
    return SolveResult(
        facet=facet,
        flow_value=value,
        queries=oracle.count - before,
        boundary_queries=after_boundary - before,
        interior_queries=oracle.count - after_boundary,
        rounds=tuple(rounds),
    )


def solve_spm(inst: SpmInstance, strategy: SeparatorStrategy = EXACT) -> SolveResult:
    """Find a facet with flow 1 over Z/2 (distinct from the start facet under case b)."""
    return _solve(inst, strategy, oriented=False)


def solve_ospm(inst: SpmInstance, strategy: SeparatorStrategy = EXACT) -> SolveResult:
    """Find a facet with flow -1 over Z on an oriented manifold."""
    if not inst.manifold.oriented:
        raise NotOriented("the oriented problem needs an oriented manifold")
    return _solve(inst, strategy, oriented=True)


def brute_force(m: PseudoManifold, labels: Labeling, target: int, ring: Ring | None = None) -> set[Simplex]:
    """All facets whose flow equals ``target`` (in Z/2 unless ``ring`` is Z)."""
    ring = ring or Ring.Z2
    target = ring.reduce(target)
    return {f for f in m.facets if _facet_flow(m, f, labels, ring) == target}


def interior_budget(m: PseudoManifold, cap: int) -> int:
    """Exact s of the interior skeleton: the query budget beyond the boundary."""
    interior = skeleton(m).induced(m.vertices - boundary_vertices(m))
    return iterated_separation_number(interior, cap)[0]


def spm_case(m: PseudoManifold, labels: Mapping[int, int], start: Simplex, oriented: bool = False) -> str | None:
    """Which promise case (``"a"``/``"b"``) a fully known instance satisfies, or None."""
    ring = Ring.Z if oriented else Ring.Z2
    total = ring.reduce((-1) ** m.d * _boundary_flow(m, ring, labels))
    start_flow = ring.reduce(simplex_flow(OrientedSimplex(start, m.sign(start)), labels))
    if oriented:
        if total < 0:
            return "a"
        return "b" if total == 0 and start_flow == 1 else None
    if total == 1:
        return "a"
    return "b" if start_flow == 1 else None
