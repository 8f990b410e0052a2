"""Chains over Z and Z/2, the boundary operator and the labeling flow."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from spernerlab.complex import (
    OrientedSimplex,
    PseudoManifold,
    Simplex,
    boundary_complex,
    induced_orientation,
    permutation_parity,
)

Labeling = Mapping[int, int]


class MissingLabel(KeyError):
    pass


class Ring(enum.Enum):
    Z = "Z"
    Z2 = "Z2"

    def reduce(self, x: int) -> int:
        return x % 2 if self is Ring.Z2 else x


@dataclass(frozen=True)
class Chain:
    """A d-chain.  ``coeffs`` holds the coefficient of the +1 (sorted) orientation."""

    ring: Ring
    d: int
    coeffs: Mapping[Simplex, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for s, c in self.coeffs.items():
            c = self.ring.reduce(c)
            if c:
                if len(s) != self.d + 1:
                    raise ValueError(f"simplex {s} does not have dimension {self.d}")
                clean[s] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def of(cls, ring: Ring, d: int, terms: Iterable[tuple[OrientedSimplex, int]]) -> Chain:
        acc: dict[Simplex, int] = {}
        for s, c in terms:
            acc[s.vertices] = acc.get(s.vertices, 0) + s.sign * c
        return cls(ring, d, acc)

    def __add__(self, other: Chain) -> Chain:
        self._check(other)
        acc = dict(self.coeffs)
        for s, c in other.coeffs.items():
            acc[s] = acc.get(s, 0) + c
        return Chain(self.ring, self.d, acc)

    def __neg__(self) -> Chain:
        return Chain(self.ring, self.d, {s: -c for s, c in self.coeffs.items()})

    def __sub__(self, other: Chain) -> Chain:
        return self + (-other)

    def __rmul__(self, k: int) -> Chain:
        return Chain(self.ring, self.d, {s: k * c for s, c in self.coeffs.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Chain):
            return NotImplemented
        return (self.ring, self.d, self.coeffs) == (other.ring, other.d, other.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def terms(self) -> list[tuple[OrientedSimplex, int]]:
        return [(OrientedSimplex(s), c) for s, c in sorted(self.coeffs.items())]

    def _check(self, other: Chain) -> None:
        if (self.ring, self.d) != (other.ring, other.d):
            raise ValueError("chains live in different modules")


def boundary_chain(c: Chain) -> Chain:
    if c.d < 1:
        raise ValueError("the boundary of a 0-chain is not defined")
    acc: dict[Simplex, int] = {}
    for s, coeff in c.coeffs.items():
        for i in range(len(s)):
            face = induced_orientation(OrientedSimplex(s), i)
            acc[face.vertices] = acc.get(face.vertices, 0) + face.sign * coeff
    return Chain(c.ring, c.d - 1, acc)


def standard_chain(m: PseudoManifold, ring: Ring) -> Chain:
    if ring is Ring.Z and not m.oriented:
        raise ValueError("the standard chain over Z needs an oriented manifold")
    return Chain.of(ring, m.d, ((OrientedSimplex(f, m.sign(f)), 1) for f in m.facets))


def boundary_standard_chain(m: PseudoManifold, ring: Ring) -> Chain:
    """The standard (d-1)-chain of the boundary complex, with induced orientations."""
    if ring is Ring.Z and not m.oriented:
        raise ValueError("the standard chain over Z needs an oriented manifold")
    return Chain.of(ring, m.d - 1, ((s, 1) for s in boundary_complex(m)))


def simplex_flow(s: OrientedSimplex, labels: Labeling) -> int:
    """+1 / -1 when ``s`` carries labels 0..dim in even / odd order, else 0."""
    try:
        seq = [labels[v] for v in s.vertices]
    except KeyError as exc:
        raise MissingLabel(exc.args[0]) from None
    if sorted(seq) != list(range(len(seq))):
        return 0
    return s.sign * permutation_parity(seq)


def flow(c: Chain, labels: Labeling) -> int:
    total = sum(coeff * simplex_flow(OrientedSimplex(s), labels) for s, coeff in c.coeffs.items())
    return c.ring.reduce(total)


def manifold_ring(m: PseudoManifold) -> Ring:
    return Ring.Z if m.oriented else Ring.Z2


def check_conservation(m: PseudoManifold, labels: Labeling) -> tuple[int, int]:
    """Both sides of the Sperner conservation law, computed independently.

    Returns ``(N_d[M], (-1)^d N_{d-1}[boundary of M])`` in Z for an oriented
    manifold and in Z/2 otherwise.
    """
    ring = manifold_ring(m)
    inside = flow(standard_chain(m, ring), labels)
    rim = flow(boundary_standard_chain(m, ring), labels)
    return inside, ring.reduce((-1) ** m.d * rim)


@dataclass(frozen=True)
class LocalReport:
    simplex_flow: int
    face_flows: dict[OrientedSimplex, int]


def local_conservation(s: OrientedSimplex, labels: Labeling) -> LocalReport:
    """Flows through the faces of one labeled simplex.

    At most two faces carry flow, and when two do, they cancel and the
    simplex itself carries none.
    """
    nonzero = {}
    for i in range(len(s.vertices)):
        face = induced_orientation(s, i)
        value = simplex_flow(face, labels)
        if value:
            nonzero[face] = value
    own = simplex_flow(s, labels)
    assert len(nonzero) <= 2, nonzero
    if len(nonzero) == 2:
        a, b = nonzero.values()
        assert own == 0 and a == -b, (own, nonzero)
    return LocalReport(own, nonzero)
