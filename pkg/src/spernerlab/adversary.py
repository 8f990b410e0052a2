"""Weighted adversary bounds for small black-box problems given as tables.

All row sums and ratios are exact (integers and Fractions); only the final
square root of the quantum expression is taken in floating point.
"""

from __future__ import annotations

import math
from collections.abc import Hashable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb

import numpy as np

from spernerlab.instances import grid_points, snake_endpoint, snake_values

SNAKE_CAP = 14


class VacuousMatrix(ValueError):
    pass


@dataclass(frozen=True)
class BlackBoxProblem:
    """Inputs as equal-length strings over some alphabet, with their outputs."""

    inputs: tuple[tuple[int, ...], ...]
    outputs: tuple[Hashable, ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if len(self.inputs) != len(self.outputs):
            raise ValueError("one output per input")
        if len({len(x) for x in self.inputs}) > 1:
            raise ValueError("inputs must share one length")

    @property
    def n(self) -> int:
        return len(self.inputs[0]) if self.inputs else 0

    def table(self) -> np.ndarray:
        return np.array(self.inputs, dtype=np.int64).reshape(len(self.inputs), self.n)


def sigma(M: np.ndarray, x: int) -> int:
    return int(np.asarray(M)[x].sum())


def check_matrix(p: BlackBoxProblem, gamma: np.ndarray) -> None:
    gamma = np.asarray(gamma)
    size = len(p.inputs)
    if gamma.shape != (size, size):
        raise ValueError(f"matrix shape {gamma.shape} does not match {size} inputs")
    if (gamma < 0).any():
        raise ValueError("adversary matrix must be nonnegative")
    if not (gamma == gamma.T).all():
        raise ValueError("adversary matrix must be symmetric")
    for x in range(size):
        for y in np.nonzero(gamma[x])[0]:
            if p.outputs[x] == p.outputs[int(y)]:
                raise ValueError(f"inputs {x} and {int(y)} share an output but have weight {gamma[x, y]}")


def restrict(gamma: np.ndarray, table: np.ndarray, k: int) -> np.ndarray:
    """Gamma_k: keep only the pairs that differ at position k."""
    col = table[:, k]
    return np.where(col[:, None] != col[None, :], gamma, 0)


@dataclass(frozen=True)
class AdversaryReport:
    rqc: Fraction
    qqc_squared: Fraction
    witness_rqc: tuple[int, int, int]
    witness_qqc: tuple[int, int, int]
    sigma_min: int
    sigma_max: int

    @property
    def qqc(self) -> float:
        return math.sqrt(self.qqc_squared)

    @property
    def rqc_float(self) -> float:
        return float(self.rqc)


def adversary_bounds(p: BlackBoxProblem, gamma: np.ndarray) -> AdversaryReport:
    """Minimise both weighted adversary expressions over (x, y, k).

    The minimum runs over pairs with nonzero weight that differ at position k.
    """
    gamma = np.asarray(gamma, dtype=np.int64)
    check_matrix(p, gamma)
    if not gamma.any():
        raise VacuousMatrix("adversary matrix is identically zero")
    table = p.table()
    row = gamma.sum(axis=1)
    best_r: tuple[Fraction, tuple[int, int, int]] | None = None
    best_q: tuple[Fraction, tuple[int, int, int]] | None = None
    for k in range(p.n):
        gk = restrict(gamma, table, k)
        pairs = np.argwhere(gk != 0)
        if len(pairs) == 0:
            continue
        rk = gk.sum(axis=1)
        # ratios depend on x only; group pairs by exact per-row ratio
        ratio = {int(x): Fraction(int(row[x]), int(rk[x])) for x in np.unique(pairs[:, 0])}
        values = sorted(set(ratio.values()))
        rank = {v: i for i, v in enumerate(values)}
        rx = np.array([rank[ratio[int(x)]] for x in pairs[:, 0]])
        ry = np.array([rank[ratio[int(y)]] for y in pairs[:, 1]])
        i_r = int(np.argmin(np.maximum(rx, ry)))
        x, y = (int(v) for v in pairs[i_r])
        cand_r = max(ratio[x], ratio[y])
        if best_r is None or cand_r < best_r[0]:
            best_r = (cand_r, (x, y, k))
        # products are compared exactly over the distinct ratio pairs that occur
        seen = {(int(a), int(b)) for a, b in zip(rx, ry)}
        qa, qb = min(seen, key=lambda ab: values[ab[0]] * values[ab[1]])
        cand_q = values[qa] * values[qb]
        if best_q is None or cand_q < best_q[0]:
            i_q = int(np.nonzero((rx == qa) & (ry == qb))[0][0])
            best_q = (cand_q, tuple(int(v) for v in pairs[i_q]) + (k,))
    assert best_r is not None and best_q is not None
    return AdversaryReport(
        rqc=best_r[0],
        qqc_squared=best_q[0],
        witness_rqc=best_r[1],
        witness_qqc=best_q[1],
        sigma_min=int(row.min()),
        sigma_max=int(row.max()),
    )


# -- SNAKE ------------------------------------------------------------------


def snake_inputs(m: int) -> list[str]:
    return ["".join(bits) for bits in product("01", repeat=m - 2)]


def snake_problem(m: int) -> BlackBoxProblem:
    """SNAKE on V_m: each input is the O_b table in vertex-id order."""
    bs = snake_inputs(m)
    n_points = len(grid_points(m))
    inputs = []
    for b in bs:
        vals = snake_values(b, m)
        inputs.append(tuple(vals[v] for v in range(n_points)))
    return BlackBoxProblem(tuple(inputs), tuple(snake_endpoint(b) for b in bs), tuple(bs))


def common_prefix(a: str, b: str) -> int:
    k = 0
    while k < len(a) and a[k] == b[k]:
        k += 1
    return k


def snake_gamma(m: int, cap: int = SNAKE_CAP) -> np.ndarray:
    """Weight 2^|longest common prefix| between snakes with different endpoints."""
    if m < 3:
        raise ValueError("need m >= 3")
    if m > cap:
        raise ValueError(f"m = {m} exceeds the matrix cap {cap}")
    bs = snake_inputs(m)
    w0 = np.array([b.count("0") for b in bs])
    size = len(bs)
    out = np.zeros((size, size), dtype=np.int64)
    for x in range(size):
        for y in range(x + 1, size):
            if w0[x] != w0[y]:
                out[x, y] = out[y, x] = 1 << common_prefix(bs[x], bs[y])
    return out


def _binom(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def snake_sigma_closed_form(b: str, m: int, upper: int | None = None) -> int:
    """Row sum of the SNAKE matrix grouped by common-prefix length.

    For each prefix length t, 2^(m-3-t) snakes branch off after t bits and a
    binomial count of them end where b does.  ``upper`` is the last prefix
    length summed (default m - 3, which covers every branching point).
    """
    upper = m - 3 if upper is None else upper
    total = 0
    for t in range(upper + 1):
        bit = b[t]
        same = _binom(m - 3 - t, b.count(bit) - b[:t].count(bit))
        total += 2**t * (2 ** (m - 3 - t) - same)
    return total


def snake_sigma_p_bound(m: int, p: tuple[int, int]) -> int:
    """Upper bound on the restricted row sum at a point p of level h = i + j."""
    h = p[0] + p[1]
    return sum(2**t * _binom(h - t - 2, (h - t - 2) // 2) * 2 ** (m - h - 1) for t in range(h - 1))
