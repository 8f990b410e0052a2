"""Scaling benchmark for REGULAR 2-SPM on C_b labelings."""

from __future__ import annotations

import csv
import io
import math
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from functools import lru_cache

import numpy as np

from spernerlab.instances import cb_solution, grid_coords, labeling_cb, regular_subdivision
from spernerlab.oracle import LabelingOracle
from spernerlab.rng import SplitMix64
from spernerlab.separation import BFS_LEVEL, EXACT, SeparatorStrategy, grid_line
from spernerlab.solver import InternalInconsistency, SpmInstance, solve_spm


@dataclass(frozen=True)
class BenchRecord:
    family: str
    m: int
    n: int
    strategy: str
    seed_or_b: str
    queries_total: int
    queries_interior: int
    solution: str
    wall_time_ms: str


COLUMNS = [f.name for f in fields(BenchRecord)]


def strategy_for(name: str, m: int, coords=None) -> SeparatorStrategy:
    if name == "gridline":
        return grid_line(coords if coords is not None else grid_coords(m))
    if name == "bfslevel":
        return BFS_LEVEL
    if name == "exact":
        return EXACT
    raise ValueError(f"unknown strategy {name!r}")


def sample_bits(m: int, samples: int, seed: int) -> list[str]:
    """All-zero and all-one extremes, then ``samples`` distinct draws from SplitMix64.

    When fewer than ``samples`` other strings exist, every string is returned.
    """
    k = max(m - 2, 0)
    rng = SplitMix64(seed ^ (m * 0x9E3779B1))
    out = dict.fromkeys(["0" * k, "1" * k])
    target = min(len(out) + samples, 2**k)
    while len(out) < target:
        out.setdefault(rng.bits(k))
    return list(out)


@lru_cache(maxsize=8)
def _grid(m: int):
    # shared by every sample at this m; both objects are read-only
    return regular_subdivision(m), grid_coords(m)


def run_one(task: tuple[int, str, str, bool]) -> BenchRecord:
    m, b, strategy_name, timing = task
    manifold, coords = _grid(m)
    oracle = LabelingOracle(labeling_cb(b, m))
    t0 = time.perf_counter()
    result = solve_spm(SpmInstance(manifold, manifold.facets[0], oracle), strategy_for(strategy_name, m, coords))
    elapsed = (time.perf_counter() - t0) * 1000
    if result.facet != cb_solution(b, m):
        raise InternalInconsistency(f"solver answer {result.facet} is not the C_b solution for b={b}")
    i = min(coords[v][0] for v in result.facet)
    j = min(coords[v][1] for v in result.facet)
    return BenchRecord(
        family="regular2spm",
        m=m,
        n=len(coords),
        strategy=strategy_name,
        seed_or_b=b,
        queries_total=result.queries,
        queries_interior=result.interior_queries,
        solution=f"({i},{j})",
        wall_time_ms=f"{elapsed:.3f}" if timing else "",
    )


def run_bench(
    ms: Iterable[int], samples: int, strategy: str = "gridline", seed: int = 0, jobs: int = 1, timing: bool = True
) -> list[BenchRecord]:
    tasks = [(m, b, strategy, timing) for m in ms for b in sample_bits(m, samples, seed)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(run_one, tasks, chunksize=4))
    else:
        rows = [run_one(t) for t in tasks]
    return sorted(rows, key=lambda r: (r.m, r.seed_or_b))


def to_csv(rows: Sequence[BenchRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in rows:
        writer.writerow(astuple(r))
    return buf.getvalue()


@dataclass(frozen=True)
class ScalingFit:
    exponent: float
    worst: dict[int, int]
    mean: dict[int, float]
    n: dict[int, int]


def fit_exponent(rows: Sequence[BenchRecord]) -> ScalingFit:
    """Least-squares slope of log(max interior queries) against log n."""
    worst: dict[int, int] = {}
    total: dict[int, list[int]] = {}
    n: dict[int, int] = {}
    for r in rows:
        worst[r.m] = max(worst.get(r.m, 0), r.queries_interior)
        total.setdefault(r.m, []).append(r.queries_interior)
        n[r.m] = r.n
    ms = sorted(worst)
    if len(ms) >= 2 and all(worst[m] > 0 for m in ms):
        slope = float(np.polyfit([math.log(n[m]) for m in ms], [math.log(worst[m]) for m in ms], 1)[0])
    else:
        slope = float("nan")
    return ScalingFit(slope, worst, {m: sum(v) / len(v) for m, v in total.items()}, n)
