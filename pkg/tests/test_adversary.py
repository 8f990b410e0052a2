from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spernerlab.adversary import (
    BlackBoxProblem,
    VacuousMatrix,
    adversary_bounds,
    check_matrix,
    restrict,
    sigma,
    snake_gamma,
    snake_inputs,
    snake_problem,
    snake_sigma_closed_form,
    snake_sigma_p_bound,
)
from spernerlab.instances import grid_coords, grid_id, grid_points, labeling_cb, regular_subdivision
from spernerlab.oracle import LabelingOracle
from spernerlab.separation import grid_line
from spernerlab.solver import SpmInstance, solve_spm


def lcp(x, y):
    k = 0
    while k < len(x) and x[k] == y[k]:
        k += 1
    return k


def test_sigma_examples():
    assert sigma(np.zeros((3, 3), dtype=int), 1) == 0
    g = snake_gamma(6)
    assert sum(sigma(g, x) for x in range(len(g))) == int(g.sum())


def test_snake_gamma_examples():
    g = snake_gamma(4)
    idx = {b: k for k, b in enumerate(snake_inputs(4))}
    assert g[idx["00"], idx["10"]] == 1
    assert g[idx["00"], idx["01"]] == 2
    assert (np.diag(g) == 0).all()
    with pytest.raises(ValueError):
        snake_gamma(2)
    with pytest.raises(ValueError):
        snake_gamma(15)


@pytest.mark.parametrize("m", [3, 5, 7])
def test_snake_gamma_matches_definition(m):
    bs = snake_inputs(m)
    g = snake_gamma(m)
    for x, bx in enumerate(bs):
        for y, by in enumerate(bs):
            want = 0 if bx.count("0") == by.count("0") else 2 ** lcp(bx, by)
            assert g[x, y] == want
    check_matrix(snake_problem(m), g)


def test_two_input_problem():
    p = BlackBoxProblem(((0,), (1,)), ("x", "y"))
    rep = adversary_bounds(p, np.array([[0, 1], [1, 0]]))
    assert rep.rqc == 1 and rep.qqc_squared == 1 and rep.qqc == 1.0


def test_vacuous_matrix():
    p = BlackBoxProblem(((0,), (1,)), ("x", "y"))
    with pytest.raises(VacuousMatrix):
        adversary_bounds(p, np.zeros((2, 2), dtype=int))


def test_invalid_matrices_rejected():
    p = BlackBoxProblem(((0,), (1,), (1,)), ("x", "y", "y"))
    with pytest.raises(ValueError):
        check_matrix(p, np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]]))
    with pytest.raises(ValueError):
        check_matrix(p, np.array([[0, 0, 0], [0, 0, 1], [0, 1, 0]]))
    with pytest.raises(ValueError):
        check_matrix(p, np.array([[0, -1, 0], [-1, 0, 0], [0, 0, 0]]))


@st.composite
def problems(draw):
    size = draw(st.integers(2, 7))
    n = draw(st.integers(1, 4))
    inputs = draw(st.lists(st.tuples(*[st.integers(0, 2)] * n), min_size=size, max_size=size, unique=True))
    outputs = draw(st.lists(st.integers(0, 2), min_size=size, max_size=size))
    weights = np.zeros((size, size), dtype=np.int64)
    for x in range(size):
        for y in range(x + 1, size):
            if outputs[x] != outputs[y]:
                weights[x, y] = weights[y, x] = draw(st.integers(0, 5))
    return BlackBoxProblem(tuple(inputs), tuple(outputs)), weights


@settings(max_examples=100, deadline=None)
@given(problems())
def test_restriction_entrywise(pg):
    p, g = pg
    t = p.table()
    for k in range(p.n):
        gk = restrict(g, t, k)
        for x in range(len(g)):
            for y in range(len(g)):
                assert gk[x, y] == (g[x, y] if p.inputs[x][k] != p.inputs[y][k] else 0)


def _reference_bounds(p, g):
    best_r = best_q = None
    t = p.table()
    for k in range(p.n):
        gk = restrict(g, t, k)
        for x in range(len(g)):
            for y in range(len(g)):
                if g[x, y] and p.inputs[x][k] != p.inputs[y][k]:
                    rx = Fraction(sigma(g, x), sigma(gk, x))
                    ry = Fraction(sigma(g, y), sigma(gk, y))
                    r, q = max(rx, ry), rx * ry
                    best_r = r if best_r is None else min(best_r, r)
                    best_q = q if best_q is None else min(best_q, q)
    return best_r, best_q


@settings(max_examples=100, deadline=None)
@given(problems(), st.randoms(use_true_random=False))
def test_bounds_match_reference_and_ignore_relabeling(pg, rnd):
    p, g = pg
    if not g.any():
        return
    rep = adversary_bounds(p, g)
    assert (rep.rqc, rep.qqc_squared) == _reference_bounds(p, g)
    perm = list(range(len(g)))
    rnd.shuffle(perm)
    q = BlackBoxProblem(tuple(p.inputs[i] for i in perm), tuple(p.outputs[i] for i in perm))
    rep2 = adversary_bounds(q, g[np.ix_(perm, perm)])
    assert (rep2.rqc, rep2.qqc_squared) == (rep.rqc, rep.qqc_squared)


def test_snake_bounds_positive_and_nondecreasing():
    previous = None
    for m in range(6, 11):
        rep = adversary_bounds(snake_problem(m), snake_gamma(m))
        assert rep.rqc > 0 and rep.qqc_squared > 0
        assert rep.rqc_float < float("inf")
        if previous is not None:
            assert rep.rqc >= previous.rqc and rep.qqc_squared >= previous.qqc_squared
        previous = rep


@pytest.mark.parametrize("m", range(3, 11))
def test_row_sum_grouped_by_prefix(m):
    g = snake_gamma(m)
    for x, b in enumerate(snake_inputs(m)):
        assert sigma(g, x) == snake_sigma_closed_form(b, m)


@pytest.mark.parametrize("m", range(4, 11))
def test_dropped_last_term_is_two_to_m_minus_3(m):
    # summing only up to prefix length m-4 omits the branch at the final bit,
    # whose 2^(m-3) partner always has a different endpoint
    g = snake_gamma(m)
    for x, b in enumerate(snake_inputs(m)):
        assert sigma(g, x) - snake_sigma_closed_form(b, m, upper=m - 4) == 2 ** (m - 3)


@pytest.mark.parametrize("m", range(4, 11))
def test_restricted_row_sum_upper_bound(m):
    p, g = snake_problem(m), snake_gamma(m)
    t = p.table()
    for i, j in grid_points(m):
        if not 1 <= i + j <= m - 1:
            continue
        k = grid_id(i, j, m)
        zero_rows = t[:, k] == 0
        sums = restrict(g, t, k).sum(axis=1)[zero_rows]
        if len(sums):
            assert sums.max() <= snake_sigma_p_bound(m, (i, j))


@pytest.mark.parametrize("m", [6, 8, 10])
def test_rqc_below_measured_queries(m):
    rep = adversary_bounds(snake_problem(m), snake_gamma(m))
    mf = regular_subdivision(m)
    strategy = grid_line(grid_coords(m))
    fewest = min(
        solve_spm(SpmInstance(mf, mf.facets[0], LabelingOracle(labeling_cb(b, m))), strategy).queries
        for b in snake_inputs(m)[:: max(1, 2 ** (m - 2) // 16)]
    )
    assert rep.rqc <= fewest
