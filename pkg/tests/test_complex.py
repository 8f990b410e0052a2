import json
from itertools import combinations, permutations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spernerlab.complex import (
    NotOrientable,
    NotPseudoManifold,
    OrientedSimplex,
    boundary_complex,
    check_orientability,
    faces,
    induced_orientation,
    manifold_from_json,
    permutation_parity,
    skeleton,
    validate_pseudo_manifold,
)
from spernerlab.instances import grid_points, mobius_strip, random_manifold, regular_subdivision

a, b, c, d, e = range(5)


def inversion_sign(seq):
    inv = sum(1 for i, j in combinations(range(len(seq)), 2) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


def test_faces_examples():
    assert faces((1, 2, 3), 1) == {(1, 2), (1, 3), (2, 3)}
    assert faces((1, 2, 3), 2) == {(1, 2, 3)}
    assert faces((0, 1, 2, 3), 0) == {(0,), (1,), (2,), (3,)}


def test_faces_out_of_range():
    with pytest.raises(ValueError):
        faces((1, 2, 3), 3)
    with pytest.raises(ValueError):
        faces((1, 2, 3), -1)


@given(st.sets(st.integers(0, 30), min_size=1, max_size=7), st.data())
def test_face_count_is_binomial(vs, data):
    s = tuple(sorted(vs))
    k = data.draw(st.integers(0, len(s) - 1))
    assert len(faces(s, k)) == comb(len(s), k + 1)


@given(st.lists(st.integers(0, 50), min_size=1, max_size=8, unique=True))
def test_parity_matches_inversion_count(seq):
    assert permutation_parity(seq) == inversion_sign(seq)


def test_oriented_simplex_classes():
    assert OrientedSimplex.from_ordering((0, 1, 2)) == OrientedSimplex((0, 1, 2), 1)
    assert OrientedSimplex.from_ordering((1, 2, 0)) == OrientedSimplex((0, 1, 2), 1)
    assert OrientedSimplex.from_ordering((1, 0, 2)) == OrientedSimplex((0, 1, 2), -1)
    # every ordering in the class is reached by the representative
    s = OrientedSimplex((3, 5, 9), -1)
    assert OrientedSimplex.from_ordering(s.ordering()) == s


def test_induced_orientation_examples():
    assert induced_orientation((0, 1, 2), 0) == OrientedSimplex((1, 2), 1)
    assert induced_orientation((0, 1, 2), 1) == OrientedSimplex((0, 2), -1)
    assert induced_orientation((0, 1, 2, 3), 2) == OrientedSimplex((0, 1, 3), 1)
    with pytest.raises(IndexError):
        induced_orientation((0, 1, 2), 3)


@given(st.lists(st.integers(0, 40), min_size=2, max_size=7, unique=True))
def test_induced_orientation_independent_of_representative(order):
    # an even permutation of the ordering must induce the same face orientations
    rotated = order[2:] + order[:2] if len(order) > 2 else order
    if inversion_sign(rotated) * inversion_sign(order) != 1:
        rotated = order
    def by_face(o):
        return {induced_orientation(o, i) for i in range(len(order))}

    assert by_face(order) == by_face(rotated)
    assert by_face(OrientedSimplex.from_ordering(order)) == by_face(order)


@given(st.lists(st.integers(0, 40), min_size=2, max_size=7, unique=True))
def test_induced_faces_cover_each_face_once(order):
    got = [induced_orientation(order, i).vertices for i in range(len(order))]
    assert sorted(got) == sorted(faces(tuple(sorted(order)), len(order) - 2))


def test_validate_examples():
    m = validate_pseudo_manifold([(a, b, c), (b, c, d)], 2)
    assert m.facets == ((a, b, c), (b, c, d))
    with pytest.raises(NotPseudoManifold) as exc:
        validate_pseudo_manifold([(a, b, c), (b, c, d), (b, c, e)], 2)
    assert exc.value.ridge == (b, c)
    with pytest.raises(NotPseudoManifold):
        validate_pseudo_manifold([(a, b, c), (b, c)], 2)


def test_m2_subdivision_is_valid():
    m = regular_subdivision(2)
    # recount ridges by hand: every edge in one or two triangles
    counts = {}
    for f in m.facets:
        for r in combinations(f, 2):
            counts[r] = counts.get(r, 0) + 1
    assert len(m.facets) == 4 and max(counts.values()) == 2


def test_boundary_examples():
    assert {s.vertices for s in boundary_complex(validate_pseudo_manifold([(a, b, c), (b, c, d)], 2))} == {
        (a, b), (a, c), (b, d), (c, d)
    }
    assert {s.vertices for s in boundary_complex(validate_pseudo_manifold([(a, b, c)], 2))} == {
        (a, b), (a, c), (b, c)
    }


def test_m3_boundary_is_nine_outer_edges():
    m = regular_subdivision(3)
    pts = {v: p for v, p in zip(range(100), grid_points(3))}
    outer = {
        r for f in m.facets for r in combinations(f, 2)
        if sum(1 for g in m.facets if set(r) <= set(g)) == 1
    }
    assert len(outer) == 9
    assert {s.vertices for s in boundary_complex(m)} == outer
    for u, v in outer:
        (i1, j1), (i2, j2) = pts[u], pts[v]
        assert (i1 == i2 == 0) or (j1 == j2 == 0) or (i1 + j1 == i2 + j2 == 3)


def test_oriented_boundary_takes_induced_orientation():
    m = validate_pseudo_manifold([(0, 1, 2)], 2, {(0, 1, 2): 1})
    assert boundary_complex(m) == {
        OrientedSimplex((1, 2), 1), OrientedSimplex((0, 2), -1), OrientedSimplex((0, 1), 1)
    }


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 30), st.sampled_from([2, 3]))
def test_boundary_ridges_lie_in_exactly_one_facet(seed, size, dim):
    m = random_manifold(seed, size, dim)
    for s in boundary_complex(m):
        assert sum(1 for f in m.facets if set(s.vertices) <= set(f)) == 1
        assert any(set(s.vertices) <= set(f) for f in m.facets)


def test_skeleton_examples():
    g = skeleton(validate_pseudo_manifold([(a, b, c)], 2))
    assert g.edges == {(a, b), (a, c), (b, c)}
    g = skeleton(validate_pseudo_manifold([(a, b, c), (b, c, d)], 2))
    assert len(g.vertices) == 4 and len(g.edges) == 5
    assert len(skeleton(regular_subdivision(4)).vertices) == comb(4 + 2, 2)


@pytest.mark.parametrize("dim", [1, 2, 3, 4])
def test_skeleton_of_elementary_complex_is_complete(dim):
    g = skeleton(validate_pseudo_manifold([tuple(range(dim + 1))], dim))
    assert len(g.edges) == comb(dim + 1, 2)


def _recheck_orientation(m, signs):
    for ridge, owners in m.ridges.items():
        if len(owners) == 2:
            induced = []
            for f in owners:
                i = next(k for k, v in enumerate(f) if v not in ridge)
                induced.append(induced_orientation(OrientedSimplex(f, signs[f]), i))
            assert induced[0] == induced[1].reversed()


def test_two_triangles_orientable():
    m = validate_pseudo_manifold([(a, b, c), (b, c, d)], 2)
    _recheck_orientation(m, check_orientability(m))


@pytest.mark.parametrize("size", [1, 2, 3, 5, 8, 16, 32, 64])
def test_regular_subdivision_orientable(size):
    m = regular_subdivision(size)
    _recheck_orientation(m, check_orientability(m))
    _recheck_orientation(m, m.orientation)


def test_mobius_strip_is_not_orientable():
    m = mobius_strip()
    assert len(m.facets) == 6
    with pytest.raises(NotOrientable) as exc:
        check_orientability(m)
    cycle = exc.value.cycle
    assert len(cycle) >= 2 and set(cycle) <= set(m.facets)


def test_orientation_coherence_checked():
    # (a,b,c)+ induces +(b,c); (b,c,d)- induces -(b,c): coherent
    validate_pseudo_manifold([(a, b, c), (b, c, d)], 2, {(a, b, c): 1, (b, c, d): -1})
    with pytest.raises(NotOrientable):
        validate_pseudo_manifold([(a, b, c), (b, c, d)], 2, {(a, b, c): 1, (b, c, d): 1})


def test_json_round_trip():
    m = regular_subdivision(3)
    again = manifold_from_json(json.loads(json.dumps(m.to_json())))
    assert again == m


def test_json_orientation_refers_to_listed_order():
    data = {"dimension": 2, "facets": [[1, 0, 2], [1, 2, 3]], "orientation": [1, 1]}
    m = manifold_from_json(data)
    assert m.orientation == {(0, 1, 2): -1, (1, 2, 3): 1}


def test_disconnected_input_accepted():
    m = validate_pseudo_manifold([(0, 1, 2), (5, 6, 7)], 2)
    assert len(check_orientability(m)) == 2


@pytest.mark.parametrize("order", list(permutations((0, 1, 2))))
def test_from_ordering_sign_on_all_permutations(order):
    assert OrientedSimplex.from_ordering(order).sign == inversion_sign(order)
