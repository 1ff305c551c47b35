import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dpphard.config import GuardExceeded
from dpphard.gadgets import (
    HardnessConstants,
    build_block_family,
    complement_block,
    default_block_parameter,
    orthonormal_witness,
    reduce_game,
    rep_counts,
    rep_volume_bound_sq,
    same_vertex_distance_sq_bound,
    scale_vector_set,
    soundness_labeling,
    split_sides,
    unsatisfied_incident_count,
    verify_block_family,
)
from dpphard.games import Labeling, ProjectionGame, unsatisfied_edges
from dpphard.generators import random_regular_game, toy_special_game
from dpphard.linalg import VectorSet, inner, min_eigenvalue_at_least, norm_sq, volume_squared


def game_params():
    return st.tuples(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3), st.integers(1, 4))


def reduced(params, augmented, satisfiable=True):
    seed, k, delta, sigma = params
    G, L = random_regular_game(seed, k, delta, sigma, satisfiable)
    return G, L, reduce_game(G, augmented)


@pytest.mark.parametrize("m", range(1, 7))
def test_block_family_exhaustive(m):
    fam = build_block_family(m)
    assert len(fam) == 2**m and fam.dim == 2 ** (m + 1)
    assert verify_block_family(fam) == []
    for i in range(len(fam)):
        assert fam.inner(i, i) == 1
        assert fam.inner(i, i, False, True) == 0
        assert sum(fam.squared_entries(i)) == 1
    for i in range(min(len(fam), 8)):
        for j in range(len(fam)):
            if i != j:
                assert fam.inner(i, j) == Fraction(1, 2)
                assert fam.inner(i, j, False, True) == Fraction(1, 2)


def test_block_family_m1():
    fam = build_block_family(1)
    assert len(fam) == 2 and fam.dim == 4
    assert fam.inner(0, 1) ** 2 == Fraction(1, 4)
    b = fam.indicators[0]
    c = complement_block(b, 1)
    assert all(x + y == 1 for x, y in zip(b, c))
    assert complement_block(c, 1) == b


def test_block_family_float_view():
    fam = build_block_family(3)
    b = fam.float_block(2)
    assert b @ b == pytest.approx(1)
    assert b @ fam.float_block(2, complement=True) == pytest.approx(0)


def test_block_family_errors():
    with pytest.raises(GuardExceeded):
        build_block_family(13)
    with pytest.raises(ValueError):
        complement_block((1, 1, 1, 0), 1)


def test_default_block_parameter():
    assert [default_block_parameter(s) for s in (1, 2, 3, 4, 5, 7, 8, 9)] == [0, 1, 2, 2, 3, 3, 3, 4]
    assert default_block_parameter(7, augmented=True) == 4


@pytest.mark.parametrize("augmented", [False, True])
@given(params=game_params())
def test_reduction_structure(params, augmented):
    G, L, R = reduced(params, augmented)
    assert R.N == (G.x_count + G.y_count) * G.sigma and R.K == R.N // G.sigma
    A = R.gram.rows
    for i in range(R.N):
        assert A[i][i] == 1
    d = R.delta + (1 if augmented else 0)
    for (x, y), table in zip(G.edges, G.tables):
        for i in range(G.sigma):
            for j in range(G.sigma):
                # parallel edges add one contribution each
                mult = sum(1 for e in G.edges if e == (x, y))
                miss = sum(1 for e, t in zip(G.edges, G.tables) if e == (x, y) and t[i] != j)
                assert A[R.index("X", x, i)][R.index("Y", y, j)] == Fraction(miss, 2 * d)
                assert mult >= miss
    # distinct vertices on one side never share a block
    for side, count in (("X", G.x_count), ("Y", G.y_count)):
        for u in range(count):
            for v in range(u + 1, count):
                for i in range(G.sigma):
                    for j in range(G.sigma):
                        assert A[R.index(side, u, i)][R.index(side, v, j)] == 0


def test_augmented_values_at_degree_15():
    G = ProjectionGame(1, 1, 3, ((0, 0),) * 15, ((0, 1, 2),) * 15)
    R = reduce_game(G, augmented=True)
    A = R.gram.rows
    assert A[R.index("X", 0, 0)][R.index("Y", 0, 1)] == Fraction(15, 32)
    assert A[R.index("X", 0, 0)][R.index("X", 0, 1)] == Fraction(15, 32)
    G1 = ProjectionGame(1, 1, 2, ((0, 0),), ((0, 1),))
    R1 = reduce_game(G1, augmented=True)
    assert R1.gram.rows[R1.index("X", 0, 0)][R1.index("Y", 0, 1)] == Fraction(1, 4)


def test_augmented_dimension_grows_by_n():
    G = toy_special_game(0)
    plain, aug = reduce_game(G), reduce_game(G, augmented=True)
    fam_dim = lambda R: 2 ** (R.m + 1)
    assert plain.vectors.dim == G.edge_count * fam_dim(plain)
    assert aug.vectors.dim == G.edge_count * fam_dim(aug) + aug.N


def test_non_regular_rejected():
    with pytest.raises(ValueError):
        reduce_game(ProjectionGame(1, 2, 1, ((0, 0), (0, 1)), ((0,), (0,))))


@pytest.mark.parametrize("augmented", [False, True])
@given(params=game_params())
def test_completeness_witness(params, augmented):
    G, L, R = reduced(params, augmented)
    S = orthonormal_witness(G, L, R)
    assert len(S) == R.K
    assert volume_squared(R.vectors, S) == 1
    for a in S:
        for b in S:
            assert R.gram.rows[a][b] == (1 if a == b else 0)
    assert rep_counts(R, S) == (0, 0, G.x_count, G.y_count)


def test_witness_rejects_unsatisfying_labeling():
    G = ProjectionGame(1, 1, 2, ((0, 0),), ((1, 0),))
    with pytest.raises(ValueError, match="edge 0"):
        orthonormal_witness(G, Labeling([0], [0]), reduce_game(G))


@given(params=game_params())
def test_eigenvalue_floor(params):
    _, _, R = reduced(params, True, satisfiable=False)
    assert min_eigenvalue_at_least(R.gram, Fraction(1, R.delta + 1))


def test_eigenvalue_floor_is_tight():
    G = ProjectionGame(1, 1, 2, ((0, 0),) * 15, ((0, 0),) * 15)
    R = reduce_game(G, augmented=True)
    assert min_eigenvalue_at_least(R.gram, Fraction(1, 16))
    assert not min_eigenvalue_at_least(R.gram, Fraction(1, 16) + Fraction(1, 10**6))


def test_rep_counts_examples():
    G, L = random_regular_game(0, 3, 2, 3)
    R = reduce_game(G)
    assert rep_counts(R, [R.index("X", 0, 0), R.index("X", 0, 1), R.index("Y", 1, 0)]) == (1, 0, 1, 1)
    assert rep_counts(R, []) == (0, 0, 0, 0)


@pytest.mark.parametrize("augmented", [False, True])
@given(params=game_params(), data=st.data())
def test_rep_volume_bounds(params, augmented, data):
    G, L, R = reduced(params, augmented, satisfiable=False)
    S = tuple(sorted(data.draw(st.sets(st.integers(0, R.N - 1), max_size=R.N))))
    SX, _ = split_sides(R, S)
    rep = rep_counts(R, S).rep_x
    vol = volume_squared(R.vectors, SX)
    assert vol <= same_vertex_distance_sq_bound(R.delta, augmented) ** rep
    if not augmented:
        assert vol <= rep_volume_bound_sq(rep, False)
    assert volume_squared(R.vectors, S) <= 1


def test_augmented_constant_needs_large_degree():
    # the 3.01/4 constant is first reached at degree 199
    assert same_vertex_distance_sq_bound(199, True) <= Fraction(301, 400)
    assert same_vertex_distance_sq_bound(198, True) > Fraction(301, 400)
    assert same_vertex_distance_sq_bound(15**3, True) < Fraction(301, 400)


@given(params=game_params(), data=st.data(), c=st.sampled_from([Fraction(1, 100), Fraction(1, 10), Fraction(1, 4)]))
def test_repetitions_forced_by_large_volume(params, data, c):
    _, _, R = reduced(params, False, satisfiable=False)
    S = tuple(sorted(data.draw(st.sets(st.integers(0, R.N - 1), min_size=1, max_size=R.N))))
    k = len(S)
    if volume_squared(R.vectors, S) >= Fraction(1, 2) ** math.ceil(2 * c * k) and 2 * c * k == math.ceil(2 * c * k):
        assert rep_counts(R, S).rep_x < 5 * c * k
    vol = volume_squared(R.vectors, S)
    if vol > 0:
        rep = rep_counts(R, S).rep_x
        assert rep <= math.log(vol) / math.log(0.75) + 1e-9


def test_unsatisfied_incident_count():
    G = ProjectionGame(1, 1, 2, ((0, 0),), ((1, 0),))
    assert unsatisfied_incident_count(G, Labeling([0], [0]), 0, [0]) == 1
    assert unsatisfied_incident_count(G, Labeling([0], [1]), 0, [0]) == 0


@given(params=game_params(), data=st.data())
def test_unsatisfied_counts_add_up(params, data):
    seed, k, delta, sigma = params
    G, _ = random_regular_game(seed, k, delta, sigma, satisfiable=False)
    L = Labeling(data.draw(st.lists(st.integers(0, sigma - 1), min_size=k, max_size=k)),
                 data.draw(st.lists(st.integers(0, sigma - 1), min_size=k, max_size=k)))
    ys = data.draw(st.sets(st.integers(0, k - 1)))
    total = sum(unsatisfied_incident_count(G, L, x, ys) for x in range(k))
    assert total == sum(1 for e in unsatisfied_edges(G, L) if G.edges[e][1] in ys)


def test_soundness_labeling_takes_first_label():
    G, _ = random_regular_game(1, 2, 1, 3)
    R = reduce_game(G)
    L = soundness_labeling(R, sorted([R.index("X", 1, 2), R.index("X", 1, 1), R.index("Y", 0, 2)]))
    assert L.x_labels == (0, 1) and L.y_labels == (2, 0)


def test_scale_vector_set():
    V = VectorSet.from_rows([[1, 2], [0, 3]])
    assert scale_vector_set(V, 1) == V
    assert volume_squared(scale_vector_set(V, c_sq=2), [0]) == 2 * norm_sq(V[0])
    with pytest.raises(ValueError):
        scale_vector_set(V, 0)
    with pytest.raises(ValueError):
        scale_vector_set(V, 1, c_sq=1)
    G, L = random_regular_game(3, 2, 2, 2)
    R = reduce_game(G, augmented=True)
    W = scale_vector_set(R.vectors, c_sq=R.delta + 1)
    assert volume_squared(W, orthonormal_witness(G, L, R)) == (R.delta + 1) ** R.K


def test_inner_products_via_vectors():
    G, _ = random_regular_game(4, 2, 2, 2)
    R = reduce_game(G)
    s = R.vectors.scale_sq
    assert inner(R.vectors[0], R.vectors[0]) * s == 1


def test_hardness_constants():
    H = HardnessConstants()
    assert H.ell == 2 * 10**12
    checks = H.checks()
    assert all(checks.values()), checks
