"""Rips complexes, boundary matrices, cycle filling, chain maps."""

import random

import pytest

import coarsetop.gf2 as gf2
from coarsetop.errors import ComplexTooLargeError, NotACycleError, NotASubcomplexError
from coarsetop.groups import FreeAbelian, build_ball
from coarsetop.metric import FiniteMetricSpace
from coarsetop.rips import build_rips, fill_cycle, inclusion_chain_map, induced_chain_map

from oracles import brute_force_simplices


def triangle_space():
    table = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
    return FiniteMetricSpace.from_table(table)


def test_three_point_triangle():
    X = triangle_space()
    K = build_rips(X, X.full_mask(), 1, 2)
    assert [K.n_simplices(k) for k in range(3)] == [3, 3, 1]


def test_line_path_graph():
    X = FiniteMetricSpace.line(0, 4)
    K = build_rips(X, X.full_mask(), 1, 1)
    assert K.n_simplices(0) == 5
    assert K.n_simplices(1) == 4


def test_no_l1_triangles_at_scale_1(z2_ball_10):
    K = build_rips(z2_ball_10.space, z2_ball_10.space.full_mask(), 1, 2)
    assert K.n_simplices(2) == 0


def test_simplices_match_brute_force(z2_ball_10):
    X = z2_ball_10.space
    sub = X.mask_where(lambda p: abs(p[0]) <= 2 and abs(p[1]) <= 2)
    K = build_rips(X, sub, 2, 2)
    oracle = brute_force_simplices(sub.sorted_ids(), X.dist, 2, 2)
    for k in range(3):
        assert K.simplices[k] == sorted(oracle[k])


def test_boundary_squares_to_zero(z2_ball_10, f2_ball_6):
    for space, r, m in ((z2_ball_10.space, 2, 3), (f2_ball_6.space, 2, 2)):
        K = build_rips(space, space.full_mask(), r, m)
        for k in range(2, m + 1):
            assert K.boundary(k - 1).matmul(K.boundary(k)).is_zero()
        # augmentation: eps boundary_1 = 0
        assert K.boundary(0).matmul(K.boundary(1)).is_zero()


def test_complex_too_large():
    ball = build_ball(FreeAbelian(2), 8)
    with pytest.raises(ComplexTooLargeError):
        build_rips(ball.space, ball.space.full_mask(), 2, 2, max_simplices=100)


def test_fill_cycle_unit_square(z2_ball_10):
    X = z2_ball_10.space
    ball = z2_ball_10
    ids = [ball.index[p] for p in [(0, 0), (1, 0), (1, 1), (0, 1)]]
    K1 = build_rips(X, X.full_mask(), 1, 2)
    square = K1.chain_from_simplices(
        1, [(ids[0], ids[1]), (ids[1], ids[2]), (ids[2], ids[3]), (ids[0], ids[3])]
    )
    assert fill_cycle(K1, 1, square) is None  # no 2-simplices at scale 1
    K2 = build_rips(X, X.full_mask(), 2, 2)
    square2 = K2.chain_from_simplices(
        1, [(ids[0], ids[1]), (ids[1], ids[2]), (ids[2], ids[3]), (ids[0], ids[3])]
    )
    w = fill_cycle(K2, 2 - 1, square2)
    assert w is not None
    assert K2.boundary_of_chain(2, w) == square2


def test_fill_cycle_soundness_random_boundaries(f2_ball_6):
    X = f2_ball_6.space
    K = build_rips(X, X.full_mask(), 2, 2)
    rng = random.Random(17)
    for _ in range(10):
        sigma = 0
        for _ in range(4):
            sigma ^= 1 << rng.randrange(K.n_simplices(2))
        z = K.boundary_of_chain(2, sigma)
        w = fill_cycle(K, 1, z)
        assert w is not None
        assert K.boundary_of_chain(2, w) == z


def test_fill_zero_cycle_path(z_ball_12):
    X = z_ball_12.space
    K = build_rips(X, X.full_mask(), 1, 1)
    a, b = z_ball_12.index[(-4,)], z_ball_12.index[(7,)]
    z = K.chain_from_simplices(0, [(a,), (b,)])
    w = fill_cycle(K, 0, z)
    assert w is not None and K.boundary_of_chain(1, w) == z
    # odd augmentation rejected
    with pytest.raises(NotACycleError):
        fill_cycle(K, 0, 1 << 0)


def test_fill_monotone_in_locality_and_scale(z2_ball_10):
    # fillable at (r, locality) stays fillable at larger scale and larger
    # locality, re-solved from scratch
    X = z2_ball_10.space
    ball = z2_ball_10
    ids = [ball.index[p] for p in [(0, 0), (1, 0), (1, 1), (0, 1)]]
    edges = [(ids[0], ids[1]), (ids[1], ids[2]), (ids[2], ids[3]), (ids[0], ids[3])]
    center = ids[0]
    K2 = build_rips(X, X.full_mask(), 2, 2)
    sq2 = K2.chain_from_simplices(1, edges)
    small = fill_cycle(K2, 1, sq2, locality=(center, 2))
    large = fill_cycle(K2, 1, sq2, locality=(center, 5))
    assert small is not None and large is not None
    assert K2.boundary_of_chain(2, small) == sq2
    K3 = build_rips(X, X.full_mask(), 3, 2)
    sq3 = K3.chain_from_simplices(1, edges)
    again = fill_cycle(K3, 1, sq3, locality=(center, 2))
    assert again is not None and K3.boundary_of_chain(2, again) == sq3


def test_inclusion_chain_map_identity(z2_ball_10):
    X = z2_ball_10.space
    K = build_rips(X, X.full_mask(), 1, 1)
    cm = inclusion_chain_map(K, K)
    cm.validate()
    for k in range(2):
        assert cm.mats[k] == gf2.GF2Matrix.identity(K.n_simplices(k))


def test_inclusion_scale_and_window(z2_ball_10):
    X = z2_ball_10.space
    inner_mask = X.mask_where(lambda p: abs(p[0]) + abs(p[1]) <= 4)
    K = build_rips(X, inner_mask, 1, 1)
    L = build_rips(X, X.full_mask(), 2, 1)
    cm = inclusion_chain_map(K, L)
    cm.validate()
    # injective on simplices
    cols = cm.mats[1].columns
    assert len(set(cols)) == len(cols)
    with pytest.raises(NotASubcomplexError):
        inclusion_chain_map(L, K)


def test_induced_chain_map_identity_is_inclusion(z2_ball_10):
    X = z2_ball_10.space
    K = build_rips(X, X.full_mask(), 1, 1)
    cm = induced_chain_map({v: v for v in range(X.n)}, K, X, [1, 1])
    cm.validate()
    assert cm.displacement == [0, 0]


def test_induced_chain_map_doubling(z_ball_12):
    zline = build_ball(FreeAbelian(1), 5)
    big = z_ball_12
    K = build_rips(zline.space, zline.space.full_mask(), 1, 1)
    f = {i: big.index[(2 * g[0],)] for i, g in enumerate(zline.elements)}
    cm = induced_chain_map(f, K, big.space, [1, 1])
    cm.validate()
    assert cm.achieved_displacement(1) <= 2
    # every edge maps to the 2-step path between the doubled endpoints
    for j, (u, v) in enumerate(K.simplices[1]):
        img = cm.mats[1].columns[j]
        assert gf2.popcount(img) == 2


def test_axis_inclusion_induced_map(z2_ball_10):
    X = z2_ball_10.space
    axis_pts = [i for i, g in enumerate(z2_ball_10.elements) if g[1] == 0]
    zline = build_ball(FreeAbelian(1), 10)
    K = build_rips(zline.space, zline.space.full_mask(), 1, 1)
    f = {i: z2_ball_10.index[(g[0], 0)] for i, g in enumerate(zline.elements)}
    cm = induced_chain_map(f, K, X, [1, 1])
    cm.validate()
    assert cm.displacement == [0, 0]


from hypothesis import given, settings
from hypothesis import strategies as st


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(5, 10), st.integers(1, 3))
def test_boundary_squared_zero_random_graphs(seed, n, r):
    rng = random.Random(seed)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.5]
    edges += [(i, i + 1) for i in range(n - 1)]
    X = FiniteMetricSpace.from_graph(n, edges)
    K = build_rips(X, X.full_mask(), r, 3)
    for k in range(1, 4):
        if K.n_simplices(k):
            assert K.boundary(k - 1).matmul(K.boundary(k)).is_zero()


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_fill_soundness_random_graphs(seed):
    rng = random.Random(seed)
    n = 9
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.45]
    edges += [(i, i + 1) for i in range(n - 1)]
    X = FiniteMetricSpace.from_graph(n, edges)
    K = build_rips(X, X.full_mask(), 2, 2)
    if not K.n_simplices(2):
        return
    sigma = 1 << rng.randrange(K.n_simplices(2))
    z = K.boundary_of_chain(2, sigma)
    w = fill_cycle(K, 1, z)
    assert w is not None
    assert K.boundary_of_chain(2, w) == z


def test_induced_map_schedule_exhausted(z_ball_12):
    # doubling into the even sublattice only: boundary images are two points
    # at distance 2 with no connecting chain at scale 1 anywhere
    from coarsetop.errors import ScheduleExhaustedError
    from coarsetop.groups import build_ball

    zline = build_ball(FreeAbelian(1), 4)
    big = z_ball_12
    K = build_rips(zline.space, zline.space.full_mask(), 1, 1)
    evens = big.space.mask_where(lambda g: g[0] % 2 == 0)
    f = {i: big.index[(2 * g[0],)] for i, g in enumerate(zline.elements)}
    with pytest.raises(ScheduleExhaustedError):
        induced_chain_map(f, K, big.space, [1, 1], target_mask=evens)


def test_export_simplices(z_ball_12):
    X = z_ball_12.space
    K = build_rips(X, X.mask([0, 1, 2]), 1, 1)
    text = K.export_simplices()
    lines = text.strip().split("\n")
    assert len(lines) == K.n_simplices(0) + K.n_simplices(1)
    for line in lines:
        vals = [int(x) for x in line.split()]
        assert vals == sorted(vals)
