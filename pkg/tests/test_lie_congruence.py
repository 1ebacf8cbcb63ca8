import numpy as np
import pytest
from hypothesis import given, strategies as st

from forge import division_algebra as da
from forge.lie_congruence import FiniteLieRing, LieQuotient, lie_order
from forge.norm_one_group import GroupQuotient, delta_generator


@pytest.fixture(scope="module")
def L15():
    ctx = da.make_context(5, 2, e=1, f0=1, K=4)
    return LieQuotient(ctx, 1, 5)


def test_jacobi_and_antisymmetry(L15, ctx531, ctx524):
    assert L15.lie_ring.check_jacobi()
    assert LieQuotient(ctx531, 2, 6).lie_ring.check_jacobi()
    assert LieQuotient(ctx524, 9, 17).lie_ring.check_jacobi()


@given(st.integers(0, 2**32 - 1))
def test_bracket_is_algebra_commutator(seed):
    # oracle: xy - yx computed in O_D and read back
    ctx = da.make_context(5, 2, e=1, f0=1, K=4)
    L = LieQuotient(ctx, 1, 5)
    rng = np.random.default_rng(seed)
    u, v = L.random(rng), L.random(rng)
    x, y = L.to_algebra(u), L.to_algebra(v)
    assert np.array_equal(L.from_algebra(da.commutator(ctx, x, y)), L.bracket(u, v))


def test_algebra_round_trip_ramified(ctx524, rng):
    L = LieQuotient(ctx524, 9, 25)
    for _ in range(10):
        u = L.random(rng)
        assert np.array_equal(L.from_algebra(L.to_algebra(u)), L.lie_ring.reduce(u))


@pytest.mark.parametrize("n,m", [(1, 4), (2, 5), (3, 6)])
def test_lie_and_group_orders_agree(ctx521, n, m):
    Q = GroupQuotient(ctx521, n, m)
    assert lie_order(ctx521, n, m) == Q.order_from_layers(np.random.default_rng(0))


def test_powerful_p_central():
    ctx = da.make_context(5, 2, e=1, f0=1, K=3)
    L = LieQuotient(ctx, ctx.de + 1, 3 * ctx.de + 1).lie_ring
    assert L.is_powerful() and L.is_p_central()
    assert L.order == 5**6
    assert not LieQuotient(ctx, 1, 4).lie_ring.is_powerful()


def test_lower_central_series_terminates(L15):
    s = L15.lie_ring.lower_central_series()
    assert s[-1] == []
    assert L15.lie_ring.nilpotency_class() >= 1


def test_delta_action_matches_conjugation(L15, rng):
    ctx = L15.ctx
    dl = delta_generator(ctx)
    A = L15.delta_action_matrix(dl)
    D = ctx.from_ring(dl)
    Di = da.inverse(ctx, D)
    for _ in range(5):
        u = L15.random(rng)
        y = da.mul(ctx, da.mul(ctx, Di, L15.to_algebra(u)), D)
        assert np.array_equal(L15.apply_matrix(A, u), L15.from_algebra(y))


def test_delta_action_is_lie_automorphism(L15, rng):
    A = L15.delta_action_matrix(delta_generator(L15.ctx))
    u, v = L15.random(rng), L15.random(rng)
    lhs = L15.apply_matrix(A, L15.bracket(u, v))
    rhs = L15.bracket(L15.apply_matrix(A, u), L15.apply_matrix(A, v))
    assert np.array_equal(lhs, rhs)


def test_inclusion(ctx521, rng):
    big = LieQuotient(ctx521, 1, 5)
    sub = LieQuotient(ctx521, 3, 5)
    M = big.inclusion_from(sub)
    u = sub.random(rng)
    img = big.apply_matrix(M, u)
    assert np.array_equal(big.from_algebra(sub.to_algebra(u)), img)


def test_precision_guard(ctx521):
    with pytest.raises(ValueError):
        LieQuotient(ctx521, 1, 40)


def test_finite_lie_ring_abelian():
    h = FiniteLieRing(5, [1, 2], np.zeros((2, 2, 2), dtype=np.int64))
    assert h.is_abelian() and h.order == 125
    assert len(list(h.elements())) == 125
