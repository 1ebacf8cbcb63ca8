import numpy as np
import pytest
from hypothesis import given, strategies as st

from forge import division_algebra as da


def _elem(ctx, rng, level=0):
    return da.sample_ideal(ctx, level, rng)


def test_pi_relation(ctx521, ctx524):
    for ctx in (ctx521, ctx524):
        lhs = ctx.pi_power(ctx.de)
        rhs = ctx.zero()
        for k in range(ctx.e):
            rhs = da.add(ctx, rhs, da.smul(ctx, ctx.p, da.mul(ctx, ctx.from_ring(ctx.c(k)), ctx.pi_power(ctx.d * k))))
        assert np.array_equal(lhs, rhs)


def test_pi_twists_by_sigma(ctx521, rng):
    ctx = ctx521
    for _ in range(5):
        w = ctx.ring.random(rng)
        lhs = da.mul(ctx, ctx.pi_power(1), ctx.from_ring(w))
        rhs = da.mul(ctx, ctx.from_ring(ctx.sigma(w)), ctx.pi_power(1))
        assert np.array_equal(lhs, rhs)


@given(st.integers(0, 2**32 - 1))
def test_associativity(seed):
    ctx = da.make_context(5, 2, e=1, f0=1, K=3)
    rng = np.random.default_rng(seed)
    x, y, z = (_elem(ctx, rng) for _ in range(3))
    assert np.array_equal(da.mul(ctx, da.mul(ctx, x, y), z), da.mul(ctx, x, da.mul(ctx, y, z)))


@given(st.integers(0, 2**32 - 1))
def test_reduced_norm_multiplicative(seed):
    ctx = da.make_context(5, 3, e=1, f0=1, K=3)
    rng = np.random.default_rng(seed)
    x, y = _elem(ctx, rng), _elem(ctx, rng)
    lhs = da.reduced_norm(ctx, da.mul(ctx, x, y))
    rhs = da.mul(ctx, da.reduced_norm(ctx, x), da.reduced_norm(ctx, y))
    assert np.array_equal(lhs, rhs)
    assert da.is_in_center_part(ctx, lhs)


def test_reduced_norm_closed_forms(ctx521, rng):
    ctx = ctx521
    R = ctx.ring
    w = R.random(rng)
    # Nrd(w) = N_{W/F}(w) = w sigma(w)
    assert np.array_equal(da.reduced_norm(ctx, ctx.from_ring(w)), ctx.from_ring(R.mul(w, ctx.sigma(w))))
    # pi^2 = p c_0, so Nrd(pi) = -p c_0
    assert np.array_equal(da.reduced_norm(ctx, ctx.pi_power(1)), da.smul(ctx, -ctx.p, ctx.from_ring(ctx.c(0))))


def test_inverse_and_valuation(ctx531, rng):
    ctx = ctx531
    for _ in range(10):
        x = da.add(ctx, ctx.one(), _elem(ctx, rng, 1))
        assert np.array_equal(da.mul(ctx, x, da.inverse(ctx, x)), ctx.one())
        y = da.mul(ctx, x, ctx.pi_power(4))
        assert da.valuation(ctx, y) == 4
    with pytest.raises(ZeroDivisionError):
        da.inverse(ctx, ctx.pi_power(1))


def test_reduce_mod_and_digit(ctx521, rng):
    ctx = ctx521
    x = _elem(ctx, rng)
    r = da.reduce_mod(ctx, x, 3)
    assert da.in_ideal(ctx, da.sub(ctx, x, r), 3)
    y = da.add(ctx, ctx.one(), da.mul(ctx, ctx.from_ring(ctx.ring.elem([2, 1])), ctx.pi_power(3)))
    assert list(da.digit(ctx, da.sub(ctx, y, ctx.one()), 3) % 5) == [2, 1]


def test_config_errors():
    with pytest.raises(da.ConfigError, match="c_0"):
        da.make_context(5, 2, e=1, K=3, eisenstein=[0])
    with pytest.raises(da.ConfigError):
        da.make_context(5, 2, e=2, K=3, eisenstein="cyclotomic")
    with pytest.raises(da.ConfigError):
        da.make_context(5, 1, e=1, K=3)


def test_context_json_round_trip(ctx524, rng):
    ctx2 = da.context_from_json(ctx524.to_json())
    x, y = _elem(ctx524, rng), _elem(ctx524, rng)
    assert np.array_equal(da.mul(ctx2, x, y), da.mul(ctx524, x, y))
    assert ctx2.w == 0 and ctx2.de == 8


def test_reduced_trace_of_commutator_vanishes(ctx521, rng):
    ctx = ctx521
    x, y = _elem(ctx, rng), _elem(ctx, rng)
    assert not da.reduced_trace(ctx, da.commutator(ctx, x, y)).any()
