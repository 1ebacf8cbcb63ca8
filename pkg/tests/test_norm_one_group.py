import numpy as np
import pytest
from hypothesis import given, strategies as st

from forge import division_algebra as da
from forge import norm_one_group as ng


def test_enumeration_matches_brute_force(ctx521):
    # every digit pattern filtered through the reduced norm
    Q = ng.GroupQuotient(ctx521, 2, 4)
    brute = {Q.key(g) for g in ng.brute_force_quotient(ctx521, 2, 4)}
    built = {Q.key(g) for g in Q.enumerate(np.random.default_rng(0))}
    assert brute == built
    assert len(built) == Q.order_from_layers(np.random.default_rng(1)) == 5**3


def test_layer_dimensions(ctx521, ctx531):
    for ctx in (ctx521, ctx531):
        Q = ng.GroupQuotient(ctx, 1, 5)
        gens = Q.layer_generators(np.random.default_rng(0))
        for k, g in gens.items():
            assert len(g) == Q.layer_dim(k)
            assert len(g) == (ctx.dw - ctx.f0 if k % ctx.d == 0 else ctx.dw)


@given(st.integers(0, 2**32 - 1))
def test_group_axioms(seed):
    ctx = da.make_context(5, 2, e=1, f0=1, K=3)
    Q = ng.GroupQuotient(ctx, 1, 4)
    rng = np.random.default_rng(seed)
    g, h, k = Q.random(rng), Q.random(rng), Q.random(rng)
    assert Q.is_member(g)
    assert Q.equal(Q.mul(Q.mul(g, h), k), Q.mul(g, Q.mul(h, k)))
    assert Q.equal(Q.mul(g, Q.inv(g)), Q.identity())
    assert Q.is_member(Q.mul(g, h))


def test_norm_correct_gives_norm_one(ctx531, rng):
    Q = ng.GroupQuotient(ctx531, 1, 5)
    for _ in range(5):
        x = da.add(ctx531, ctx531.one(), da.sample_ideal(ctx531, 1, rng))
        assert Q.is_member(Q.norm_correct(x))


def test_commutator_levels(ctx521, rng):
    Q = ng.GroupQuotient(ctx521, 1, 6)
    for i, j in ((1, 2), (2, 3), (1, 1)):
        g, h = Q.random_in_layer(rng, i), Q.random_in_layer(rng, j)
        assert Q.level(Q.comm(g, h)) >= i + j


@pytest.mark.parametrize("d,i,j,want", [(2, 1, 2, "full"), (2, 1, 1, "sl"), (2, 2, 2, "zero"),
                                         (3, 1, 2, "sl"), (3, 3, 3, "zero"), (3, 1, 1, "full"),
                                         (4, 2, 2, "other")])
def test_predicted_class(d, i, j, want):
    assert ng.predicted_commutator_class(d, i, j) == want


def test_commutator_span_small(ctx531, rng):
    for i, j in ((1, 1), (1, 2), (2, 3)):
        r = ng.commutator_span_check(ctx531, i, j, rng, samples=30)
        assert r["group"] == r["formula"] == r["predicted"]


def test_p_power_break(ctx521, rng):
    for i in (1, 2, 3):
        Q = ng.GroupQuotient(ctx521, 1, i + ctx521.de + 1)
        g = Q.random_in_layer(rng, i)
        assert ng.p_power_break_check(ctx521, i, g, Q)
    with pytest.raises(ValueError):
        ng.p_power_break_check(ctx521, 2, ctx521.one())


def test_delta(ctx521, rng):
    ctx = ctx521
    dl = ng.delta_generator(ctx)
    R = ctx.ring
    n = ng.delta_order(ctx)
    assert np.array_equal(R.pow(dl, n), R.one())
    for r in (2, 3):
        if n % r == 0:
            assert not np.array_equal(R.pow(dl, n // r), R.one())
    assert np.array_equal(da.reduced_norm(ctx, ctx.from_ring(dl)), ctx.one())
    Q = ng.GroupQuotient(ctx, 1, 5)
    g, h = Q.random(rng), Q.random(rng)
    assert Q.equal(Q.delta_conjugate(Q.mul(g, h)), Q.mul(Q.delta_conjugate(g), Q.delta_conjugate(h)))
    assert Q.level(Q.delta_conjugate(g)) == Q.level(g)


def test_exp_log_series_inverse(ctx521, rng):
    for _ in range(5):
        u = ng.sample_trace_zero(ctx521, 2, rng)
        g = ng.exp_series(ctx521, da.reduce_mod(ctx521, u, 6), 6)
        back = ng.log_series(ctx521, g, 6)
        assert np.array_equal(da.reduce_mod(ctx521, back, 6), da.reduce_mod(ctx521, u, 6))


def test_precision_window(ctx521):
    with pytest.raises(ng.PrecisionError):
        ng.GroupQuotient(ctx521, 1, ctx521.window + 1)
