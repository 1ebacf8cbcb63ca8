import numpy as np
import pytest

from forge import correspondence as co
from forge import division_algebra as da
from forge import extensions as ex
from forge import modlinalg as ml
from forge.cohomology import GroupH2, GroupTable, LieRingExt
from forge.lie_congruence import LieQuotient
from forge.norm_one_group import PrecisionError


@pytest.fixture(scope="module")
def ppc():
    ctx = da.make_context(5, 2, e=1, f0=1, K=3)
    return LieQuotient(ctx, ctx.de + 1, 3 * ctx.de + 1).lie_ring


def test_lazard_pair_round_trips(ctx521, rng):
    pair = co.LazardPair(ctx521, 2, 6)
    L, Q = pair.lie, pair.group
    for _ in range(20):
        u, v = L.random(rng), L.random(rng)
        assert np.array_equal(pair.log(pair.exp(u)), L.lie_ring.reduce(u))
        g = Q.random(rng, 2)
        assert Q.equal(pair.exp(pair.log(g)), g)
        assert Q.equal(pair.exp(pair.phi(u, v)), Q.mul(pair.exp(u), pair.exp(v)))


def test_lazard_window(ctx521):
    with pytest.raises(PrecisionError):
        co.LazardPair(ctx521, 1, 6)
    with pytest.raises(PrecisionError):
        co.LazardPair(ctx521, 3, 9)


def test_lazard_root(ctx521, rng):
    pair = co.LazardPair(ctx521, 2, 6)
    Q = pair.group
    g = Q.pow(Q.random(rng, 2), 5)
    assert Q.equal(Q.pow(pair.root(g), 5), g)


def test_exp_ppc_group_and_log_inverse(ppc, rng):
    G = co.exp_ppc(ppc)
    R = co.log_ppc(G)
    for _ in range(30):
        x, y, z = ppc.random(rng), ppc.random(rng), ppc.random(rng)
        assert G.equal(G.mul(x, G.mul(y, z)), G.mul(G.mul(x, y), z))
        assert G.equal(G.mul(x, G.inv(x)), G.identity())
        assert G.equal(R.add(x, y), ppc.add(x, y))
        assert G.equal(R.bracket(x, y), ppc.bracket(x, y))
        assert G.equal(G.pow(x, 3), G.mul(x, G.mul(x, x)))


def test_exp_ppc_policy_independent(ppc, rng):
    lo = co.exp_ppc(ppc)
    hi = co.exp_ppc(ppc, policy="high")
    ra = co.exp_ppc(ppc, policy="random", rng=np.random.default_rng(1))
    for _ in range(10):
        x, y = ppc.random(rng), ppc.random(rng)
        assert lo.equal(lo.mul(x, y), hi.mul(x, y))
        assert lo.equal(lo.mul(x, y), ra.mul(x, y))


def test_log_tail_factors_trivial(ppc, rng):
    R = co.log_ppc(co.exp_ppc(ppc))
    x, y = ppc.random(rng), ppc.random(rng)
    for _, _, g in R.tail_factors(x, y, R.degree + 3):
        assert R.G.equal(g, R.G.identity())


def test_exp_ppc_rejects(ctx521):
    with pytest.raises(co.CorrespondenceError, match="powerful"):
        co.exp_ppc(LieQuotient(ctx521, 1, 4).lie_ring)
    ctx3 = da.make_context(3, 2, e=1, f0=1, K=3)
    with pytest.raises(co.CorrespondenceError):
        co.exp_ppc(LieQuotient(ctx3, 2, 4).lie_ring)


def test_p_divide(ppc, rng):
    for policy in ("low", "high", "random"):
        v = ppc.scale(5, ppc.random(rng))
        x = co.p_divide(ppc, v, policy, rng)
        assert np.array_equal(ppc.scale(5, x), ppc.reduce(v))
    bad = ppc.reduce(np.ones(ppc.rank, dtype=np.int64))
    with pytest.raises(co.CorrespondenceError):
        co.p_divide(ppc, bad)


def test_lazard_group_and_inverse(ctx521, rng):
    # g_1/g_3 has class 2 < 5
    L = LieQuotient(ctx521, 1, 3).lie_ring
    G = co.LazardGroup(L)
    R = co.log_lazard(G)
    for _ in range(10):
        x, y, z = L.random(rng), L.random(rng), L.random(rng)
        assert G.equal(G.mul(x, G.mul(y, z)), G.mul(G.mul(x, y), z))
        assert G.equal(R.add(x, y), L.add(x, y))
        assert G.equal(R.bracket(x, y), L.bracket(x, y))


def test_inversion_table_disk_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("FORGE_CACHE_DIR", str(tmp_path))
    co.inversion_tables.cache_clear()
    t1 = co.inversion_tables(4, 11, 4)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    co.inversion_tables.cache_clear()
    t2 = co.inversion_tables(4, 11, 4)
    assert t1.to_json() == t2.to_json()
    co.inversion_tables.cache_clear()


def test_degree_bounds():
    assert co.ppc_degree_bound(5, 1) >= 2
    assert co.log_degree_bound(5, 3) <= co.loose_degree_bound(5, 3)


def test_transport_small_quotient():
    # both directions of the extension transport on G_2/G_4 (order 125)
    ctx = da.make_context(5, 2, e=1, f0=1, K=4)
    pair = co.LazardPair(ctx, 2, 4)
    Q = pair.group
    T = GroupTable.from_group(Q, Q.enumerate(np.random.default_rng(0)), 5)
    H = GroupH2(T, 1)
    gr = H.h2(with_reps=True)
    L = LieRingExt(pair.lie.lie_ring, 1)
    lr = L.h2(with_reps=True)
    assert sorted(gr.invariants) == sorted(lr.invariants)
    QG = co.QuotientGroup(pair)
    fwd = []
    for F in gr.representatives:
        Z = ex.TableCocycle(T, H.full_table(F), 1, Q.key)
        v = L.vector(co.ext_transport(ex.ExtGroup(QG, Z, 1), pair))
        assert L.is_cocycle(v)
        fwd.append(v)
    assert sorted(ml.quotient_invariants(np.stack(fwd, 1), lr.B, 5, 1)) == sorted(lr.invariants)
    with pytest.raises(ValueError):
        co.ext_transport((np.zeros(1), np.zeros((1, 1))), pair)
