import itertools

import numpy as np
import pytest

from forge import division_algebra as da
from forge import extensions as ex
from forge.cohomology import GroupH2, GroupTable, check_group_cocycle
from forge.norm_one_group import GroupQuotient


@pytest.fixture(scope="module")
def ctx():
    return da.make_context(5, 2, e=1, f0=1, K=4)


@pytest.fixture(scope="module")
def q3(ctx):
    Q3, T3 = ex.quotient_table(ctx, 3)
    H = GroupH2(T3, 1)
    return Q3, T3, H, H.h2(with_reps=True)


class _Zero:
    p, s = 5, 1

    def __call__(self, q1, q2):
        return 0


def _sub_table(T, idx):
    idx = [0] + [i for i in idx if i != 0]
    pos = {g: k for k, g in enumerate(idx)}
    M = [[pos[T.mul(a, b)] for b in idx] for a in idx]
    return GroupTable(idx, M, GroupTable._greedy_gens(np.array(M)), T.p)


def test_reps_are_cocycles_and_ext_is_group(q3, rng):
    Q3, T3, H, res = q3
    assert res.invariants
    for F in res.representatives:
        f = H.full_table(F)
        assert check_group_cocycle(T3, f, 5)
        E = ex.ExtGroup(Q3, ex.TableCocycle(T3, f, 1, Q3.key), 1)
        for _ in range(10):
            x, y, z = ((Q3.random(rng), int(rng.integers(5))) for _ in range(3))
            assert E.equal(E.mul(E.mul(x, y), z), E.mul(x, E.mul(y, z)))
            assert E.equal(E.mul(x, E.inv(x)), E.identity())


def test_split_extension_has_no_breaks(ctx):
    Q = GroupQuotient(ctx, 1, 5)
    lg = Q.layer_generators(np.random.default_rng(0))
    E = ex.ExtGroup(Q, _Zero(), 1)
    chain, rep = ex.break_report(E, lg)
    assert rep["breaks"] == [] and rep["infdep"] == 1 and rep["comdep"] == 1
    assert rep["image_ok"]
    assert all(v == 1 for v in chain.fiber_valuations()[1:])


def test_baer_sum_group_is_cohomologous(q3, rng):
    Q3, T3, H, res = q3
    f1 = H.full_table(res.representatives[0])
    f2 = H.full_table(res.representatives[-1])
    e1 = ex.ExtGroup(Q3, ex.TableCocycle(T3, f1, 1, Q3.key), 1)
    e2 = ex.ExtGroup(Q3, ex.TableCocycle(T3, f2, 1, Q3.key), 1)
    t1 = rng.integers(0, 5, T3.size)
    t2 = rng.integers(0, 5, T3.size)
    t1[0] = t2[0] = 0
    G = ex.BaerSumGroup(e1, e2, lambda q: int(t1[T3.index[Q3.key(q)]]), lambda q: int(t2[T3.index[Q3.key(q)]]))
    g = np.array([[G.cocycle(a, b) for b in T3.elements] for a in T3.elements], dtype=np.int64)
    s = ex.baer_sum(e1, e2)
    f12 = np.array([[s.Z(a, b) for b in T3.elements] for a in T3.elements], dtype=np.int64)
    assert np.array_equal(f12, (f1 + f2) % 5)
    assert check_group_cocycle(T3, g, 5)
    assert H.is_coboundary((g - f12) % 5)
    # e + (-e) is split
    n = ex.baer_sum(e1, ex.negate(e1))
    assert all(n.Z(a, b) == 0 for a in T3.elements[:20] for b in T3.elements[:20])
    with pytest.raises(ex.ExtensionError):
        ex.baer_sum(e1, ex.ExtGroup(GroupQuotient(Q3.ctx, 1, 3), e2.Z, 1))


def test_inflation_then_restriction_is_split(ctx, q3):
    # inflate from S/G_2 to S/G_3, restrict to the kernel G_2/G_3
    Q3, T3, H, _ = q3
    Q2, T2 = ex.quotient_table(ctx, 2)
    H2 = GroupH2(T2, 1)
    proj = ex.projection_indices(T3, Q2, T2)
    kernel = [i for i in range(T3.size) if proj[i] == 0]
    K = _sub_table(T3, kernel)
    HK = GroupH2(K, 1)
    for F in H2.h2(with_reps=True).representatives:
        f = ex.inflate_table(H2.full_table(F), proj)
        assert check_group_cocycle(T3, f, 5)
        r = ex.restrict_table(f, K.elements)
        assert HK.is_coboundary(r)


def test_equivariant_classes_against_enumeration(q3):
    Q3, T3, H, res = q3
    perm = ex.conjugation_permutation(Q3, T3, Q3.delta_conjugate)
    inv, reps = ex.equivariant_classes(H, perm)
    count = 0
    for coeffs in itertools.product(range(5), repeat=len(res.representatives)):
        F = sum(c * v for c, v in zip(coeffs, res.representatives)) % 5
        count += ex.is_equivariant_table(H, H.full_table(F), perm)
    assert count == 5 ** sum(inv)
    for F in reps:
        assert ex.is_equivariant_table(H, H.full_table(F), perm)


def test_twisting_function_gives_automorphism(q3, rng):
    Q3, T3, H, res = q3
    perm = ex.conjugation_permutation(Q3, T3, Q3.delta_conjugate)
    _, eq_reps = ex.equivariant_classes(H, perm)
    tables = [H.full_table(F) for F in eq_reps]
    moved = [H.full_table(F) for F in res.representatives
             if not ex.is_equivariant_table(H, H.full_table(F), perm)]
    for f in moved[:1]:
        assert ex.twisting_function(H, f, perm) is None
    # the zero class and every equivariant class admit a twist
    tables.append(np.zeros((T3.size, T3.size), dtype=np.int64))
    for f in tables:
        t = ex.twisting_function(H, f, perm)
        assert t is not None
        # (x, a) -> (d x, a + t(x)) respects the twisted product
        for _ in range(20):
            x, y = int(rng.integers(T3.size)), int(rng.integers(T3.size))
            a, b = int(rng.integers(5)), int(rng.integers(5))
            xy, c = T3.mul(x, y), (a + b + f[x, y]) % 5
            lhs = (perm[xy], (c + t[xy]) % 5)
            rhs = (T3.mul(perm[x], perm[y]), (a + t[x] + b + t[y] + f[perm[x], perm[y]]) % 5)
            assert lhs == rhs


def test_inflation_depth_matches_linear_oracle(ctx, q3):
    Q3, T3, H, res = q3
    Q = GroupQuotient(ctx, 1, 3)
    lg = Q.layer_generators(np.random.default_rng(1))
    for F in res.representatives:
        f = H.full_table(F)
        E = ex.ExtGroup(Q, ex.TableCocycle(T3, f, 1, Q3.key), 1)
        chain = ex.lower_central_chain(E, lg)
        assert ex.inflation_depth(chain) == ex.infdep_linear(ctx, 3, f, 1)
        assert ex.depths_ok(ctx, {"comdep": ex.commutator_depth(chain), "infdep": ex.inflation_depth(chain)})


def test_pushout_is_cocycle(ctx, rng):
    Q = GroupQuotient(ctx, 1, 4)
    Z = ex.PushoutCocycle(Q, [1, 2], 1)
    for _ in range(20):
        x, y, z = Q.random(rng), Q.random(rng), Q.random(rng)
        lhs = Z(Q.mul(x, y), z) + Z(x, y)
        rhs = Z(y, z) + Z(x, Q.mul(y, z))
        assert (lhs - rhs) % 5 == 0
    E = ex.ExtGroup(Q, Z, 1)
    lg = Q.layer_generators(np.random.default_rng(0))
    _, rep = ex.break_report(E, lg)
    assert rep["infdep"] == 4 and rep["image_ok"]


def test_embed_cocycle(q3):
    Q3, T3, H, res = q3
    Z = ex.TableCocycle(T3, H.full_table(res.representatives[0]), 1, Q3.key)
    Z2 = ex.embed_cocycle(Z, 3)
    a, b = T3.elements[3], T3.elements[7]
    assert Z2(a, b) == 25 * Z(a, b) % 125
    with pytest.raises(ex.ExtensionError):
        ex.embed_cocycle(Z2, 2)


def test_predicted_breaks_and_window():
    c1 = da.make_context(5, 2, e=1, f0=1, K=3)
    c4 = da.make_context(5, 2, e=4, f0=1, K=3, eisenstein="cyclotomic")
    assert ex.predicted_breaks(c1, 30) == []
    assert ex.predicted_breaks(c4, 30) == [10, 18, 26]
    assert ex.censored_window(c4, 12) == (2, 4)
    assert ex.pattern_ok(c4, {"window": [2, 20], "breaks_in_window": [10, 18]})
    assert not ex.pattern_ok(c4, {"window": [2, 20], "breaks_in_window": [11]})


def test_depths_ok_rules(ctx):
    assert ex.depths_ok(ctx, {"comdep": 1, "infdep": 2})
    assert not ex.depths_ok(ctx, {"comdep": 1, "infdep": 3})
    # comdep = 2 > de/(p-1) + 1 forces equality
    assert not ex.depths_ok(ctx, {"comdep": 2, "infdep": 3})
    assert ex.depths_ok(ctx, {"comdep": 3, "infdep": 3})
