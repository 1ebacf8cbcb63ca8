import numpy as np
import pytest

from forge import division_algebra as da
from forge import regular_cocycles as rc
from forge.padic_arith import abs_trace


@pytest.fixture(scope="module")
def setup1():
    ctx = da.make_context(5, 2, e=1, f0=1, K=4)
    return rc.RegularSetup(ctx, 1, 1)


@pytest.fixture(scope="module")
def setup2():
    ctx = da.make_context(5, 2, e=1, f0=1, K=4)
    return rc.RegularSetup(ctx, 1, 2)


@pytest.fixture(scope="module")
def setup_ram():
    ctx = da.make_context(5, 2, e=4, f0=1, K=5, eisenstein="cyclotomic")
    return rc.RegularSetup(ctx, 1, 2)


def test_kappa_sum_periodicity(setup1, rng):
    ctx, q = setup1.ctx, 5**3
    k = ctx.ring.random(rng, 3)
    tr = setup1.Tr(k, 3)
    for i in range(0, 5):
        lhs = rc.kappa_sum(ctx, k, i + ctx.d, q)
        assert np.array_equal(lhs, (rc.kappa_sum(ctx, k, i, q) + tr) % q)
    assert np.array_equal(rc.kappa_sum(ctx, k, 1, q), k % q)


@pytest.mark.parametrize("name", ["setup1", "setup2", "setup_ram"])
def test_regular_cocycle_properties(name, request, rng):
    S = request.getfixturevalue(name)
    basis = rc.compatible_basis(S)
    for _ in range(4):
        seq = rc.random_compatible(S, rng, basis)
        assert rc.validate_compatible(seq) == (True, "compatible")
        assert rc.trace_bound_check(seq)
        C = rc.build_regular(seq)
        assert S.ce.is_cocycle(C)
        assert S.delta_invariant(C)
        back = rc.defining_sequence(S, C)
        assert all(np.array_equal(seq[n], back[n]) for n in seq.values)
        table = rc.lambda_table(S, C, [(i, j) for i in range(S.N, S.N + 4) for j in range(S.N, S.N + 4)])
        assert all(table.regular.values())
        assert rc.relations_check(table)["ok"]


def _grade_elem(S, i, rng):
    # grades divisible by d carry trace-zero coefficients
    B = S.lie.grade_basis(i)
    return sum(int(c) * b for c, b in zip(rng.integers(0, S.q, len(B)), B)) % S.ctx.q


def test_build_regular_matches_trace_formula(setup_ram, rng):
    # C(a pi^i, b pi^j) = tr(lambda_ij a sigma^i(b)) straight from the definition
    S = setup_ram
    ctx, R = S.ctx, S.ctx.ring
    seq = rc.random_compatible(S, rng)
    C = rc.build_regular(seq)
    for i in range(S.N, S.N + 5):
        for j in range(S.N, S.N + 5):
            a, b = _grade_elem(S, i, rng), _grade_elem(S, j, rng)
            want = abs_trace(R, R.mul(R.mul(seq.lam(i, j), a), ctx.sigma(b, i))) % S.q
            assert S.value(C, i, a, j, b) == want


def test_incompatible_sequence_rejected(setup_ram, rng):
    S = setup_ram
    seq = rc.random_compatible(S, rng)
    n = S.n_first + S.ctx.e + 1
    seq.values[n] = (seq.values[n] + np.array([1, 0])) % S.q
    ok, msg = rc.validate_compatible(seq)
    assert not ok and msg.startswith("(C1) fails at n=")
    with pytest.raises(rc.IncompatibleSequence):
        rc.build_regular(seq)


def test_c2_violation_detected(setup2):
    # n Tr(kappa_n) = 0 fails for kappa = 1 at level 2
    S = setup2
    seq = rc.DefiningSequence.from_initial(S, [S.ctx.ring.one()])
    ok, msg = rc.validate_compatible(seq)
    assert not ok and "(C2)" in msg


def test_non_regular_cocycle(setup1, rng):
    S = setup1
    Z = S.ce.cocycles()
    hits = 0
    for _ in range(10):
        C = (Z @ rng.integers(0, S.q, Z.shape[1])) % S.q
        try:
            rc.defining_sequence(S, C)
        except rc.NotRegular:
            hits += 1
    assert hits > 0
    with pytest.raises(ValueError):
        rc.extract_lambda(S, Z[:, 0], 1, S.N)


def test_relations_check_detects_perturbation(setup_ram, rng):
    S = setup_ram
    seq = rc.random_compatible(S, rng)
    C = rc.build_regular(seq)
    pairs = [(i, j) for i in range(S.N, S.N + 4) for j in range(S.N, S.N + 4)]
    table = rc.lambda_table(S, C, pairs)
    v = table.entries[(S.N, S.N + 1)]
    table.entries[(S.N, S.N + 1)] = type(v)(v.s, (np.asarray(v.value) + 1) % S.q)
    res = rc.relations_check(table)
    assert not res["ok"] and res["violations"]


def test_trace_correct_trivial_when_small(setup1, rng):
    S = setup1
    seq = rc.random_compatible(S, rng)
    C = rc.build_regular(seq)
    tc = rc.trace_correct(S, C, seq)
    assert np.array_equal(tc.C1, C) and not tc.h.any()


def test_trace_correct_witness(setup2, rng):
    S = setup2
    basis = rc.compatible_basis(S)
    for _ in range(3):
        seq = rc.random_compatible(S, rng, basis)
        C = rc.build_regular(seq)
        tc = rc.trace_correct(S, C, seq)
        c1 = rc.defining_sequence(S, tc.C1)
        assert c1.torsion_level() <= S.ctx.w + 1
        assert rc.witness_check(S, C, tc, rng, samples=30) == []


def test_p3_regularize(setup1, setup_ram, rng):
    z = np.zeros(len(setup1.ce.pairs), dtype=np.int64)
    seq = rc.p3_regularize(setup1, z)
    assert all(not v.any() for v in seq.values.values())
    C = rc.build_regular(rc.random_compatible(setup_ram, rng))
    seq = rc.p3_regularize(setup_ram, C)
    assert np.array_equal(rc.build_regular(seq, check=False), (125 * C) % setup_ram.q)
    ctx = da.make_context(5, 2, e=1, f0=1, K=4)
    with pytest.raises(ValueError):
        rc.p3_regularize(rc.RegularSetup(ctx, 2, 1), z)


def test_form_dimensions(setup1):
    for i, j in ((3, 3), (3, 5), (4, 4)):
        dim_inv, dim_fam, realized = rc.form_dimensions(setup1, i, j)
        assert dim_inv == dim_fam and realized
    assert rc.form_dimensions(setup1, 3, 4)[0] == 0


def test_sequence_json_round_trip(setup_ram, rng):
    seq = rc.random_compatible(setup_ram, rng)
    back = rc.DefiningSequence.from_json(setup_ram, seq.to_json())
    assert all(np.array_equal(seq[n], back[n]) for n in seq.values)
    with pytest.raises(ValueError):
        rc.DefiningSequence.from_json(setup_ram, {**seq.to_json(), "s": 1})


def test_setup_guards():
    ctx = da.make_context(5, 2, e=1, f0=1, K=3)
    with pytest.raises(ValueError):
        rc.RegularSetup(ctx, 1, 3)
    with pytest.raises(ValueError):
        rc.RegularSetup(ctx, 0, 1)
