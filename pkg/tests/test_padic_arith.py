import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from forge import padic_arith as pa


def _has_root(f, p):
    return any(sum(c * x**k for k, c in enumerate(f)) % p == 0 for x in range(p))


@pytest.mark.parametrize("p,n,count", [(5, 2, 10), (5, 3, 40), (7, 2, 21)])
def test_irreducible_count_against_root_oracle(p, n, count):
    # degree <= 3: irreducible iff no root; the count is (p^n - p) / n
    found = 0
    for low in itertools.product(range(p), repeat=n):
        f = list(low) + [1]
        rabin = pa.is_irreducible_mod_p(f, p)
        assert rabin == (not _has_root(f, p))
        found += rabin
    assert found == count


@pytest.fixture(scope="module")
def ring():
    return pa.make_unramified(5, 2, 4, seed=3)


vec = st.lists(st.integers(0, 5**4 - 1), min_size=2, max_size=2).map(lambda v: np.array(v, dtype=np.int64))


@given(vec, vec, vec)
def test_ring_axioms(a, b, c):
    R = pa.make_unramified(5, 2, 4, seed=3)
    assert np.array_equal(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)))
    assert np.array_equal(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)))
    assert np.array_equal(R.mul(a, b), R.mul(b, a))


@given(vec, vec)
def test_frobenius_is_ring_automorphism(a, b):
    R = pa.make_unramified(5, 2, 4, seed=3)
    assert np.array_equal(R.frob(R.mul(a, b)), R.mul(R.frob(a), R.frob(b)))
    assert np.array_equal(R.frob(R.add(a, b)), R.add(R.frob(a), R.frob(b)))
    assert np.array_equal(R.frob(a, R.dw), a % R.q)


@given(vec)
def test_frobenius_lifts_pth_power(a):
    R = pa.make_unramified(5, 2, 4, seed=3)
    assert np.array_equal(R.frob(a) % R.p, R.pow(a, R.p) % R.p)


def test_teichmuller(ring, rng):
    for _ in range(10):
        a = ring.random(rng)
        if not ring.residue_is_unit(a):
            continue
        t = ring.teichmuller(a)
        assert np.array_equal(t % ring.p, a % ring.p)
        assert np.array_equal(ring.pow(t, ring.p**ring.dw), t)


def test_inverse(ring, rng):
    for _ in range(20):
        a = ring.random(rng)
        if ring.residue_is_unit(a):
            assert np.array_equal(ring.mul(a, ring.inv(a)), ring.one())
    with pytest.raises(ZeroDivisionError):
        ring.inv(ring.scalar(5))


def test_hilbert90(ring, rng):
    for s in (1, 2, 4):
        beta = ring.random(rng, s)
        alpha = (beta - ring.frob(beta)) % 5**s
        sol = pa.hilbert90_solve(ring, 1, pa.TorsionElem(s, alpha))
        assert np.array_equal((sol.value - ring.frob(sol.value)) % 5**s, alpha)
    with pytest.raises(pa.NoSolution):
        pa.hilbert90_solve(ring, 1, pa.TorsionElem(2, ring.one()))


def test_trace_dual_round_trip(ring, rng):
    basis = [e for e in np.eye(2, dtype=np.int64)]
    for s in (1, 3):
        for i in (1, 2):
            lam = pa.TorsionElem(s, ring.random(rng, s))
            E = pa.trace_form_table(ring, 1, i, lam, basis, basis)
            back = pa.trace_dual_solve(ring, 1, i, E, s, basis, basis)
            assert np.array_equal(pa.trace_form_table(ring, 1, i, back, basis, basis), E)


def test_trace_dual_on_trace_zero_part(ring):
    sl, _ = pa.sl_basis(ring, 1)
    E = np.array([[1]], dtype=np.int64)
    lam = pa.trace_dual_solve(ring, 1, 2, E, 1, sl, sl)
    assert pa.trace_form_table(ring, 1, 2, lam, sl, sl)[0, 0] % 5 == 1


def test_sl_basis(ring):
    basis, coord = pa.sl_basis(ring, 1)
    assert len(basis) == ring.dw - 1
    for b in basis:
        assert not pa.trace_w_over_f(ring, 1, b).any()
        c = (coord @ b) % ring.q
        assert c[0] == 1 and not c[1:].any()


def test_torsion_normalization():
    t = pa.TorsionElem(3, np.array([25, 50]))
    s, v = t.normalized(5)
    assert s == 1 and list(v) == [1, 2]
    assert t.equals(pa.TorsionElem(1, np.array([1, 2])), 5)
    assert pa.TorsionElem(2, np.array([0, 0])).is_zero(5)
    assert list(t.at_level(1, 5).value) == [1, 2]
    with pytest.raises(ValueError):
        pa.TorsionElem(2, np.array([1, 0])).at_level(1, 5)


def test_abs_trace_of_scalar(ring):
    assert pa.abs_trace(ring, ring.scalar(3)) == 6


def test_precision_guard():
    with pytest.raises(ValueError):
        pa.make_unramified(5, 2, 20)
    with pytest.raises(ValueError):
        pa.make_unramified(4, 2, 3)


def test_json_round_trip(ring):
    R2 = pa.ring_from_json(ring.to_json())
    a, b = np.array([3, 7]), np.array([11, 2])
    assert np.array_equal(R2.mul(a, b), ring.mul(a, b))
