import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from forge import _kernels as kn
from forge import division_algebra as da
from forge import modlinalg as ml

jit = pytest.importorskip("numba").njit


_JIT = {}


def _jitted(fn):
    if fn not in _JIT:
        _JIT[fn] = jit(fn)
    return _JIT[fn]


@pytest.fixture(scope="module")
def compiled():
    return _jitted(kn._od_mul_loop), _jitted(kn._snf_loop)


@pytest.mark.parametrize("d,e", [(2, 1), (3, 1), (2, 4)])
def test_od_mul_paths_agree(compiled, d, e, rng):
    kw = {"eisenstein": "cyclotomic"} if e == 4 else {}
    ctx = da.make_context(5, d, e=e, f0=1, K=3, **kw)
    for _ in range(5):
        x, y = da.sample_ideal(ctx, 0, rng), da.sample_ideal(ctx, 0, rng)
        args = (ctx.ring.M, ctx.sig, ctx.P, ctx.q)
        a = compiled[0](x, y, *args)
        b = kn._od_mul_np(x, y, *args)
        c = kn._od_mul_loop(x, y, *args)
        assert np.array_equal(a, b) and np.array_equal(b, c)


def _check_snf(A, p, s, vals, U, V):
    q = p**s
    D = (U @ A % q) @ V % q
    for k in range(min(A.shape)):
        want = p ** int(vals[k]) % q if vals[k] < s else 0
        assert D[k, k] == want
    D[np.diag_indices(min(A.shape))] = 0
    assert not D.any()


@given(st.integers(0, 2**32 - 1), st.integers(1, 5), st.integers(1, 5), st.integers(1, 3))
def test_snf_paths_agree(seed, r, c, s):
    rng = np.random.default_rng(seed)
    p = 3
    A = rng.integers(0, p**s, (r, c)) * rng.choice([1, p], (r, c)) % p**s
    j = _jitted(kn._snf_loop)
    out_j = j(A.astype(np.int64), p, s, True)
    out_n = kn._snf_np(A.astype(np.int64), p, s, True)
    assert np.array_equal(np.sort(out_j[0]), np.sort(out_n[0]))
    for vals, U, V, Vinv in (out_j, out_n):
        _check_snf(A, p, s, vals, U, V)
        assert np.array_equal(V @ Vinv % p**s, np.eye(c, dtype=np.int64))


def test_kernel_against_enumeration(rng):
    p, s = 3, 2
    q = p**s
    for _ in range(5):
        A = rng.integers(0, q, (2, 3)) * rng.choice([1, 3], (2, 3)) % q
        brute = {x for x in itertools.product(range(q), repeat=3) if not (A @ np.array(x) % q).any()}
        K = ml.kernel(A, p, s)
        span = {tuple(K @ np.array(c) % q) for c in itertools.product(range(q), repeat=K.shape[1])}
        assert span == brute


def test_quotient_invariants_small():
    # Z/9 / 3Z/9 = Z/3 ; (Z/9)^2 / 0 = (Z/9)^2
    assert ml.quotient_invariants(np.array([[1]]), np.array([[3]]), 3, 2) == [1]
    assert sorted(ml.quotient_invariants(np.eye(2, dtype=np.int64), np.zeros((2, 0), dtype=np.int64), 3, 2)) == [2, 2]


def test_solve_and_in_span():
    A = np.array([[3, 0], [0, 1]])
    assert ml.in_span(A, np.array([6, 4]), 3, 2)
    assert not ml.in_span(A, np.array([1, 0]), 3, 2)
    x = ml.solve(A, np.array([6, 4]), 3, 2)
    assert np.array_equal(A @ x % 9, [6, 4])


def test_modulus_guard():
    with pytest.raises(ValueError):
        ml.smith(np.eye(2, dtype=np.int64), 5, 20)


def test_no_jit_switch():
    import os
    import subprocess
    import sys
    code = "import forge._kernels as k; print(k.USE_JIT, k.od_mul is k._od_mul_np, k.snf is k._snf_np)"
    out = subprocess.run([sys.executable, "-c", code], env={**os.environ, "FORGE_NO_JIT": "1"},
                         capture_output=True, text=True, check=True).stdout.split()
    assert out == ["False", "True", "True"]
