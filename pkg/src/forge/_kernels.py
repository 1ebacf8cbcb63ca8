"""Hot integer kernels mod q = p^k.

Every kernel has a numba version and a plain numpy version with identical
semantics.  Set FORGE_NO_JIT=1 to force the numpy path (used by the
benchmark and by the tests that compare the two paths).

Arrays are int64 and q must stay below 2**31 so that a single product
fits in 63 bits; callers reduce after every multiply.
"""

import os

import numpy as np

MAX_MODULUS = 2**31

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_JIT = numba is not None and os.environ.get("FORGE_NO_JIT", "") not in ("1", "true", "yes")


def _maybe_jit(fn):
    if USE_JIT:
        return numba.njit(cache=True)(fn)
    return fn


# ---------------------------------------------------------------- scalars

def _inv_mod_py(a, q):
    # extended Euclid, a assumed a unit mod q
    r0, r1 = q, a % q
    s0, s1 = 0, 1
    while r1 != 0:
        t = r0 // r1
        r0, r1 = r1, r0 - t * r1
        s0, s1 = s1, s0 - t * s1
    return s0 % q


def _val_py(x, p, s):
    if x == 0:
        return s
    v = 0
    while x % p == 0 and v < s:
        x //= p
        v += 1
    return v


_inv_mod = _maybe_jit(_inv_mod_py)
_val = _maybe_jit(_val_py)


# ---------------------------------------------------------------- O_D product

def _od_mul_loop(a, b, M, sig, P, q):
    de, dw = a.shape
    out = np.zeros((de, dw), dtype=np.int64)
    sb = np.zeros(dw, dtype=np.int64)
    g = np.zeros(dw, dtype=np.int64)
    h = np.zeros(dw, dtype=np.int64)
    for j in range(de):
        for i in range(de):
            # sb = sigma^i(b_j)
            for k in range(dw):
                acc = 0
                for u in range(dw):
                    acc = (acc + sig[i, k, u] * b[j, u]) % q
                sb[k] = acc
            # g = a_i * sb
            for k in range(dw):
                g[k] = 0
            for u in range(dw):
                if a[i, u] == 0:
                    continue
                for v in range(dw):
                    t = (a[i, u] * sb[v]) % q
                    if t == 0:
                        continue
                    for k in range(dw):
                        g[k] = (g[k] + t * M[u, v, k]) % q
            s = i + j
            if s < de:
                for k in range(dw):
                    out[s, k] = (out[s, k] + g[k]) % q
            else:
                # g * pi^s, pi^s = sum_l P[s, l] pi^l
                for l in range(de):
                    for k in range(dw):
                        h[k] = 0
                    nz = False
                    for u in range(dw):
                        if g[u] == 0:
                            continue
                        for v in range(dw):
                            t = (g[u] * P[s, l, v]) % q
                            if t == 0:
                                continue
                            nz = True
                            for k in range(dw):
                                h[k] = (h[k] + t * M[u, v, k]) % q
                    if nz:
                        for k in range(dw):
                            out[l, k] = (out[l, k] + h[k]) % q
    return out


def _ring_mul_np(a, b, M, q):
    dw = a.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
    for u in range(dw):
        for v in range(dw):
            t = (a[..., u] * b[..., v]) % q
            out = (out + t[..., None] * M[u, v]) % q
    return out


def _od_mul_np(a, b, M, sig, P, q):
    de, dw = a.shape
    # sb[i, j] = sigma^i(b_j)
    sb = np.zeros((de, de, dw), dtype=np.int64)
    for i in range(de):
        for u in range(dw):
            sb[i] = (sb[i] + b[:, u][:, None] * sig[i, :, u][None, :]) % q
    g = _ring_mul_np(a[:, None, :], sb, M, q)  # g[i, j]
    out = np.zeros((de, dw), dtype=np.int64)
    for i in range(de):
        for j in range(de):
            s = i + j
            if s < de:
                out[s] = (out[s] + g[i, j]) % q
            else:
                out = (out + _ring_mul_np(g[i, j][None, :], P[s], M, q)) % q
    return out


od_mul = _maybe_jit(_od_mul_loop) if USE_JIT else _od_mul_np


# ---------------------------------------------------------------- elimination

def _snf_loop(A, p, s, want_u):
    """Diagonalize A over Z/p^s.  Returns (vals, U, V, Vinv) with U A V diagonal
    with entries p^vals[k]; vals[k] == s marks a zero pivot."""
    q = 1
    for _ in range(s):
        q *= p
    r, c = A.shape
    A = A.copy() % q
    ur = r if want_u else 1
    U = np.eye(ur, dtype=np.int64)
    V = np.eye(c, dtype=np.int64)
    Vinv = np.eye(c, dtype=np.int64)
    n = min(r, c)
    vals = np.full(n, s, dtype=np.int64)
    for k in range(n):
        best = s
        bi = -1
        bj = -1
        for i in range(k, r):
            for j in range(k, c):
                x = A[i, j]
                if x != 0:
                    v = _val(x, p, s)
                    if v < best:
                        best = v
                        bi = i
                        bj = j
                        if v == 0:
                            break
            if best == 0:
                break
        if bi < 0:
            break
        vals[k] = best
        if bi != k:
            for j in range(c):
                t = A[k, j]
                A[k, j] = A[bi, j]
                A[bi, j] = t
            if want_u:
                for j in range(r):
                    t = U[k, j]
                    U[k, j] = U[bi, j]
                    U[bi, j] = t
        if bj != k:
            for i in range(r):
                t = A[i, k]
                A[i, k] = A[i, bj]
                A[i, bj] = t
            for i in range(c):
                t = V[i, k]
                V[i, k] = V[i, bj]
                V[i, bj] = t
                t = Vinv[k, i]
                Vinv[k, i] = Vinv[bj, i]
                Vinv[bj, i] = t
        pv = 1
        for _ in range(best):
            pv *= p
        unit = A[k, k] // pv
        ui = _inv_mod(unit, q)
        for j in range(c):
            A[k, j] = (A[k, j] * ui) % q
        if want_u:
            for j in range(r):
                U[k, j] = (U[k, j] * ui) % q
        for i in range(k + 1, r):
            if A[i, k] != 0:
                f = A[i, k] // pv
                for j in range(k, c):
                    A[i, j] = (A[i, j] - f * A[k, j]) % q
                if want_u:
                    for j in range(r):
                        U[i, j] = (U[i, j] - f * U[k, j]) % q
        for j in range(k + 1, c):
            if A[k, j] != 0:
                f = A[k, j] // pv
                A[k, j] = 0
                for i in range(c):
                    V[i, j] = (V[i, j] - f * V[i, k]) % q
                    Vinv[k, i] = (Vinv[k, i] + f * Vinv[j, i]) % q
    return vals, U, V, Vinv


def _val_np(X, p, s):
    X = np.asarray(X, dtype=np.int64)
    v = np.where(X == 0, s, 0)
    Y = X.copy()
    for _ in range(s):
        m = (Y % p == 0) & (Y != 0)
        if not m.any():
            break
        v = v + m
        Y = np.where(m, Y // p, Y)
    return v


def _snf_np(A, p, s, want_u):
    q = p**s
    r, c = A.shape
    A = A.copy() % q
    U = np.eye(r if want_u else 1, dtype=np.int64)
    V = np.eye(c, dtype=np.int64)
    Vinv = np.eye(c, dtype=np.int64)
    n = min(r, c)
    vals = np.full(n, s, dtype=np.int64)
    for k in range(n):
        sub = A[k:, k:]
        vv = _val_np(sub, p, s)
        idx = np.argmin(vv)
        bi, bj = divmod(int(idx), sub.shape[1])
        best = int(vv[bi, bj])
        if best >= s:
            break
        bi += k
        bj += k
        vals[k] = best
        A[[k, bi]] = A[[bi, k]]
        if want_u:
            U[[k, bi]] = U[[bi, k]]
        A[:, [k, bj]] = A[:, [bj, k]]
        V[:, [k, bj]] = V[:, [bj, k]]
        Vinv[[k, bj]] = Vinv[[bj, k]]
        pv = p**best
        ui = pow(int(A[k, k] // pv), -1, q)
        A[k] = (A[k] * ui) % q
        if want_u:
            U[k] = (U[k] * ui) % q
        f = A[k + 1:, k] // pv
        if f.any():
            A[k + 1:] = (A[k + 1:] - (f[:, None] * A[k][None, :]) % q) % q
            if want_u:
                U[k + 1:] = (U[k + 1:] - (f[:, None] * U[k][None, :]) % q) % q
        g = A[k, k + 1:] // pv
        if g.any():
            A[k, k + 1:] = 0
            V[:, k + 1:] = (V[:, k + 1:] - (V[:, k][:, None] * g[None, :]) % q) % q
            Vinv[k] = (Vinv[k] + ((g[:, None] * Vinv[k + 1:]) % q).sum(axis=0)) % q
    return vals, U, V, Vinv


snf = _maybe_jit(_snf_loop) if USE_JIT else _snf_np
