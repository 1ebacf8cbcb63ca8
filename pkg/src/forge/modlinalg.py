"""Linear algebra over Z/p^s.

Z/p^s is a local principal ideal ring, so every matrix has a Smith form
U A V = diag(p^v_1, ..., p^v_r) with U, V invertible.  Kernels, images,
quotients and solves all go through that form.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels


def _check(p, s):
    if s < 1:
        raise ValueError("level s must be >= 1")
    if p**s >= _kernels.MAX_MODULUS:
        raise ValueError(f"p^s = {p}^{s} exceeds the int64-safe bound 2^31")


def matmul_mod(A, B, q):
    """A @ B mod q without int64 overflow (entries assumed in [0, q), q < 2^31)."""
    A = np.asarray(A, dtype=np.int64) % q
    B = np.asarray(B, dtype=np.int64) % q
    A0 = A & 0xFFFF
    A1 = A >> 16
    lo = (A0 @ B) % q
    hi = (A1 @ B) % q
    return (lo + (hi << 16) % q) % q


def valuation(x, p, s):
    """p-adic valuation of an integer mod p^s (s for zero)."""
    x = int(x) % p**s
    if x == 0:
        return s
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass
class SmithForm:
    vals: np.ndarray
    U: np.ndarray
    V: np.ndarray
    Vinv: np.ndarray
    p: int
    s: int

    @property
    def rank(self):
        return int(np.sum(self.vals < self.s))


def smith(A, p, s, want_u=False):
    _check(p, s)
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("matrix expected")
    r, c = A.shape
    if r == 0 or c == 0:
        return SmithForm(np.zeros(0, dtype=np.int64), np.eye(r, dtype=np.int64),
                         np.eye(c, dtype=np.int64), np.eye(c, dtype=np.int64), p, s)
    vals, U, V, Vinv = _kernels.snf(np.ascontiguousarray(A % p**s), p, s, want_u)
    return SmithForm(vals, U, V, Vinv, p, s)


def kernel(A, p, s):
    """Columns generating {x : A x = 0} in (Z/p^s)^c."""
    A = np.asarray(A, dtype=np.int64)
    c = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(c, dtype=np.int64)
    sf = smith(A, p, s)
    q = p**s
    cols = []
    for k in range(c):
        v = int(sf.vals[k]) if k < len(sf.vals) else s
        if v == 0:
            continue
        cols.append((sf.V[:, k] * p ** (s - v)) % q)
    if not cols:
        return np.zeros((c, 0), dtype=np.int64)
    return np.stack(cols, axis=1)


def row_module(A, p, s):
    """A short list of rows generating the same row module as A."""
    sf = smith(A, p, s)
    q = p**s
    rows = [(sf.Vinv[k] * p ** int(sf.vals[k])) % q for k in range(len(sf.vals)) if sf.vals[k] < s]
    if not rows:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    return np.stack(rows)


class RowAccumulator:
    """Streams constraint rows and keeps a compressed generating set."""

    def __init__(self, ncols, p, s, chunk=2000):
        _check(p, s)
        self.ncols = ncols
        self.p = p
        self.s = s
        self.chunk = chunk
        self.basis = np.zeros((0, ncols), dtype=np.int64)
        self.pending = []

    def add(self, row):
        self.pending.append(np.asarray(row, dtype=np.int64))
        if len(self.pending) >= self.chunk:
            self._flush()

    def _flush(self):
        if not self.pending:
            return
        stack = np.vstack([self.basis] + [r[None, :] for r in self.pending]) % self.p**self.s
        self.pending = []
        self.basis = row_module(stack, self.p, self.s)

    def matrix(self):
        self._flush()
        return self.basis


def solve(A, b, p, s):
    """Some x with A x = b over Z/p^s, or None."""
    q = p**s
    A = np.asarray(A, dtype=np.int64) % q
    b = np.asarray(b, dtype=np.int64) % q
    r, c = A.shape
    if r == 0:
        return np.zeros(c, dtype=np.int64)
    sf = smith(A, p, s, want_u=True)
    ub = matmul_mod(sf.U, b[:, None], q)[:, 0]
    y = np.zeros(c, dtype=np.int64)
    for k in range(r):
        v = int(sf.vals[k]) if k < len(sf.vals) else s
        if k < c and v < s:
            if ub[k] % p**v:
                return None
            y[k] = ub[k] // p**v
        elif ub[k] != 0:
            return None
    return matmul_mod(sf.V, y[:, None], q)[:, 0]


def image_invariants(A, p, s):
    """Exponents e with image(A) = sum of Z/p^e, sorted descending."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return []
    sf = smith(A, p, s)
    return sorted((s - int(v) for v in sf.vals if v < s), reverse=True)


def quotient_invariants(Z, B, p, s):
    """Invariants of span(Z)/span(B) for column generators, B inside span(Z)."""
    q = p**s
    Z = np.asarray(Z, dtype=np.int64) % q
    n = Z.shape[0]
    if n == 0 or Z.ndim < 2 or Z.shape[1] == 0:
        return []
    B = np.asarray(B, dtype=np.int64).reshape(n, -1) % q
    if B.shape[1] == 0:
        return image_invariants(Z, p, s)
    sf = smith(B, p, s, want_u=True)
    img = matmul_mod(sf.U, Z, q)
    scale = np.ones(n, dtype=np.int64)
    for k in range(n):
        v = int(sf.vals[k]) if k < len(sf.vals) else s
        scale[k] = p ** (s - v)
    img = (img * scale[:, None]) % q
    return image_invariants(img, p, s)


def in_span(B, x, p, s):
    return solve(B, x, p, s) is not None


def order_of(inv, p):
    return p ** sum(inv)


def quotient_basis(Z, B, p, s):
    """Cyclic decomposition of span(Z)/span(B): list of (column, exponent)
    with each column a combination of Z's columns of order p^exponent mod B."""
    q = p**s
    Z = np.asarray(Z, dtype=np.int64) % q
    n = Z.shape[0]
    if n == 0 or Z.shape[1] == 0:
        return []
    B = np.asarray(B, dtype=np.int64).reshape(n, -1) % q
    if B.shape[1]:
        sf = smith(B, p, s, want_u=True)
        img = matmul_mod(sf.U, Z, q)
        scale = np.ones(n, dtype=np.int64)
        for k in range(n):
            v = int(sf.vals[k]) if k < len(sf.vals) else s
            scale[k] = p ** (s - v)
        img = (img * scale[:, None]) % q
    else:
        img = Z
    sf2 = smith(img, p, s)
    out = []
    for k in range(Z.shape[1]):
        v = int(sf2.vals[k]) if k < len(sf2.vals) else s
        if v < s:
            out.append((matmul_mod(Z, sf2.V[:, k:k + 1], q)[:, 0], s - v))
    out.sort(key=lambda t: -t[1])
    return out
