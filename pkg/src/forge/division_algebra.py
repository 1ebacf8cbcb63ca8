"""Cyclic division algebra D = sum of W pi^i with pi w pi^-1 = sigma(w).

An element of O_D/p^K is a (de, dw) int64 array: row j holds a_j in O for
the term a_j pi^j.  The Eisenstein relation pi^de = p * sum_k c_k pi^(dk)
folds higher powers back into the rows.
"""

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import comb

import numpy as np

from . import _kernels
from . import modlinalg as ml
from .padic_arith import UnramifiedRing, make_unramified, ring_from_json, trace_w_over_f


class ConfigError(ValueError):
    pass


def _ceil_div(a, b):
    return -((-a) // b)


@dataclass(frozen=True, eq=False)
class AlgebraContext:
    ring: UnramifiedRing
    d: int
    e: int
    f0: int
    eis: tuple  # c_0..c_{e-1} as tuples of ints

    def __post_init__(self):
        R = self.ring
        if self.d < 2:
            raise ConfigError("degree d must be at least 2")
        if self.d * self.f0 != R.dw:
            raise ConfigError(f"d*f0 = {self.d * self.f0} must equal the ring degree dw = {R.dw}")
        if len(self.eis) != self.e:
            raise ConfigError(f"need e = {self.e} Eisenstein coefficients, got {len(self.eis)}")
        for k, c in enumerate(self.eis):
            c = np.array(c, dtype=np.int64)
            if not np.array_equal(R.frob(c, self.f0), c % R.q):
                raise ConfigError(f"Eisenstein coefficient c_{k} is not fixed by sigma")
        if not R.residue_is_unit(np.array(self.eis[0], dtype=np.int64)):
            raise ConfigError("Eisenstein coefficient c_0 must be a unit (c_0 not invertible mod p)")

    @property
    def p(self):
        return self.ring.p

    @property
    def K(self):
        return self.ring.K

    @property
    def dw(self):
        return self.ring.dw

    @property
    def q(self):
        return self.ring.q

    @property
    def de(self):
        return self.d * self.e

    @property
    def w(self):
        w, e = 0, self.e
        while e % self.p == 0:
            e //= self.p
            w += 1
        return w

    @property
    def window(self):
        """Largest filtration level m for which pi-adic statements are asserted."""
        return self.de * (self.K - 1)

    def c(self, k):
        return np.array(self.eis[k], dtype=np.int64) % self.q

    @cached_property
    def sig(self):
        """sig[i] = matrix of sigma^i, i < de."""
        return np.stack([self.ring.phi_power(self.f0 * i) for i in range(self.de)])

    def sigma(self, a, i=1):
        return self.ring.frob(a, self.f0 * i)

    @cached_property
    def P(self):
        """P[s] = pi^s in coordinates, for s < 2de - 1."""
        de = self.de
        out = []
        cur = self.zero()
        cur[0] = self.ring.one()
        for _ in range(2 * de - 1):
            out.append(cur.copy())
            cur = self._times_pi(cur)
        return np.stack(out)

    def _times_pi(self, x):
        R, de, d = self.ring, self.de, self.d
        out = self.zero()
        for j in range(de - 1):
            out[j + 1] = self.sigma(x[j])
        top = self.sigma(x[de - 1])
        for k in range(self.e):
            out[d * k] = R.add(out[d * k], R.smul(self.p, R.mul(top, self.c(k))))
        return out

    # elements ---------------------------------------------------------
    def zero(self):
        return np.zeros((self.de, self.dw), dtype=np.int64)

    def one(self):
        z = self.zero()
        z[0, 0] = 1
        return z

    def from_ring(self, a, j=0):
        """a * pi^j for a in O, 0 <= j < de."""
        z = self.zero()
        z[j] = np.asarray(a, dtype=np.int64) % self.q
        return z

    def pi_power(self, n):
        if n < 2 * self.de - 1:
            return self.P[n].copy()
        half = self.pi_power(n // 2)
        out = mul(self, half, half)
        if n % 2:
            out = mul(self, out, self.P[1])
        return out

    def scalar(self, n):
        return self.from_ring(self.ring.scalar(n))

    def to_json(self):
        return {"ring": self.ring.to_json(), "d": self.d, "e": self.e, "f0": self.f0,
                "eisenstein": [list(map(int, c)) for c in self.eis]}


def context_from_json(dct):
    return AlgebraContext(ring_from_json(dct["ring"]), dct["d"], dct["e"], dct["f0"],
                          tuple(tuple(c) for c in dct["eisenstein"]))


def eisenstein_preset(name, p, e):
    """Integer Eisenstein coefficients for a built-in base field."""
    if name in ("unramified", "qp"):
        if e != 1:
            raise ConfigError("the unramified preset needs e = 1")
        return [1]
    if name in ("cyclotomic", "qp_zeta_p"):
        if e != p - 1:
            raise ConfigError(f"the cyclotomic preset needs e = p - 1 = {p - 1}")
        return [-comb(p, k + 1) // p for k in range(e)]
    raise ConfigError(f"unknown Eisenstein preset {name!r}")


def make_context(p, d, e=1, f0=1, K=3, eisenstein=None, seed=0):
    """Build an AlgebraContext.  eisenstein: preset name, list of ints
    (coefficients in Z_p), or list of coordinate lists."""
    if eisenstein is None:
        eisenstein = "unramified" if e == 1 else "cyclotomic"
    if isinstance(eisenstein, str):
        eisenstein = eisenstein_preset(eisenstein, p, e)
    ring = make_unramified(p, d * f0, K, seed)
    eis = []
    for c in eisenstein:
        if isinstance(c, (int, np.integer)):
            eis.append(tuple(int(x) for x in ring.scalar(c)))
        else:
            eis.append(tuple(int(x) for x in ring.elem(c)))
    return AlgebraContext(ring, d, e, f0, tuple(eis))


# ---------------------------------------------------------------- arithmetic

def mul(ctx, x, y):
    return _kernels.od_mul(np.ascontiguousarray(x, dtype=np.int64), np.ascontiguousarray(y, dtype=np.int64),
                           ctx.ring.M, ctx.sig, ctx.P, ctx.q)


def add(ctx, x, y):
    return (x + y) % ctx.q


def sub(ctx, x, y):
    return (x - y) % ctx.q


def neg(ctx, x):
    return (-x) % ctx.q


def smul(ctx, n, x):
    return (int(n) % ctx.q * x) % ctx.q


def lmul_ring(ctx, a, x):
    """a * x for a in O (left multiplication, coordinate-wise)."""
    return ctx.ring.mul(np.asarray(a, dtype=np.int64)[None, :], x)


def commutator(ctx, x, y):
    return sub(ctx, mul(ctx, x, y), mul(ctx, y, x))


def power(ctx, x, n):
    result = ctx.one()
    base = x
    while n:
        if n & 1:
            result = mul(ctx, result, base)
        base = mul(ctx, base, base)
        n >>= 1
    return result


def reduce_mod(ctx, x, m):
    """Reduce x modulo pi^m O_D (canonical representative)."""
    out = np.array(x, dtype=np.int64) % ctx.q
    for j in range(ctx.de):
        k = _ceil_div(m - j, ctx.de)
        if k <= 0:
            out[j] = 0
        elif k < ctx.K:
            out[j] %= ctx.p**k
    return out


def valuation(ctx, x):
    """pi-adic valuation; None when x is zero at precision."""
    best = None
    for j in range(ctx.de):
        v = ctx.ring.vp(x[j])
        if v >= ctx.K:
            continue
        val = ctx.de * v + j
        if best is None or val < best:
            best = val
    return best


def in_ideal(ctx, x, n):
    v = valuation(ctx, x)
    return v is None or v >= n


def digit(ctx, x, n):
    """Residue in O/p of the pi^n digit of x, assuming x lies in pi^n O_D."""
    j = n % ctx.de
    k = n // ctx.de
    return (x[j] // ctx.p**k) % ctx.p


def inverse(ctx, x):
    """Inverse of a unit of O_D by Newton iteration."""
    a0 = x[0] % ctx.q
    if not ctx.ring.residue_is_unit(a0):
        raise ZeroDivisionError("not a unit of O_D")
    y = ctx.from_ring(ctx.ring.inv(a0))
    two = ctx.scalar(2)
    for _ in range((ctx.de * ctx.K).bit_length() + 2):
        y = mul(ctx, y, sub(ctx, two, mul(ctx, x, y)))
    return y


def sample_ideal(ctx, n, rng):
    """Uniform element of pi^n O_D / p^K."""
    if not 0 <= n < ctx.de * ctx.K:
        raise ValueError(f"n={n} outside [0, de*K)")
    out = ctx.zero()
    for j in range(ctx.de):
        k = max(0, _ceil_div(n - j, ctx.de))
        if k < ctx.K:
            out[j] = rng.integers(0, ctx.p ** (ctx.K - k), ctx.dw) * ctx.p**k
    return out % ctx.q


def reduced_trace(ctx, x):
    out = ctx.zero()
    for j in range(0, ctx.de, ctx.d):
        out[j] = trace_w_over_f(ctx.ring, ctx.f0, x[j])
    return out


def _w_parts(ctx, x):
    """x = sum_r w_r pi^r with w_r in O_W, embedded as elements supported on d|j."""
    parts = []
    for r in range(ctx.d):
        w = ctx.zero()
        for k in range(ctx.e):
            w[k * ctx.d] = x[k * ctx.d + r]
        parts.append(w)
    return parts


def _sigma_elem(ctx, x, i):
    return np.stack([ctx.sigma(row, i) for row in x])


def reduced_norm(ctx, x):
    """Determinant of right multiplication by x on D as a left W-space,
    returned as an element supported on the F-part (coordinates d|j)."""
    d = ctx.d
    w = _w_parts(ctx, x)
    tau = ctx.P[d]
    # matrix row i: pi^i x = sum_r sigma^i(w_r) pi^(i+r)
    mat = [[ctx.zero() for _ in range(d)] for _ in range(d)]
    for i in range(d):
        for r in range(d):
            ent = _sigma_elem(ctx, w[r], i)
            col = i + r
            if col >= d:
                ent = mul(ctx, ent, tau)
                col -= d
            mat[i][col] = ent
    total = ctx.zero()
    for perm in itertools.permutations(range(d)):
        sign = 1
        for a in range(d):
            for b in range(a + 1, d):
                if perm[a] > perm[b]:
                    sign = -sign
        term = ctx.one()
        for i in range(d):
            term = mul(ctx, term, mat[i][perm[i]])
        total = add(ctx, total, term) if sign > 0 else sub(ctx, total, term)
    return total


def is_in_center_part(ctx, x):
    """True when x lies in O_F (supported on d|j with sigma-fixed entries)."""
    for j in range(ctx.de):
        if j % ctx.d and x[j].any():
            return False
        if not np.array_equal(ctx.sigma(x[j]), x[j]):
            return False
    return True
