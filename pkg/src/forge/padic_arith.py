"""The unramified coefficient ring O = O_W/p^K with its Frobenius.

Elements are int64 vectors of length dw holding coordinates in the power
basis 1, x, ..., x^(dw-1) of a monic lift of an irreducible polynomial
over F_p.
"""

import random
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from . import modlinalg as ml


class NoSolution(ValueError):
    pass


# ---------------------------------------------------------------- F_p polys
# coefficient lists, lowest degree first

def _trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f, g, p):
    f = list(f)
    inv = pow(g[-1], -1, p)
    while len(_trim(f)) >= len(g):
        c = f[-1] * inv % p
        sh = len(f) - len(g)
        for i, gi in enumerate(g):
            f[sh + i] = (f[sh + i] - c * gi) % p
    return _trim(f)


def _pmulmod(a, b, g, p):
    out = [0] * (len(a) + len(b))
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, g, p)


def _ppowx(e, g, p):
    # x^e mod g
    result = [1]
    base = _pmod([0, 1], g, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, g, p)
        base = _pmulmod(base, base, g, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _prime_factors(n):
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible_mod_p(f, p):
    """Rabin's test for a monic f (coefficients low to high) over F_p."""
    n = len(f) - 1
    if n == 1:
        return True
    f = [c % p for c in f]
    xp = _ppowx(p**n, f, p)
    if _trim([(a - b) % p for a, b in zip(xp + [0] * 2, [0, 1] + [0] * len(xp))]):
        return False
    for r in _prime_factors(n):
        h = _ppowx(p ** (n // r), f, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


# ---------------------------------------------------------------- the ring

@dataclass(frozen=True, eq=False)
class UnramifiedRing:
    p: int
    dw: int
    K: int
    modulus: tuple
    frob_image: tuple
    seed: int = 0

    @property
    def q(self):
        return self.p**self.K

    @cached_property
    def M(self):
        """M[u, v] = coordinates of x^(u+v)."""
        dw, q = self.dw, self.q
        powers = []
        cur = np.zeros(dw, dtype=np.int64)
        cur[0] = 1
        for _ in range(2 * dw - 1):
            powers.append(cur.copy())
            # multiply by x
            top = cur[-1]
            cur = np.roll(cur, 1)
            cur[0] = 0
            for k in range(dw):
                cur[k] = (cur[k] - top * self.modulus[k]) % q
        M = np.zeros((dw, dw, dw), dtype=np.int64)
        for u in range(dw):
            for v in range(dw):
                M[u, v] = powers[u + v]
        return M

    @cached_property
    def phi(self):
        """Matrix of the Frobenius on the power basis."""
        cols = [self.one()]
        r = np.array(self.frob_image, dtype=np.int64)
        for _ in range(1, self.dw):
            cols.append(self.mul(cols[-1], r))
        return np.stack(cols, axis=1) % self.q

    def phi_power(self, k):
        k %= self.dw
        return self._phi_powers[k]

    @cached_property
    def _phi_powers(self):
        mats = [np.eye(self.dw, dtype=np.int64)]
        for _ in range(1, self.dw):
            mats.append(ml.matmul_mod(self.phi, mats[-1], self.q))
        return mats

    # elements
    def zero(self):
        return np.zeros(self.dw, dtype=np.int64)

    def one(self):
        z = self.zero()
        z[0] = 1
        return z

    def scalar(self, n):
        z = self.zero()
        z[0] = int(n) % self.q
        return z

    def elem(self, coeffs):
        a = np.zeros(self.dw, dtype=np.int64)
        c = [int(x) % self.q for x in coeffs]
        a[: len(c)] = c
        return a

    def random(self, rng, level=None):
        level = self.K if level is None else level
        return rng.integers(0, self.p**level, self.dw).astype(np.int64)

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def neg(self, a):
        return (-a) % self.q

    def smul(self, n, a):
        return (int(n) % self.q * a) % self.q

    def mul(self, a, b):
        return _kernels._ring_mul_np(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64), self.M, self.q)

    def mul_matrix(self, a):
        """Matrix of y -> a*y."""
        return np.stack([self.mul(a, e) for e in np.eye(self.dw, dtype=np.int64)], axis=1)

    def frob(self, a, k=1):
        if k % self.dw == 0:
            return np.asarray(a, dtype=np.int64) % self.q
        return ml.matmul_mod(self.phi_power(k), np.asarray(a, dtype=np.int64)[:, None], self.q)[:, 0]

    def residue_is_unit(self, a):
        A = self.mul_matrix(np.asarray(a) % self.p) % self.p
        return ml.smith(A, self.p, 1).rank == self.dw

    def inv(self, a):
        x = ml.solve(self.mul_matrix(a), self.one(), self.p, self.K)
        if x is None:
            raise ZeroDivisionError("not a unit")
        return x

    def pow(self, a, e):
        result = self.one()
        base = np.asarray(a, dtype=np.int64) % self.q
        if e < 0:
            base = self.inv(base)
            e = -e
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def teichmuller(self, a):
        """Multiplicative lift of the residue of a (a^(p^(dw*K)))."""
        return self.pow(a, self.p ** (self.dw * self.K))

    def vp(self, a):
        """Minimum p-adic valuation of the coordinates (K for zero)."""
        return min(ml.valuation(int(x), self.p, self.K) for x in a)

    def to_json(self):
        return {"p": self.p, "dw": self.dw, "K": self.K, "modulus": list(self.modulus),
                "frob_image": list(self.frob_image), "seed": self.seed}


def _hensel_frobenius(p, dw, K, modulus):
    # Newton iteration on f(r) = 0 from r0 = x^p mod (f, p)
    q = p**K
    tmp = UnramifiedRing(p, dw, K, tuple(modulus), tuple([0] * dw))
    r = tmp.zero()
    rp = _ppowx(p, [c % p for c in modulus] + [1], p)
    r[: len(rp)] = rp

    def f_and_df(x):
        val = tmp.one()  # leading coefficient
        der = tmp.zero()
        for c in reversed(modulus):
            der = tmp.add(tmp.mul(der, x), val)
            val = tmp.add(tmp.mul(val, x), tmp.scalar(c))
        return val, der

    for _ in range(K.bit_length() + 2):
        val, der = f_and_df(r)
        if not val.any():
            break
        r = tmp.sub(r, tmp.mul(val, tmp.inv(der)))
    val, _ = f_and_df(r)
    assert not (val % q).any(), "Hensel lift failed"
    return tuple(int(x) for x in r)


def make_unramified(p, dw, K, seed=0):
    """Seeded construction of O_W/p^K with its Frobenius."""
    if p < 3 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
        raise ValueError(f"p must be an odd prime, got {p}")
    if dw < 1 or K < 1:
        raise ValueError("dw and K must be positive")
    if p**K >= _kernels.MAX_MODULUS:
        raise ValueError(f"p^K = {p}^{K} exceeds the int64-safe bound 2^31")
    if dw == 1:
        modulus = (0,)
    else:
        rng = random.Random(seed)
        while True:
            low = [rng.randrange(p) for _ in range(dw)]
            if low[0] == 0:
                continue
            if is_irreducible_mod_p(low + [1], p):
                modulus = tuple(low)
                break
    if dw == 1:
        frob = (0,)
    else:
        frob = _hensel_frobenius(p, dw, K, list(modulus))
    return UnramifiedRing(p, dw, K, modulus, frob, seed)


def ring_from_json(d):
    return UnramifiedRing(d["p"], d["dw"], d["K"], tuple(d["modulus"]), tuple(d["frob_image"]), d.get("seed", 0))


def frobenius(ring, a, k=1):
    return ring.frob(a, k)


def trace_w_over_f(ring, f0, a):
    """Sum of sigma^i(a) for i < d, sigma = phi^f0, d = dw/f0."""
    if ring.dw % f0:
        raise ValueError(f"f0={f0} does not divide dw={ring.dw}")
    d = ring.dw // f0
    out = ring.zero()
    for i in range(d):
        out = ring.add(out, ring.frob(a, f0 * i))
    return out


def abs_trace(ring, a):
    """tr to Z/p^K as an integer."""
    return int(trace_w_over_f(ring, 1, a)[0])


# ---------------------------------------------------------------- torsion

@dataclass(frozen=True, eq=False)
class TorsionElem:
    """value / p^s modulo O."""
    s: int
    value: np.ndarray

    def normalized(self, p):
        v = np.asarray(self.value, dtype=np.int64) % p**self.s
        s = self.s
        while s > 0 and not (v % p).any():
            v = v // p
            s -= 1
        return s, v % p**s if s else v * 0

    def at_level(self, level, p):
        if level < self.s:
            if (np.asarray(self.value) % p ** (self.s - level)).any():
                raise ValueError("element not killed by p^level")
            return TorsionElem(level, (np.asarray(self.value) // p ** (self.s - level)) % p**level)
        return TorsionElem(level, (np.asarray(self.value) * p ** (level - self.s)) % p**level)

    def equals(self, other, p):
        a, b = self.normalized(p), other.normalized(p)
        return a[0] == b[0] and bool(np.array_equal(a[1], b[1]))

    def is_zero(self, p):
        return self.normalized(p)[0] == 0


def torsion(ring, s, value):
    if s > ring.K:
        raise ValueError("level exceeds precision")
    return TorsionElem(s, np.asarray(value, dtype=np.int64) % ring.p**s)


def _sigma_matrix(ring, f0, k=1):
    return ring.phi_power(f0 * k)


def hilbert90_solve(ring, f0, alpha):
    """beta with alpha = beta - sigma(beta) at the level of alpha."""
    p, s = ring.p, alpha.s
    a = np.asarray(alpha.value, dtype=np.int64) % p**s
    if not a.any():
        return TorsionElem(s, a * 0)
    tr = trace_w_over_f(ring, f0, a) % p**s
    if tr.any():
        raise NoSolution("Tr(alpha) is nonzero; alpha is not of the form beta - sigma(beta)")
    A = (np.eye(ring.dw, dtype=np.int64) - _sigma_matrix(ring, f0)) % p**s
    x = ml.solve(A, a, p, s)
    if x is None:
        raise NoSolution("no Hilbert 90 solution")
    return TorsionElem(s, x)


def trace_pairing_rows(ring, gammas, s):
    """Row for each gamma: lambda -> tr(lambda * gamma) as a linear form mod p^s."""
    q = ring.p**s
    rows = []
    for g in gammas:
        row = [abs_trace(ring, ring.mul(e, g)) % q for e in np.eye(ring.dw, dtype=np.int64)]
        rows.append(row)
    return np.array(rows, dtype=np.int64).reshape(len(gammas), ring.dw)


def trace_dual_solve(ring, f0, i, E, s, basis_i, basis_j, fixed=False):
    """lambda (level s) with E[t, u] = tr(lambda * a_t * sigma^i(b_u)).

    fixed=True imposes sigma(lambda) = lambda (the d=2, d|i, d|j convention).
    Raises NoSolution when no such lambda exists.
    """
    p = ring.p
    q = p**s
    E = np.asarray(E, dtype=np.int64) % q
    gammas, rhs = [], []
    for t, a in enumerate(basis_i):
        for u, b in enumerate(basis_j):
            gammas.append(ring.mul(a, ring.frob(b, f0 * i)))
            rhs.append(E[t, u])
    A = trace_pairing_rows(ring, gammas, s)
    rhs = list(rhs)
    if fixed:
        S = (_sigma_matrix(ring, f0) - np.eye(ring.dw, dtype=np.int64)) % q
        A = np.vstack([A, S])
        rhs += [0] * ring.dw
    lam = ml.solve(A, np.array(rhs, dtype=np.int64), p, s)
    if lam is None:
        raise NoSolution("not regular: no lambda reproduces this bilinear table")
    return TorsionElem(s, lam)


def trace_form_table(ring, f0, i, lam, basis_i, basis_j):
    """E[t, u] = tr(lam * a_t * sigma^i(b_u)) mod p^s."""
    q = ring.p**lam.s
    out = np.zeros((len(basis_i), len(basis_j)), dtype=np.int64)
    for t, a in enumerate(basis_i):
        for u, b in enumerate(basis_j):
            g = ring.mul(ring.mul(lam.value, a), ring.frob(b, f0 * i))
            out[t, u] = abs_trace(ring, g) % q
    return out


def sl_basis(ring, f0):
    """Z_p-basis of the trace-zero submodule sl(O) (rank dw - f0), plus a
    complement so coordinates can be read off.  Returns (basis, coord_matrix)
    where coord_matrix maps an O-vector to [sl coords..., complement coords...]."""
    p, K, q = ring.p, ring.K, ring.q
    T = np.stack([trace_w_over_f(ring, f0, e) for e in np.eye(ring.dw, dtype=np.int64)], axis=1)
    sf = ml.smith(T, p, K)
    # columns of V beyond the rank span the kernel (the trace image is a direct summand)
    rank = sf.rank
    if not all(int(v) == 0 for v in sf.vals[:rank]):
        raise AssertionError("trace image is not a direct summand")
    V = sf.V % q
    basis = [V[:, k].copy() for k in range(rank, ring.dw)]
    coord = sf.Vinv % q
    order = list(range(rank, ring.dw)) + list(range(rank))
    return basis, coord[order]
