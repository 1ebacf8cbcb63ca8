"""Congruence quotients G_n/G_m of the norm-one group SL_1(D).

A group element is stored as the (de, dw) array of g itself, reduced
modulo pi^m; two elements are equal iff their arrays are equal.
"""

from fractions import Fraction
from functools import cached_property

import numpy as np

from . import division_algebra as da
from . import modlinalg as ml
from .padic_arith import sl_basis, trace_w_over_f


class PrecisionError(ValueError):
    pass


def _ceil_div(a, b):
    return -((-a) // b)


def _frac_mod(fr, p, q):
    fr = Fraction(fr)
    if fr.denominator % p == 0:
        raise PrecisionError(f"coefficient {fr} is not p-integral")
    return fr.numerator * pow(fr.denominator, -1, q) % q


def _vp_int(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def sample_trace_zero(ctx, n, rng):
    """Uniform element of sl(pi^n O_D)/p^K."""
    out = ctx.zero()
    basis, _ = sl_basis(ctx.ring, ctx.f0)
    for j in range(ctx.de):
        k = max(0, _ceil_div(n - j, ctx.de))
        if k >= ctx.K:
            continue
        if j % ctx.d:
            out[j] = ctx.ring.random(rng) * ctx.p**k
        else:
            acc = ctx.ring.zero()
            for b in basis:
                acc = acc + int(rng.integers(0, ctx.q)) * b
            out[j] = acc * ctx.p**k
    return out % ctx.q


def exp_series(ctx, x, m, terms_from=1):
    """sum x^i / i! reduced mod pi^m, for x of valuation > de/(p-1)."""
    p, de = ctx.p, ctx.de
    n = da.valuation(ctx, x)
    if n is None:
        return ctx.one()
    if n * (p - 1) <= de:
        raise PrecisionError(f"exp diverges: valuation {n} <= de/(p-1)")
    total = ctx.one()
    xi = ctx.one()
    i = 0
    while True:
        i += 1
        xi = da.mul(ctx, xi, x)
        v = _vp_int(_fact(i), p)
        lower = n * i - de * v
        if lower >= m:
            # all later terms are deeper as well
            if n * (i + 1) - de * _vp_int(_fact(i + 1), p) >= m:
                break
            continue
        need = _ceil_div(m, de)
        if need + v > ctx.K:
            raise PrecisionError(f"term {i} needs {need + v} digits, have K={ctx.K}")
        unit = _fact(i) // p**v
        term = (xi // p**v) * pow(unit, -1, ctx.q) % ctx.q
        total = da.add(ctx, total, term)
    return da.reduce_mod(ctx, total, m)


def log_series(ctx, g, m):
    """sum (-1)^(i-1) (g-1)^i / i reduced mod pi^m."""
    p, de = ctx.p, ctx.de
    x = da.sub(ctx, g, ctx.one())
    n = da.valuation(ctx, x)
    if n is None:
        return ctx.zero()
    if n * (p - 1) <= de:
        raise PrecisionError(f"log diverges: valuation {n} <= de/(p-1)")
    total = ctx.zero()
    xi = ctx.one()
    i = 0
    while True:
        i += 1
        xi = da.mul(ctx, xi, x)
        v = _vp_int(i, p)
        if n * i - de * v >= m and n * (i + 1) - de * _vp_int(i + 1, p) >= m and n * i >= m + de * 8:
            break
        if n * i - de * v >= m:
            continue
        if _ceil_div(m, de) + v > ctx.K:
            raise PrecisionError(f"term {i} needs more than K={ctx.K} digits")
        unit = i // p**v
        term = (xi // p**v) * pow(unit, -1, ctx.q) % ctx.q
        total = da.add(ctx, total, term) if i % 2 else da.sub(ctx, total, term)
    return da.reduce_mod(ctx, total, m)


_FACT = [1]


def _fact(i):
    while len(_FACT) <= i:
        _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[i]


class GroupQuotient:
    """G_n/G_m for an AlgebraContext."""

    def __init__(self, ctx, n, m):
        if not 1 <= n <= m:
            raise ValueError("need 1 <= n <= m")
        if m > ctx.window:
            raise PrecisionError(f"m={m} exceeds the validity window de*(K-1)={ctx.window}")
        self.ctx = ctx
        self.n = n
        self.m = m

    @property
    def exp_log(self):
        """Bound on log_p of the exponent: each p-th power raises the level."""
        return self.m - self.n

    # group law ---------------------------------------------------------
    def identity(self):
        return self.ctx.one()

    def reduce(self, g):
        return da.reduce_mod(self.ctx, g, self.m)

    def mul(self, g, h):
        return self.reduce(da.mul(self.ctx, g, h))

    def inv(self, g):
        return self.reduce(da.inverse(self.ctx, g))

    def comm(self, g, h):
        return self.mul(self.mul(self.inv(g), self.inv(h)), self.mul(g, h))

    def pow(self, g, k):
        if k < 0:
            g, k = self.inv(g), -k
        out = self.identity()
        base = g
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def pow_p(self, g):
        return self.pow(g, self.ctx.p)

    def equal(self, g, h):
        return bool(np.array_equal(self.reduce(g), self.reduce(h)))

    def key(self, g):
        return self.reduce(g).tobytes()

    def level(self, g):
        """Largest k <= m with g in G_k."""
        v = da.valuation(self.ctx, self.reduce(g) - self.ctx.one())
        return self.m if v is None or v >= self.m else v

    def is_member(self, g):
        ctx = self.ctx
        g = self.reduce(g)
        if self.level(g) < self.n:
            return False
        nu = da.sub(ctx, da.reduced_norm(ctx, g), ctx.one())
        v = da.valuation(ctx, nu)
        return v is None or v >= ctx.d * _ceil_div(self.m, ctx.d)

    def rho(self, k, g):
        """Residue of the pi^k digit of g - 1 (g assumed in G_k)."""
        return da.digit(self.ctx, (self.reduce(g) - self.ctx.one()) % self.ctx.q, k)

    # sampling ------------------------------------------------------------
    def norm_correct(self, g):
        """Multiply g by the central d-th root of Nrd(g)^-1 (needs p not dividing d)."""
        ctx = self.ctx
        if ctx.d % ctx.p == 0:
            raise ValueError("norm correction needs p not dividing d")
        t = da.sub(ctx, da.reduced_norm(ctx, g), ctx.one())
        alpha = Fraction(-1, ctx.d)
        c = ctx.one()
        tk = ctx.one()
        coeff = Fraction(1)
        k = 0
        while True:
            k += 1
            coeff = coeff * (alpha - (k - 1)) / k
            tk = da.reduce_mod(ctx, da.mul(ctx, tk, t), self.m + ctx.de)
            if not tk.any():
                break
            c = da.add(ctx, c, da.smul(ctx, _frac_mod(coeff, ctx.p, ctx.q), tk))
        return self.mul(c, g)

    def random(self, rng, level=None):
        """A random element of G_level/G_m (level defaults to n)."""
        ctx = self.ctx
        level = self.n if level is None else level
        if level >= self.m:
            return self.identity()
        if ctx.d % ctx.p == 0:
            u = sample_trace_zero(ctx, level, rng)
            g = exp_series(ctx, da.reduce_mod(ctx, u, self.m), self.m)
        else:
            x = da.sample_ideal(ctx, level, rng)
            g = self.norm_correct(self.reduce(da.add(ctx, ctx.one(), x)))
        return g

    def random_in_layer(self, rng, k):
        """Random element of G_k not in G_{k+1} (k < m)."""
        while True:
            g = self.random(rng, k)
            if self.level(g) == k:
                return g

    # Delta ----------------------------------------------------------------
    @cached_property
    def delta(self):
        return delta_generator(self.ctx)

    def delta_conjugate(self, g, delta=None, power=1):
        """delta^-power g delta^power."""
        ctx = self.ctx
        dl = self.delta if delta is None else delta
        D = ctx.from_ring(ctx.ring.pow(dl, power))
        Di = ctx.from_ring(ctx.ring.pow(dl, -power))
        return self.reduce(da.mul(ctx, da.mul(ctx, Di, g), D))

    # structure -------------------------------------------------------------
    def layer_dim(self, k):
        """dim over F_p of rho_k(G_k): dw, or dw - f0 when d | k."""
        ctx = self.ctx
        return ctx.dw - ctx.f0 if k % ctx.d == 0 else ctx.dw

    def layer_generators(self, rng, max_tries=400):
        """For each k in [n, m) elements of G_k whose rho_k form an F_p-basis of
        rho_k(G_k).  The dimension is found empirically (rank of the span of
        samples); stops once the Riehm bound is reached or tries run out."""
        gens = {}
        p = self.ctx.p
        for k in range(self.n, self.m):
            target = self.layer_dim(k)
            chosen, vecs = [], []
            for _ in range(max_tries):
                g = self.random(rng, k)
                v = self.rho(k, g)
                cand = np.array(vecs + [v], dtype=np.int64)
                if ml.smith(cand, p, 1).rank > len(vecs):
                    chosen.append(g)
                    vecs.append(v)
                if len(vecs) >= target:
                    break
            gens[k] = chosen
        return gens

    def order_from_layers(self, rng):
        """|G_n/G_m| as the product of the sampled layer sizes."""
        gens = self.layer_generators(rng)
        return self.ctx.p ** sum(len(v) for v in gens.values())

    def enumerate(self, rng=None, gens=None):
        """All elements, as normal-form products over a layer basis."""
        if gens is None:
            gens = self.layer_generators(rng if rng is not None else np.random.default_rng(0))
        flat = [g for k in sorted(gens) for g in gens[k]]
        elems = [self.identity()]
        for g in reversed(flat):
            powers = [self.identity()]
            for _ in range(self.ctx.p - 1):
                powers.append(self.mul(powers[-1], g))
            elems = [self.mul(pw, x) for pw in powers for x in elems]
        return elems


def delta_generator(ctx):
    """Teichmuller lift of zeta^(p^f0 - 1) for zeta a generator of the
    residue field units; its reduced norm is 1."""
    R, p = ctx.ring, ctx.p
    order = p**ctx.dw - 1
    primes = _prime_factors(order)
    rng = np.random.default_rng(12345)
    while True:
        z = rng.integers(0, p, R.dw).astype(np.int64)
        if not R.residue_is_unit(z):
            continue
        ok = True
        for r in primes:
            y = R.pow(z, order // r) % p
            if np.array_equal(y, R.one()):
                ok = False
                break
        if ok:
            break
    zeta = R.teichmuller(z)
    return R.pow(zeta, p**ctx.f0 - 1)


def delta_order(ctx):
    return (ctx.p**ctx.dw - 1) // (ctx.p**ctx.f0 - 1)


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


# ---------------------------------------------------------------- checks

def residue_basis(ctx, k):
    """F_p basis of the residue of O_k: all of W-bar, or sl(W-bar) when d | k."""
    if k % ctx.d:
        return [e for e in np.eye(ctx.dw, dtype=np.int64)]
    basis, _ = sl_basis(ctx.ring, ctx.f0)
    return [b % ctx.p for b in basis]


def _span_rank(vecs, p):
    if not vecs:
        return 0
    return ml.smith(np.array(vecs, dtype=np.int64) % p, p, 1).rank


def classify_span(ctx, vecs):
    """full / sl / zero / other for a list of residue vectors."""
    p = ctx.p
    r = _span_rank(vecs, p)
    if r == 0:
        return "zero"
    if r == ctx.dw:
        return "full"
    if r == ctx.dw - ctx.f0:
        traces = [trace_w_over_f(ctx.ring, ctx.f0, np.asarray(v)) % p for v in vecs]
        if not any(t.any() for t in traces):
            return "sl"
    return "other"


def predicted_commutator_class(d, i, j):
    from math import gcd
    if (i + j) % d:
        return "full"
    if i % d == 0 and j % d == 0:
        return "zero"
    if gcd(d, i) == 1:
        return "sl"
    return "other"


def commutator_span_check(ctx, i, j, rng, samples=60):
    """Classify rho_{i+j}([G_i, G_j]) by sampling and by the residue formula.

    Returns dict with group-side class, formula-side class, and prediction.
    """
    p = ctx.p
    Q = GroupQuotient(ctx, min(i, j), i + j + 1)
    vecs = []
    for _ in range(samples):
        g = Q.random(rng, i)
        h = Q.random(rng, j)
        c = Q.comm(g, h)
        if Q.level(c) < i + j:
            raise AssertionError("commutator left G_{i+j}")
        vecs.append(Q.rho(i + j, c))
    R = ctx.ring
    formula = []
    for a in residue_basis(ctx, i):
        for b in residue_basis(ctx, j):
            v = R.sub(R.mul(a, ctx.sigma(b, i)), R.mul(b, ctx.sigma(a, j))) % p
            formula.append(v)
    return {
        "i": i, "j": j,
        "group": classify_span(ctx, vecs),
        "formula": classify_span(ctx, formula),
        "predicted": predicted_commutator_class(ctx.d, i, j),
    }


def p_power_break_check(ctx, i, g, Q=None):
    """v(g^p - 1) == i + de for g in G_i minus G_{i+1}."""
    if i * (ctx.p - 1) <= ctx.de:
        raise ValueError("need i > de/(p-1)")
    Q = Q or GroupQuotient(ctx, 1, i + ctx.de + 1)
    if Q.level(g) != i:
        raise ValueError("g must lie in G_i but not G_{i+1}")
    return Q.level(Q.pow_p(g)) == i + ctx.de


def brute_force_quotient(ctx, n, m):
    """All norm-one cosets in (1 + pi^n O_D)/(1 + pi^m O_D) by filtering every
    candidate digit pattern through the reduced norm.  Exponential; tiny cases."""
    p, de = ctx.p, ctx.de
    slots = []
    for k in range(n, m):
        slots.append(k)
    Q = GroupQuotient(ctx, n, m)
    out = []
    total = ctx.dw * len(slots)
    for idx in range(p**total):
        x = ctx.zero()
        t = idx
        for k in slots:
            j, lev = k % de, k // de
            for c in range(ctx.dw):
                x[j, c] = (x[j, c] + (t % p) * p**lev) % ctx.q
                t //= p
        g = da.add(ctx, ctx.one(), x)
        if Q.is_member(g):
            out.append(Q.reduce(g))
    return out
