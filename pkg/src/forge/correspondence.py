"""Exp/log correspondences between finite Lie rings and finite p-groups.

Two regimes:

* class < p (Lazard): the truncated BCH series Phi' turns a Lie ring into a
  group; inverse Hausdorff formulas with ordinary commutators turn it back.
  On congruence quotients the maps are the truncated series Exp', Log'.
* powerful p-central (exp_ppc / log_ppc): Phi is evaluated with repeated
  division by p; the inverse uses root commutators R_c built with p-th roots.

Groups are duck-typed objects with identity/mul/inv/pow/equal/key, an
attribute ``p`` and ``exp_log`` (log_p of an exponent bound), and
optionally ``root`` (some y with y^p = g).
"""

import os
import json
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import division_algebra as da
from . import free_lie_bch as fl
from .lie_congruence import FiniteLieRing, LieQuotient
from .norm_one_group import GroupQuotient, PrecisionError, _fact


class CorrespondenceError(ValueError):
    pass


def _frac_to_mod(c, p, q):
    c = Fraction(c)
    if c.denominator % p == 0:
        raise CorrespondenceError(f"coefficient {c} is not p-integral")
    return c.numerator * pow(c.denominator, -1, q) % q


def _vp(x, p):
    return fl.vp_frac(x, p)


# ---------------------------------------------------------------- series evaluation

def _exp_log_of_ring(L):
    q = int(L.q)
    E = 0
    while q > 1:
        q //= L.p
        E += 1
    return E


def eval_series_plain(series, L, args):
    """Sum lambda_w P_w(args) for a series with p-integral coefficients."""
    p, q = L.p, int(L.q)
    memo = {}

    def ev(w):
        if w not in memo:
            if len(w) == 1:
                memo[w] = args[w[0]]
            else:
                u, v = fl.standard_factorization(w)
                memo[w] = L.bracket(ev(u), ev(v))
        return memo[w]

    out = L.zero()
    for w, c in series.items():
        k = _frac_to_mod(c, p, q)
        if k:
            out = L.add(out, L.scale(k, ev(w)))
    return out


def p_divide(L, v, policy="low", rng=None):
    """Some x with p x = v in a FiniteLieRing; policy picks the Omega-translate."""
    v = L.reduce(v)
    if (v % L.p).any():
        raise CorrespondenceError("p-division failed: element not in pL (input not powerful?)")
    x = v // L.p
    if policy == "low":
        return x
    if policy == "high":
        return L.reduce(x + L.mods // L.p)
    if policy == "random":
        return L.reduce(x + (L.mods // L.p) * rng.integers(0, L.p, L.rank))
    raise ValueError(f"unknown policy {policy}")


def ppc_degree_bound(p, E):
    """Largest weight k whose term lambda p^(k-2) [.,.] can survive in exponent p^E,
    using v_p(lambda) >= -floor((k-1)/(p-1))."""
    k = 2
    last = 1
    while k < 10 * (E + 4) * p:
        if k - 2 - (k - 1) // (p - 1) < E:
            last = k
        k += 1
    return last


def eval_series_ppc(series, L, args, policy="low", rng=None):
    """Value of a 3-integral series on a powerful p-central FiniteLieRing.

    A weight-k term lambda * [y, z] (y, z of weights i, j) is evaluated as
    (lambda p^(k-2)) [D(y), D(z)] where D(c) = c / p^(wt c - 1) is formed by
    repeated p-division."""
    p = L.p
    if p < 5:
        raise CorrespondenceError("powerful p-central evaluation needs p >= 5")
    if not series.in_L(p, 3):
        raise CorrespondenceError("series is not 3-integral")
    q = int(L.q)
    E = _exp_log_of_ring(L)
    memo = {}

    def D(w):
        if w not in memo:
            if len(w) == 1:
                memo[w] = L.reduce(args[w[0]])
            else:
                u, v = fl.standard_factorization(w)
                memo[w] = p_divide(L, L.bracket(D(u), D(v)), policy, rng)
        return memo[w]

    out = L.zero()
    for w, c in series.items():
        k = len(w)
        if k == 1:
            out = L.add(out, L.scale(_frac_to_mod(c, p, q), D(w)))
            continue
        mu = Fraction(c) * p ** (k - 2)
        if _vp(mu, p) >= E:
            continue
        u, v = fl.standard_factorization(w)
        out = L.add(out, L.scale(_frac_to_mod(mu, p, q), L.bracket(D(u), D(v))))
    return out


# ---------------------------------------------------------------- exp side

class ExpGroup:
    """exp(L) for a powerful p-central L: carrier L, product Phi(u, v)."""

    def __init__(self, L, policy="low", rng=None, degree=None):
        self.L = L
        self.p = L.p
        self.exp_log = _exp_log_of_ring(L)
        self.degree = degree or max(2, ppc_degree_bound(L.p, self.exp_log))
        self.phi = fl.bch_phi(self.degree)
        self.policy = policy
        self.rng = rng

    def identity(self):
        return self.L.zero()

    def mul(self, u, v):
        return eval_series_ppc(self.phi, self.L, [u, v], self.policy, self.rng)

    def inv(self, u):
        return self.L.neg(u)

    def pow(self, u, k):
        return self.L.scale(int(k), u)

    def root(self, u):
        return p_divide(self.L, u, self.policy, self.rng)

    def comm(self, g, h):
        return self.mul(self.mul(self.inv(g), self.inv(h)), self.mul(g, h))

    def equal(self, a, b):
        return np.array_equal(self.L.reduce(a), self.L.reduce(b))

    def key(self, u):
        return self.L.key(u)

    def random(self, rng):
        return self.L.random(rng)


def exp_ppc(L, policy="low", rng=None):
    if L.p < 5:
        raise CorrespondenceError("exp_ppc needs p >= 5")
    if not L.is_powerful():
        raise CorrespondenceError("Lie ring is not powerful")
    if not L.is_p_central():
        raise CorrespondenceError("Lie ring is not p-central")
    return ExpGroup(L, policy, rng)


class LazardGroup:
    """Group of a Lie ring of class < p via the truncated series Phi'."""

    def __init__(self, L):
        self.L = L
        self.p = L.p
        self.exp_log = _exp_log_of_ring(L)
        self.phi = fl.bch_phi(self.p - 1)

    def identity(self):
        return self.L.zero()

    def mul(self, u, v):
        return eval_series_plain(self.phi, self.L, [u, v])

    def inv(self, u):
        return self.L.neg(u)

    def pow(self, u, k):
        return self.L.scale(int(k), u)

    def equal(self, a, b):
        return self.L.key(a) == self.L.key(b)

    def key(self, u):
        return self.L.key(u)


# ---------------------------------------------------------------- log side

def _cache_dir():
    return os.environ.get("FORGE_CACHE_DIR")


@lru_cache(maxsize=None)
def inversion_tables(N, p, root_weight=4):
    """Exponent tables for S_A, S_B, cached in memory and (if FORGE_CACHE_DIR
    is set) on disk."""
    path = None
    d = _cache_dir()
    if d:
        path = os.path.join(d, f"inversion_p{p}_N{N}_r{root_weight}.json")
        if os.path.exists(path):
            with open(path) as fh:
                return fl.InversionTables.from_json(json.load(fh))
    tab = fl.inversion_coefficients(N, p, root_weight=root_weight)
    if path:
        os.makedirs(d, exist_ok=True)
        with open(path, "w") as fh:
            json.dump(tab.to_json(), fh, sort_keys=True)
    return tab


def log_degree_bound(p, E):
    """Largest n for which some a_n / b_n factor can be nontrivial in a
    powerful p-central group of exponent p^E: R_c lies in G^(p^min(n-1,3))
    and its exponent is divisible by p^max(0, delta_n)."""
    last = 2
    for n in range(2, 8 * (E + 4)):
        if min(n - 1, 3) + max(0, fl.delta_n(n, p)) < E:
            last = n
    return last


def loose_degree_bound(p, E):
    return E * (p - 1) + 4


class LogRing:
    """Lie ring structure on the carrier of a finite group G:
    g + h = g h S_A(g, h), [g, h]_Lie = [g, h] S_B(g, h), k.g = g^k."""

    def __init__(self, G, degree=None, mode="ppc"):
        self.G = G
        self.p = G.p
        self.E = G.exp_log
        self.q = self.p**self.E
        if mode == "ppc":
            self.degree = degree or max(2, log_degree_bound(self.p, self.E))
            self.root_weight = 4
        elif mode == "lazard":
            self.degree = degree or self.p - 1
            self.root_weight = self.degree
        else:
            raise ValueError(mode)
        self.mode = mode
        self.tables = inversion_tables(max(self.degree, 2), self.p, self.root_weight)

    def zero(self):
        return self.G.identity()

    def _gpow(self, g, e):
        return self.G.pow(g, _frac_to_mod(e, self.p, self.q))

    def _gcomm(self, g, h):
        G = self.G
        return G.mul(G.mul(G.inv(g), G.inv(h)), G.mul(g, h))

    def _R(self, c, t, cache):
        if c in cache:
            return cache[c]
        if len(c) <= self.root_weight:
            r = t[c[0]]
            for j in c[1:]:
                r = self._gcomm(r, t[j])
        else:
            if not hasattr(self.G, "root"):
                raise CorrespondenceError("root oracle needed for weight > 4 root commutators")
            r = self._gcomm(self.G.root(self._R(c[:-1], t, cache)), t[c[-1]])
        cache[c] = r
        return r

    def _product(self, start, table, t):
        G = self.G
        cache = {}
        g = start
        for n in sorted(table):
            if n > self.degree:
                break
            for c, e in table[n]:
                if e:
                    g = G.mul(g, self._gpow(self._R(c, t, cache), e))
        return g

    def add(self, g, h):
        return self._product(self.G.mul(g, h), self.tables.a, [g, h])

    def bracket(self, g, h):
        return self._product(self._gcomm(g, h), self.tables.b, [g, h])

    def scale(self, k, g):
        return self.G.pow(g, int(k) % self.q)

    def neg(self, g):
        return self.G.inv(g)

    def sub(self, g, h):
        return self.add(g, self.neg(h))

    def key(self, g):
        return self.G.key(g)

    def tail_factors(self, g, h, upto):
        """The a_n, b_n factors for degree(self) < n <= upto evaluated at (g, h);
        all should be trivial."""
        tab = inversion_tables(upto, self.p, self.root_weight)
        G = self.G
        cache = {}
        t = [g, h]
        out = []
        for table in (tab.a, tab.b):
            for n in sorted(table):
                if n <= self.degree:
                    continue
                for c, e in table[n]:
                    if e:
                        out.append((n, c, self._gpow(self._R(c, t, cache), e)))
        return out


def log_ppc(G, degree=None):
    return LogRing(G, degree, mode="ppc")


def log_lazard(G):
    return LogRing(G, mode="lazard")


# ---------------------------------------------------------------- congruence quotients

def _check_lazard_window(ctx, n, m):
    if not 1 <= n <= m <= ctx.p * n:
        raise PrecisionError(f"Lazard window needs 1 <= n <= m <= p n (n={n}, m={m})")
    if m > ctx.window:
        raise PrecisionError(f"m={m} exceeds the validity window {ctx.window}")


def _inv_int(i, ctx):
    return pow(i, -1, ctx.q)


def exp_prime_algebra(ctx, x, m):
    """sum_{i<p} x^i / i! mod pi^m."""
    total = ctx.one()
    xi = ctx.one()
    for i in range(1, ctx.p):
        xi = da.mul(ctx, xi, x)
        total = da.add(ctx, total, da.smul(ctx, _inv_int(_fact(i), ctx), xi))
    return da.reduce_mod(ctx, total, m)


def log_prime_algebra(ctx, g, m):
    """sum_{i<p} (-1)^(i-1) (g-1)^i / i mod pi^m."""
    x = da.sub(ctx, g, ctx.one())
    total = ctx.zero()
    xi = ctx.one()
    for i in range(1, ctx.p):
        xi = da.mul(ctx, xi, x)
        term = da.smul(ctx, _inv_int(i, ctx), xi)
        total = da.add(ctx, total, term) if i % 2 else da.sub(ctx, total, term)
    return da.reduce_mod(ctx, total, m)


class LazardPair:
    """Exp' : g_n/g_m -> G_n/G_m and its inverse Log'."""

    def __init__(self, ctx, n, m):
        _check_lazard_window(ctx, n, m)
        self.ctx = ctx
        self.n = n
        self.m = m
        self.lie = LieQuotient(ctx, n, m)
        self.group = GroupQuotient(ctx, n, m)
        self.phi_prime = fl.bch_phi(ctx.p - 1)

    def exp(self, u):
        return exp_prime_algebra(self.ctx, self.lie.to_algebra(u), self.m)

    def log(self, g):
        return self.lie.from_algebra(log_prime_algebra(self.ctx, g, self.m))

    def phi(self, u, v):
        return eval_series_plain(self.phi_prime, self.lie.lie_ring, [u, v])

    def root(self, g):
        """A p-th root in G_n/G_m via Log'; requires Log'(g) in p g_n."""
        return self.exp(p_divide(self.lie.lie_ring, self.log(g)))


def lazard_exp_prime(ctx, n, m, u):
    return LazardPair(ctx, n, m).exp(u)


def lazard_log_prime(ctx, n, m, g):
    return LazardPair(ctx, n, m).log(g)


class QuotientGroup:
    """Group interface around a GroupQuotient, with Exp'/Log' root oracle."""

    def __init__(self, pair):
        self.pair = pair
        self.Q = pair.group
        self.p = pair.ctx.p
        self.exp_log = pair.lie.T

    def identity(self):
        return self.Q.identity()

    def mul(self, g, h):
        return self.Q.mul(g, h)

    def inv(self, g):
        return self.Q.inv(g)

    def pow(self, g, k):
        return self.Q.pow(g, int(k))

    def root(self, g):
        return self.pair.root(g)

    def equal(self, g, h):
        return self.Q.equal(g, h)

    def key(self, g):
        return self.Q.key(g)


# ---------------------------------------------------------------- extensions transport

def group_to_lie_tails(ext, pair):
    """Transport a central extension of G_n/G_m by Z/p^s (an ExtGroup over the
    quotient group) to Lie tails (a, b) over g_n/g_m.

    The Lie ring of the total group is formed with the class < p inverse
    Hausdorff formulas; generator lifts are (Exp'(e_i), 0)."""
    h = pair.lie.lie_ring
    R = LogRing(ext, mode="lazard")
    r = h.rank
    lifts = [ext.lift(pair.exp(e)) for e in h.basis()]
    a = np.zeros(r, dtype=np.int64)
    for i in range(r):
        x = R.scale(int(h.mods[i]), lifts[i])
        a[i] = ext.fiber_value(x)
    b = np.zeros((r, r), dtype=np.int64)
    for i in range(r):
        for j in range(i + 1, r):
            x = R.bracket(lifts[i], lifts[j])
            for k in range(r):
                ck = int(h.C[i, j, k])
                if ck:
                    x = R.sub(x, R.scale(ck, lifts[k]))
            b[i, j] = ext.fiber_value(x)
            b[j, i] = (-b[i, j]) % ext.A
    return a % ext.A, b % ext.A


def lie_tails_to_cocycle(tails, pair, s):
    """Transport Lie tails over g_n/g_m to a group cocycle on G_n/G_m:
    Z(q1, q2) = fiber part of Phi'((Log' q1, 0), (Log' q2, 0))."""
    from .cohomology import LieExtRing
    a, b = tails
    H = LieExtRing(pair.lie.lie_ring, s, a, b)
    if H.nilpotency_bound() >= pair.ctx.p:
        raise CorrespondenceError("total Lie ring fails the class < p certification")
    phi = pair.phi_prime

    def Z(q1, q2):
        x = H.lift(pair.log(q1))
        y = H.lift(pair.log(q2))
        return H.fiber_value_after(eval_series_plain(phi, H, [x, y]))
    return Z


def ext_transport(obj, pair, s=None):
    """Dispatch: ExtGroup -> Lie tails; tails (a, b) -> group cocycle."""
    if isinstance(obj, tuple):
        if s is None:
            raise ValueError("s is required to transport Lie tails")
        return lie_tails_to_cocycle(obj, pair, s)
    return group_to_lie_tails(obj, pair)
