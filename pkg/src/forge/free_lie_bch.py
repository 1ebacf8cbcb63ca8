"""Free Lie algebra over Q on a few letters, truncated at degree N.

Associative side: the truncated tensor algebra, stored per degree as a
dense object array of Fractions indexed by the base-k value of the word.
Lie side: coordinates in the Lyndon basis with standard bracketing.
Coordinates are extracted triangularly: the lexicographically smallest
word of P_w is w itself with coefficient 1.
"""

import json
from fractions import Fraction
from functools import lru_cache
from math import floor

import numpy as np


class NotLieError(ValueError):
    pass


# ---------------------------------------------------------------- words

def lyndon_words(k, N):
    """All Lyndon words over range(k) of length <= N (Duval), sorted by (len, lex)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < N:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return sorted(out, key=lambda t: (len(t), t))


def is_lyndon(w):
    n = len(w)
    return all(w < w[i:] + w[:i] for i in range(1, n)) if n > 1 else n == 1


def standard_factorization(w):
    """w = uv with v the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError(f"{w} has no standard factorization")


def mobius(n):
    res, k = 1, 2
    while k * k <= n:
        if n % k == 0:
            n //= k
            if n % k == 0:
                return 0
            res = -res
        k += 1
    if n > 1:
        res = -res
    return res


def necklace_dim(k, n):
    """Dimension of the degree-n part of the free Lie algebra on k letters."""
    return sum(mobius(dd) * k ** (n // dd) for dd in range(1, n + 1) if n % dd == 0) // n


def word_index(w, k):
    i = 0
    for c in w:
        i = i * k + c
    return i


def index_word(i, n, k):
    out = []
    for _ in range(n):
        out.append(i % k)
        i //= k
    return tuple(reversed(out))


def vp_frac(x, p):
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    a, b = x.numerator, x.denominator
    while a % p == 0:
        a //= p
        v += 1
    while b % p == 0:
        b //= p
        v -= 1
    return v


# ---------------------------------------------------------------- tensors

def _zeros(n):
    a = np.empty(n, dtype=object)
    a[:] = Fraction(0)
    return a


class Tensor:
    """Truncated element of the free associative algebra Q<x_0..x_{k-1}>."""

    __slots__ = ("k", "N", "deg")

    def __init__(self, k, N, deg=None):
        self.k = k
        self.N = N
        self.deg = deg if deg is not None else [_zeros(k**d) for d in range(N + 1)]

    @classmethod
    def one(cls, k, N):
        t = cls(k, N)
        t.deg[0][0] = Fraction(1)
        return t

    @classmethod
    def letter(cls, i, k, N):
        t = cls(k, N)
        if N >= 1:
            t.deg[1][i] = Fraction(1)
        return t

    def copy(self):
        return Tensor(self.k, self.N, [a.copy() for a in self.deg])

    def __add__(self, o):
        return Tensor(self.k, self.N, [a + b for a, b in zip(self.deg, o.deg)])

    def __sub__(self, o):
        return Tensor(self.k, self.N, [a - b for a, b in zip(self.deg, o.deg)])

    def __neg__(self):
        return Tensor(self.k, self.N, [-a for a in self.deg])

    def scale(self, c):
        c = Fraction(c)
        return Tensor(self.k, self.N, [a * c for a in self.deg])

    def __mul__(self, o):
        out = Tensor(self.k, self.N)
        for a in range(self.N + 1):
            A = self.deg[a]
            if not A.any():
                continue
            for b in range(self.N + 1 - a):
                B = o.deg[b]
                if not B.any():
                    continue
                out.deg[a + b] = out.deg[a + b] + np.kron(A, B)
        return out

    def bracket(self, o):
        return self * o - o * self

    def low_degree(self):
        for d, a in enumerate(self.deg):
            if a.any():
                return d
        return None

    def is_zero(self):
        return self.low_degree() is None

    def truncate(self, M):
        """Drop degrees above M (keeps the same N)."""
        out = self.copy()
        for d in range(M + 1, self.N + 1):
            out.deg[d] = _zeros(self.k**d)
        return out

    def exp(self):
        """exp of an element without constant term."""
        if self.deg[0][0] != 0:
            raise ValueError("exp needs zero constant term")
        out = Tensor.one(self.k, self.N)
        term = Tensor.one(self.k, self.N)
        for i in range(1, self.N + 1):
            term = (term * self).scale(Fraction(1, i))
            if term.is_zero():
                break
            out = out + term
        return out

    def log(self):
        """log of an element with constant term 1."""
        if self.deg[0][0] != 1:
            raise ValueError("log needs constant term 1")
        z = self.copy()
        z.deg[0][0] = Fraction(0)
        out = Tensor(self.k, self.N)
        term = Tensor.one(self.k, self.N)
        for i in range(1, self.N + 1):
            term = term * z
            if term.is_zero():
                break
            out = out + term.scale(Fraction((-1) ** (i - 1), i))
        return out

    def equal_through(self, o, M):
        return all(np.array_equal(self.deg[d], o.deg[d]) for d in range(min(M, self.N) + 1))


# group-like helpers (elements with constant term 1)

def g_inv(g):
    return (-g.log()).exp()


def g_comm(g, h):
    """g^-1 h^-1 g h"""
    return g_inv(g) * g_inv(h) * g * h


def g_pow(g, r):
    return g.log().scale(Fraction(r)).exp()


# ---------------------------------------------------------------- Lie side

class FreeLie:
    """Lyndon basis data for k letters up to degree N."""

    _cache = {}

    def __new__(cls, k, N):
        key = (k, N)
        if key not in cls._cache:
            obj = super().__new__(cls)
            obj._init(k, N)
            cls._cache[key] = obj
        return cls._cache[key]

    def _init(self, k, N):
        self.k = k
        self.N = N
        self.words = lyndon_words(k, N)
        self.by_degree = {d: [w for w in self.words if len(w) == d] for d in range(1, N + 1)}
        self._P = {}

    def P(self, w):
        """Standard bracketing of a Lyndon word as a homogeneous vector."""
        if w not in self._P:
            if len(w) == 1:
                v = _zeros(self.k)
                v[w[0]] = Fraction(1)
            else:
                u, x = standard_factorization(w)
                a, b = self.P(u), self.P(x)
                v = np.kron(a, b) - np.kron(b, a)
            self._P[w] = v
        return self._P[w]

    def extract(self, vec, d):
        """Lyndon coordinates of a homogeneous degree-d vector; raises NotLieError."""
        vec = vec.copy()
        out = {}
        k = self.k
        nz = np.nonzero(vec)[0]
        while len(nz):
            i = int(nz[0])
            w = index_word(i, d, k)
            if not is_lyndon(w):
                raise NotLieError(f"word {w} in support is not Lyndon: not a Lie element")
            c = vec[i]
            out[w] = c
            vec = vec - self.P(w) * c
            nz = np.nonzero(vec)[0]
        return out

    def dimension_check(self):
        return all(len(self.by_degree[d]) == necklace_dim(self.k, d) for d in range(1, self.N + 1))


class LieSeries:
    """Lie element of the free algebra, in Lyndon coordinates, truncated at N."""

    def __init__(self, k, N, coeffs=None):
        self.k = k
        self.N = N
        self.coeffs = {w: Fraction(c) for w, c in (coeffs or {}).items() if c != 0}

    @property
    def basis(self):
        return FreeLie(self.k, self.N)

    @classmethod
    def letter(cls, i, k, N):
        return cls(k, N, {(i,): 1})

    @classmethod
    def from_tensor(cls, t):
        if t.deg[0][0] != 0:
            raise NotLieError("constant term present")
        B = FreeLie(t.k, t.N)
        coeffs = {}
        for d in range(1, t.N + 1):
            if t.deg[d].any():
                coeffs.update(B.extract(t.deg[d], d))
        return cls(t.k, t.N, coeffs)

    def to_tensor(self):
        t = Tensor(self.k, self.N)
        B = self.basis
        for w, c in self.coeffs.items():
            t.deg[len(w)] = t.deg[len(w)] + B.P(w) * c
        return t

    def __add__(self, o):
        c = dict(self.coeffs)
        for w, v in o.coeffs.items():
            c[w] = c.get(w, 0) + v
        return LieSeries(self.k, self.N, c)

    def __sub__(self, o):
        return self + o.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, r):
        r = Fraction(r)
        return LieSeries(self.k, self.N, {w: c * r for w, c in self.coeffs.items()})

    def bracket(self, o):
        return LieSeries.from_tensor(self.to_tensor().bracket(o.to_tensor()))

    def degree_part(self, d):
        return LieSeries(self.k, self.N, {w: c for w, c in self.coeffs.items() if len(w) == d})

    def truncate(self, M):
        return LieSeries(self.k, self.N, {w: c for w, c in self.coeffs.items() if len(w) <= M})

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, o):
        return self.k == o.k and self.coeffs == o.coeffs

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def min_excess(self, p, bound):
        """min over terms of v_p(coeff) + bound(weight); >= 0 means the
        filtration condition v_p >= -bound(weight) holds."""
        worst = None
        for w, c in self.coeffs.items():
            e = vp_frac(c, p) + bound(len(w))
            worst = e if worst is None or e < worst else worst
        return worst

    def in_L(self, p, m):
        """m-integral: v_p(coeff of weight k) >= -max(0, k - m)."""
        ex = self.min_excess(p, lambda k: max(0, k - m))
        return ex is None or ex >= 0

    def in_L_gamma(self, p):
        ex = self.min_excess(p, lambda k: (k - 1) // (p - 1))
        return ex is None or ex >= 0

    def to_json(self):
        return {word_str(w): str(c) for w, c in self.items()}


def word_str(w):
    if any(i >= 6 for i in w):
        raise ValueError("word_str supports at most six letters")
    return "".join("xyzuvw"[i] for i in w)


def word_parse(s):
    return tuple("xyzuvw".index(ch) for ch in s)


# ---------------------------------------------------------------- BCH

@lru_cache(maxsize=None)
def _phi_cached(N):
    x = Tensor.letter(0, 2, N)
    y = Tensor.letter(1, 2, N)
    return LieSeries.from_tensor((x.exp() * y.exp()).log())


def bch_phi(N):
    """Phi = log(exp(x_1) exp(x_2)) in Lyndon coordinates."""
    return _phi_cached(N)


def substitute(series, args):
    """Image of series under x_i -> args[i] (Lie series with zero constant)."""
    if len(args) < series.k:
        raise ValueError("not enough arguments")
    k, N = args[0].k, min(a.N for a in args)
    targs = [a.to_tensor() for a in args]
    memo = {}

    def ev(w):
        if w in memo:
            return memo[w]
        if len(w) == 1:
            r = targs[w[0]]
        else:
            u, v = standard_factorization(w)
            r = ev(u).bracket(ev(v))
        memo[w] = r
        return r

    total = Tensor(k, N)
    for w, c in series.items():
        if len(w) > N:
            continue
        total = total + ev(w).scale(c)
    return LieSeries.from_tensor(total)


def bch_of(a, b):
    return substitute(bch_phi(a.N), [a, b])


def psi_commutator_series(N):
    """Psi = Phi(-x_1, Phi(-x_2, Phi(x_1, x_2)))."""
    x = LieSeries.letter(0, 2, N)
    y = LieSeries.letter(1, 2, N)
    inner = bch_of(x, y)
    mid = bch_of(-y, inner)
    return bch_of(-x, mid)


def associativity_defect(N):
    """Phi(x, Phi(y, z)) - Phi(Phi(x, y), z) on three letters."""
    x, y, z = (LieSeries.letter(i, 3, N) for i in range(3))
    return bch_of(x, bch_of(y, z)) - bch_of(bch_of(x, y), z)


def chf_integrality(p, N):
    """Check v_p(coeff of weight k) >= -floor((k-1)/(p-1)) for every Lyndon
    coefficient of Phi.  Returns (ok, violations, min_excess)."""
    phi = bch_phi(N)
    bad = []
    for w, c in phi.items():
        if vp_frac(c, p) < -((len(w) - 1) // (p - 1)):
            bad.append((word_str(w), str(c)))
    return not bad, bad, phi.min_excess(p, lambda k: (k - 1) // (p - 1))


# ---------------------------------------------------------------- inversion series

def gamma_fn(n, p):
    return (n - 1) // (p - 1)


def gamma4(n):
    return max(0, n - 4)


def delta_n(n, p):
    return gamma4(n) - gamma_fn(n, p)


def left_normed_tensor(c, letters):
    """[x_{c0}, x_{c1}, ...] left-normed, with letters a list of tensors."""
    r = letters[c[0]]
    for j in c[1:]:
        r = r.bracket(letters[j])
    return r


def left_normed_basis(n, p, k=2):
    """Greedy choice of left-normed monic commutators of weight n whose
    Lyndon coordinates are independent mod p: a Z_(p)-basis of the degree-n
    part of the free Lie ring."""
    import itertools
    B = FreeLie(k, n)
    dim = necklace_dim(k, n)
    lyn = B.by_degree[n]
    pos = {w: i for i, w in enumerate(lyn)}
    letters = [Tensor.letter(i, k, n) for i in range(k)]
    chosen, rows = [], []
    for c in itertools.product(range(k), repeat=n):
        if n >= 2 and c[0] == c[1]:
            continue
        t = left_normed_tensor(c, letters) if n > 1 else letters[c[0]]
        co = B.extract(t.deg[n], n)
        row = [0] * dim
        for w, v in co.items():
            if v.denominator != 1:
                raise AssertionError("left-normed commutator with non-integral coordinates")
            row[pos[w]] = int(v)
        trial = rows + [row]
        if _rank_mod_p(trial, p) == len(trial):
            chosen.append(c)
            rows.append(row)
            if len(chosen) == dim:
                break
    if len(chosen) != dim:
        raise AssertionError("left-normed commutators failed to span")
    return chosen, rows, lyn


def _rank_mod_p(rows, p):
    M = [[x % p for x in r] for r in rows]
    rank, col = 0, 0
    ncols = len(M[0]) if M else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(M)) if M[i][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = pow(M[rank][col], -1, p)
        M[rank] = [x * inv % p for x in M[rank]]
        for i in range(len(M)):
            if i != rank and M[i][col]:
                f = M[i][col]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[rank])]
        rank += 1
    return rank


def _solve_rational(rows, target, lyn):
    """Coefficients mu with sum mu_c row_c = target (exact, square system)."""
    import sympy
    A = sympy.Matrix(rows).T
    b = sympy.Matrix([target.get(w, 0) for w in lyn])
    sol = A.LUsolve(b)
    return [Fraction(int(sympy.fraction(s)[0]), int(sympy.fraction(s)[1])) for s in sol]


def root_commutator(c, t, p, cache=None, root_weight=4):
    """R_c(t_1, t_2) in the free group-like setting: c a tuple of letters.
    Plain left-normed commutator up to root_weight, then [R_d^(1/p), t_j]."""
    if cache is not None and c in cache:
        return cache[c]
    if len(c) <= root_weight:
        r = t[c[0]]
        for j in c[1:]:
            r = g_comm(r, t[j])
    else:
        inner = root_commutator(c[:-1], t, p, cache, root_weight)
        r = g_comm(g_pow(inner, Fraction(1, p)), t[c[-1]])
    if cache is not None:
        cache[c] = r
    return r


class InversionTables:
    """Exponent tables for S_A and S_B."""

    def __init__(self, p, N, a, b, basis, root_weight=4):
        self.p = p
        self.N = N
        self.root_weight = root_weight
        self.a = a  # n -> list of (c, exponent Fraction)
        self.b = b
        self.basis = basis

    def required_valuation(self, n):
        if self.root_weight == 4:
            return max(0, delta_n(n, self.p))
        return 0

    def exponents_ok(self):
        """Every exponent has v_p >= delta_n (and is p-integral)."""
        for table in (self.a, self.b):
            for n, items in table.items():
                for c, e in items:
                    if e != 0 and vp_frac(e, self.p) < self.required_valuation(n):
                        return False
        return True

    def to_json(self):
        def enc(tab):
            return {str(n): [[word_str(c), str(e)] for c, e in items] for n, items in tab.items()}
        return {"p": self.p, "N": self.N, "root_weight": self.root_weight,
                "S_A": enc(self.a), "S_B": enc(self.b),
                "delta": {str(n): delta_n(n, self.p) for n in range(2, self.N + 1)},
                "basis": {str(n): [word_str(c) for c in cs] for n, cs in self.basis.items()}}

    @classmethod
    def from_json(cls, data):
        def dec(tab):
            return {int(n): [(word_parse(c), Fraction(e)) for c, e in items] for n, items in tab.items()}
        basis = {int(n): [word_parse(c) for c in cs] for n, cs in data.get("basis", {}).items()}
        return cls(data["p"], data["N"], dec(data["S_A"]), dec(data["S_B"]), basis,
                   data.get("root_weight", 4))


def _degree_vector_coeffs(t, n):
    B = FreeLie(t.k, t.N)
    return B.extract(t.deg[n], n)


def inversion_coefficients(N, p, root_weight=4):
    """Build a_n (n = 2..N) and b_n (n = 3..N) by defect extraction.

    root_weight=4 gives the powerful-group tables (root commutators from
    weight 5 on, exponents lambda_c p^delta_n).  A larger root_weight gives
    tables with plain commutators, p-integral for n < p."""
    k = 2
    x = [Tensor.letter(i, k, N) for i in range(k)]
    t = [xi.exp() for xi in x]
    cache = {}
    basis = {}
    a_tab, b_tab = {}, {}

    targetA = (x[0] + x[1]).exp()
    targetB = x[0].bracket(x[1]).exp()
    for tab, target, start, n0 in ((a_tab, targetA, t[0] * t[1], 2),
                                   (b_tab, targetB, g_comm(t[0], t[1]), 3)):
        cur = start
        for n in range(n0, N + 1):
            if n not in basis:
                basis[n] = left_normed_basis(n, p)
            chosen, rows, lyn = basis[n]
            g = g_inv(cur) * target
            low = g.low_degree()
            if low is not None and 0 < low < n:
                raise AssertionError("defect has low-degree terms")
            dvec = g.deg[n]
            target_coeffs = FreeLie(k, N).extract(dvec, n) if dvec.any() else {}
            mu = _solve_rational(rows, target_coeffs, lyn) if target_coeffs else [Fraction(0)] * len(chosen)
            items = []
            for c, m_c in zip(chosen, mu):
                if m_c != 0:
                    floor_v = -gamma_fn(n, p) if root_weight == 4 else (0 if n < p else None)
                    if floor_v is not None and vp_frac(m_c, p) < floor_v:
                        raise AssertionError(f"defect coefficient {m_c} of {c} exceeds the p^gamma(n) bound")
                e = m_c * p ** max(0, n - root_weight)
                items.append((c, e))
                if e:
                    cur = cur * g_pow(root_commutator(c, t, p, cache, root_weight), e)
            tab[n] = items
    return InversionTables(p, N, a_tab, b_tab, {n: v[0] for n, v in basis.items()}, root_weight)


def reconstruction_check(tables):
    """Exp(x+y) = Exp x Exp y prod a_n and Exp[x,y] = [Exp x, Exp y] prod b_n
    through degree N."""
    N, p = tables.N, tables.p
    rw = tables.root_weight
    x = [Tensor.letter(i, 2, N) for i in range(2)]
    t = [xi.exp() for xi in x]
    cache = {}
    ga = t[0] * t[1]
    for n in sorted(tables.a):
        for c, e in tables.a[n]:
            if e:
                ga = ga * g_pow(root_commutator(c, t, p, cache, rw), e)
    gb = g_comm(t[0], t[1])
    for n in sorted(tables.b):
        for c, e in tables.b[n]:
            if e:
                gb = gb * g_pow(root_commutator(c, t, p, cache, rw), e)
    okA = ga.equal_through((x[0] + x[1]).exp(), N)
    okB = gb.equal_through(x[0].bracket(x[1]).exp(), N)
    return okA, okB


def dump_tables(path, tables, phi, psi):
    data = {"phi": phi.to_json(), "psi": psi.to_json(), "inversion": tables.to_json()}
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
