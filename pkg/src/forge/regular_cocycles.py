"""Delta-invariant and regular 2-cocycles of g_N, N = d f + 1, with values in
p^-s Z/Z (stored as integers mod p^s).

A homogeneous bilinear piece C(a pi^i, b pi^j) is encoded by lambda_ij in
p^-s O/O through tr(lambda_ij a sigma^i(b)).  A regular cocycle is fixed by
its defining sequence kappa_n (n >= 2f + 1):

    lambda_ij = kappa_{(i+j)/d}(i) if d | i + j, else 0,
    kappa(i)  = kappa + sigma(kappa) + ... + sigma^(i-1)(kappa).

Compatibility:
    (C1) kappa_{n+e} = p * sum_k c_k kappa_{n+k}
    (C2) n * Tr(kappa_n) = 0, Tr the trace from W to F_ur.

All cocycles live on the free quotient g_N / g_(N + de s) = g_N / p^s g_N,
so CE cochains over Z/p^s describe cocycles of g_N exactly.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import modlinalg as ml
from .cohomology import CEComplex
from .lie_congruence import LieQuotient
from .norm_one_group import delta_generator, delta_order
from .padic_arith import (NoSolution, TorsionElem, abs_trace, hilbert90_solve,
                          trace_dual_solve, trace_form_table, trace_w_over_f)


class NotRegular(ValueError):
    pass


class IncompatibleSequence(ValueError):
    pass


# ---------------------------------------------------------------- setup

class RegularSetup:
    """g_N / g_(N + de s) with N = d f + 1 and its CE complex over Z/p^s."""

    def __init__(self, ctx, f, s):
        if f < 1 or s < 1:
            raise ValueError("need f >= 1 and s >= 1")
        if s >= ctx.K:
            raise ValueError(f"level s={s} needs K > s (got K={ctx.K})")
        self.ctx = ctx
        self.f = f
        self.s = s
        self.N = ctx.d * f + 1
        self.lie = LieQuotient(ctx, self.N, self.N + ctx.de * s)
        self.ce = CEComplex(self.lie.lie_ring, s)
        self.q = ctx.p**s

    @cached_property
    def upper(self):
        """g_2N / g_(2N + de s): contains every bracket of two elements."""
        return LieQuotient(self.ctx, 2 * self.N, 2 * self.N + self.ctx.de * self.s)

    @property
    def p(self):
        return self.ctx.p

    @property
    def n_first(self):
        return 2 * self.f + 1

    @property
    def n_max(self):
        """Past this index every compatible kappa_n vanishes at level s."""
        return 2 * self.f + self.ctx.e * (self.s + 1)

    @cached_property
    def delta(self):
        return delta_generator(self.ctx)

    @cached_property
    def delta_matrix(self):
        return self.lie.delta_action_matrix(self.delta)

    @cached_property
    def trace_matrix(self):
        R = self.ctx.ring
        return np.stack([trace_w_over_f(R, self.ctx.f0, e) for e in np.eye(R.dw, dtype=np.int64)], axis=1)

    def Tr(self, a, level=None):
        q = self.p ** (self.s if level is None else level)
        return trace_w_over_f(self.ctx.ring, self.ctx.f0, a) % q

    def coords(self, i, a):
        """Coordinates of a pi^i in the quotient."""
        return self.lie.graded_to_coords({i: a})

    def value(self, C, i, a, j, b):
        return self.ce.evaluate(C, self.coords(i, a), self.coords(j, b))

    def table(self, C, i, j):
        """E[t, u] = C(a_t pi^i, b_u pi^j) over the O_i and O_j bases."""
        Bi, Bj = self.lie.grade_basis(i), self.lie.grade_basis(j)
        F = self.ce.full_matrix(C)
        Ui = np.stack([self.coords(i, a) for a in Bi]) % self.q
        Uj = np.stack([self.coords(j, b) for b in Bj]) % self.q
        return ml.matmul_mod(ml.matmul_mod(Ui, F, self.q), Uj.T.copy(), self.q)

    def delta_invariant(self, C):
        A = self.ce.action_matrix(self.delta_matrix)
        C = np.asarray(C, dtype=np.int64) % self.q
        return bool(np.array_equal(ml.matmul_mod(A, C[:, None], self.q)[:, 0], C))


# ---------------------------------------------------------------- sequences

def kappa_sum(ctx, kappa, i, q):
    """kappa(i) = sum_{k < i} sigma^k(kappa); uses sigma^d = 1."""
    d = ctx.d
    R = ctx.ring
    full, rest = divmod(i, d)
    out = trace_w_over_f(R, ctx.f0, kappa) * full
    for k in range(rest):
        out = out + ctx.sigma(kappa, k)
    return out % q


def c1_step(ctx, window, q):
    """p * sum_k c_k kappa_{n+k} for window = [kappa_n, ..., kappa_{n+e-1}]."""
    R = ctx.ring
    acc = R.zero()
    for k, kap in enumerate(window):
        acc = acc + R.mul(ctx.c(k), kap)
    return (ctx.p * acc) % q


@dataclass
class DefiningSequence:
    """kappa_n in p^-s O/O for n in [2f + 1, n_max], as integer vectors mod p^s."""
    setup: RegularSetup
    values: dict = field(default_factory=dict)

    @classmethod
    def from_initial(cls, setup, initial):
        """Extend kappa_{2f+1..2f+e} by (C1)."""
        ctx, q = setup.ctx, setup.q
        if len(initial) != ctx.e:
            raise ValueError(f"need e={ctx.e} initial terms")
        vals = {}
        for k, v in enumerate(initial):
            vals[setup.n_first + k] = np.asarray(v, dtype=np.int64) % q
        for n in range(setup.n_first + ctx.e, setup.n_max + 1):
            vals[n] = c1_step(ctx, [vals[n - ctx.e + k] for k in range(ctx.e)], q)
        return cls(setup, vals)

    @classmethod
    def zero(cls, setup):
        return cls.from_initial(setup, [setup.ctx.ring.zero()] * setup.ctx.e)

    def __getitem__(self, n):
        if n < self.setup.n_first:
            raise KeyError(n)
        if n > self.setup.n_max:
            return self.setup.ctx.ring.zero()
        return self.values[n]

    def elem(self, n):
        return TorsionElem(self.setup.s, self[n])

    def initial(self):
        return [self[self.setup.n_first + k] for k in range(self.setup.ctx.e)]

    def lam(self, i, j):
        ctx = self.setup.ctx
        if (i + j) % ctx.d:
            return ctx.ring.zero()
        return kappa_sum(ctx, self[(i + j) // ctx.d], i, self.setup.q)

    def sub(self, other):
        return DefiningSequence(self.setup, {n: (v - other.values[n]) % self.setup.q
                                             for n, v in self.values.items()})

    def scale(self, k):
        return DefiningSequence(self.setup, {n: (k * v) % self.setup.q for n, v in self.values.items()})

    def torsion_level(self):
        """Least v with p^v kappa_n = 0 for all n."""
        p, s = self.setup.p, self.setup.s
        v = 0
        for val in self.values.values():
            val = np.asarray(val) % p**s
            while v < s and (val * p**v % p**s).any():
                v += 1
        return v

    def to_json(self):
        return {"s": self.setup.s, "f": self.setup.f,
                "kappa": {str(n): [int(x) for x in v] for n, v in sorted(self.values.items())}}

    @classmethod
    def from_json(cls, setup, data):
        if data["s"] != setup.s or data["f"] != setup.f:
            raise ValueError("sequence was stored for a different (f, s)")
        return cls(setup, {int(n): np.asarray(v, dtype=np.int64) % setup.q for n, v in data["kappa"].items()})


def validate_compatible(seq):
    """(ok, message) for (C1) and (C2) on the stored range; the message names
    the first violated condition and index."""
    setup = seq.setup
    ctx, q = setup.ctx, setup.q
    ns = sorted(seq.values)
    if ns != list(range(setup.n_first, setup.n_max + 1)):
        return False, "sequence must be stored on [2f+1, n_max]"
    for n in ns:
        tgt = n + ctx.e
        window = [seq[n + k] for k in range(ctx.e)]
        if not np.array_equal(seq[tgt] % q, c1_step(ctx, window, q)):
            return False, f"(C1) fails at n={n}"
    for n in ns:
        if ((n * setup.Tr(seq[n])) % q).any():
            return False, f"(C2) fails at n={n}"
    return True, "compatible"


def trace_bound_check(seq):
    """p^(w+1) Tr(kappa_n) = 0 for every stored n."""
    setup = seq.setup
    k = setup.p ** (setup.ctx.w + 1)
    return all(not ((k * setup.Tr(seq[n])) % setup.q).any() for n in seq.values)


def _initial_to_all(setup):
    """Matrix sending stacked initial terms (e * dw) to stacked kappa_n
    for n in [2f+1, n_max] (linear over Z/p^s)."""
    ctx = setup.ctx
    dw = ctx.dw
    cols = []
    for idx in range(ctx.e * dw):
        init = [np.zeros(dw, dtype=np.int64) for _ in range(ctx.e)]
        init[idx // dw][idx % dw] = 1
        seq = DefiningSequence.from_initial(setup, init)
        cols.append(np.concatenate([seq[n] for n in range(setup.n_first, setup.n_max + 1)]))
    return np.stack(cols, axis=1)


def compatible_basis(setup):
    """Generators (columns, e * dw rows) of the initial terms of compatible
    sequences: the kernel of the (C2) constraints after (C1) extension."""
    ctx, q = setup.ctx, setup.q
    dw = ctx.dw
    A = _initial_to_all(setup)
    T = setup.trace_matrix % q
    rows = []
    for k, n in enumerate(range(setup.n_first, setup.n_max + 1)):
        block = A[k * dw:(k + 1) * dw]
        rows.append(n * ml.matmul_mod(T, block, q) % q)
    return ml.kernel(np.vstack(rows), setup.p, setup.s)


def random_compatible(setup, rng, basis=None):
    if basis is None:
        basis = compatible_basis(setup)
    c = rng.integers(0, setup.q, basis.shape[1]).astype(np.int64)
    v = ml.matmul_mod(basis, c[:, None], setup.q)[:, 0]
    dw = setup.ctx.dw
    return DefiningSequence.from_initial(setup, [v[k * dw:(k + 1) * dw] for k in range(setup.ctx.e)])


# ---------------------------------------------------------------- build / extract

def build_regular(seq, check=True):
    """CE cochain of the regular cocycle with defining sequence seq."""
    setup = seq.setup
    if check:
        ok, msg = validate_compatible(seq)
        if not ok:
            raise IncompatibleSequence(msg)
    ctx, q = setup.ctx, setup.q
    R = ctx.ring
    gens = setup.lie.gens
    out = np.zeros(len(setup.ce.pairs), dtype=np.int64)
    for k, (x, y) in enumerate(setup.ce.pairs):
        i, _, a, _ = gens[x]
        j, _, b, _ = gens[y]
        if (i + j) % ctx.d:
            continue
        lam = seq.lam(i, j)
        out[k] = abs_trace(R, R.mul(R.mul(lam, a), ctx.sigma(b, i))) % q
    return out


def _fixed(ctx, i, j):
    return ctx.d == 2 and i % 2 == 0 and j % 2 == 0


def extract_lambda(setup, C, i, j):
    """lambda_ij(C) as a TorsionElem; raises NotRegular if no lambda fits."""
    if i < setup.N or j < setup.N:
        raise ValueError(f"grades must be at least N={setup.N}")
    E = setup.table(C, i, j)
    try:
        return trace_dual_solve(setup.ctx.ring, setup.ctx.f0, i, E, setup.s,
                                setup.lie.grade_basis(i), setup.lie.grade_basis(j),
                                fixed=_fixed(setup.ctx, i, j))
    except NoSolution as exc:
        raise NotRegular(f"pair ({i}, {j}): {exc}") from None


def lambda_table(setup, C, pairs):
    """LambdaTable over the given (i, j) pairs; irregular pairs are flagged."""
    entries, regular = {}, {}
    for (i, j) in pairs:
        try:
            entries[(i, j)] = extract_lambda(setup, C, i, j)
            regular[(i, j)] = True
        except NotRegular:
            regular[(i, j)] = False
    return LambdaTable(setup.ctx, setup.s, entries, regular)


@dataclass
class LambdaTable:
    ctx: object
    s: int
    entries: dict
    regular: dict

    def get(self, i, j):
        return self.entries.get((i, j))

    def to_json(self):
        return {"s": self.s,
                "lambda": {f"{i},{j}": [int(x) for x in v.value] for (i, j), v in sorted(self.entries.items())},
                "regular": {f"{i},{j}": bool(v) for (i, j), v in sorted(self.regular.items())}}


def _sig(ctx, v, i, q):
    return ctx.sigma(np.asarray(v, dtype=np.int64), i) % q


def relations_check(table, strict=False):
    """Check (R1) lambda_ij = -sigma^i(lambda_ji) and (R2)
    lambda_{i+j,k} = lambda_{i,j+k} + sigma^i(lambda_{j,i+k})
                   = sigma^j(lambda_{i,j+k}) + lambda_{j,i+k}
    wherever the entries exist.  (R2) is skipped when d divides i, j and k
    unless strict.  Returns {"ok", "violations"}."""
    ctx = table.ctx
    q = ctx.p**table.s
    d = ctx.d
    E = {k: np.asarray(v.value, dtype=np.int64) % q for k, v in table.entries.items()}
    bad = []
    for (i, j), lij in E.items():
        if (j, i) in E and not np.array_equal(lij, (-_sig(ctx, E[(j, i)], i, q)) % q):
            bad.append({"relation": "R1", "i": i, "j": j})
    grades = sorted({i for i, _ in E} | {j for _, j in E})
    gs = set(grades)
    for i in grades:
        for j in grades:
            for k in grades:
                if not strict and i % d == 0 and j % d == 0 and k % d == 0:
                    continue
                keys = [(i + j, k), (i, j + k), (j, i + k)]
                if not all(key in E for key in keys) or (i + j) not in gs:
                    continue
                a, b, c = (E[key] for key in keys)
                r1 = (b + _sig(ctx, c, i, q)) % q
                r2 = (_sig(ctx, b, j, q) + c) % q
                if not (np.array_equal(a, r1) and np.array_equal(a, r2)):
                    bad.append({"relation": "R2", "i": i, "j": j, "k": k})
    return {"ok": not bad, "violations": bad}


def _kappa_system(setup, n, lo):
    """Rows of kappa -> (kappa(i))_i for i in [lo, dn - lo]."""
    ctx, q = setup.ctx, setup.q
    dw = ctx.dw
    idx = list(range(lo, ctx.d * n - lo + 1))
    blocks = []
    for i in idx:
        cols = [kappa_sum(ctx, e, i, q) for e in np.eye(dw, dtype=np.int64)]
        blocks.append(np.stack(cols, axis=1))
    return idx, (np.vstack(blocks) if blocks else np.zeros((0, dw), dtype=np.int64))


def extract_kappa(setup, C, n, lo=None):
    """kappa_n from lambda_{i, dn-i}(C) = kappa_n(i) over all i in
    [lo, dn - lo] (default lo = N); the system cross-checks every i."""
    ctx = setup.ctx
    lo = setup.N if lo is None else lo
    idx, A = _kappa_system(setup, n, lo)
    if not idx:
        raise NotRegular(f"no pair (i, {ctx.d}*{n}-i) with both grades >= {lo}")
    rhs = np.concatenate([extract_lambda(setup, C, i, ctx.d * n - i).value for i in idx])
    sol = ml.solve(A, rhs % setup.q, setup.p, setup.s)
    if sol is None:
        raise NotRegular(f"lambda_(i, {ctx.d * n}-i) is not of the form kappa_{n}(i)")
    return TorsionElem(setup.s, sol % setup.q)


def defining_sequence(setup, C):
    """Defining sequence of a regular cocycle; raises NotRegular if C is not
    the regular cocycle built from it."""
    init = [extract_kappa(setup, C, setup.n_first + k).value for k in range(setup.ctx.e)]
    seq = DefiningSequence.from_initial(setup, init)
    rebuilt = build_regular(seq, check=False)
    if not np.array_equal(rebuilt, np.asarray(C, dtype=np.int64) % setup.q):
        raise NotRegular("cocycle differs from the regular cocycle of its extracted sequence")
    return seq


# ---------------------------------------------------------------- trace correction

def _solve_trace(setup, target, level):
    """y in O/p^level with Tr(y) = target mod p^level."""
    y = ml.solve(setup.trace_matrix % setup.p**level, np.asarray(target, dtype=np.int64) % setup.p**level,
                 setup.p, level)
    if y is None:
        raise AssertionError("trace W -> F_ur is not surjective (internal error)")
    return y


@dataclass
class TraceCorrection:
    C1: np.ndarray
    h: np.ndarray  # h on the generators of g_2N / g_(2N + de s), mod p^s
    u: object      # a linear form on the generators of h with C - C1 = u([., .]), or None
    theta: DefiningSequence
    mu: DefiningSequence
    v: int


def trace_correct(setup, C, seq=None):
    """Regular C1 cohomologous to the regular cocycle C with p^(w+1) C1 = 0.

    The witness h(a pi^n) = tr(a mu_(n/d)) (d | n), else 0, lives on
    g_2N, which contains every bracket, so C - C1 = h([., .]) pointwise.
    u is a linear form on the whole quotient with the same coboundary."""
    ctx, p, s, q = setup.ctx, setup.p, setup.s, setup.q
    C = np.asarray(C, dtype=np.int64) % q
    if seq is None:
        seq = defining_sequence(setup, C)
    v = seq.torsion_level()
    w1 = ctx.w + 1
    if v <= w1:
        zero = DefiningSequence.zero(setup)
        return TraceCorrection(C.copy(), np.zeros(setup.upper.rank, dtype=np.int64),
                               np.zeros(setup.lie.rank, dtype=np.int64), seq, zero, v)
    # theta: same traces as kappa, killed by p^(w+1)
    theta0 = []
    for kap in seq.initial():
        t = setup.Tr(kap)
        if (t % p ** (s - w1)).any():
            raise AssertionError("trace bound p^(w+1) Tr(kappa) = 0 fails (internal error)")
        y = _solve_trace(setup, t // p ** (s - w1), w1)
        theta0.append((y * p ** (s - w1)) % q)
    theta = DefiningSequence.from_initial(setup, theta0)
    C1 = build_regular(theta, check=True)
    # mu with kappa - theta = mu - sigma(mu), p^v mu = 0, extended by (C1)
    kp = seq.sub(theta)
    mu0 = []
    for val in kp.initial():
        if (np.asarray(val) % p ** (s - v)).any():
            raise AssertionError("kappa' not killed by p^v (internal error)")
        small = TorsionElem(v, (np.asarray(val) // p ** (s - v)) % p**v)
        m = hilbert90_solve(ctx.ring, ctx.f0, small)
        mu0.append((np.asarray(m.value) * p ** (s - v)) % q)
    mu = DefiningSequence.from_initial(setup, mu0)
    R = ctx.ring
    h = np.zeros(setup.upper.rank, dtype=np.int64)
    for idx, (i, _, a, _) in enumerate(setup.upper.gens):
        if i % ctx.d == 0:
            h[idx] = abs_trace(R, R.mul(a, mu[i // ctx.d])) % q
    u = setup.ce.coboundary_witness((C - C1) % q)
    return TraceCorrection(C1, h, u, theta, mu, v)


def bracket_upper(setup, x, y):
    """Coordinates of [x, y] in g_2N / g_(2N + de s)."""
    lie = setup.lie
    gx, gy = lie.coords_to_graded(x), lie.coords_to_graded(y)
    acc = {}
    R = setup.ctx.ring
    for i, a in gx.items():
        for j, b in gy.items():
            for k, val in lie.bracket_graded(i, a, j, b).items():
                acc[k] = R.add(acc.get(k, R.zero()), val)
    return setup.upper.graded_to_coords(acc)


def h_value(setup, h, z):
    return int(np.dot(np.asarray(h, dtype=object), np.asarray(z, dtype=object)) % setup.q)


def witness_check(setup, C, tc, rng, samples=200):
    """(C - C1)(x, y) == h([x, y]) on random pairs; returns the failures."""
    bad = []
    F = (np.asarray(C, dtype=np.int64) - tc.C1) % setup.q
    for _ in range(samples):
        x, y = setup.lie.random(rng), setup.lie.random(rng)
        lhs = setup.ce.evaluate(F, x, y)
        rhs = h_value(setup, tc.h, bracket_upper(setup, x, y))
        if lhs != rhs:
            bad.append((x.tolist(), y.tolist(), lhs, rhs))
    return bad


# ---------------------------------------------------------------- p^3 C

def p3_coefficients(setup):
    """d_k (k = 3e .. 4e-1) with p^3 = sum d_k tau^k, as O_F_ur vectors."""
    ctx = setup.ctx
    U3 = setup.lie._u_inv_powers[3]
    return [U3[ctx.d * k] % ctx.q for k in range(ctx.e)]


def p3_regularize(setup, C):
    """Defining sequence of p^3 C for a Delta-invariant cocycle C (needs f <= e):
    kappa'_n = sum_k d_k kappa_{n+k}(C) with the kappa_m read off at m >= 4f+2.
    Raises NotRegular if p^3 C is not the regular cocycle of that sequence."""
    ctx, q = setup.ctx, setup.q
    if setup.f > ctx.e:
        raise ValueError("p^3 regularization needs f <= e")
    R = ctx.ring
    dks = p3_coefficients(setup)
    kap = {}
    lo = ctx.d * setup.f + 1

    def kappa_at(m):
        if m > setup.n_max:
            return R.zero()
        if m not in kap:
            kap[m] = extract_kappa(setup, C, m, lo=lo).value
        return kap[m]

    init = []
    for n in range(setup.n_first, setup.n_first + ctx.e):
        acc = R.zero()
        for k, dk in enumerate(dks):
            acc = acc + R.mul(dk, kappa_at(n + 3 * ctx.e + k))
        init.append(acc % q)
    seq = DefiningSequence.from_initial(setup, init)
    D = (ctx.p**3 * np.asarray(C, dtype=np.int64)) % q
    if not np.array_equal(build_regular(seq, check=False), D):
        raise NotRegular("p^3 C does not match the regular cocycle of its sequence")
    return seq


# ---------------------------------------------------------------- invariant forms

def _grade_action(setup, i, delta):
    """Matrix of alpha -> alpha sigma^i(delta)/delta on the O_i basis (mod p^s)."""
    ctx, q = setup.ctx, setup.q
    R = ctx.ring
    factor = R.mul(ctx.sigma(delta, i), R.inv(delta))
    cols = []
    for b in setup.lie.grade_basis(i):
        c = setup.lie.grade_coords(i, R.mul(b, factor))
        if isinstance(c, tuple):
            c = c[0]
        cols.append(np.asarray(c) % q)
    return np.stack(cols, axis=1)


def invariant_forms(setup, i, j):
    """Basis (columns, flattened |B_i| x |B_j| tables) of Delta-invariant
    bilinear forms O_i x O_j -> Z/p^s, by direct linear solve."""
    q = setup.q
    Ai = _grade_action(setup, i, setup.delta)
    Aj = _grade_action(setup, j, setup.delta)
    # E -> Ai^T E Aj - E, row-major flattening
    M = (np.kron(Ai.T, Aj.T) - np.eye(Ai.shape[0] * Aj.shape[0], dtype=np.int64)) % q
    return ml.kernel(M, setup.p, setup.s)


def trace_family(setup, i, j):
    """Columns: tables of (a, b) -> tr(lambda a sigma^i(b)) for lambda over an O-basis."""
    ctx = setup.ctx
    Bi, Bj = setup.lie.grade_basis(i), setup.lie.grade_basis(j)
    cols = []
    for e in np.eye(ctx.dw, dtype=np.int64):
        cols.append(trace_form_table(ctx.ring, ctx.f0, i, TorsionElem(setup.s, e), Bi, Bj).reshape(-1))
    return np.stack(cols, axis=1)


def form_dimensions(setup, i, j):
    """(invariant-space dimension, trace-family dimension, every invariant form
    realized by some lambda).  Dimensions are F_p ranks, so use s = 1."""
    p, s = setup.p, setup.s
    inv = invariant_forms(setup, i, j)
    dim_inv = len(ml.image_invariants(inv, p, s)) if inv.size else 0
    fam = trace_family(setup, i, j)
    dim_fam = len(ml.image_invariants(fam, p, s))
    realized = True
    Bi, Bj = setup.lie.grade_basis(i), setup.lie.grade_basis(j)
    for col in range(inv.shape[1]):
        E = inv[:, col].reshape(len(Bi), len(Bj))
        try:
            trace_dual_solve(setup.ctx.ring, setup.ctx.f0, i, E, s, Bi, Bj)
        except NoSolution:
            realized = False
    return dim_inv, dim_fam, realized


def delta_invariant_cocycles(setup):
    """Columns spanning the Delta-invariant cocycles."""
    from .cohomology import delta_invariant_classes
    return delta_invariant_classes(setup.ce, setup.delta_matrix)


def delta_group_order(setup):
    return delta_order(setup.ctx)
