"""Second cohomology with trivial coefficients Z/p^s.

Lie side, two flavours:

* mode "free": Chevalley-Eilenberg cochains on a free Z/p^t-module h
  (s <= t); a 2-cochain is an alternating form, stored as a vector over
  basis pairs i < j.
* mode "ring": central extensions of h as a Lie ring, where the additive
  extension may be nonsplit.  Described by tails: p^t_i e_i = a_i and
  [e_i, e_j] = sum_k C_ijk e_k + b_ij for i < j.

Group side: normalized 2-cocycles f are determined by F(x, g) = f(x, g) for
generators g via f(x, wg) = f(xw, g) + f(x, w) - f(w, g).  Tree edges of a
Cayley graph define f(x, w); the remaining edges give the linear
constraints.
"""

import itertools
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import modlinalg as ml


class CohomologyError(ValueError):
    pass


@dataclass
class H2Result:
    p: int
    s: int
    invariants: list
    representatives: list = field(default_factory=list)
    Z: np.ndarray = None
    B: np.ndarray = None

    @property
    def order(self):
        return self.p ** sum(self.invariants)

    @property
    def exponent(self):
        return self.p ** max(self.invariants) if self.invariants else 1

    def to_json(self):
        return {"p": self.p, "s": self.s, "invariants": [int(x) for x in self.invariants],
                "order_log_p": int(sum(self.invariants))}


def _pairs(r):
    return [(i, j) for i in range(r) for j in range(i + 1, r)]


# ---------------------------------------------------------------- CE (free mode)

class CEComplex:
    """Chevalley-Eilenberg 2-cochains of a free Lie algebra over Z/p^t."""

    def __init__(self, h, s):
        if len(set(int(t) for t in h.exps)) > 1:
            raise CohomologyError("CE mode needs a free Z/p^t-module (equal generator orders)")
        t = int(h.exps[0]) if h.rank else s
        if s > t:
            raise CohomologyError(f"coefficients Z/p^{s} are not a Z/p^{t}-module")
        self.h = h
        self.p = h.p
        self.s = s
        self.q = h.p**s
        self.r = h.rank
        self.pairs = _pairs(self.r)
        self.index = {pr: k for k, pr in enumerate(self.pairs)}

    def form_value(self, f, i, j):
        if i == j:
            return 0
        if i < j:
            return int(f[self.index[(i, j)]])
        return -int(f[self.index[(j, i)]])

    def evaluate(self, f, u, v):
        """f(u, v) for coordinate vectors u, v."""
        F = self.full_matrix(f)
        u = np.asarray(u, dtype=np.int64) % self.q
        v = np.asarray(v, dtype=np.int64) % self.q
        return int(ml.matmul_mod(ml.matmul_mod(u[None, :], F, self.q), v[:, None], self.q)[0, 0])

    def full_matrix(self, f):
        F = np.zeros((self.r, self.r), dtype=np.int64)
        for (i, j), k in self.index.items():
            F[i, j] = f[k] % self.q
            F[j, i] = (-f[k]) % self.q
        return F

    def from_matrix(self, F):
        return np.array([F[i, j] for (i, j) in self.pairs], dtype=np.int64) % self.q

    def cocycle_rows(self):
        C = self.h.C % self.q
        rows = []
        for i, j, k in itertools.combinations(range(self.r), 3):
            row = np.zeros(len(self.pairs), dtype=np.int64)
            for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                # f([e_a, e_b], e_c) = sum_l C_abl f(e_l, e_c)
                for l in np.nonzero(C[a, b])[0]:
                    if l == c:
                        continue
                    if l < c:
                        row[self.index[(l, c)]] += C[a, b, l]
                    else:
                        row[self.index[(c, l)]] -= C[a, b, l]
            rows.append(row % self.q)
        if not rows:
            return np.zeros((0, len(self.pairs)), dtype=np.int64)
        return np.stack(rows)

    def coboundary_matrix(self):
        """Columns: f = u([., .]) for u = dual basis vectors."""
        C = self.h.C % self.q
        B = np.zeros((len(self.pairs), self.r), dtype=np.int64)
        for (i, j), k in self.index.items():
            B[k] = C[i, j]
        return B % self.q

    def coboundary(self, u):
        return ml.matmul_mod(self.coboundary_matrix(), np.asarray(u, dtype=np.int64)[:, None], self.q)[:, 0]

    def cocycles(self):
        return ml.kernel(self.cocycle_rows(), self.p, self.s)

    def is_cocycle(self, f):
        R = self.cocycle_rows()
        if R.shape[0] == 0:
            return True
        return not ml.matmul_mod(R, np.asarray(f, dtype=np.int64)[:, None] % self.q, self.q).any()

    def is_coboundary(self, f):
        return ml.in_span(self.coboundary_matrix(), f, self.p, self.s)

    def coboundary_witness(self, f):
        return ml.solve(self.coboundary_matrix(), f, self.p, self.s)

    def action_matrix(self, D):
        """Matrix of f -> f(D., D.) on pair coordinates."""
        D = np.asarray(D, dtype=np.int64) % self.q
        P = len(self.pairs)
        M = np.zeros((P, P), dtype=np.int64)
        for (i, j), row in self.index.items():
            for (k, l), col in self.index.items():
                M[row, col] = (D[k, i] * D[l, j] - D[l, i] * D[k, j]) % self.q
        return M

    def h2(self, with_reps=False):
        Z = self.cocycles()
        B = self.coboundary_matrix()
        inv = ml.quotient_invariants(Z, B, self.p, self.s)
        reps = [c for c, _ in ml.quotient_basis(Z, B, self.p, self.s)] if with_reps else []
        return H2Result(self.p, self.s, inv, reps, Z, B)


def lie_h2(h, s, mode="free", with_reps=False):
    """H^2(h, Z/p^s): mode "free" (CE on a free module) or "ring" (Lie ring
    central extensions)."""
    if mode == "free":
        return CEComplex(h, s).h2(with_reps)
    if mode == "ring":
        return LieRingExt(h, s).h2(with_reps)
    raise ValueError(f"unknown mode {mode}")


# ---------------------------------------------------------------- ring mode

class LieExtRing:
    """The Lie ring with tails (a, b) over h: elements (digits x, fiber alpha)."""

    def __init__(self, h, s, a, b):
        self.h = h
        self.p = h.p
        self.s = s
        self.A = h.p**s
        self.r = h.rank
        self.a = np.asarray(a, dtype=object) % self.A
        self.b = np.asarray(b, dtype=object) % self.A
        self.mods = [int(m) for m in h.mods]
        self.q = int(h.q) * self.A
        self.pairs = _pairs(self.r)

    def zero(self):
        return (tuple([0] * self.r), 0)

    def lift(self, x):
        return (tuple(int(v) % m for v, m in zip(x, self.mods)), 0)

    def fiber(self, alpha):
        return (tuple([0] * self.r), int(alpha) % self.A)

    def key(self, u):
        return u

    def reduce(self, u):
        return u

    def _normalize(self, N, alpha):
        x = []
        for k in range(self.r):
            c, rem = divmod(int(N[k]), self.mods[k])
            x.append(rem)
            alpha += c * int(self.a[k])
        return (tuple(x), alpha % self.A)

    def add(self, u, v):
        N = [u[0][k] + v[0][k] for k in range(self.r)]
        return self._normalize(N, u[1] + v[1])

    def neg(self, u):
        return self._normalize([-x for x in u[0]], -u[1])

    def sub(self, u, v):
        return self.add(u, self.neg(v))

    def scale(self, k, u):
        k = int(k)
        N = [k * x for x in u[0]]
        return self._normalize(N, k * u[1])

    def bracket(self, u, v):
        x, y = u[0], v[0]
        C = self.h.C
        N = [0] * self.r
        alpha = 0
        for (i, j) in self.pairs:
            z = x[i] * y[j] - x[j] * y[i]
            if not z:
                continue
            alpha += z * int(self.b[i, j])
            for k in range(self.r):
                c = int(C[i, j, k])
                if c:
                    N[k] += z * c
        return self._normalize(N, alpha)

    def fiber_value_after(self, u):
        return u[1]

    def nilpotency_bound(self):
        """Class of h plus one (upper bound for the class of the extension)."""
        c = self.h.nilpotency_class()
        return (c if c is not None else 10**6) + 1


class LieRingExt:
    """Tails-based Ext of a finite Lie ring h by Z/p^s."""

    def __init__(self, h, s):
        self.h = h
        self.p = h.p
        self.s = s
        self.q = h.p**s
        self.r = h.rank
        self.pairs = _pairs(self.r)
        self.pidx = {pr: k for k, pr in enumerate(self.pairs)}
        self.nvar = self.r + len(self.pairs)

    # symbolic fiber values: vectors of length nvar over Z (python ints)
    def _avar(self, k):
        v = np.zeros(self.nvar, dtype=object)
        v[k] = 1
        return v

    def _bvar(self, i, j):
        v = np.zeros(self.nvar, dtype=object)
        v[self.r + self.pidx[(i, j)]] = 1
        return v

    def _norm(self, N, form):
        x = []
        for k in range(self.r):
            c, rem = divmod(int(N[k]), int(self.h.mods[k]))
            x.append(rem)
            if c:
                form = form + c * self._avar(k)
        return x, form

    def _bracket(self, u, v):
        (x, fx), (y, fy) = u, v
        C = self.h.C
        N = [0] * self.r
        form = np.zeros(self.nvar, dtype=object)
        for (i, j) in self.pairs:
            z = x[i] * y[j] - x[j] * y[i]
            if not z:
                continue
            form = form + z * self._bvar(i, j)
            for k in range(self.r):
                c = int(C[i, j, k])
                if c:
                    N[k] += z * c
        return self._norm(N, form)

    def _add(self, u, v):
        return self._norm([a + b for a, b in zip(u[0], v[0])], u[1] + v[1])

    def _gen(self, i):
        x = [0] * self.r
        x[i] = 1
        return (x, np.zeros(self.nvar, dtype=object))

    def cocycle_rows(self):
        rows = []
        h = self.h
        for i, j in self.pairs:
            eij = self._bracket(self._gen(i), self._gen(j))
            for mult in (int(h.mods[i]), int(h.mods[j])):
                x, form = self._norm([mult * c for c in eij[0]], mult * eij[1])
                if any(x):
                    raise CohomologyError("structure constants inconsistent with generator orders")
                rows.append(form)
        for i, j, k in itertools.combinations(range(self.r), 3):
            tot = ([0] * self.r, np.zeros(self.nvar, dtype=object))
            for (a, b, c) in ((i, j, k), (j, k, i), (k, i, j)):
                tot = self._add(tot, self._bracket(self._bracket(self._gen(a), self._gen(b)), self._gen(c)))
            if any(tot[0]):
                raise CohomologyError("h fails Jacobi")
            rows.append(tot[1])
        if not rows:
            return np.zeros((0, self.nvar), dtype=np.int64)
        return np.array([[int(v) % self.q for v in r] for r in rows], dtype=np.int64)

    def coboundary_matrix(self):
        """Columns: e_l -> e_l + c_l gives a_l += p^t_l c_l, b_ij -= C_ijl c_l."""
        B = np.zeros((self.nvar, self.r), dtype=np.int64)
        for l in range(self.r):
            B[l, l] = int(self.h.mods[l]) % self.q
            for (i, j), k in self.pidx.items():
                B[self.r + k, l] = (-int(self.h.C[i, j, l])) % self.q
        return B

    def vector(self, tails):
        a, b = tails
        v = np.zeros(self.nvar, dtype=np.int64)
        v[:self.r] = np.asarray(a, dtype=np.int64) % self.q
        for (i, j), k in self.pidx.items():
            v[self.r + k] = int(b[i, j]) % self.q
        return v

    def tails(self, v):
        a = np.asarray(v[:self.r], dtype=np.int64) % self.q
        b = np.zeros((self.r, self.r), dtype=np.int64)
        for (i, j), k in self.pidx.items():
            b[i, j] = v[self.r + k] % self.q
            b[j, i] = (-v[self.r + k]) % self.q
        return a, b

    def is_cocycle(self, v):
        R = self.cocycle_rows()
        return R.shape[0] == 0 or not ml.matmul_mod(R, np.asarray(v, dtype=np.int64)[:, None] % self.q, self.q).any()

    def h2(self, with_reps=False):
        Z = ml.kernel(self.cocycle_rows(), self.p, self.s)
        B = self.coboundary_matrix()
        inv = ml.quotient_invariants(Z, B, self.p, self.s)
        reps = [c for c, _ in ml.quotient_basis(Z, B, self.p, self.s)] if with_reps else []
        return H2Result(self.p, self.s, inv, reps, Z, B)

    def total_ring(self, v):
        a, b = self.tails(v)
        return LieExtRing(self.h, self.s, a, b)


# ---------------------------------------------------------------- group side

class GroupTable:
    """A finite group by multiplication table; index 0 is the identity."""

    def __init__(self, elements, mul_table, gens, p, keys=None):
        self.elements = elements
        self.M = np.asarray(mul_table, dtype=np.int64)
        self.size = len(elements)
        self.gens = list(gens)
        self.p = p
        self.keys = keys
        self.index = {k: i for i, k in enumerate(keys)} if keys is not None else None
        inv = np.zeros(self.size, dtype=np.int64)
        ids = np.nonzero(self.M == 0)
        inv[ids[0]] = ids[1]
        self.inv_table = inv

    @classmethod
    def from_group(cls, G, elements, p, gens=None):
        """G provides mul/key/identity; elements must contain the identity."""
        ident = G.key(G.identity())
        keys = [G.key(x) for x in elements]
        order = sorted(range(len(keys)), key=lambda i: (keys[i] != ident, i))
        elements = [elements[i] for i in order]
        keys = [keys[i] for i in order]
        index = {k: i for i, k in enumerate(keys)}
        n = len(elements)
        M = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                M[i, j] = index[G.key(G.mul(elements[i], elements[j]))]
        if gens is None:
            gens = cls._greedy_gens(M)
        else:
            gens = [index[G.key(g)] for g in gens]
        return cls(elements, M, gens, p, keys)

    @staticmethod
    def _closure(M, gens):
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(M[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    @classmethod
    def _greedy_gens(cls, M):
        n = M.shape[0]
        gens = []
        span = {0}
        for x in range(1, n):
            if x not in span:
                gens.append(x)
                span = cls._closure(M, gens)
                if len(span) == n:
                    break
        return gens

    def mul(self, i, j):
        return int(self.M[i, j])

    def inv(self, i):
        return int(self.inv_table[i])

    def identity(self):
        return 0

    def key(self, i):
        return i

    def pow(self, i, k):
        k = int(k)
        if k < 0:
            i, k = self.inv(i), -k
        out, base = 0, i
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def is_abelian(self):
        return np.array_equal(self.M, self.M.T)


class GroupH2:
    """Tree-reduced 2-cocycle space of a GroupTable with coefficients Z/p^s."""

    def __init__(self, Q, s, max_entries=6 * 10**7):
        self.Q = Q
        self.p = Q.p
        self.s = s
        self.q = Q.p**s
        n, r = Q.size, len(Q.gens)
        self.nvar = n * r
        if n * n * self.nvar > max_entries:
            raise CohomologyError(f"|Q|={n} exceeds the group_h2 size bound")
        self._build()

    def var(self, x, gi):
        return x * len(self.Q.gens) + gi

    def _build(self):
        Q = self.Q
        n, r, U = Q.size, len(Q.gens), self.nvar
        # BFS tree
        parent = {0: None}
        order = [0]
        dq = deque([0])
        tree_edges = set()
        while dq:
            w = dq.popleft()
            for gi, g in enumerate(Q.gens):
                v = Q.mul(w, g)
                if v not in parent:
                    parent[v] = (w, gi)
                    tree_edges.add((w, gi))
                    order.append(v)
                    dq.append(v)
        if len(parent) != n:
            raise CohomologyError("generators do not generate Q")
        T = np.zeros((n, n, U), dtype=np.int64)  # T[w, x] = form of f(x, w)
        E = np.zeros((n, r, U), dtype=np.int64)
        for x in range(n):
            for gi in range(r):
                E[x, gi, self.var(x, gi)] = 1
        Mcol = Q.M  # Mcol[x, w] = xw
        for v in order[1:]:
            w, gi = parent[v]
            T[v] = (T[w] + E[Mcol[:, w], gi] - E[w, gi][None, :]) % self.q
        self.T = T
        acc = ml.RowAccumulator(U, self.p, self.s, chunk=max(200, 4 * U))
        for w in range(n):
            for gi, g in enumerate(Q.gens):
                if (w, gi) in tree_edges:
                    continue
                v = Q.mul(w, g)
                rows = (T[w] + E[Mcol[:, w], gi] - E[w, gi][None, :] - T[v]) % self.q
                for row in rows:
                    if row.any():
                        acc.add(row)
        # the tree values at generators must reproduce F itself
        for gi, g in enumerate(Q.gens):
            rows = (T[g] - E[:, gi]) % self.q
            for row in rows:
                if row.any():
                    acc.add(row)
        self.constraints = acc.matrix()

    def coboundary_matrix(self):
        """Columns: u = indicator of y (y != 1), F(x, g) = u(x) + u(g) - u(xg)."""
        Q = self.Q
        n, r = Q.size, len(Q.gens)
        B = np.zeros((self.nvar, n - 1), dtype=np.int64)
        for x in range(n):
            for gi, g in enumerate(Q.gens):
                row = self.var(x, gi)
                for y in (x, g):
                    if y:
                        B[row, y - 1] += 1
                xg = Q.mul(x, g)
                if xg:
                    B[row, xg - 1] -= 1
        return B % self.q

    def cocycles(self):
        return ml.kernel(self.constraints, self.p, self.s)

    def h2(self, with_reps=False):
        Z = self.cocycles()
        B = self.coboundary_matrix()
        inv = ml.quotient_invariants(Z, B, self.p, self.s)
        reps = [c for c, _ in ml.quotient_basis(Z, B, self.p, self.s)] if with_reps else []
        return H2Result(self.p, self.s, inv, reps, Z, B)

    def full_table(self, F):
        """f(x, w) for all x, w from generator values F (vector of length nvar)."""
        F = np.asarray(F, dtype=np.int64) % self.q
        return ml.matmul_mod(self.T.reshape(-1, self.nvar), F[:, None], self.q).reshape(
            self.Q.size, self.Q.size).T.copy()

    def restrict(self, f_table):
        """Generator values F from a full table f[x, y]."""
        F = np.zeros(self.nvar, dtype=np.int64)
        for x in range(self.Q.size):
            for gi, g in enumerate(self.Q.gens):
                F[self.var(x, gi)] = f_table[x, g]
        return F % self.q

    def is_coboundary(self, f_table):
        return ml.in_span(self.coboundary_matrix(), self.restrict(f_table), self.p, self.s)


def check_group_cocycle(Q, f, q):
    """Exhaustive check of f(xy,z) + f(x,y) = f(y,z) + f(x,yz)."""
    f = np.asarray(f, dtype=np.int64) % q
    M = Q.M
    n = Q.size
    for x in range(n):
        xy = M[x]  # xy for all y
        lhs = f[xy][:, :] + f[x][:, None]
        rhs = f + f[x][M]  # f(y, z) + f(x, yz)
        if ((lhs - rhs) % q).any():
            return False
    return True


def group_h2(Q, s, with_reps=False, max_size=None):
    if max_size is not None and Q.size > max_size:
        raise CohomologyError(f"|Q|={Q.size} exceeds the configured bound {max_size}")
    return GroupH2(Q, s).h2(with_reps)


# ---------------------------------------------------------------- Delta

def delta_invariant_classes(ce, D, order=None):
    """Image of the Delta-invariant cocycles in H^2 for a CEComplex and the
    action matrix D of a generator of Delta."""
    p, s = ce.p, ce.s
    Z = ce.cocycles()
    P = len(ce.pairs)
    M = (ce.action_matrix(D) - np.eye(P, dtype=np.int64)) % ce.q
    # invariant cocycles: combinations Z c with (M Z) c = 0
    MZ = ml.matmul_mod(M, Z, ce.q) if Z.shape[1] else np.zeros((P, 0), dtype=np.int64)
    K = ml.kernel(MZ, p, s) if Z.shape[1] else np.zeros((0, 0), dtype=np.int64)
    Zinv = ml.matmul_mod(Z, K, ce.q) if K.size else np.zeros((P, 0), dtype=np.int64)
    B = ce.coboundary_matrix()
    inv = ml.quotient_invariants(Zinv, B, p, s) if Zinv.shape[1] else []
    return H2Result(p, s, inv, [], Zinv, B)


def averaging_section(ce, f, D, order):
    """Average f over <D>: (1/order) sum_k f(D^k ., D^k .).  The class of f
    must be Delta-invariant; returns (invariant cocycle, coboundary witness u)
    with f - result = u([., .])."""
    p, q = ce.p, ce.q
    if order % p == 0:
        raise CohomologyError("order of delta must be prime to p")
    f = np.asarray(f, dtype=np.int64) % q
    A = ce.action_matrix(D)
    if not ce.is_coboundary((ml.matmul_mod(A, f[:, None], q)[:, 0] - f) % q):
        raise CohomologyError("class is not Delta-invariant")
    acc = np.zeros_like(f)
    cur = f.copy()
    for _ in range(order):
        acc = (acc + cur) % q
        cur = ml.matmul_mod(A, cur[:, None], q)[:, 0]
    if not np.array_equal(cur, f):
        raise CohomologyError("action matrix order does not match")
    avg = (acc * pow(order, -1, q)) % q
    u = ce.coboundary_witness((f - avg) % q)
    if u is None:
        raise CohomologyError("averaged cocycle is not cohomologous (internal error)")
    return avg, u
