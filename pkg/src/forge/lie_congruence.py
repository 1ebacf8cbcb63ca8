"""The Lie rings g_n = sl(pi^n O_D) and their quotients g_n/g_m.

Coordinates use the window basis b * pi^i with i in [n, n + de) and b
running over a Z_p-basis of O_i (all of O when d does not divide i, the
trace-zero part otherwise).  The generator of grade i has additive order
p^t_i with t_i = ceil((m - i) / de).  Products and carries above the window
are folded back with pi^de = p * sum_k c_k pi^(dk).
"""

from functools import cached_property

import numpy as np

from . import division_algebra as da
from . import modlinalg as ml
from .padic_arith import sl_basis


def _ceil_div(a, b):
    return -((-a) // b)


class FiniteLieRing:
    """A finite Lie ring given as sum of Z/p^t_a with structure constants.

    C[a, b] is the coordinate vector of [e_a, e_b].
    """

    def __init__(self, p, exps, C, name=""):
        self.p = p
        self.exps = np.asarray(exps, dtype=np.int64)
        self.T = int(self.exps.max()) if len(self.exps) else 0
        self.q = p**self.T if self.T else 1
        self.mods = np.array([p**int(t) for t in self.exps], dtype=np.int64)
        self.C = np.asarray(C, dtype=np.int64) % self.mods[None, None, :] if len(self.exps) else np.zeros((0, 0, 0), dtype=np.int64)
        self.name = name

    @property
    def rank(self):
        return len(self.exps)

    @property
    def order(self):
        return self.p ** int(self.exps.sum())

    def zero(self):
        return np.zeros(self.rank, dtype=np.int64)

    def reduce(self, u):
        return np.asarray(u, dtype=np.int64) % self.mods

    def add(self, u, v):
        return (u + v) % self.mods

    def sub(self, u, v):
        return (u - v) % self.mods

    def neg(self, u):
        return (-u) % self.mods

    def scale(self, k, u):
        return (int(k) % self.q * u) % self.mods

    def bracket(self, u, v):
        u = np.asarray(u, dtype=np.int64) % self.mods
        v = np.asarray(v, dtype=np.int64) % self.mods
        r = self.rank
        if r == 0:
            return self.zero()
        W = (u[:, None] * v[None, :]) % self.q
        out = ml.matmul_mod(W.reshape(1, r * r), self._Cflat, self.q)[0]
        return out % self.mods

    @cached_property
    def _Cflat(self):
        return self.C.reshape(self.rank * self.rank, self.rank) % self.q

    def random(self, rng):
        return (rng.integers(0, self.q, self.rank) % self.mods).astype(np.int64)

    def elements(self):
        import itertools
        for digits in itertools.product(*[range(int(m)) for m in self.mods]):
            yield np.array(digits, dtype=np.int64)

    def key(self, u):
        return tuple(int(x) for x in self.reduce(u))

    def basis(self):
        return [np.eye(self.rank, dtype=np.int64)[a] for a in range(self.rank)]

    # module computations happen in (Z/p^T)^r via x_a -> p^(T - t_a) x_a
    def embed(self, u):
        return (np.asarray(u, dtype=np.int64) * (self.q // self.mods)) % self.q

    def check_jacobi(self):
        B = self.basis()
        for a in B:
            if self.bracket(a, a).any():
                return False
        for i in range(self.rank):
            for j in range(self.rank):
                if (self.bracket(B[i], B[j]) + self.bracket(B[j], B[i])) .any() and \
                        self.add(self.bracket(B[i], B[j]), self.bracket(B[j], B[i])).any():
                    return False
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                for k in range(j + 1, self.rank):
                    s = self.add(self.bracket(B[i], self.bracket(B[j], B[k])),
                                 self.add(self.bracket(B[j], self.bracket(B[k], B[i])),
                                          self.bracket(B[k], self.bracket(B[i], B[j]))))
                    if s.any():
                        return False
        return True

    def is_abelian(self):
        return not self.C.any()

    def is_powerful(self):
        """[L, L] inside pL: every structure constant divisible by p."""
        return not (self.C % self.p).any()

    def omega1(self):
        return [np.eye(self.rank, dtype=np.int64)[a] * (self.mods[a] // self.p) for a in range(self.rank)]

    def is_p_central(self):
        for x in self.omega1():
            for b in self.basis():
                if self.bracket(x, b).any():
                    return False
        return True

    def span(self, gens):
        """Column generators (in embedded coordinates) of the submodule."""
        if not gens:
            return np.zeros((self.rank, 0), dtype=np.int64)
        return np.stack([self.embed(g) for g in gens], axis=1)

    def lower_central_series(self, max_len=64):
        """Generators of gamma_1, gamma_2, ... until zero."""
        B = self.basis()
        series = [B]
        cur = B
        for _ in range(max_len):
            nxt = [self.bracket(x, y) for x in cur for y in B]
            nxt = [v for v in nxt if v.any()]
            if not nxt:
                series.append([])
                break
            # compress
            M = self.span(nxt)
            rows = ml.row_module(M.T, self.p, self.T)
            cur = [self._unembed(r) for r in rows]
            series.append(cur)
        return series

    def _unembed(self, x):
        # inverse of embed on elements of the image
        return (np.asarray(x, dtype=np.int64) // (self.q // self.mods)) % self.mods

    def nilpotency_class(self):
        s = self.lower_central_series()
        return len(s) - 2 if not s[-1] else None

    def to_json(self):
        return {"p": self.p, "exps": self.exps.tolist(),
                "structure": [[a, b, c, int(self.C[a, b, c])] for a, b, c in zip(*np.nonzero(self.C))]}


class LieQuotient:
    """g_n / g_m with the window basis."""

    def __init__(self, ctx, n, m):
        if not 1 <= n <= m:
            raise ValueError("need 1 <= n <= m")
        if _ceil_div(m - n, ctx.de) >= ctx.K:
            raise ValueError(f"precision K={ctx.K} too small for g_{n}/g_{m}")
        self.ctx = ctx
        self.n = n
        self.m = m
        self._sl, self._sl_coord = sl_basis(ctx.ring, ctx.f0)
        gens = []
        for i in range(n, min(n + ctx.de, m)):
            t = _ceil_div(m - i, ctx.de)
            for k, b in enumerate(self.grade_basis(i)):
                gens.append((i, k, b, t))
        self.gens = gens
        self.exps = [g[3] for g in gens]
        self.T = max(self.exps) if gens else 0
        self.offset = {}
        for idx, (i, k, _, _) in enumerate(gens):
            self.offset.setdefault(i, idx)

    @property
    def p(self):
        return self.ctx.p

    @property
    def rank(self):
        return len(self.gens)

    @property
    def order(self):
        return self.p ** sum(self.exps)

    @property
    def is_free(self):
        return len(set(self.exps)) <= 1

    def grades(self):
        return sorted(self.offset)

    def grade_basis(self, i):
        if i % self.ctx.d:
            return [e for e in np.eye(self.ctx.dw, dtype=np.int64)]
        return [b.copy() for b in self._sl]

    def grade_coords(self, i, gamma):
        """Coordinates of gamma in the O_i basis (mod p^K)."""
        q = self.ctx.q
        gamma = np.asarray(gamma, dtype=np.int64) % q
        if i % self.ctx.d:
            return gamma
        y = ml.matmul_mod(self._sl_coord, gamma[:, None], q)[:, 0]
        r = len(self._sl)
        return y[:r], y[r:]

    # graded elements: dict grade -> O vector ------------------------------
    def carry(self, graded, top=None):
        """Fold grades >= n + de back into the window (in place copy)."""
        ctx = self.ctx
        de, q, p = ctx.de, ctx.q, ctx.p
        g = {k: np.asarray(v, dtype=np.int64) % q for k, v in graded.items()}
        limit = self.n + de
        while True:
            high = [k for k in g if k >= limit and g[k].any()]
            if not high:
                break
            k = max(high)
            gamma = g.pop(k)
            for kk in range(ctx.e):
                tgt = k - de + ctx.d * kk
                add = ctx.ring.smul(p, ctx.ring.mul(ctx.c(kk), gamma))
                g[tgt] = (g.get(tgt, ctx.ring.zero()) + add) % q
        return {k: v for k, v in g.items() if k < limit}

    def graded_to_coords(self, graded, check=True):
        g = self.carry(graded)
        out = np.zeros(self.rank, dtype=np.int64)
        for i, gamma in g.items():
            if i < self.n:
                if check and gamma.any():
                    raise ValueError(f"grade {i} below n={self.n}")
                continue
            if i not in self.offset:
                continue  # grade in [m, n + de): zero in the quotient
            c = self.grade_coords(i, gamma)
            if isinstance(c, tuple):
                c, rest = c
                t = self.exps[self.offset[i]]
                if check and (rest % self.p**t).any():
                    raise ValueError(f"grade {i} component is not trace zero")
            off = self.offset[i]
            for k, val in enumerate(c):
                out[off + k] = val
        return out % self.mods

    @cached_property
    def mods(self):
        return np.array([self.p**t for t in self.exps], dtype=np.int64)

    def coords_to_graded(self, u):
        g = {}
        for idx, (i, k, b, t) in enumerate(self.gens):
            if u[idx]:
                g[i] = (g.get(i, self.ctx.ring.zero()) + int(u[idx]) * b) % self.ctx.q
        return g

    def graded_to_algebra(self, graded):
        ctx = self.ctx
        out = ctx.zero()
        for i, gamma in graded.items():
            out = da.add(ctx, out, da.mul(ctx, ctx.from_ring(gamma), ctx.pi_power(i)))
        return out

    def _check_algebra_window(self):
        if _ceil_div(self.m, self.ctx.de) > self.ctx.K:
            raise ValueError(f"m={self.m} needs more than K={self.ctx.K} digits for O_D conversion")

    def to_algebra(self, u):
        """O_D element represented by coordinates u (a lift mod pi^m)."""
        self._check_algebra_window()
        return da.reduce_mod(self.ctx, self.graded_to_algebra(self.coords_to_graded(u)), self.m)

    @cached_property
    def _u_inv_powers(self):
        """p^a = tau^(ea) * U^(-a) with U = sum c_k tau^k; row a holds U^(-a)."""
        ctx = self.ctx
        U = ctx.zero()
        for k in range(ctx.e):
            U[ctx.d * k] = ctx.c(k)
        Ui = da.inverse(ctx, U)
        out = [ctx.one()]
        for _ in range(ctx.K):
            out.append(da.mul(ctx, out[-1], Ui))
        return out

    def algebra_to_graded(self, x):
        """Graded expression (grades >= n) of a trace-zero x in pi^n O_D."""
        ctx = self.ctx
        p, de, q = ctx.p, ctx.de, ctx.q
        g = {}
        for j in range(de):
            if not x[j].any():
                continue
            kj = max(0, _ceil_div(self.n - j, de))
            prec = max(0, _ceil_div(self.m - j, de))
            if prec == 0:
                continue
            if j % ctx.d:
                basis = [e for e in np.eye(ctx.dw, dtype=np.int64)]
                coords = np.asarray(x[j]) % p**prec
            else:
                basis = self._sl
                coords, rest = self.grade_coords(j, x[j])
                if (rest % p**prec).any():
                    raise ValueError("element is not trace zero")
                coords = coords % p**prec
            for b, s in zip(basis, coords):
                s = int(s)
                a = 0
                while s:
                    dig = s % p
                    s //= p
                    if dig:
                        if a < kj:
                            raise ValueError(f"element not in pi^{self.n}")
                        Ua = self._u_inv_powers[a]
                        for kk in range(ctx.e):
                            w = Ua[ctx.d * kk]
                            if w.any():
                                grade = j + a * de + ctx.d * kk
                                val = ctx.ring.mul(w, b) * dig % q
                                g[grade] = (g.get(grade, ctx.ring.zero()) + val) % q
                    a += 1
        return g

    def from_algebra(self, x):
        self._check_algebra_window()
        return self.graded_to_coords(self.algebra_to_graded(x))

    # Lie structure ---------------------------------------------------------
    def bracket_graded(self, i, a, j, b):
        """[a pi^i, b pi^j] as a graded dict."""
        R, ctx = self.ctx.ring, self.ctx
        val = R.sub(R.mul(a, ctx.sigma(b, i)), R.mul(b, ctx.sigma(a, j)))
        return {i + j: val}

    @cached_property
    def structure_constants(self):
        r = self.rank
        C = np.zeros((r, r, r), dtype=np.int64)
        for x, (i, _, a, _) in enumerate(self.gens):
            for y, (j, _, b, _) in enumerate(self.gens):
                if y <= x:
                    continue
                v = self.graded_to_coords(self.bracket_graded(i, a, j, b))
                C[x, y] = v
                C[y, x] = (-v) % self.mods
        return C

    @cached_property
    def lie_ring(self):
        return FiniteLieRing(self.p, self.exps, self.structure_constants, name=f"g_{self.n}/g_{self.m}")

    def bracket(self, u, v):
        return self.lie_ring.bracket(u, v)

    def random(self, rng):
        return self.lie_ring.random(rng)

    # Delta action: u -> delta^-1 u delta, on grade i: alpha -> alpha sigma^i(delta)/delta
    def delta_action_matrix(self, delta, power=1):
        ctx = self.ctx
        R = ctx.ring
        dl = R.pow(delta, power)
        dli = R.inv(dl)
        cols = []
        for (i, k, b, t) in self.gens:
            factor = R.mul(ctx.sigma(dl, i), dli)
            cols.append(self.graded_to_coords({i: R.mul(b, factor)}))
        return np.stack(cols, axis=1) if cols else np.zeros((0, 0), dtype=np.int64)

    def apply_matrix(self, A, u):
        q = self.p**self.T
        return ml.matmul_mod(A, np.asarray(u, dtype=np.int64)[:, None], q)[:, 0] % self.mods

    def inclusion_from(self, sub):
        """Matrix of the inclusion g_l/g_m' -> self for sub = g_l/g_m' with l >= n
        (columns are images of sub's generators)."""
        cols = []
        for (i, k, b, t) in sub.gens:
            cols.append(self.graded_to_coords({i: b}))
        return np.stack(cols, axis=1)

    def to_json(self):
        return {"n": self.n, "m": self.m, "generators": [[i, k, b.tolist(), t] for i, k, b, t in self.gens],
                "lie_ring": self.lie_ring.to_json()}


def lie_order(ctx, n, m):
    return LieQuotient(ctx, n, m).order
