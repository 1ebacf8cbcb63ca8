"""Central extensions of finite quotients by A_s = Z/p^s.

An extension is carried by pairs (q, a) with
(q1, a1)(q2, a2) = (q1 q2, a1 + a2 + Z(q1, q2)) for a normalized 2-cocycle Z.

For Q = S/G_m (S = G_1) subgroups of the total group S^ that contain
commutators are never enumerated.  A subgroup is stored as pivots sorted by
the congruence layer of their image in Q, plus the fiber part B = p^v A.
Since the fiber is central, sifting an element through the layers leaves a
fiber value, and membership is a linear question layer by layer.
"""

from dataclasses import dataclass, field

import numpy as np

from . import modlinalg as ml
from .cohomology import GroupH2, GroupTable, check_group_cocycle
from .norm_one_group import GroupQuotient


class ExtensionError(ValueError):
    pass


def _vp(a, p, s):
    a = int(a) % p**s
    if a == 0:
        return s
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


# ---------------------------------------------------------------- cocycles

class TableCocycle:
    """Cocycle on a quotient read through a GroupTable of a (smaller) quotient.

    key_of maps an element of the acting quotient to a key of the table, so the
    same class serves for a cocycle on the table group itself and for its
    inflation to a larger quotient."""

    def __init__(self, table, f, s, key_of):
        self.table = table
        self.f = np.asarray(f, dtype=np.int64) % table.p**s
        self.s = s
        self.p = table.p
        self.key_of = key_of

    def idx(self, q):
        return self.table.index[self.key_of(q)]

    def __call__(self, q1, q2):
        return int(self.f[self.idx(q1), self.idx(q2)])


class PushoutCocycle:
    """Extension of S/G_m obtained from S/G_(m+1) by pushing the central layer
    G_m/G_(m+1) out along a linear form chi on its residues."""

    def __init__(self, Q, chi, s=1):
        ctx = Q.ctx
        self.Q = Q
        self.m = Q.m
        self.big = GroupQuotient(ctx, 1, Q.m + 1)
        self.chi = np.asarray(chi, dtype=np.int64) % ctx.p
        self.s = s
        self.p = ctx.p
        self._sec = {}

    def section(self, q):
        k = self.Q.key(q)
        r = self._sec.get(k)
        if r is None:
            r = self.big.norm_correct(self.big.reduce(q))
            self._sec[k] = r
        return r

    def layer_value(self, z):
        """chi of the residue of z in G_m/G_(m+1)."""
        lvl = self.big.level(z)
        if lvl < self.m:
            raise ExtensionError("defect left the central layer")
        if lvl > self.m:
            return 0
        return int(np.dot(self.chi, self.big.rho(self.m, z) % self.p)) % self.p

    def __call__(self, q1, q2):
        B = self.big
        r12 = self.section(self.Q.mul(q1, q2))
        z = B.mul(B.inv(r12), B.mul(self.section(q1), self.section(q2)))
        return self.layer_value(z) * self.p ** (self.s - 1) % self.p**self.s


class ScaledCocycle:
    """k * Z with values in Z/p^s."""

    def __init__(self, Z, k, s):
        self.Z, self.k, self.s, self.p = Z, int(k), s, Z.p

    def __call__(self, q1, q2):
        return self.k * int(self.Z(q1, q2)) % self.p**self.s


class SumCocycle:
    def __init__(self, Z1, Z2):
        if Z1.s != Z2.s:
            raise ExtensionError("cocycles must share the coefficient group")
        self.Z1, self.Z2, self.s, self.p = Z1, Z2, Z1.s, Z1.p

    def __call__(self, q1, q2):
        return (int(self.Z1(q1, q2)) + int(self.Z2(q1, q2))) % self.p**self.s


class TwistedCocycle:
    """Z(d(q1), d(q2)) for an automorphism d of the base."""

    def __init__(self, Z, auto):
        self.Z, self.auto, self.s, self.p = Z, auto, Z.s, Z.p

    def __call__(self, q1, q2):
        return self.Z(self.auto(q1), self.auto(q2))


def embed_cocycle(Z, s_new):
    """Image of Z under A_s -> A_s_new, a -> p^(s_new - s) a."""
    if s_new < Z.s:
        raise ExtensionError("can only embed into a larger coefficient group")
    return ScaledCocycle(Z, Z.p ** (s_new - Z.s), s_new)


# ---------------------------------------------------------------- groups

class ExtGroup:
    """Total group of the extension of Q by Z/p^s along the cocycle Z."""

    def __init__(self, Q, Z, s, embed=None, exp_log=None):
        self.Q = Q
        self.Z = Z
        self.s = s
        self.p = Q.p if hasattr(Q, "p") else Q.ctx.p
        self.A = self.p**s
        self.embed = embed or (lambda x: x)
        base = getattr(Q, "exp_log", None)
        self.exp_log = exp_log if exp_log is not None else (base if base is not None else 0) + s

    def identity(self):
        return (self.Q.identity(), 0)

    def lift(self, q):
        return (self.embed(q), 0)

    def fiber(self, a):
        return (self.Q.identity(), int(a) % self.A)

    def mul(self, x, y):
        return (self.Q.mul(x[0], y[0]), (x[1] + y[1] + int(self.Z(x[0], y[0]))) % self.A)

    def inv(self, x):
        qi = self.Q.inv(x[0])
        return (qi, (-x[1] - int(self.Z(x[0], qi))) % self.A)

    def pow(self, x, k):
        k = int(k)
        if k < 0:
            x, k = self.inv(x), -k
        out, base = self.identity(), x
        while k:
            if k & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            k >>= 1
        return out

    def comm(self, x, y):
        return self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))

    def key(self, x):
        return (self.Q.key(x[0]), int(x[1]) % self.A)

    def equal(self, x, y):
        return self.key(x) == self.key(y)

    def fiber_value(self, x):
        if self.Q.key(x[0]) != self.Q.key(self.Q.identity()):
            raise ExtensionError("element does not lie in the fiber")
        return int(x[1]) % self.A


def build_extension(Q, Z, s=None):
    return ExtGroup(Q, Z, Z.s if s is None else s)


def baer_sum(e1, e2):
    if e1.Q is not e2.Q:
        raise ExtensionError("Baer sum needs a common base")
    return ExtGroup(e1.Q, SumCocycle(e1.Z, e2.Z), e1.s)


def negate(e):
    return ExtGroup(e.Q, ScaledCocycle(e.Z, -1, e.s), e.s)


class BaerSumGroup:
    """The Baer sum built as a group: the fiber product over Q modulo the
    antidiagonal, with the section q -> (q, t1(q), t2(q)).  Its cocycle is
    Z1 + Z2 + coboundary(t1 + t2)."""

    def __init__(self, e1, e2, t1, t2):
        self.e1, self.e2, self.t1, self.t2 = e1, e2, t1, t2
        self.A = e1.A

    def section(self, q):
        return (q, self.t1(q), self.t2(q))

    def mul(self, x, y):
        a = self.e1.mul((x[0], x[1]), (y[0], y[1]))
        b = self.e2.mul((x[0], x[2]), (y[0], y[2]))
        return (a[0], a[1], b[1])

    def fiber_coordinate(self, x):
        """Class of (1, a1, a2) modulo the antidiagonal."""
        return (x[1] + x[2]) % self.A

    def cocycle(self, q1, q2):
        Q = self.e1.Q
        prod = self.mul(self.section(q1), self.section(q2))
        sec = self.section(Q.mul(q1, q2))
        return (self.fiber_coordinate(prod) - self.fiber_coordinate(sec)) % self.A


# ---------------------------------------------------------------- table helpers

def quotient_table(ctx, m, rng=None):
    """GroupQuotient S/G_m and its GroupTable (small m only)."""
    Q = GroupQuotient(ctx, 1, m)
    elems = Q.enumerate(rng if rng is not None else np.random.default_rng(0))
    return Q, GroupTable.from_group(Q, elems, ctx.p)


def projection_indices(big_table, small_Q, small_table):
    """idx in small_table of the image of each element of big_table."""
    return np.array([small_table.index[small_Q.key(x)] for x in big_table.elements], dtype=np.int64)


def inflate_table(f_small, proj):
    """Inflation of a cocycle table along the projection index map."""
    return f_small[np.ix_(proj, proj)]


def restrict_table(f, sub_indices):
    """Restriction of a cocycle table to the elements sub_indices."""
    sub_indices = np.asarray(sub_indices, dtype=np.int64)
    return f[np.ix_(sub_indices, sub_indices)]


def conjugation_permutation(Q, table, auto):
    return np.array([table.index[Q.key(auto(x))] for x in table.elements], dtype=np.int64)


def is_equivariant_table(h2, f, perm):
    """The class of f is fixed by the automorphism given as an index
    permutation: f(d x, d y) - f(x, y) is a coboundary."""
    g = f[np.ix_(perm, perm)]
    return h2.is_coboundary((g - f) % h2.q)


def twisting_function(h2, f, perm):
    """t with f(d x, d y) - f(x, y) = t(x) + t(y) - t(xy): the lift
    (x, a) -> (d x, a + t(x)) is then an automorphism of the total group.
    Returns None if no such t exists."""
    g = (f[np.ix_(perm, perm)] - f) % h2.q
    u = ml.solve(h2.coboundary_matrix(), h2.restrict(g), h2.p, h2.s)
    if u is None:
        return None
    # the coboundary columns are u(y) for y != 1 with f = u(x) + u(y) - u(xy)
    t = np.zeros(h2.Q.size, dtype=np.int64)
    t[1:] = u % h2.q
    return t


# ---------------------------------------------------------------- subgroups

class CentralSubgroup:
    """Subgroup of an extension of Q = S/G_m, with central fiber part B = p^v A."""

    def __init__(self, ext):
        self.ext = ext
        self.Q = ext.Q
        self.m = ext.Q.m
        self.p = ext.p
        self.s = ext.s
        self.layers = {}
        self.mats = {}
        self.v = ext.s

    def copy(self):
        out = CentralSubgroup(self.ext)
        out.layers = {k: list(v) for k, v in self.layers.items()}
        out.mats = {k: v.copy() for k, v in self.mats.items()}
        out.v = self.v
        return out

    @property
    def pivots(self):
        return [x for k in sorted(self.layers) for x, _ in self.layers[k]]

    @property
    def fiber_order_log(self):
        return self.s - self.v

    def log_order(self):
        return sum(len(v) for v in self.layers.values()) + self.fiber_order_log

    def sift(self, x):
        """(residue, layer) with layer None when x reduced into the fiber."""
        ext, Q, p = self.ext, self.Q, self.p
        while True:
            i = Q.level(x[0])
            if i >= self.m:
                return x, None
            v = Q.rho(i, x[0]) % p
            piv = self.layers.get(i)
            if not piv:
                return x, i
            c = ml.solve(self.mats[i].T.copy(), v, p, 1)
            if c is None:
                return x, i
            for (y, _), ct in zip(piv, c):
                if int(ct):
                    x = ext.mul(x, ext.pow(y, -int(ct)))
            if Q.level(x[0]) <= i:
                raise AssertionError("sifting did not descend (internal error)")

    def contains(self, x):
        r, i = self.sift(x)
        return i is None and _vp(r[1], self.p, self.s) >= self.v

    def add(self, gens, ambient=()):
        """Close under the group generated by gens (and conjugation by ambient)."""
        ext = self.ext
        queue = list(gens)
        while queue:
            y = queue.pop()
            r, i = self.sift(y)
            if i is None:
                self.v = min(self.v, _vp(r[1], self.p, self.s))
                continue
            vec = self.Q.rho(i, r[0]) % self.p
            others = self.pivots
            self.layers.setdefault(i, []).append((r, vec))
            self.mats[i] = np.array([w for _, w in self.layers[i]], dtype=np.int64)
            queue.append(ext.pow(r, self.p))
            for g in ambient:
                queue.append(ext.comm(r, g))
            for z in others:
                queue.append(ext.comm(r, z))
        return self

    def contains_subgroup(self, other):
        if other.v < self.v:
            return False
        return all(self.contains(x) for x in other.pivots)

    def equals(self, other):
        return self.contains_subgroup(other) and other.contains_subgroup(self)


def full_subgroup(ext, layer_gens):
    """S^ itself from lifts of a layer basis of Q."""
    H = CentralSubgroup(ext)
    for k in sorted(layer_gens):
        for g in layer_gens[k]:
            x = ext.lift(g)
            H.layers.setdefault(k, []).append((x, ext.Q.rho(k, g) % ext.p))
        if layer_gens[k]:
            H.mats[k] = np.array([w for _, w in H.layers[k]], dtype=np.int64)
    H.v = 0
    return H


def commutator_subgroup(H, K_gens, ambient):
    """[H, K] for normal H, K generated (with the fiber) by K_gens."""
    ext = H.ext
    out = CentralSubgroup(ext)
    out.add([ext.comm(x, g) for x in H.pivots for g in K_gens], ambient)
    return out


@dataclass
class Chain:
    ext: object
    ambient: list
    gammas: list = field(default_factory=list)  # gammas[k] = gamma_k S^, index 0 unused

    def gamma(self, k):
        if k >= len(self.gammas):
            return CentralSubgroup(self.ext)
        return self.gammas[k]

    def fiber_valuations(self):
        return [g.v for g in self.gammas[1:]]


def lower_central_chain(ext, layer_gens):
    """gamma_1 S^ = S^, gamma_(k+1) = [gamma_k S^, S^] until trivial."""
    m = ext.Q.m
    ambient = [ext.lift(g) for g in layer_gens[1]]
    top = full_subgroup(ext, layer_gens)
    chain = Chain(ext, ambient, [None, top])
    k = 1
    while True:
        nxt = commutator_subgroup(chain.gammas[k], ambient, ambient)
        chain.gammas.append(nxt)
        k += 1
        if not nxt.layers and nxt.v == ext.s:
            break
        if k > m + 2:
            raise ExtensionError("lower central series did not terminate inside the precision window")
    return chain


def image_check(chain):
    """phi(gamma_k S^) = G_k/G_m: the pivots of gamma_k fill exactly the layers >= k."""
    Q = chain.ext.Q
    out = []
    for k in range(1, len(chain.gammas)):
        g = chain.gammas[k]
        dims = {i: len(v) for i, v in g.layers.items()}
        want = {i: Q.layer_dim(i) for i in range(k, Q.m)}
        out.append(dims == want)
    return all(out)


def censored_window(ctx, m):
    return (2, m - ctx.de)


def commutator_breaks(chain):
    """k >= 2 with A cap gamma_k != A cap gamma_(k+1)."""
    n = len(chain.gammas)
    return [k for k in range(2, n) if chain.gamma(k).v != chain.gamma(k + 1).v]


def commutator_depth(chain):
    s = chain.ext.s
    depth = 1
    for k in range(1, len(chain.gammas)):
        if chain.gammas[k].v < s:
            depth = k
    return depth


def inflation_depth(chain):
    """Least k such that the class is inflated from S/G_k, by the section
    criterion: a normal complement to A inside phi^-1(G_k) exists, i.e.
    A cap gamma_(k+1) = 0 and A is pure in phi^-1(G_k)/gamma_(k+1)."""
    ext = chain.ext
    s, p = ext.s, ext.p
    m = ext.Q.m
    for k in range(1, m + 1):
        nxt = chain.gamma(k + 1)
        if nxt.v < s:
            continue
        pure = True
        for j in range(1, s + 1):
            P = nxt.copy()
            P.add([ext.pow(x, p**j) for x in chain.gamma(k).pivots] + [ext.fiber(p**j)])
            if P.v < min(j, s):
                pure = False
                break
        if pure:
            return k
    return m


def predicted_breaks(ctx, upto):
    """de (i + 1/(p-1)) for i >= 1 when integral, up to the bound."""
    de, p = ctx.de, ctx.p
    out = []
    i = 1
    while True:
        num = de * (i * (p - 1) + 1)
        val = num / (p - 1)
        if val > upto:
            return out
        if num % (p - 1) == 0:
            out.append(num // (p - 1))
        i += 1


# ---------------------------------------------------------------- power-commutator suite

def agemo(chain, k, rng=None, samples=0):
    """Subgroup generated by p-th powers of elements of gamma_k S^ (normal
    closure of p-th powers of pivots, pairwise products and samples; all
    generators are genuine p-th powers, so this lies inside the agemo)."""
    ext = chain.ext
    H = chain.gamma(k)
    piv = H.pivots
    gens = [ext.pow(x, ext.p) for x in piv]
    for a in range(len(piv)):
        for b in range(a + 1, len(piv)):
            gens.append(ext.pow(ext.mul(piv[a], piv[b]), ext.p))
    if H.v < ext.s:
        gens.append(ext.fiber(ext.p ** (H.v + 1)))
    rng = rng or np.random.default_rng(0)
    for _ in range(samples):
        gens.append(ext.pow(random_element(H, rng), ext.p))
    out = CentralSubgroup(ext)
    out.add(gens, chain.ambient)
    return out


def lift_into(H, q, rng=None):
    """A preimage of q lying in H (H must map onto a subgroup containing q)."""
    ext = H.ext
    x = ext.lift(q)
    r, i = H.sift(x)
    if i is not None:
        raise ExtensionError("element is not in the image of the subgroup")
    x = ext.mul(x, ext.fiber(-r[1]))
    if rng is not None and H.v < ext.s:
        x = ext.mul(x, ext.fiber(int(rng.integers(0, ext.A)) * ext.p**H.v))
    return x


def random_element(H, rng):
    ext = H.ext
    x = ext.fiber(int(rng.integers(0, ext.A)) * ext.p**H.v)
    for y in H.pivots:
        x = ext.mul(x, ext.pow(y, int(rng.integers(0, ext.p))))
    return x


def agemo_inside(chain, k, target, _memo=None):
    """Exact check that every p-th power of gamma_k lies in the subgroup target:
    p-th powers of pivots and of the fiber, gamma_pk, and recursively the
    p-th powers of gamma_2k (Hall-Petrescu)."""
    ext = chain.ext
    H = chain.gamma(k)
    if not H.pivots and H.v == ext.s:
        return True
    if not all(target.contains(ext.pow(x, ext.p)) for x in H.pivots):
        return False
    if H.v < ext.s and not target.contains(ext.fiber(ext.p ** (H.v + 1))):
        return False
    if not target.contains_subgroup(chain.gamma(ext.p * k)):
        return False
    return agemo_inside(chain, 2 * k, target)


def powercomm_suite(chain, rng=None, samples=20):
    """(a) gamma_(k+de) = (gamma_k)^p for k > de/(p-1) + 1 with k + de <= m;
    (b) gamma_(2k+1+delta) <= gamma_2 G^_k <= gamma_2k; (c) sampled powers of
    lifts of x in G_k minus G_(k+1) sit in gamma_(k+n de) minus gamma_(k+1+n de)."""
    ext = chain.ext
    Q = ext.Q
    ctx = Q.ctx
    p, de, d, m = ctx.p, ctx.de, ctx.d, Q.m
    rng = rng or np.random.default_rng(0)
    rep = {"a": {}, "b": {}, "c": {}}
    for k in range(1, m + 1):
        if k * (p - 1) <= de + (p - 1) or k + de > m:
            continue
        target = chain.gamma(k + de)
        P = agemo(chain, k)
        sup = P.contains_subgroup(target)
        sub = agemo_inside(chain, k, target)
        rep["a"][k] = bool(sup and sub)
    for k in range(1, m + 1):
        delta = 1 if k % d == 0 else 0
        lo = 2 * k + 1 + delta
        if lo > m:
            continue
        Gk = list(chain.gamma(k).pivots) + [ext.fiber(1)]
        G2 = CentralSubgroup(ext)
        G2.add([ext.comm(x, y) for x in Gk for y in Gk], chain.ambient)
        rep["b"][k] = bool(G2.contains_subgroup(chain.gamma(lo)) and chain.gamma(2 * k).contains_subgroup(G2))
    for k in range(1, m):
        if k * (p - 1) <= de + (p - 1):
            continue
        ok = True
        for _ in range(samples):
            g = Q.random_in_layer(rng, k)
            x = lift_into(chain.gamma(k), g, rng)
            y, n = x, 0
            while k + n * de < m:
                if not chain.gamma(k + n * de).contains(y) or chain.gamma(k + 1 + n * de).contains(y):
                    ok = False
                    break
                y = ext.pow(y, p)
                n += 1
            if not ok:
                break
        rep["c"][k] = ok
    rep["ok"] = all(all(v.values()) for v in (rep["a"], rep["b"], rep["c"]))
    return rep


# ---------------------------------------------------------------- reports

def break_report(ext, layer_gens, class_id="", equivariant=None):
    """Breaks, depths and the power-commutator suite for one extension."""
    chain = lower_central_chain(ext, layer_gens)
    ctx = ext.Q.ctx
    lo, hi = censored_window(ctx, ext.Q.m)
    breaks = commutator_breaks(chain)
    return chain, {
        "class_id": class_id,
        "s": ext.s,
        "breaks": breaks,
        "window": [lo, hi],
        "breaks_in_window": [b for b in breaks if lo <= b <= hi],
        "comdep": commutator_depth(chain),
        "infdep": inflation_depth(chain),
        "image_ok": image_check(chain),
        "equivariant": equivariant,
    }


def pattern_ok(ctx, report):
    """Every break in the censored window is of the form de(i + 1/(p-1))."""
    pred = set(predicted_breaks(ctx, report["window"][1]))
    return all(b in pred for b in report["breaks_in_window"])


def depths_ok(ctx, report):
    """infdep - 1 <= comdep <= infdep always; equality once comdep > de/(p-1) + 1."""
    c, i = report["comdep"], report["infdep"]
    if not i - 1 <= c <= i:
        return False
    if c * (ctx.p - 1) > ctx.de + (ctx.p - 1):
        return c == i
    return True


def infdep_linear(ctx, m, f, s, rng=None):
    """Inflation depth of the class of the table cocycle f on S/G_m by linear
    algebra: least k with f in inf Z^2(S/G_k) + B^2(S/G_m)."""
    Q, T = quotient_table(ctx, m, rng)
    H = GroupH2(T, s)
    B = H.coboundary_matrix()
    target = H.restrict(f)
    for k in range(1, m + 1):
        if k == m:
            return m
        Qk, Tk = quotient_table(ctx, k, rng)
        proj = projection_indices(T, Qk, Tk)
        if Tk.size == 1:
            cols = np.zeros((H.nvar, 0), dtype=np.int64)
        else:
            Hk = GroupH2(Tk, s)
            Zk = Hk.cocycles()
            cols = np.stack([H.restrict(inflate_table(Hk.full_table(Zk[:, c]), proj))
                             for c in range(Zk.shape[1])], axis=1) if Zk.shape[1] else np.zeros((H.nvar, 0), dtype=np.int64)
        M = np.hstack([cols, B]) if cols.size else B
        if ml.in_span(M, target, ctx.p, s):
            return k
    return m


def verify_table_cocycle(table, f, s):
    return check_group_cocycle(table, f, table.p**s)


def equivariant_classes(h2, perm):
    """Classes of H^2 fixed by the automorphism with index permutation perm.
    Returns (invariants, representative generator-value vectors)."""
    p, s, q = h2.p, h2.s, h2.q
    Z = h2.cocycles()
    B = h2.coboundary_matrix()
    cols = []
    for c in range(Z.shape[1]):
        f = h2.full_table(Z[:, c])
        cols.append(h2.restrict((f[np.ix_(perm, perm)] - f) % q))
    D = np.stack(cols, axis=1) if cols else np.zeros((h2.nvar, 0), dtype=np.int64)
    K = ml.kernel(np.hstack([D, B]), p, s)
    Zinv = ml.matmul_mod(Z, K[:Z.shape[1]] % q, q) if K.size else np.zeros((h2.nvar, 0), dtype=np.int64)
    inv = ml.quotient_invariants(Zinv, B, p, s)
    reps = [c for c, _ in ml.quotient_basis(Zinv, B, p, s)]
    return inv, reps


def pushout_equivariant(Z, rng=None):
    """chi is fixed by conjugation with delta on the central layer
    G_m/G_(m+1). This makes the pushout class Delta-equivariant."""
    rng = np.random.default_rng(0) if rng is None else rng
    B = Z.big
    for g in B.layer_generators(rng).get(Z.m, []):
        if Z.layer_value(B.delta_conjugate(g)) != Z.layer_value(g):
            return False
    return True
