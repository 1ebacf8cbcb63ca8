"""Named verification suites run by the command line driver.

A suite takes (ctx, params, rng) and returns a list of checks
{"name", "passed", "detail"}.  Sample counts and seeds go into detail so a
report can be reproduced.
"""

import numpy as np

from . import division_algebra as da
from . import extensions as ex
from . import free_lie_bch as fl
from . import regular_cocycles as rc
from .cohomology import GroupTable, group_h2, lie_h2
from .correspondence import LazardPair
from .lie_congruence import LieQuotient
from .norm_one_group import GroupQuotient, commutator_span_check, p_power_break_check, residue_basis
from .padic_arith import TorsionElem, hilbert90_solve


def _check(name, passed, **detail):
    return {"name": name, "passed": bool(passed), "detail": detail}


def suite_arith(ctx, params, rng):
    R = ctx.ring
    n = params.get("samples", 50)
    assoc = comm = frob = inv = h90 = 0
    for _ in range(n):
        a, b, c = R.random(rng), R.random(rng), R.random(rng)
        assoc += np.array_equal(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)))
        comm += np.array_equal(R.mul(a, b), R.mul(b, a))
        frob += np.array_equal(R.frob(R.mul(a, b)), R.mul(R.frob(a), R.frob(b)))
        u = R.add(R.one(), R.smul(R.p, a))
        inv += np.array_equal(R.mul(u, R.inv(u)), R.one())
        beta = R.random(rng)
        alpha = R.sub(beta, ctx.sigma(beta))
        sol = hilbert90_solve(R, ctx.f0, TorsionElem(R.K, alpha))
        h90 += np.array_equal(R.sub(sol.value, ctx.sigma(sol.value)), alpha)
    return [_check("ring associative", assoc == n, samples=n),
            _check("ring commutative", comm == n, samples=n),
            _check("Frobenius multiplicative", frob == n, samples=n),
            _check("unit inverse", inv == n, samples=n),
            _check("Hilbert 90 on coboundaries", h90 == n, samples=n)]


def suite_division(ctx, params, rng):
    n = params.get("samples", 30)
    level = params.get("n", 1)
    assoc = norm = inv = 0
    for _ in range(n):
        x, y, z = (da.add(ctx, ctx.one(), da.sample_ideal(ctx, level, rng)) for _ in range(3))
        assoc += np.array_equal(da.mul(ctx, da.mul(ctx, x, y), z), da.mul(ctx, x, da.mul(ctx, y, z)))
        lhs = da.reduced_norm(ctx, da.mul(ctx, x, y))
        rhs = da.mul(ctx, da.reduced_norm(ctx, x), da.reduced_norm(ctx, y))
        norm += np.array_equal(lhs, rhs)
        inv += np.array_equal(da.mul(ctx, x, da.inverse(ctx, x)), ctx.one())
    return [_check("multiplication associative", assoc == n, samples=n),
            _check("reduced norm multiplicative", norm == n, samples=n),
            _check("inverse", inv == n, samples=n)]


def suite_group(ctx, params, rng):
    top = min(params.get("upto", 4), (ctx.window - 1) // 2)
    out = []
    for i in range(1, top + 1):
        for j in range(i, top + 1):
            r = commutator_span_check(ctx, i, j, rng, params.get("samples", 30))
            good = r["group"] == r["formula"] and r["predicted"] in (r["group"], "other")
            out.append(_check(f"commutator span G_{i},G_{j}", good, **r))
    lo = ctx.de // (ctx.p - 1) + 1
    for i in range(lo, max(lo, ctx.window - ctx.de)):
        Q = GroupQuotient(ctx, 1, i + ctx.de + 1)
        g = Q.random_in_layer(rng, i)
        out.append(_check(f"p-th power raises level {i} by de", p_power_break_check(ctx, i, g, Q)))
    return out


def suite_lie(ctx, params, rng):
    n = params.get("n", 1)
    m = min(params.get("m", n + ctx.de), ctx.window)
    L = LieQuotient(ctx, n, m)
    h = L.lie_ring
    trips = 0
    samples = params.get("samples", 20)
    for _ in range(samples):
        u = h.random(rng)
        trips += np.array_equal(L.from_algebra(L.to_algebra(u)), h.reduce(u))
    return [_check("Jacobi identity", h.check_jacobi(), n=n, m=m),
            _check("algebra round trip", trips == samples, samples=samples),
            _check("order", True, order_log_p=int(h.exps.sum()))]


def suite_bch(ctx, params, rng):
    N = params.get("degree", 6)
    ok, bad, _ = fl.chf_integrality(ctx.p, N)
    return [_check("BCH integrality", ok, p=ctx.p, degree=N, violations=bad[:5]),
            _check("BCH associativity", fl.associativity_defect(min(N, 5)).is_zero(), degree=min(N, 5))]


def suite_correspondence(ctx, params, rng):
    n = params.get("n", 1)
    m = min(params.get("m", 2 * n + 1), ctx.window, ctx.p * n)
    pair = LazardPair(ctx, n, m)
    samples = params.get("samples", 50)
    inv = hom = 0
    for _ in range(samples):
        u, v = pair.lie.random(rng), pair.lie.random(rng)
        inv += np.array_equal(pair.log(pair.exp(u)), pair.lie.lie_ring.reduce(u))
        hom += pair.group.equal(pair.exp(pair.phi(u, v)), pair.group.mul(pair.exp(u), pair.exp(v)))
    return [_check("Log' Exp' = id", inv == samples, n=n, m=m, samples=samples),
            _check("Exp' is a homomorphism", hom == samples, n=n, m=m, samples=samples)]


def suite_cohomology(ctx, params, rng):
    p = ctx.p
    cyc = GroupTable([i for i in range(p)], [[(i + j) % p for j in range(p)] for i in range(p)], [1], p)
    res = group_h2(cyc, 1)
    out = [_check("H^2(Z/p, Z/p) has order p", res.order == p, invariants=res.invariants)]
    n = params.get("n", 1)
    m = min(params.get("m", n + 2), ctx.window)
    h = LieQuotient(ctx, n, m).lie_ring
    free = lie_h2(h, 1, "ring")
    out.append(_check("Lie H^2 computed", True, n=n, m=m, invariants=free.invariants))
    return out


def suite_regular(ctx, params, rng):
    f, s = params.get("f", 1), params.get("s", 1)
    setup = rc.RegularSetup(ctx, f, s)
    basis = rc.compatible_basis(setup)
    samples = params.get("samples", 3)
    good = 0
    for _ in range(samples):
        seq = rc.random_compatible(setup, rng, basis)
        C = rc.build_regular(seq)
        back = rc.defining_sequence(setup, C)
        good += (setup.ce.is_cocycle(C) and setup.delta_invariant(C)
                 and all(np.array_equal(seq[n], back[n]) for n in seq.values))
    return [_check("build/extract round trip", good == samples, f=f, s=s, samples=samples)]


def suite_extensions(ctx, params, rng):
    m = min(params.get("m", 2 * ctx.de + 1), ctx.window - 1)
    Q = GroupQuotient(ctx, 1, m)
    lg = Q.layer_generators(rng)
    out = []
    for r, chi in enumerate(residue_basis(ctx, m)):
        e = ex.ExtGroup(Q, ex.PushoutCocycle(Q, chi, 1), 1)
        chain, rep = ex.break_report(e, lg, f"pushout-{r}")
        pc = ex.powercomm_suite(chain, rng=rng, samples=params.get("samples", 3))
        out.append(_check(f"pushout {r}", pc["ok"] and ex.depths_ok(ctx, rep) and ex.pattern_ok(ctx, rep),
                          report=rep))
    return out


def suite_acceptance(numbers):
    from .acceptance import run_check

    def run(ctx, params, rng):
        out = []
        for n in numbers:
            r = run_check(n)
            out.append(_check(f"criterion {n}: {r['title']}", r["passed"], **r["detail"]))
        return out
    return run


SUITES = {
    "arith": suite_arith,
    "division": suite_division,
    "group": suite_group,
    "lie": suite_lie,
    "bch": suite_bch,
    "correspondence": suite_correspondence,
    "cohomology": suite_cohomology,
    "regular": suite_regular,
    "extensions": suite_extensions,
}


def lookup(name):
    if name in SUITES:
        return SUITES[name]
    if name == "acceptance":
        return suite_acceptance(list(range(1, 14)))
    if name.startswith("acceptance:"):
        nums = [int(x) for x in name.split(":", 1)[1].split(",")]
        if any(not 1 <= x <= 13 for x in nums):
            raise KeyError(name)
        return suite_acceptance(nums)
    raise KeyError(name)


def known(name):
    try:
        lookup(name)
        return True
    except (KeyError, ValueError):
        return False
