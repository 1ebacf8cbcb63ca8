"""Command line driver.

Exit status: 0 when every check passes, 1 when some check fails, 2 for a
configuration error.  Reports are JSON with sorted keys and no timestamps,
so identical inputs give byte-identical files.
"""

import json
import os
import sys
import time

import click
import jsonschema
import numpy as np

from . import division_algebra as da
from . import extensions as ex
from . import free_lie_bch as fl
from . import regular_cocycles as rc
from . import suites
from .cohomology import CohomologyError, GroupH2, GroupTable, group_h2, lie_h2
from .correspondence import inversion_tables
from .lie_congruence import LieQuotient
from .norm_one_group import GroupQuotient, PrecisionError, residue_basis

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["context", "seed", "suites"],
    "additionalProperties": False,
    "properties": {
        "context": {
            "type": "object",
            "required": ["p", "d"],
            "additionalProperties": False,
            "properties": {
                "p": {"type": "integer", "minimum": 3},
                "d": {"type": "integer", "minimum": 2},
                "e": {"type": "integer", "minimum": 1},
                "f0": {"type": "integer", "minimum": 1},
                "K": {"type": "integer", "minimum": 1},
                "eisenstein": {"oneOf": [
                    {"type": "string"},
                    {"type": "array", "items": {"oneOf": [
                        {"type": "integer"},
                        {"type": "array", "items": {"type": "integer"}}]}}]},
                "seed": {"type": "integer"},
            },
        },
        "seed": {"type": "integer"},
        "suites": {"type": "array", "items": {"type": "string"}},
        "params": {"type": "object"},
        "output": {"type": "string"},
    },
}


class ConfigProblem(Exception):
    pass


def _dump(obj):
    return json.dumps(obj, sort_keys=True, indent=1, default=_default) + "\n"


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    return str(o)


def _write(path, obj):
    d = os.path.dirname(path)
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(_dump(obj))


def _context(block):
    try:
        return da.make_context(block["p"], block["d"], e=block.get("e", 1), f0=block.get("f0", 1),
                               K=block.get("K", 3), eisenstein=block.get("eisenstein"),
                               seed=block.get("seed", 0))
    except (da.ConfigError, ValueError) as exc:
        raise ConfigProblem(str(exc)) from exc


def check_windows(ctx, params):
    """Name the first precision window a parameter set violates."""
    n, m = params.get("n"), params.get("m")
    if m is not None and m > ctx.window:
        raise ConfigProblem(f"m={m} exceeds the precision window de*(K-1)={ctx.window}")
    if n is not None and m is not None:
        if n > m:
            raise ConfigProblem(f"need n <= m (n={n}, m={m})")
        if params.get("lazard", False) and m > ctx.p * n:
            raise ConfigProblem(f"m={m} exceeds p*n={ctx.p * n} (Lazard window)")
    s = params.get("s")
    if s is not None and s >= ctx.K:
        raise ConfigProblem(f"level s={s} needs K > s (K={ctx.K})")


def load_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigProblem(f"cannot read config: {exc}") from exc
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(x) for x in exc.absolute_path) or "<root>"
        raise ConfigProblem(f"config schema: {where}: {exc.message}") from exc
    for name in cfg["suites"]:
        if not suites.known(name):
            raise ConfigProblem(f"unknown suite {name!r}")
    return cfg


def run_config(cfg, out_dir=None):
    """Run every suite of a validated config; returns (all passed, reports)."""
    ctx = _context(cfg["context"])
    params = cfg.get("params", {})
    check_windows(ctx, params)
    reports = {}
    for name in cfg["suites"]:
        rng = np.random.default_rng([cfg["seed"], len(reports)])
        checks = suites.lookup(name)(ctx, params, rng)
        reports[name] = {"suite": name, "seed": cfg["seed"], "params": params,
                         "passed": all(c["passed"] for c in checks), "checks": checks}
        if out_dir:
            _write(os.path.join(out_dir, f"{name.replace(':', '_')}.json"), reports[name])
    return all(r["passed"] for r in reports.values()), reports


def _fail_config(msg):
    click.echo(f"config error: {msg}", err=True)
    sys.exit(EXIT_CONFIG)


@click.group()
def main():
    """Exact computations in norm-one groups of p-adic division algebras."""


@main.command()
@click.argument("config", type=click.Path())
@click.option("--out", "out_dir", default=None, help="Directory for per-suite JSON reports.")
def run(config, out_dir):
    """Run the suites listed in a JSON config."""
    try:
        cfg = load_config(config)
        out_dir = out_dir or cfg.get("output")
        t0 = time.time()
        ok, reports = run_config(cfg, out_dir)
    except (ConfigProblem, PrecisionError) as exc:
        _fail_config(exc)
    for name, rep in reports.items():
        n_pass = sum(c["passed"] for c in rep["checks"])
        click.echo(f"{'PASS' if rep['passed'] else 'FAIL'}  {name:<24} {n_pass}/{len(rep['checks'])}")
        for c in rep["checks"]:
            if not c["passed"]:
                click.echo(f"      failed: {c['name']}")
    click.echo(f"{len(reports)} suites in {time.time() - t0:.1f}s")
    sys.exit(EXIT_PASS if ok else EXIT_FAIL)


@main.command()
@click.option("--p", "p", type=int, required=True)
@click.option("--degree", "N", type=int, required=True)
@click.option("--out", "out", default=None, help="Output JSON path (default bch_p<p>_N<N>.json).")
def bch(p, N, out):
    """Write Phi, Psi and the inverse Hausdorff exponent tables."""
    if N < 1 or p < 3:
        _fail_config("need degree >= 1 and an odd prime p")
    phi = fl.bch_phi(N)
    psi = fl.psi_commutator_series(N) if N >= 2 else fl.LieSeries(2, N)
    ok, bad, _ = fl.chf_integrality(p, N)
    data = {"p": p, "degree": N, "phi": phi.to_json(), "psi": psi.to_json(),
            "phi_integral": ok, "phi_violations": bad}
    if N >= 2:
        tab = inversion_tables(N, p)
        okA, okB = fl.reconstruction_check(tab)
        data["inversion"] = tab.to_json()
        data["exponents_ok"] = tab.exponents_ok()
        data["reconstruction"] = {"S_A": okA, "S_B": okB}
        ok = ok and okA and okB and data["exponents_ok"]
    _write(out or f"bch_p{p}_N{N}.json", data)
    click.echo(f"{'PASS' if ok else 'FAIL'}  bch p={p} degree={N}")
    sys.exit(EXIT_PASS if ok else EXIT_FAIL)


def _context_options(f):
    for opt in reversed([
        click.option("--p", "p", type=int, default=5, show_default=True),
        click.option("--d", "d", type=int, default=2, show_default=True),
        click.option("--e", "e", type=int, default=1, show_default=True),
        click.option("--f0", "f0", type=int, default=1, show_default=True),
        click.option("--K", "K", type=int, default=None, help="p-adic precision (default: smallest that fits)."),
        click.option("--eisenstein", default=None, help="Preset name (unramified, cyclotomic)."),
    ]):
        f = opt(f)
    return f


def _ctx_for(p, d, e, f0, K, eisenstein, m):
    K = K or max(3, -(-(m + 1) // (d * e)) + 1)
    try:
        return da.make_context(p, d, e=e, f0=f0, K=K, eisenstein=eisenstein)
    except (da.ConfigError, ValueError) as exc:
        _fail_config(exc)


@main.command()
@click.argument("kind", type=click.Choice(["lie", "group"]))
@_context_options
@click.option("--n", "n", type=int, required=True)
@click.option("--m", "m", type=int, required=True)
@click.option("--s", "s", type=int, default=1, show_default=True)
@click.option("--mode", type=click.Choice(["ring", "free"]), default="ring", show_default=True)
@click.option("--max-size", type=int, default=3125, show_default=True)
def h2(kind, p, d, e, f0, K, eisenstein, n, m, s, mode, max_size):
    """H^2 of g_n/g_m (lie) or G_n/G_m (group) with Z/p^s coefficients."""
    ctx = _ctx_for(p, d, e, f0, K, eisenstein, m)
    try:
        check_windows(ctx, {"n": n, "m": m})
        if kind == "lie":
            res = lie_h2(LieQuotient(ctx, n, m).lie_ring, s, mode)
        else:
            Q = GroupQuotient(ctx, n, m)
            size = Q.order_from_layers(np.random.default_rng(0))
            if size > max_size:
                raise ConfigProblem(f"|G_{n}/G_{m}| = {size} exceeds --max-size {max_size}")
            T = GroupTable.from_group(Q, Q.enumerate(np.random.default_rng(0)), ctx.p)
            res = group_h2(T, s)
    except (ConfigProblem, PrecisionError, CohomologyError) as exc:
        _fail_config(exc)
    click.echo(_dump({"kind": kind, "n": n, "m": m, **res.to_json()}), nl=False)
    sys.exit(EXIT_PASS)


@main.group()
def kappa():
    """Compatible sequences and regular cocycles."""


@kappa.command("build")
@_context_options
@click.option("--f", "f", type=int, default=1, show_default=True)
@click.option("--s", "s", type=int, default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out", required=True, help="Output JSON path.")
def kappa_build(p, d, e, f0, K, eisenstein, f, s, seed, out):
    """Sample a compatible sequence and write it with its lambda table."""
    ctx = _ctx_for(p, d, e, f0, K or s + 2, eisenstein, 0)
    try:
        setup = rc.RegularSetup(ctx, f, s)
    except ValueError as exc:
        _fail_config(exc)
    seq = rc.random_compatible(setup, np.random.default_rng(seed))
    C = rc.build_regular(seq)
    N = setup.N
    table = rc.lambda_table(setup, C, [(i, j) for i in range(N, N + ctx.de) for j in range(N, N + ctx.de)])
    _write(out, {"context": ctx.to_json(), "seed": seed, "sequence": seq.to_json(), "table": table.to_json()})
    click.echo(f"PASS  kappa build f={f} s={s} seed={seed} -> {out}")
    sys.exit(EXIT_PASS)


def _load_sequence(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
        ctx = da.context_from_json(data["context"])
        setup = rc.RegularSetup(ctx, data["sequence"]["f"], data["sequence"]["s"])
        return setup, rc.DefiningSequence.from_json(setup, data["sequence"])
    except (OSError, KeyError, ValueError, json.JSONDecodeError) as exc:
        _fail_config(f"cannot load sequence: {exc}")


@kappa.command("check")
@click.argument("path", type=click.Path())
def kappa_check(path):
    """Check compatibility, the cocycle axioms and the extraction round trip."""
    setup, seq = _load_sequence(path)
    ok, msg = rc.validate_compatible(seq)
    report = {"compatible": ok, "message": msg}
    if ok:
        C = rc.build_regular(seq, check=False)
        back = rc.defining_sequence(setup, C)
        report.update(cocycle=setup.ce.is_cocycle(C), invariant=setup.delta_invariant(C),
                      round_trip=all(np.array_equal(seq[n], back[n]) for n in seq.values),
                      trace_bound=rc.trace_bound_check(seq))
    passed = all(v for k, v in report.items() if k != "message")
    click.echo(_dump({"passed": passed, **report}), nl=False)
    sys.exit(EXIT_PASS if passed else EXIT_FAIL)


@kappa.command("correct")
@click.argument("path", type=click.Path())
@click.option("--samples", type=int, default=200, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def kappa_correct(path, samples, seed):
    """Trace-correct the built cocycle and verify the witness pointwise."""
    setup, seq = _load_sequence(path)
    C = rc.build_regular(seq)
    tc = rc.trace_correct(setup, C, seq)
    fails = rc.witness_check(setup, C, tc, np.random.default_rng(seed), samples=samples)
    c1 = rc.defining_sequence(setup, tc.C1)
    level = c1.torsion_level()
    passed = not fails and level <= setup.ctx.w + 1
    click.echo(_dump({"passed": passed, "torsion_level": level, "witness_failures": len(fails),
                      "samples": samples, "seed": seed, "level_s_witness": tc.u is not None,
                      "corrected": c1.to_json()}), nl=False)
    sys.exit(EXIT_PASS if passed else EXIT_FAIL)


@main.command()
@_context_options
@click.option("--m", "m", type=int, required=True)
@click.option("--chi", default=None, help="Comma separated linear form on the top layer (pushout class).")
@click.option("--from-level", "src", type=int, default=None, help="Inflate the H^2 basis of S/G_k instead.")
@click.option("--s", "s", type=int, default=1, show_default=True)
@click.option("--samples", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def breaks(p, d, e, f0, K, eisenstein, m, chi, src, s, samples, seed):
    """Commutator breaks, depths and the power-commutator suite on S/G_m."""
    ctx = _ctx_for(p, d, e, f0, K, eisenstein, m)
    rng = np.random.default_rng(seed)
    try:
        check_windows(ctx, {"m": m})
        Q = GroupQuotient(ctx, 1, m)
    except (ConfigProblem, PrecisionError) as exc:
        _fail_config(exc)
    lg = Q.layer_generators(np.random.default_rng(seed))
    classes = []
    if src is not None:
        if not 1 < src < m:
            _fail_config(f"--from-level must lie in (1, {m})")
        Qk, Tk = ex.quotient_table(ctx, src)
        H = GroupH2(Tk, 1)
        for r, F in enumerate(H.h2(with_reps=True).representatives):
            Z = ex.TableCocycle(Tk, H.full_table(F), 1, Qk.key)
            classes.append((f"inflated-{r}", ex.embed_cocycle(Z, s) if s > 1 else Z, None))
    else:
        vecs = residue_basis(ctx, m) if chi is None else [np.array([int(x) for x in chi.split(",")])]
        for r, v in enumerate(vecs):
            if len(v) != ctx.dw:
                _fail_config(f"--chi needs {ctx.dw} entries")
            Z = ex.PushoutCocycle(Q, v, s)
            classes.append((f"pushout-{r}", Z, ex.pushout_equivariant(ex.PushoutCocycle(Q, v, 1))))
    out = []
    ok = True
    for cid, Z, eq in classes:
        chain, rep = ex.break_report(ex.ExtGroup(Q, Z, s), lg, cid, eq)
        pc = ex.powercomm_suite(chain, rng=rng, samples=samples)
        rep["powercomm"] = pc["ok"]
        rep["depths_ok"] = ex.depths_ok(ctx, rep)
        rep["pattern_ok"] = ex.pattern_ok(ctx, rep)
        ok = ok and pc["ok"] and rep["depths_ok"] and rep["pattern_ok"]
        out.append(rep)
    click.echo(_dump({"m": m, "s": s, "predicted": ex.predicted_breaks(ctx, m), "classes": out}), nl=False)
    sys.exit(EXIT_PASS if ok else EXIT_FAIL)


if __name__ == "__main__":
    main()
