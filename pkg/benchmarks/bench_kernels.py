"""Time the hot kernels on the numba path and on the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]

Each path runs in its own interpreter (the switch is read at import).
"""

import argparse
import json
import os
import subprocess
import sys

WORKLOAD = r"""
import json, time
import numpy as np
from forge import division_algebra as da, modlinalg as ml, _kernels as kn
from forge.norm_one_group import GroupQuotient

rep = {repeat}
rng = np.random.default_rng(0)
ctx = da.make_context(5, 2, e=4, f0=1, K=5, eisenstein="cyclotomic")
xs = [da.sample_ideal(ctx, 0, rng) for _ in range(64)]
da.mul(ctx, xs[0], xs[1])
A = rng.integers(0, 5**4, (60, 80)).astype(np.int64)
ml.smith(A, 5, 4)
out = {{"jit": kn.USE_JIT}}

t = time.perf_counter()
for _ in range(rep):
    for i in range(63):
        da.mul(ctx, xs[i], xs[i + 1])
out["od_mul_ms"] = 1000 * (time.perf_counter() - t) / (63 * rep)

t = time.perf_counter()
for _ in range(rep):
    ml.smith(A, 5, 4)
out["smith_60x80_ms"] = 1000 * (time.perf_counter() - t) / rep

Q = GroupQuotient(da.make_context(5, 2, e=1, f0=1, K=4), 1, 6)
t = time.perf_counter()
for _ in range(rep):
    Q.order_from_layers(np.random.default_rng(1))
out["order_from_layers_ms"] = 1000 * (time.perf_counter() - t) / rep
print(json.dumps(out))
"""


def run(no_jit, repeat):
    env = dict(os.environ)
    if no_jit:
        env["FORGE_NO_JIT"] = "1"
    else:
        env.pop("FORGE_NO_JIT", None)
    res = subprocess.run([sys.executable, "-c", WORKLOAD.format(repeat=repeat)], env=env,
                         capture_output=True, text=True, check=True)
    return json.loads(res.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    jit, plain = run(False, args.repeat), run(True, args.repeat)
    print(f"{'kernel':<24}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for key in ("od_mul_ms", "smith_60x80_ms", "order_from_layers_ms"):
        print(f"{key:<24}{jit[key]:>12.3f}{plain[key]:>12.3f}{plain[key] / jit[key]:>10.1f}")


if __name__ == "__main__":
    main()
