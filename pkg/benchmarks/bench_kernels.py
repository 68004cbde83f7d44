"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat N]

Times the two hot kernels on inputs shaped like the ones the engine
produces, then an end-to-end run (classification of a small corpus)
with each backend in a fresh interpreter.
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from edsaffine import _kernels_py
from edsaffine.symkernel import poly as P

try:
    from edsaffine import _kernels_c
except ImportError:
    _kernels_c = None


def random_poly(rng, nvars, terms, deg, coeff=50):
    out = {}
    for _ in range(terms):
        e = [rng.randint(0, deg) for _ in range(nvars)]
        out[P.pack(e)] = out.get(P.pack(e), 0) + rng.randint(-coeff, coeff) or 1
    return out


def inputs(seed=0):
    rng = random.Random(seed)
    f = random_poly(rng, 4, 60, 5)
    g = random_poly(rng, 4, 60, 5)
    exps = [[rng.randint(0, 4) for _ in range(4)] for _ in range(80)]
    coeffs = [rng.randint(-9, 9) for _ in exps]
    pts = [[rng.uniform(0.5, 3) for _ in range(4)] for _ in range(12)]
    return f, g, exps, coeffs, pts


def bench(mod, repeat):
    f, g, exps, coeffs, pts = inputs()
    t_mul = min(timeit.repeat(lambda: mod.poly_mul(f, g), number=20, repeat=repeat)) / 20
    t_ev = min(timeit.repeat(lambda: mod.poly_eval_batch(exps, coeffs, pts), number=200, repeat=repeat)) / 200
    return t_mul, t_ev


END_TO_END = """
import time
from edsaffine.classify import classify
t = time.perf_counter()
for f in ["3", "x", "y/x + x^4", "y/x + x", "-x/y", "exp(x)"]:
    classify(f)
print(time.perf_counter() - t)
"""


def end_to_end(pure):
    env = dict(os.environ)
    if pure:
        env["EDSAFFINE_PURE_PYTHON"] = "1"
    else:
        env.pop("EDSAFFINE_PURE_PYTHON", None)
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args()

    f, g, exps, coeffs, pts = inputs()
    if _kernels_c is not None:
        # same answers before timing anything
        assert _kernels_c.poly_mul(f, g) == _kernels_py.poly_mul(f, g)
        vc, _ = _kernels_c.poly_eval_batch(exps, coeffs, pts)
        vp, _ = _kernels_py.poly_eval_batch(exps, coeffs, pts)
        assert all(abs(a - b) <= 1e-9 * max(1.0, abs(b)) for a, b in zip(vc, vp))

    rows = [("python", bench(_kernels_py, args.repeat))]
    if _kernels_c is not None:
        rows.append(("cython", bench(_kernels_c, args.repeat)))
    else:
        print("compiled extension not built; only the Python backend is timed")
    print(f"{'backend':8} {'poly_mul (us)':>14} {'eval_batch (us)':>16}")
    for name, (a, b) in rows:
        print(f"{name:8} {a * 1e6:14.1f} {b * 1e6:16.1f}")
    if len(rows) == 2:
        (_, (pa, pb)), (_, (ca, cb)) = rows
        print(f"speedup  {pa / ca:13.2f}x {pb / cb:15.2f}x")

    if not args.skip_end_to_end:
        tp = end_to_end(True)
        line = f"end-to-end classify corpus: python {tp:.2f} s"
        if _kernels_c is not None:
            tc = end_to_end(False)
            line += f", cython {tc:.2f} s ({tp / tc:.2f}x)"
        print(line)


if __name__ == "__main__":
    main()
