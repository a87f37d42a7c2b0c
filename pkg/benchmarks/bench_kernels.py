"""Compare the compiled and pure-Python ``rref_mod_p`` kernels.

Usage::

    python benchmarks/bench_kernels.py [--sizes 50 100 200] [--prime 3] [--repeat 3]

Prints one row per matrix size with the best-of-``repeat`` time of each
backend and the speedup. A final row times an end-to-end F_p Betti
computation on the twice-subdivided torus under both backends.
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from mvnerve import _kernels_py

try:
    from mvnerve import _kernels as compiled
except ImportError:
    compiled = None

END_TO_END = (
    "from mvnerve import fixtures as F; from mvnerve.subdivision import SubdivisionTower;"
    "from mvnerve.complexes import betti_numbers; from mvnerve.rings import GF;"
    "betti_numbers(SubdivisionTower(F.torus7()).complex(2), GF({p}))"
)


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def end_to_end(p, pure):
    env = dict(os.environ)
    env.pop("MVNERVE_PURE_PYTHON", None)
    if pure:
        env["MVNERVE_PURE_PYTHON"] = "1"
    code = f"import time; t = time.perf_counter(); {END_TO_END.format(p=p)}; print(time.perf_counter() - t)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200])
    parser.add_argument("--prime", type=int, default=3)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if compiled is None:
        sys.exit("compiled kernels are not built; run `pip install -e . --no-build-isolation` first")

    rng = np.random.default_rng(0)
    print(f"{'size':>8} {'cython s':>10} {'python s':>10} {'speedup':>8}")
    for n in args.sizes:
        a = rng.integers(0, args.prime, size=(n, n), dtype=np.int64)
        tc = best(lambda: compiled.rref_mod_p(a.copy(), args.prime), args.repeat)
        tp = best(lambda: _kernels_py.rref_mod_p(a.copy(), args.prime), args.repeat)
        print(f"{n:>8} {tc:>10.4f} {tp:>10.4f} {tp / tc:>7.1f}x")
    tc, tp = end_to_end(args.prime, False), end_to_end(args.prime, True)
    print(f"{'torus r=2':>8} {tc:>10.4f} {tp:>10.4f} {tp / tc:>7.1f}x")


if __name__ == "__main__":
    main()
