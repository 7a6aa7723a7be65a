"""Compare the compiled interval kernels with the pure-Python fallback.

Runs a micro benchmark on each kernel, then an end-to-end search over the
bundled corpus in two subprocesses (one with ``FREEARRAYS_PURE=1``).

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from freearrays import _kernels_py

try:
    from freearrays import _kernels
except ImportError:
    _kernels = None

END_TO_END = """
import time
from freearrays import BACKEND, SearchConfig, get_all_solutions
from freearrays.listings import corpus_names, load_corpus
progs = [load_corpus(n) for n in corpus_names()]
start = time.perf_counter()
for _ in range({repeat}):
    for p in progs:
        get_all_solutions(p, SearchConfig(max_len=8))
print(BACKEND, time.perf_counter() - start)
"""


def _domains(rng, n):
    out = []
    for _ in range(n):
        pairs, lo = [], rng.randint(-50, 0)
        for _ in range(rng.randint(1, 6)):
            hi = lo + rng.randint(0, 8)
            pairs.append((lo, hi))
            lo = hi + rng.randint(2, 6)
        out.append(tuple(pairs))
    return out


def micro(mod, doms, repeat):
    pairs = list(zip(doms, doms[1:]))
    cases = {
        "intersect": lambda: [mod.intersect(a, b) for a, b in pairs],
        "clamp": lambda: [mod.clamp(a, -10, 10) for a in doms],
        "remove_value": lambda: [mod.remove_value(a, 0) for a in doms],
        "contains": lambda: [mod.contains(a, 3) for a in doms],
        "normalize": lambda: [mod.normalize(a + b) for a, b in pairs],
    }
    return {name: min(timeit.repeat(fn, number=1, repeat=repeat)) for name, fn in cases.items()}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=20000)
    args = ap.parse_args()
    doms = _domains(random.Random(0), args.size)

    py = micro(_kernels_py, doms, args.repeat)
    cy = micro(_kernels, doms, args.repeat) if _kernels else None
    print(f"{'kernel':<14}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for name, t in py.items():
        if cy:
            print(f"{name:<14}{t * 1e3:>12.2f}{cy[name] * 1e3:>12.2f}{t / cy[name]:>9.1f}x")
        else:
            print(f"{name:<14}{t * 1e3:>12.2f}{'n/a':>12}")

    print("\nend-to-end corpus search (max_len 8):")
    code = END_TO_END.format(repeat=args.repeat)
    for pure in ("1", ""):
        env = dict(os.environ, FREEARRAYS_PURE=pure)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        backend, secs = out.stdout.split()
        print(f"  {backend:<8}{float(secs):8.3f}s")


if __name__ == "__main__":
    main()
