"""Compare the compiled and pure-Python edit-distance kernels.

    python3 benchmarks/bench_edit_distance.py [--pairs N] [--length L] [--seed S]

Both kernels see the same seeded token sequences; results are checked for
agreement before timings are reported.
"""

import argparse
import random
import timeit

from itnkit import _editdist_py
from itnkit.editdistance import BACKEND

try:
    from itnkit import _editdist
except ImportError:
    _editdist = None


def make_pairs(count, length, seed):
    rng = random.Random(seed)
    vocab = [f"w{k}" for k in range(50)]

    def sentence():
        return [rng.choice(vocab) for _ in range(rng.randint(length // 2, length))]

    return [(sentence(), sentence()) for _ in range(count)]


def run(kernel, pairs):
    return [kernel.edit_distance(a, b) for a, b in pairs]


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--pairs", type=int, default=2000)
    parser.add_argument("--length", type=int, default=30, help="longest sentence in tokens")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    pairs = make_pairs(args.pairs, args.length, args.seed)
    kernels = {"python": _editdist_py}
    if _editdist is not None:
        kernels["cython"] = _editdist
    else:
        print("compiled kernel not built; timing the fallback only")
    reference = run(_editdist_py, pairs)
    print(f"active backend: {BACKEND}; {args.pairs} pairs of up to {args.length} tokens")
    best = {}
    for name, kernel in kernels.items():
        assert run(kernel, pairs) == reference, f"{name} disagrees with the reference kernel"
        best[name] = min(timeit.repeat(lambda: run(kernel, pairs), number=1, repeat=args.repeat))
        print(f"{name:>7}: {best[name] * 1e3:8.1f} ms  ({best[name] / args.pairs * 1e6:6.1f} us/pair)")
    if "cython" in best:
        print(f"speed-up: {best['python'] / best['cython']:.1f}x")


if __name__ == "__main__":
    main()
