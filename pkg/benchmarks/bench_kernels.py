"""Time the integer kernels on each available backend.

    python3 benchmarks/bench_kernels.py [--repeat N]

Inputs are seeded small-entry matrices of the sizes the library actually
uses (Mukai lattices of surfaces and of the Kummer cover). Results of the
two backends are cross-checked before timing.
"""

import argparse
import random
import timeit

from kumlift.kernels import available_backends


def _matrix(rng: random.Random, n: int, bound: int = 3) -> list[int]:
    return [rng.randint(-bound, bound) for _ in range(n * n)]


def workloads(rng: random.Random):
    for n in (8, 16, 24):
        a, b = _matrix(rng, n), _matrix(rng, n)
        yield f"matmul {n}x{n}", "matmul", (a, b, n, n, n)
    for n in (8, 16):
        yield f"det {n}x{n}", "det", (_matrix(rng, n, 2), n)
        yield f"adjugate {n}x{n}", "adjugate_solve", (_matrix(rng, n, 2), n)
    yield "exterior power L^2 of 8x8", "exterior_power", (_matrix(rng, 8, 2), 8, 2)
    yield "exterior power L^3 of 8x8", "exterior_power", (_matrix(rng, 8, 2), 8, 3)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=200, help="calls per timing (default 200)")
    args = parser.parse_args()

    backends = available_backends()
    names = list(backends)
    print(f"{'workload':32}" + "".join(f"{n + ' (us)':>16}" for n in names) +
          ("    speedup" if len(names) > 1 else ""))
    for label, fn, call_args in workloads(random.Random(0)):
        results = {n: getattr(backends[n], fn)(*call_args) for n in names}
        if len({repr(r) for r in results.values()}) != 1:
            raise SystemExit(f"backends disagree on {label}")
        times = {}
        for n in names:
            f = getattr(backends[n], fn)
            times[n] = min(timeit.repeat(lambda: f(*call_args), number=args.repeat, repeat=3)) / args.repeat * 1e6
        row = f"{label:32}" + "".join(f"{times[n]:16.1f}" for n in names)
        if len(names) > 1:
            row += f"{times['python'] / times[names[-1]]:10.1f}x"
        print(row)


if __name__ == "__main__":
    main()
