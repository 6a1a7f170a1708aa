"""Time the compiled and pure-Python elimination kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N] [--seed S]

Each workload is run under both backends and the results are compared
before any timing is reported.
"""

from __future__ import annotations

import argparse
import random
import statistics
import time

from ternary_cohomology import builtin_example
from ternary_cohomology.cochain import Theory, matrixize
from ternary_cohomology.exactmath import ExactMatrix, kernels, matmul, nullspace, rank
from ternary_cohomology.takhtajan import induced_binary


def random_matrix(rng: random.Random, rows: int, cols: int, density: float = 0.3) -> ExactMatrix:
    items = {(i, j): rng.randint(-3, 3) for i in range(rows) for j in range(cols) if rng.random() < density}
    return ExactMatrix.from_sparse(rows, cols, items)


def workloads(seed: int):
    rng = random.Random(seed)
    total = builtin_example("totally-assoc-2d")
    W = induced_binary(total).derived
    weak3 = matrixize(total, Theory.TernaryWeak, 3)
    hoch3 = matrixize(W, Theory.BinaryAssociative, 3)
    dense = random_matrix(rng, 120, 120, 0.5)
    low = random_matrix(rng, 200, 24, 0.3) @ random_matrix(rng, 24, 160, 0.3)
    return [
        (f"rank weak δ³ {weak3.rows}x{weak3.cols}", lambda: rank(weak3)),
        (f"nullspace Hochschild δ³ on W {hoch3.rows}x{hoch3.cols}", lambda: nullspace(hoch3)),
        ("rank dense random 120x120", lambda: rank(dense)),
        ("nullspace rank-24 product 200x160", lambda: nullspace(low)),
        ("matmul weak δ⁴·δ³",
         lambda: matmul(matrixize(total, Theory.TernaryWeak, 4), weak3)),
    ]


def timed(fn, repeat: int) -> tuple[float, object]:
    samples, result = [], None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        samples.append(time.perf_counter() - t)
    return statistics.median(samples), result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    backends = sorted(kernels.BACKENDS)
    if "compiled" not in backends:
        print("compiled kernels not built; timing the python fallback only")
    print(f"{'workload':48s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for name, fn in workloads(args.seed):
        times, results = {}, {}
        for b in backends:
            with kernels.using_backend(b):
                times[b], results[b] = timed(fn, args.repeat)
        if len({repr(r) for r in results.values()}) != 1:
            raise SystemExit(f"backends disagree on {name}")
        speed = f"{times['python'] / times['compiled']:8.1f}x" if "compiled" in times else ""
        print(f"{name:48s} " + " ".join(f"{times[b]:9.4f}s" for b in backends) + "  " + speed)


if __name__ == "__main__":
    main()
