"""Timing of exact rank on random sparse integer matrices, both sides of the dense cutoff."""

import argparse
import random
import time
from dataclasses import dataclass

from defcohom.exact_linalg import DENSE_CUTOFF, RationalMatrix, rank


@dataclass(frozen=True)
class BenchConfig:
    sizes: tuple[int, ...] = (20, 40, 64, 80, 120)
    density: float = 0.1
    seed: int = 0


def random_sparse(rng: random.Random, n: int, density: float) -> RationalMatrix:
    entries = {(i, j): rng.randint(-9, 9) for i in range(n) for j in range(n) if rng.random() < density}
    return RationalMatrix(n, n, entries)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=list(BenchConfig.sizes))
    ap.add_argument("--density", type=float, default=BenchConfig.density)
    ap.add_argument("--seed", type=int, default=BenchConfig.seed)
    a = ap.parse_args()
    cfg = BenchConfig(tuple(a.sizes), a.density, a.seed)
    rng = random.Random(cfg.seed)
    print(f"dense path when rows*cols <= {DENSE_CUTOFF}")
    for n in cfg.sizes:
        m = random_sparse(rng, n, cfg.density)
        t0 = time.perf_counter()
        r = rank(m)
        path = "dense" if n * n <= DENSE_CUTOFF else "sparse"
        print(f"n={n:4d} nnz={m.nnz:6d} rank={r:4d} {path:6s} {time.perf_counter() - t0:.3f}s")


if __name__ == "__main__":
    main()
