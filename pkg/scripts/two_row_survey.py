"""Where the two spectral sequences of random two-row double complexes settle."""

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from defcohom.double_complex import two_row, two_row_check
from defcohom.synthetic import RandomComplexConfig, random_chain_map, random_split_complex


@dataclass(frozen=True)
class SurveyConfig:
    instances: int = 100
    seed: int = 0
    max_dim: int = 4


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=SurveyConfig.instances)
    ap.add_argument("--seed", type=int, default=SurveyConfig.seed)
    ap.add_argument("--max-dim", type=int, default=SurveyConfig.max_dim)
    a = ap.parse_args()
    cfg = SurveyConfig(a.instances, a.seed, a.max_dim)
    rc = RandomComplexConfig(window=(0, 4), max_dim=cfg.max_dim)
    rows, cols, failures = Counter(), Counter(), 0
    for t in range(cfg.instances):
        rng = random.Random(cfg.seed * 1_000_003 + t)
        s, u = random_split_complex(rng, rc), random_split_complex(rng, rc)
        rep = two_row_check(two_row(random_chain_map(rng, s, u)))
        rows[rep.rows_stable_at] += 1
        cols[rep.cols_stable_at] += 1
        failures += not rep.ok
    print(f"instances: {cfg.instances}, failed checks: {failures}")
    print("rows-first stable page:", dict(sorted(rows.items())))
    print("columns-first stable page:", dict(sorted(cols.items())))


if __name__ == "__main__":
    main()
