"""Poisson cohomology of the linear structure on so(3)*, weight by weight,
next to the CE cohomology of so(3) with symmetric-power coefficients."""

import argparse
from dataclasses import dataclass

from defcohom.chain_complex import cohomology_dims
from defcohom.lie_theory import ce_complex, coadjoint_rep, so3, symmetric_power
from defcohom.poisson import linear_poisson, poisson_complex


@dataclass(frozen=True)
class TableConfig:
    max_weight: int = 4


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-weight", type=int, default=TableConfig.max_weight)
    cfg = TableConfig(ap.parse_args().max_weight)
    g = so3()
    pi = linear_poisson(g)
    print("weight  Poisson H^0..H^3   CE(S^w) H^0..H^3")
    for w in range(cfg.max_weight + 1):
        hp = cohomology_dims(poisson_complex(pi, w))
        hc = cohomology_dims(ce_complex(g, symmetric_power(coadjoint_rep(g), w)))
        fmt = lambda h: " ".join(f"{h[k]:3d}" for k in range(4))
        print(f"{w:6d}  {fmt(hp)}    {fmt(hc)}")


if __name__ == "__main__":
    main()
