#!/usr/bin/env python3
"""Tabulate n-point correlation series and compare both evaluation routes.

For each point set the brute partition sum and the theta-derivative
determinant are expanded to the requested order; the table shows leading
coefficients, agreement, and the time each route took.
"""

import argparse
import time
from dataclasses import dataclass
from fractions import Fraction as F

from qwedge.correlators import EvalPoint, f_brute, u_series


@dataclass
class Config:
    point_sets: tuple[tuple[F, ...], ...]
    order: int
    shown: int  # leading coefficients to print


DEFAULT_POINTS = (
    (F(2),),
    (F(2), F(3)),
    (F(2), F(5)),
    (F(2), F(3), F(5)),
)


def run(cfg: Config) -> None:
    header = f"{'s':24} {'brute':>8} {'det':>8}  agree  leading coefficients"
    print(header)
    print("-" * len(header))
    for svals in cfg.point_sets:
        point = EvalPoint(svals)
        t0 = time.perf_counter()
        lhs = f_brute(point, cfg.order)
        t1 = time.perf_counter()
        rhs = u_series(point, cfg.order)
        t2 = time.perf_counter()
        lead = ", ".join(str(lhs.coefficient(lhs.offset + k))
                         for k in range(cfg.shown))
        label = "(" + ",".join(str(s) for s in svals) + ")"
        print(f"{label:24} {t1 - t0:7.2f}s {t2 - t1:7.2f}s  {lhs == rhs!s:5}  "
              f"q^{lhs.offset} * [{lead}, ...]")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--order", type=int, default=12)
    ap.add_argument("--shown", type=int, default=5)
    ap.add_argument("--points", action="append", default=None,
                    help="comma-separated s values; repeatable")
    args = ap.parse_args()
    if args.points:
        sets = tuple(tuple(F(x) for x in p.split(",")) for p in args.points)
    else:
        sets = DEFAULT_POINTS
    run(Config(sets, args.order, args.shown))


if __name__ == "__main__":
    main()
