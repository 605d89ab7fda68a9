"""Numeric phase boundaries against their asymptotic expansions.

For each boundary kind, prints the crossing and doping errors and the
empirical convergence rate: the log-log slope of |mu* - mu_app| for AF_F
and F_P, and the remainder constant C(U) for AF_P.
"""

from __future__ import annotations

import argparse
from dataclasses import dataclass, field

from hubbard_hf import asymptotics as asy
from hubbard_hf.boundary import BoundaryKind
from hubbard_hf.cli import compare_rows, fmt


@dataclass(frozen=True)
class ReportConfig:
    grids: dict = field(default_factory=lambda: {
        BoundaryKind.AF_F: (30.0, 42.0, 60.0, 85.0, 120.0),
        BoundaryKind.F_P: tuple(asy.FOUR_PI - x for x in (1.0, 0.5, 0.25, 0.125)),
        BoundaryKind.AF_P: (2.0, 3.0, 4.0, 5.0),
    })
    tols: dict = field(default_factory=lambda: {
        BoundaryKind.AF_F: 1e-11, BoundaryKind.F_P: 1e-14, BoundaryKind.AF_P: 1e-11,
    })


def report(cfg: ReportConfig) -> None:
    for kind, grid in cfg.grids.items():
        rows, fit, failed = compare_rows(kind, grid, cfg.tols[kind])
        print(f"== {kind.value} ({failed} failed)")
        print(f"{'U':>20} {'quantity':>20} {'numeric':>22} {'abs_err':>10}  order")
        for r in rows:
            print(f"{r.U:20.15g} {r.quantity:>20} {r.numeric:22.17g} {r.abs_err:10.3e}  "
                  f"{r.nominal_order}")
        for key, value in fit.items():
            shown = " ".join(fmt(v) for v in value) if isinstance(value, list) else fmt(value)
            print(f"  {key}: {shown}")


def main() -> None:
    argparse.ArgumentParser(description=__doc__).parse_args()
    report(ReportConfig())


if __name__ == "__main__":
    main()
