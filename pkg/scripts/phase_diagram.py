"""Phase-diagram data in (U, mu) and (U, nu) plus the three boundary curves.

Writes CSV files into an output directory:

    grid_mu.csv         phase at every (U, mu) grid point
    grid_nu.csv         phase at every (U, nu) grid point (MIXED where no mu attains nu)
    boundary_<KIND>.csv traced crossings with their doping gaps
"""

from __future__ import annotations

import argparse
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from hubbard_hf import asymptotics as asy
from hubbard_hf.boundary import BoundaryKind
from hubbard_hf.cli import SweepSpec, cmd_boundary, cmd_sweep


@dataclass(frozen=True)
class DiagramConfig:
    u_range: tuple[float, float, int] = (1.0, 40.0, 40)
    mu_range: tuple[float, float, int] = (0.0, 24.0, 49)
    nu_range: tuple[float, float, int] = (0.0, 1.0, 41)
    parallelism: int = 0
    curves: dict = field(default_factory=lambda: {
        BoundaryKind.AF_F: tuple(np.linspace(12.0, 60.0, 25)),
        BoundaryKind.F_P: tuple(asy.FOUR_PI - x for x in np.geomspace(3.0, 0.01, 20)),
        BoundaryKind.AF_P: tuple(np.linspace(0.5, 7.0, 14)),
    })
    f_p_tol: float = 1e-14


def run(cfg: DiagramConfig, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    for name, kwargs in (("grid_mu", {"mu_range": cfg.mu_range}),
                         ("grid_nu", {"nu_range": cfg.nu_range})):
        t0 = time.perf_counter()
        spec = SweepSpec(u_range=cfg.u_range, parallelism=cfg.parallelism, **kwargs)
        text, failed = cmd_sweep(spec)
        (out / f"{name}.csv").write_text(text)
        print(f"{name}: {len(spec.points())} points, {failed} failed, "
              f"{time.perf_counter() - t0:.1f} s")
    for kind, grid in cfg.curves.items():
        t0 = time.perf_counter()
        tol = cfg.f_p_tol if kind is BoundaryKind.F_P else 1e-11
        text, failed = cmd_boundary(kind, grid, tol)
        (out / f"boundary_{kind.value}.csv").write_text(text)
        print(f"boundary {kind.value}: {len(grid)} points, {failed} failed, "
              f"{time.perf_counter() - t0:.1f} s")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--out", type=Path, default=Path("phase_diagram"))
    parser.add_argument("--parallelism", type=int, default=0)
    parser.add_argument("--coarse", action="store_true", help="Small grids for a quick look.")
    args = parser.parse_args()
    cfg = DiagramConfig(parallelism=args.parallelism)
    if args.coarse:
        cfg = DiagramConfig(u_range=(1.0, 40.0, 10), mu_range=(0.0, 24.0, 13),
                            nu_range=(0.0, 1.0, 11), parallelism=args.parallelism,
                            curves={k: v[:: max(1, math.ceil(len(v) / 5))]
                                    for k, v in DiagramConfig().curves.items()})
    run(cfg, args.out)


if __name__ == "__main__":
    main()
