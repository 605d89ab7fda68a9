"""Phase-boundary location by root finding on free-energy differences."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from . import asymptotics as asy
from .errors import BracketError, DomainError, UndefinedFreeEnergyError
from .free_energy import PhaseLabel, free_energy, free_energy_difference
from .meanfield import DEFAULT_SOLVER, ModelPoint, SolverConfig

DEFAULT_TOL = 1e-11
CROSSING_RTOL = 1e-10


class BoundaryKind(str, Enum):
    AF_F = "AF_F"
    F_P = "F_P"
    AF_P = "AF_P"

    @property
    def phases(self) -> tuple[PhaseLabel, PhaseLabel]:
        """(phase below the crossing, phase above it)."""
        return {
            BoundaryKind.AF_F: (PhaseLabel.AF, PhaseLabel.F),
            BoundaryKind.F_P: (PhaseLabel.F, PhaseLabel.P),
            BoundaryKind.AF_P: (PhaseLabel.AF, PhaseLabel.P),
        }[self]


# U windows where a crossing is known to exist (inclusive low, exclusive high).
DEFAULT_WINDOWS = {
    BoundaryKind.AF_F: (12.0, math.inf),
    BoundaryKind.F_P: (9.0, asy.FOUR_PI),
    BoundaryKind.AF_P: (0.0, 7.0),
}


@dataclass(frozen=True)
class BoundaryConfig:
    tol: float = DEFAULT_TOL
    crossing_rtol: float = CROSSING_RTOL
    windows: dict = field(default_factory=lambda: dict(DEFAULT_WINDOWS))
    exploratory: bool = False
    solver: SolverConfig = DEFAULT_SOLVER

    def __post_init__(self) -> None:
        if not (self.tol > 0 and self.crossing_rtol > 0):
            raise DomainError("tolerances must be positive")


DEFAULT_BOUNDARY = BoundaryConfig()


@dataclass(frozen=True)
class BoundaryPoint:
    U: float
    mu_star: float
    kind: BoundaryKind
    doping_low: float
    doping_high: float
    f_at_crossing: float
    bisection_width: float
    crossing_residual: float = 0.0
    exploratory: bool = False


@dataclass(frozen=True)
class CurveTrace:
    kind: BoundaryKind
    points: tuple[BoundaryPoint, ...]
    u_grid: tuple[float, ...]
    tol: float
    errors: dict = field(default_factory=dict)


def _in_window(U: float, kind: BoundaryKind, cfg: BoundaryConfig) -> bool:
    lo, hi = cfg.windows[kind]
    if kind is BoundaryKind.AF_P:
        return lo < U <= hi
    return lo <= U < hi


def _difference(U: float, mu: float, kind: BoundaryKind, cfg: BoundaryConfig) -> float:
    a, b = kind.phases
    return free_energy_difference(ModelPoint(U, mu), a, b, cfg.solver)


def find_crossing(U: float, kind: BoundaryKind | str, bracket: tuple[float, float],
                  tol: float | None = None,
                  cfg: BoundaryConfig = DEFAULT_BOUNDARY) -> BoundaryPoint:
    """Locate mu* in ``bracket`` where the two free energies of ``kind`` agree.

    Brent's method (bisection safeguarded, with secant and inverse
    quadratic steps) runs on F_a - F_b to absolute width ``tol``.  Both pure
    phases exist at mu*, and their dopings there bound the mixed region.
    """
    kind = BoundaryKind(kind)
    tol = cfg.tol if tol is None else tol
    if not tol > 0:
        raise DomainError("tol must be positive")
    inside = _in_window(U, kind, cfg)
    if not inside and not cfg.exploratory:
        raise DomainError(f"U = {U!r} is outside the {kind.value} window {cfg.windows[kind]}")
    lo, hi = sorted(map(float, bracket))
    f_lo = _difference(U, lo, kind, cfg)
    f_hi = _difference(U, hi, kind, cfg)
    if f_lo * f_hi > 0:
        raise BracketError(f"no sign change of F_a - F_b on [{lo!r}, {hi!r}] at U = {U!r}")
    if f_lo == 0:
        mu = lo
    elif f_hi == 0:
        mu = hi
    else:
        rtol = 4 * np.finfo(float).eps
        mu = brentq(lambda m: _difference(U, m, kind, cfg), lo, hi, xtol=tol, rtol=rtol,
                    maxiter=200)
    a, b = kind.phases
    at = ModelPoint(U, mu)
    f_a, d_low = free_energy(at, a, cfg.solver)
    f_b, d_high = free_energy(at, b, cfg.solver)
    gap = free_energy_difference(at, a, b, cfg.solver)
    return BoundaryPoint(
        U=U, mu_star=mu, kind=kind, doping_low=d_low, doping_high=d_high,
        f_at_crossing=0.5 * (f_a + f_b),
        bisection_width=2.0 * (tol + 4 * np.finfo(float).eps * abs(mu)),
        crossing_residual=abs(gap),
        exploratory=not inside,
    )


def predicted(U: float, kind: BoundaryKind) -> tuple[float, float]:
    """Asymptotic prediction of mu* and a search half-width around it."""
    if kind is BoundaryKind.AF_F:
        pred = asy.mu_I_app(U).value
        # Half of the first correction beyond U/2 - 4.
        return pred, 0.5 * 4.0 * math.sqrt(2.0 * math.pi / U)
    if kind is BoundaryKind.F_P:
        x = asy.FOUR_PI - U
        return asy.mu_II_app(U).value, x**3
    e = math.exp(-2.0 * math.pi / math.sqrt(U))
    pred = asy.mu_III_app(U).value
    sub = 2.0 * math.sqrt(2.0) * (2.0 + math.log(2.0)) / math.pi * math.sqrt(U) * e
    return pred, 0.5 * sub


def _limits(U: float, kind: BoundaryKind) -> tuple[float, float]:
    if kind is BoundaryKind.AF_F:
        return 0.0, 0.5 * U
    if kind is BoundaryKind.AF_P:
        e = math.exp(-2.0 * math.pi / math.sqrt(U))
        return 16.0 * e, 32.0 * e
    return 0.0, 0.5 * U + 4.0


def auto_bracket(U: float, kind: BoundaryKind | str, center: float | None = None,
                 half_width: float | None = None,
                 cfg: BoundaryConfig = DEFAULT_BOUNDARY) -> tuple[float, float]:
    """A sign-change bracket near ``center`` (default: the asymptotic prediction).

    The difference is sampled on nine points; points where one phase has no
    solution are skipped, and the width doubles until a sign change appears.
    """
    kind = BoundaryKind(kind)
    pred, w = predicted(U, kind)
    center = pred if center is None else center
    w = w if half_width is None else half_width
    lo_lim, hi_lim = _limits(U, kind)

    def diff(m: float) -> float | None:
        try:
            return _difference(U, m, kind, cfg)
        except UndefinedFreeEnergyError:
            return None

    for _ in range(6):
        mus = np.unique(np.clip(center + w * np.linspace(-1.0, 1.0, 9), lo_lim, hi_lim))
        raw = [(float(m), diff(float(m))) for m in mus]
        vals = [(m, d) for m, d in raw if d is not None]
        # A crossing may sit just inside the edge where one phase ceases to
        # exist, so walk each defined/undefined pair in to that edge.
        for (m1, d1), (m2, d2) in zip(raw[:-1], raw[1:]):
            if (d1 is None) == (d2 is None):
                continue
            good, bad = (m1, m2) if d2 is None else (m2, m1)
            for _ in range(60):
                mid = 0.5 * (good + bad)
                if mid in (good, bad):
                    break
                if diff(mid) is None:
                    bad = mid
                else:
                    good = mid
            vals.append((good, diff(good)))
        vals.sort()
        pairs = [(p, q) for p, q in zip(vals[:-1], vals[1:]) if p[1] * q[1] <= 0]
        if pairs:
            p, q = min(pairs, key=lambda pq: abs(0.5 * (pq[0][0] + pq[1][0]) - center))
            return p[0], q[0]
        w *= 2.0
    raise BracketError(f"no {kind.value} crossing found near mu = {center!r} at U = {U!r}")


def trace(kind: BoundaryKind | str, u_grid, tol: float | None = None,
          cfg: BoundaryConfig = DEFAULT_BOUNDARY) -> CurveTrace:
    """Crossings along ``u_grid`` with brackets continued from the previous point.

    The first point is bracketed around the asymptotic prediction; later
    points shift the previous mu* by the predicted change.  Failures are
    recorded per U and the trace continues.
    """
    kind = BoundaryKind(kind)
    tol = cfg.tol if tol is None else tol
    grid = tuple(float(u) for u in u_grid)
    if any(b <= a for a, b in zip(grid[:-1], grid[1:])):
        raise DomainError("u_grid must be strictly increasing")
    points: list[BoundaryPoint] = []
    errors: dict[float, str] = {}
    prev: BoundaryPoint | None = None
    for U in grid:
        try:
            if not (cfg.exploratory or _in_window(U, kind, cfg)):
                raise DomainError(f"U = {U!r} is outside the {kind.value} window")
            pred, w = predicted(U, kind)
            if prev is not None:
                center = prev.mu_star + pred - predicted(prev.U, kind)[0]
            else:
                center = pred
            bracket = auto_bracket(U, kind, center, w, cfg)
            bp = find_crossing(U, kind, bracket, tol, cfg)
        except (ArithmeticError, DomainError) as exc:
            errors[U] = f"{type(exc).__name__}: {exc}"
            continue
        points.append(bp)
        prev = bp
    return CurveTrace(kind=kind, points=tuple(points), u_grid=grid, tol=tol, errors=errors)


def mixed_gap(bp: BoundaryPoint) -> tuple[float, float]:
    """Doping interval skipped by the pure phases at the crossing."""
    return bp.doping_low, bp.doping_high
