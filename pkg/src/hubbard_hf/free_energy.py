"""Hartree-Fock functionals, free energies and phase classification.

Every theta integral  int N0(eps) (c + eps) theta(c + eps) d eps  is the
shifted first moment of N0 above -c, i.e. ``dos.linear_tail(-c, -c)``.
The tail routines clamp their argument to the band, so no branching on the
position of the Heaviside kink is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from . import dos
from .errors import DomainError, UndefinedFreeEnergyError
from .meanfield import (
    DEFAULT_SOLVER,
    AFBranch,
    AFSolution,
    FBranch,
    FSolution,
    ModelPoint,
    SolverConfig,
    solve_af_all,
    solve_f_all,
    solve_p,
)

TIE_TOL = 1e-13


class PhaseLabel(str, Enum):
    P = "P"
    F = "F"
    AF = "AF"


# Lower rank wins an exact tie.
_PRIORITY = {PhaseLabel.P: 0, PhaseLabel.AF: 1, PhaseLabel.F: 2}


def _theta_integral(c: float, cfg: dos.QuadratureConfig) -> float:
    return dos.linear_tail(-c, -c, cfg)


# Each functional is returned as a list of terms.  Writing d0 = 1 - s puts
# the P and F functionals in the form U/4 - mu + (small terms), so when two
# phases are differenced with fsum the large parts cancel exactly and the
# result keeps full relative precision.


def terms_p(d0: float, at: ModelPoint,
            cfg: dos.QuadratureConfig = dos.DEFAULT_QUAD) -> list[float]:
    U, mu = at.U, at.mu
    s = 1.0 - d0
    c = 0.5 * U * d0 - mu
    return [0.25 * U, -mu, -0.25 * U * s * s, -2.0 * _theta_integral(c, cfg)]


def terms_f(d0: float, m0: float, at: ModelPoint,
            cfg: dos.QuadratureConfig = dos.DEFAULT_QUAD) -> list[float]:
    U, mu = at.U, at.mu
    s = 1.0 - d0
    lo = 0.5 * U * (d0 - m0) - mu
    hi = 0.5 * U * (d0 + m0) - mu
    return [0.25 * U, -mu, 0.25 * U * (m0 - s) * (m0 + s),
            -_theta_integral(lo, cfg), -_theta_integral(hi, cfg)]


def terms_af_raw(d0: float, m1: float, at: ModelPoint,
                 cfg: dos.QuadratureConfig = dos.DEFAULT_QUAD) -> list[float]:
    """G_AF terms at arbitrary (d0, m1).

    With c = U d0/2 - mu and E = sqrt(Delta^2 + eps^2) >= Delta, the
    (c + E) branch is occupied for all eps when c >= -Delta and above
    |eps| = sqrt(c^2 - Delta^2) otherwise; the (c - E) branch is occupied
    only when c > Delta, below that same |eps|.
    """
    U, mu = at.U, at.mu
    delta = 0.5 * U * m1
    c = 0.5 * U * d0 - mu
    base = [0.25 * U * m1 * m1, -0.25 * U * d0 * d0, c]
    if delta == 0.0:
        return base + [-2.0 * _theta_integral(c, cfg)]
    k0 = dos.kernel_sqrt(0.0, delta, cfg)
    if c < -delta:
        b = min(math.sqrt((-c - delta) * (-c + delta)), dos.BAND_EDGE)
        return base + [-2.0 * c * dos.tail_mass(b, cfg), -2.0 * dos.kernel_sqrt(b, delta, cfg)]
    out = base + [-c, -2.0 * k0]
    if c > delta:
        a = min(math.sqrt((c - delta) * (c + delta)), dos.BAND_EDGE)
        inner = k0 - dos.kernel_sqrt(a, delta, cfg)
        out += [-2.0 * c * (0.5 - dos.tail_mass(a, cfg)), 2.0 * inner]
    return out


def terms_af(sol: AFSolution, at: ModelPoint,
             cfg: dos.QuadratureConfig = dos.DEFAULT_QUAD) -> list[float]:
    """G_AF terms at a solution, from the closed form of its branch."""
    U, mu = at.U, at.mu
    delta = sol.delta
    if sol.b_plus is None:
        return [delta * delta / U, -2.0 * dos.kernel_sqrt(0.0, delta, cfg)]
    d0 = sol.d0
    if d0 < 0:
        # Mirror image of a doped solution at -mu.
        d0, mu = -d0, -mu
    return [delta * delta / U, 0.25 * U * d0 * d0, -mu * d0,
            -2.0 * dos.kernel_sqrt(sol.b_plus, delta, cfg)]


def grand_potential_p(d0: float, at: ModelPoint,
                      cfg: dos.QuadratureConfig = dos.DEFAULT_QUAD) -> float:
    """G_P(d0; U, mu)."""
    return math.fsum(terms_p(d0, at, cfg))


def grand_potential_f_raw(d0: float, m0: float, at: ModelPoint,
                          cfg: dos.QuadratureConfig = dos.DEFAULT_QUAD) -> float:
    """G_F(d0, m0; U, mu) at arbitrary arguments."""
    return math.fsum(terms_f(d0, m0, at, cfg))


def grand_potential_f(sol: FSolution, at: ModelPoint,
                      cfg: dos.QuadratureConfig = dos.DEFAULT_QUAD) -> float:
    """G_F at a mean-field solution."""
    return math.fsum(terms_f(sol.d0, sol.m0, at, cfg))


def grand_potential_af_raw(d0: float, m1: float, at: ModelPoint,
                           cfg: dos.QuadratureConfig = dos.DEFAULT_QUAD) -> float:
    """G_AF(d0, m1; U, mu) at arbitrary arguments."""
    return math.fsum(terms_af_raw(d0, m1, at, cfg))


def grand_potential_af(sol: AFSolution, at: ModelPoint,
                       cfg: dos.QuadratureConfig = dos.DEFAULT_QUAD) -> float:
    """G_AF at a mean-field solution (half-filled or doped closed form)."""
    return math.fsum(terms_af(sol, at, cfg))


@dataclass(frozen=True)
class PhaseRecord:
    """Free energies at a point and the phase that minimizes them."""

    at: ModelPoint
    f_p: float
    f_f: float | None
    f_af: float | None
    phase: PhaseLabel
    winner_doping: float
    winner_magnetization: float
    solution_inventory: dict[str, int] = field(default_factory=dict)
    tie: bool = False
    scan_points: int = DEFAULT_SOLVER.scan_points

    def free_energy(self, label: PhaseLabel) -> float | None:
        return {PhaseLabel.P: self.f_p, PhaseLabel.F: self.f_f, PhaseLabel.AF: self.f_af}[label]


def _best(values: list[tuple[float, object]]) -> tuple[float, object] | tuple[None, None]:
    if not values:
        return None, None
    return min(values, key=lambda t: t[0])


def phase_free_energies(at: ModelPoint, cfg: SolverConfig = DEFAULT_SOLVER):
    """Per-phase minimum free energy and minimizing state.

    Returns a dict label -> (F or None, state or None) and the raw F and AF
    solution lists; the P state is a PSolution.
    """
    q = cfg.quad
    p = solve_p(at, cfg)
    fs = solve_f_all(at, cfg)
    afs = solve_af_all(at, cfg)
    out = {
        PhaseLabel.P: (grand_potential_p(p.d0, at, q), p),
        PhaseLabel.F: _best([(grand_potential_f(s, at, q), s) for s in fs]),
        PhaseLabel.AF: _best([(grand_potential_af(s, at, q), s) for s in afs]),
    }
    return out, fs, afs


def classify(at: ModelPoint, cfg: SolverConfig = DEFAULT_SOLVER) -> PhaseRecord:
    """Solve all three phases at ``at`` and pick the lowest free energy."""
    energies, fs, afs = phase_free_energies(at, cfg)
    present = [(val, lab) for lab, (val, _) in energies.items() if val is not None]
    f_min = min(v for v, _ in present)
    close = [lab for v, lab in present if v - f_min < TIE_TOL]
    winner = min(close, key=_PRIORITY.__getitem__)
    state = energies[winner][1]
    if winner is PhaseLabel.P:
        mag = 0.0
    elif winner is PhaseLabel.F:
        mag = state.m0
    else:
        mag = state.m1
    inventory = {"P": 1}
    for s in fs:
        key = f"F.{s.branch.value}"
        inventory[key] = inventory.get(key, 0) + 1
    for s in afs:
        key = f"AF.{s.branch.value}"
        inventory[key] = inventory.get(key, 0) + 1
    return PhaseRecord(
        at=at,
        f_p=energies[PhaseLabel.P][0],
        f_f=energies[PhaseLabel.F][0],
        f_af=energies[PhaseLabel.AF][0],
        phase=winner,
        winner_doping=state.d0,
        winner_magnetization=mag,
        solution_inventory=inventory,
        tie=len(close) > 1,
        scan_points=cfg.scan_points,
    )


def free_energy_terms(at: ModelPoint, label: PhaseLabel, cfg: SolverConfig = DEFAULT_SOLVER,
                      branch: FBranch | AFBranch | None = None) -> tuple[list[float], float]:
    """Terms of F_label and the doping of the minimizing state.

    With ``branch`` set, the minimum runs over solutions of that branch only,
    which tracks a single smooth family of stationary points.  Raises
    UndefinedFreeEnergyError if there is no such solution.
    """
    q = cfg.quad
    if label is PhaseLabel.P:
        p = solve_p(at, cfg)
        return terms_p(p.d0, at, q), p.d0
    if label is PhaseLabel.F:
        cands = [(terms_f(s.d0, s.m0, at, q), s.d0) for s in solve_f_all(at, cfg)
                 if branch is None or s.branch is branch]
    else:
        cands = [(terms_af(s, at, q), s.d0) for s in solve_af_all(at, cfg)
                 if branch is None or s.branch is branch]
    if not cands:
        raise UndefinedFreeEnergyError(f"no {label.value} solution at U={at.U!r}, mu={at.mu!r}")
    return min(cands, key=lambda c: math.fsum(c[0]))


def free_energy(at: ModelPoint, label: PhaseLabel, cfg: SolverConfig = DEFAULT_SOLVER,
                branch: FBranch | AFBranch | None = None) -> tuple[float, float]:
    """(F_label, doping of the minimizing state)."""
    terms, d0 = free_energy_terms(at, label, cfg, branch)
    return math.fsum(terms), d0


def free_energy_difference(at: ModelPoint, a: PhaseLabel, b: PhaseLabel,
                           cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """F_a - F_b summed exactly over the combined terms."""
    ta, _ = free_energy_terms(at, a, cfg)
    tb, _ = free_energy_terms(at, b, cfg)
    return math.fsum(ta + [-t for t in tb])


def kinks(U: float) -> tuple[float, ...]:
    """Chemical potentials where F_P fails to be smooth."""
    edge = 4.0 + 0.5 * U
    return (-edge, 0.0, edge)


def doping_consistency(at: ModelPoint, label: PhaseLabel, h: float = 1e-4,
                       cfg: SolverConfig = DEFAULT_SOLVER,
                       branch: FBranch | AFBranch | None = None) -> tuple[float, float]:
    """Solver doping and the central difference -(F(mu+h) - F(mu-h)) / 2h."""
    if not h > 0:
        raise DomainError("h must be positive")
    for k in kinks(at.U):
        if at.mu - h < k < at.mu + h:
            raise DomainError(f"stencil [{at.mu - h!r}, {at.mu + h!r}] straddles the kink at {k!r}")
    _, direct = free_energy(at, label, cfg, branch)
    f_plus, _ = free_energy(ModelPoint(at.U, at.mu + h), label, cfg, branch)
    f_minus, _ = free_energy(ModelPoint(at.U, at.mu - h), label, cfg, branch)
    return direct, -(f_plus - f_minus) / (2.0 * h)
