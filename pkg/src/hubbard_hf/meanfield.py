"""Solvers for the P, F and AF mean-field equations at a point (U, mu).

Conventions: hopping t = 1, doping d0 in [-1, 1], Delta = U m1 / 2.  All
public solvers accept mu < 0 and use particle-hole symmetry internally
(d0 -> -d0, magnetizations unchanged).

F equations.  With u = U(d0 - m0)/2 and v = U(d0 + m0)/2 they read
v = G(u), u = G(v) for the nonincreasing map G(x) = U (1/2 - T(mu - x)),
T = tail_mass.  G is flat at +-U/2 outside |mu - x| < 4, which produces the
saturated branch.  Interior solutions are roots of u - G(G(u)) with u < G(u).

AF equations.  Either d0 = 0 and Delta solves the gap equation
int_0^4 N0 / sqrt(Delta^2 + eps^2) = 1/U (valid iff Delta >= mu), or the
band is doped with a lower edge b in (0, b_max) where Delta1(b) = Delta2(b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from . import dos
from .dos import DEFAULT_QUAD, QuadratureConfig
from .errors import BracketError, DomainError, RadicandError


@dataclass(frozen=True)
class ModelPoint:
    """A parameter pair (U, mu) in units of the hopping."""

    U: float
    mu: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.U) and self.U > 0):
            raise DomainError(f"U must be finite and positive, got {self.U!r}")
        if not math.isfinite(self.mu):
            raise DomainError(f"mu must be finite, got {self.mu!r}")

    def mirrored(self) -> "ModelPoint":
        return ModelPoint(self.U, -self.mu)


@dataclass(frozen=True)
class SolverConfig:
    """Root-finding tolerances and scan resolution."""

    x_tol: float = 1e-12
    residual_tol: float = 1e-10
    scan_points: int = 512
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)

    def __post_init__(self) -> None:
        if not (self.x_tol > 0 and self.residual_tol > 0 and self.scan_points >= 2):
            raise DomainError("solver tolerances must be positive and scan_points >= 2")


DEFAULT_SOLVER = SolverConfig()


class FBranch(str, Enum):
    INTERIOR = "Interior"
    SATURATED = "Saturated"


class AFBranch(str, Enum):
    HALF_FILLED = "HalfFilled"
    DOPED = "Doped"


@dataclass(frozen=True)
class PSolution:
    d0: float
    residual: float


@dataclass(frozen=True)
class FSolution:
    d0: float
    m0: float
    branch: FBranch
    residual: float


@dataclass(frozen=True)
class AFSolution:
    d0: float
    m1: float
    delta: float
    b_plus: float | None
    branch: AFBranch
    residual: float


def _brentq(f, a: float, b: float, xtol: float) -> float:
    try:
        return brentq(f, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    except ValueError as exc:
        raise BracketError(str(exc)) from exc


# P equation


def p_residual(d0: float, at: ModelPoint) -> float:
    """Left side of d0 - 1 + 2 int N0 theta(U d0/2 - mu + eps) = 0."""
    return d0 - 1.0 + 2.0 * dos.tail_mass(at.mu - 0.5 * at.U * d0)


def solve_p(at: ModelPoint, cfg: SolverConfig = DEFAULT_SOLVER) -> PSolution:
    """Unique solution of the P mean-field equation."""
    U, mu = at.U, at.mu

    def f(d: float) -> float:
        return 1.0 - d - 2.0 * dos.tail_mass(mu - 0.5 * U * d, cfg.quad)

    lo, hi = f(-1.0), f(1.0)
    if hi >= 0:
        d = 1.0
    elif lo <= 0:
        d = -1.0
    else:
        d = _brentq(f, -1.0, 1.0, cfg.x_tol * 1e-2)
    return PSolution(d0=d, residual=abs(f(d)))


# F equations


def g_map(x, at: ModelPoint, cfg: SolverConfig = DEFAULT_SOLVER):
    """G(x) = U int_0^{mu - x} N0, signed and flat at +-U/2; accepts arrays."""
    return at.U * (0.5 - dos.tail_mass(at.mu - np.asarray(x, dtype=float), cfg.quad))


def f_residuals(d0: float, m0: float, at: ModelPoint) -> tuple[float, float]:
    """Residuals of the two F equations (sum and difference form)."""
    U, mu = at.U, at.mu
    r1 = d0 + m0 - 1.0 + 2.0 * dos.tail_mass(mu - 0.5 * U * (d0 - m0))
    r2 = d0 - m0 - 1.0 + 2.0 * dos.tail_mass(mu - 0.5 * U * (d0 + m0))
    return r1, r2


def _scan_roots(x: np.ndarray, y: np.ndarray) -> list[tuple[float, float] | float]:
    """Exact zeros (floats) and sign-change brackets (pairs) along a scan."""
    out: list[tuple[float, float] | float] = []
    for i in range(len(x)):
        if y[i] == 0:
            out.append(float(x[i]))
        elif i + 1 < len(x) and y[i] * y[i + 1] < 0:
            out.append((float(x[i]), float(x[i + 1])))
    return out


def _solve_f_nonneg(at: ModelPoint, cfg: SolverConfig) -> list[FSolution]:
    U, mu = at.U, at.mu
    half = 0.5 * U
    u_p = half * solve_p(at, cfg).d0
    n = cfg.scan_points
    width = u_p + half
    if width <= 0:
        return []
    # Uniform nodes plus nodes clustered geometrically toward the P fixed point,
    # where close pairs of F roots appear near the Stoner threshold.
    nodes = np.concatenate([
        np.linspace(-half, u_p, n + 1)[:-1],
        u_p - width * np.geomspace(1e-9, 1.0, n),
    ])
    nodes = np.unique(nodes[nodes < u_p])

    def phi(u):
        return u - g_map(g_map(u, at, cfg), at, cfg)

    vals = phi(nodes)
    # Below this level phi is rounding noise (measured jitter is a few eps*U).
    noise = 30 * np.finfo(float).eps * max(1.0, U)
    roots: list[float] = []
    for item in _scan_roots(nodes, vals):
        if isinstance(item, tuple):
            try:
                roots.append(_brentq(lambda u: float(phi(u)), item[0], item[1], cfg.x_tol))
            except BracketError:
                # A sign change made of noise can vanish on re-evaluation.
                i = int(np.searchsorted(nodes, item[0]))
                if max(abs(vals[i]), abs(vals[i + 1])) > noise:
                    raise
        else:
            roots.append(item)

    sols: list[FSolution] = []
    u_sat = float(g_map(half, at, cfg))
    m_sat = dos.tail_mass(mu - half, cfg.quad)
    sat_ok = (4.0 + u_sat <= mu) and m_sat > 0
    merge = 10 * cfg.x_tol * max(1.0, U)
    # A root separated from the P fixed point only by noise-level values is
    # the P solution itself.
    if sat_ok:
        sols.append(FSolution(d0=1.0 - m_sat, m0=m_sat, branch=FBranch.SATURATED,
                              residual=max(map(abs, f_residuals(1.0 - m_sat, m_sat, at)))))
    kept: list[float] = [u_sat] if sat_ok else []
    for u in sorted(roots):
        v = float(g_map(u, at, cfg))
        m0 = (v - u) / U
        if m0 <= cfg.x_tol or abs(u - u_p) <= merge:
            continue
        if not np.any(np.abs(vals[(nodes > u) & (nodes < u_p)]) > noise):
            continue
        if any(abs(u - k) <= merge for k in kept):
            continue
        kept.append(u)
        d0 = (u + v) / U
        sols.append(FSolution(d0=d0, m0=m0, branch=FBranch.INTERIOR,
                              residual=max(map(abs, f_residuals(d0, m0, at)))))
    sols.sort(key=lambda s: s.m0)
    return sols


def solve_f_all(at: ModelPoint, cfg: SolverConfig = DEFAULT_SOLVER) -> list[FSolution]:
    """All F mean-field solutions with m0 > 0, sorted by m0."""
    if at.mu < 0:
        return [FSolution(-s.d0, s.m0, s.branch, s.residual)
                for s in _solve_f_nonneg(at.mirrored(), cfg)]
    return _solve_f_nonneg(at, cfg)


# AF equations


def gap_delta(U: float, cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Unique Delta > 0 solving int_0^4 N0 / sqrt(Delta^2 + eps^2) = 1/U."""
    if not U > 0:
        raise DomainError("U must be positive")
    target = 1.0 / U

    def f(t: float) -> float:
        return dos.kernel_inv_sqrt(0.0, math.exp(t), cfg.quad) - target

    hi = math.log(0.5 * U)
    lo = math.log(16.0) - 2.0 * math.pi / math.sqrt(U)
    while f(lo) <= 0:
        lo -= 1.0
    return math.exp(_brentq(f, lo, hi, 1e-15))


def b_plus_max(U: float, cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Unique b in (0, 4) with int_b^4 N0 / eps = 1/U."""
    if not U > 0:
        raise DomainError("U must be positive")
    target = 1.0 / U

    def f(t: float) -> float:
        return dos.inv_eps_tail(math.exp(t), cfg.quad) - target

    lo = math.log(16.0) - 2.0 * math.pi / math.sqrt(U) - 3.0
    while f(lo) <= 0:
        lo -= 2.0
    return math.exp(_brentq(f, lo, dos.LN4, 1e-15))


def delta1(b: float, U: float, cfg: SolverConfig = DEFAULT_SOLVER,
           bmax: float | None = None) -> float:
    """Delta1(b): the gap solving int_b^4 N0 / sqrt(Delta^2 + eps^2) = 1/U."""
    if b < 0:
        raise DomainError("b must be >= 0")
    if b == 0:
        return gap_delta(U, cfg)
    bmax = b_plus_max(U, cfg) if bmax is None else bmax
    if b > bmax * (1 + 1e-12):
        raise DomainError(f"b = {b!r} exceeds b_plus_max = {bmax!r}")
    if b >= bmax:
        return 0.0
    target = 1.0 / U

    def f(t: float) -> float:
        return dos.kernel_inv_sqrt(b, math.exp(t), cfg.quad) - target

    hi = math.log(gap_delta(U, cfg))
    lo = math.log(b) - 5.0
    while f(lo) <= 0:
        lo -= 10.0
        if lo < -690:
            return 0.0
    return math.exp(_brentq(f, lo, hi, 1e-15))


def delta1_prime(b: float, U: float, cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Derivative of Delta1 from implicit differentiation of its defining equation."""
    bmax = b_plus_max(U, cfg)
    if not 0 < b < bmax:
        raise DomainError("delta1_prime requires 0 < b < b_plus_max")
    d = delta1(b, U, cfg, bmax=bmax)
    p = -dos.n0(b) * d / math.hypot(d, b)
    q = d * d * dos.kernel_inv_32(b, d, cfg.quad)
    return p / q


def delta2(b: float, at: ModelPoint, cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Delta2(b) = sqrt(r^2 - b^2), r = mu - U/2 + U T(b); requires r >= b."""
    r = at.mu - 0.5 * at.U + at.U * dos.tail_mass(b, cfg.quad)
    if r < b:
        raise RadicandError(f"no real Delta2 at b = {b!r} (r = {r!r})")
    return math.sqrt((r - b) * (r + b))


def xi(b: float, at: ModelPoint, cfg: SolverConfig = DEFAULT_SOLVER) -> float:
    """Xi(b) = Delta1(b) - Delta2(b)."""
    return delta1(b, at.U, cfg) - delta2(b, at, cfg)


def af_residuals(d0: float, m1: float, at: ModelPoint,
                 cfg: SolverConfig = DEFAULT_SOLVER) -> tuple[float, float]:
    """Residuals of both AF equations evaluated from the general theta form."""
    U, mu = at.U, at.mu
    delta = 0.5 * U * m1
    c = 0.5 * U * d0 - mu
    q = cfg.quad
    if c < -delta:
        b = min(math.sqrt((c - delta) * (c + delta)), dos.BAND_EDGE)
        occ = 2.0 * dos.tail_mass(b, q)
        gap_int = 2.0 * dos.kernel_inv_sqrt(b, delta, q)
    elif c <= delta:
        occ = 1.0
        gap_int = 2.0 * dos.kernel_inv_sqrt(0.0, delta, q)
    else:
        a = min(math.sqrt((c - delta) * (c + delta)), dos.BAND_EDGE)
        occ = 1.0 + 2.0 * (0.5 - dos.tail_mass(a, q))
        k0 = dos.kernel_inv_sqrt(0.0, delta, q)
        gap_int = 2.0 * k0 - 2.0 * (k0 - dos.kernel_inv_sqrt(a, delta, q))
    return d0 - (1.0 - occ), 1.0 - 0.5 * U * gap_int


class _DopedCurve:
    """Points (b, Delta1(b)) obtained by inverting the gap integral in b at fixed Delta.

    For each Delta the map b -> int_b^4 N0 / sqrt(Delta^2 + eps^2) is a
    cumulative sum over fixed GK15 panels in s = ln(eps), so a whole batch
    of Delta values is inverted in one pass plus a short Newton solve inside
    the crossing panel.
    """

    def __init__(self, U: float, gap: float, width: float = 1.0):
        self.U = U
        self.target = 1.0 / U
        s_min = math.log(gap) - 14.0 * math.log(10.0)
        npan = math.ceil((dos.LN4 - s_min) / width)
        self.edges = dos.LN4 - width * np.arange(npan + 1)
        hi, lo = self.edges[:-1], self.edges[1:]
        c = 0.5 * (hi + lo)
        h = 0.5 * (hi - lo)
        self.eps = np.exp(c[:, None] + h[:, None] * dos.XGK[None, :])
        self.w = (h[:, None] * dos.WGK[None, :]) * self.eps * dos._n0_pos(self.eps)

    def b_of(self, deltas: np.ndarray) -> np.ndarray:
        deltas = np.atleast_1d(np.asarray(deltas, dtype=float))
        d2 = deltas[:, None, None] ** 2
        panel = np.sum(self.w[None] / np.sqrt(d2 + self.eps[None] ** 2), axis=2)
        cum = np.cumsum(panel, axis=1)
        reached = cum >= self.target
        out = np.full(len(deltas), np.nan)
        ok = reached.any(axis=1)
        if not ok.any():
            return out
        k = np.argmax(reached[ok], axis=1)
        before = np.where(k > 0, cum[ok, np.maximum(k - 1, 0)], 0.0)
        need = self.target - before
        s_hi = self.edges[k]
        s_lo = self.edges[k + 1]
        dd = deltas[ok]
        frac = need / panel[ok, k]
        t = s_hi - frac * (s_hi - s_lo)
        for _ in range(40):
            cc = 0.5 * (s_hi + t)
            hh = 0.5 * (s_hi - t)
            e = np.exp(cc[:, None] + hh[:, None] * dos.XGK[None, :])
            integ = e * dos._n0_pos(e) / np.sqrt(dd[:, None] ** 2 + e * e)
            val = hh * (integ @ dos.WGK) - need
            et = math.e ** t
            slope = -et * dos._n0_pos(et) / np.sqrt(dd**2 + et * et)
            step = val / slope
            t_new = np.clip(t - step, s_lo, s_hi)
            done = np.all(np.abs(t_new - t) <= 1e-15 * np.maximum(1.0, np.abs(t)))
            t = t_new
            if done:
                break
        out[ok] = np.exp(t)
        return out


def _af_doped(at: ModelPoint, gap: float, bmax: float,
              cfg: SolverConfig) -> list[AFSolution]:
    U, mu = at.U, at.mu
    curve = _DopedCurve(U, gap)
    n = max(cfg.scan_points // 2, 2)
    ladder = np.geomspace(1e-12, 1.0, n)
    deltas = np.unique(np.concatenate([gap * ladder, gap * (1.0 - ladder)]))
    deltas = deltas[(deltas > 0) & (deltas < gap)][::-1]
    bs = curve.b_of(deltas)
    keep = np.isfinite(bs)
    deltas, bs = deltas[keep], bs[keep]
    # Endpoints b = 0 (Delta1 = gap) and b = bmax (Delta1 = 0).
    deltas = np.concatenate([[gap], deltas, [0.0]])
    bs = np.concatenate([[0.0], bs, [bmax]])
    r = mu - 0.5 * U + U * dos.tail_mass(bs, cfg.quad)
    feasible = r >= bs
    d2 = np.where(feasible, np.sqrt(np.clip((r - bs) * (r + bs), 0.0, None)), np.nan)
    xis = deltas - d2

    def b_at(d: float) -> float:
        b = float(curve.b_of(np.array([d]))[0])
        return 0.0 if math.isnan(b) else b

    def xi_of_delta(d: float) -> float:
        b = b_at(d)
        rr = mu - 0.5 * U + U * dos.tail_mass(b, cfg.quad)
        return d - math.sqrt(max((rr - b) * (rr + b), 0.0))

    sols: list[AFSolution] = []
    idx = np.flatnonzero(feasible)
    for i, j in zip(idx[:-1], idx[1:]):
        if j != i + 1:
            continue
        if xis[i] * xis[j] < 0:
            d_star = _brentq(xi_of_delta, float(deltas[j]), float(deltas[i]), 1e-15 * gap)
        elif xis[j] == 0 and 0 < j < len(bs) - 1:
            d_star = float(deltas[j])
        else:
            continue
        b_star = b_at(d_star)
        if not 0 < b_star < bmax:
            continue
        d0 = 1.0 - 2.0 * dos.tail_mass(b_star, cfg.quad)
        r1, r2 = af_residuals(d0, 2.0 * d_star / U, at, cfg)
        r3 = 0.5 * U * d0 - mu + math.hypot(d_star, b_star)
        sols.append(AFSolution(d0=d0, m1=2.0 * d_star / U, delta=d_star, b_plus=b_star,
                               branch=AFBranch.DOPED,
                               residual=max(abs(r1), abs(r2), abs(r3))))
    return sols


def _solve_af_nonneg(at: ModelPoint, cfg: SolverConfig) -> list[AFSolution]:
    U, mu = at.U, at.mu
    if mu >= 0.5 * U:
        return []
    gap = gap_delta(U, cfg)
    sols: list[AFSolution] = []
    if gap >= mu:
        r1, r2 = af_residuals(0.0, 2.0 * gap / U, at, cfg)
        sols.append(AFSolution(d0=0.0, m1=2.0 * gap / U, delta=gap, b_plus=None,
                               branch=AFBranch.HALF_FILLED, residual=max(abs(r1), abs(r2))))
    if mu > 0:
        sols.extend(_af_doped(at, gap, b_plus_max(U, cfg), cfg))
    return sols


def solve_af_all(at: ModelPoint, cfg: SolverConfig = DEFAULT_SOLVER) -> list[AFSolution]:
    """All AF mean-field solutions with m1 > 0: half-filled first, then doped by b."""
    if at.mu < 0:
        return [AFSolution(-s.d0, s.m1, s.delta, s.b_plus, s.branch, s.residual)
                for s in _solve_af_nonneg(at.mirrored(), cfg)]
    return _solve_af_nonneg(at, cfg)
