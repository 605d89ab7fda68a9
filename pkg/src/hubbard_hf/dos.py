"""Square-lattice density of states N0 and the N0-weighted kernels.

The band energy is 2(cos k1 + cos k2) with hopping t = 1, so N0 lives on
[-4, 4].  With k' = |eps|/4 the complete elliptic integral K(k) equals
pi / (2 AGM(1, k')), which gives the cancellation-free closed form

    N0(eps) = 1 / (4 pi AGM(1, |eps|/4)),    0 < |eps| <= 4.

Every kernel is an integral over (b, 4] with b >= 0.  They are computed in
the variable s = ln(eps).  The substitution turns the logarithmic endpoint
at eps = 0 into an exponentially decaying tail and the crossover at
eps = Delta into a smooth O(1)-wide feature, so adaptive 15-point
Gauss-Kronrod panels reach machine precision with few nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cache
from typing import Callable

import numpy as np

from .errors import DivergentIntegralError, DomainError, QuadratureError

BAND_EDGE = 4.0
LN4 = math.log(4.0)
N0_AT_EDGE = 1.0 / (4.0 * math.pi)

# 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
_XK_HALF = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
])
_WK_HALF = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
])
_WK_MID = 0.209482141084727828012999174891714
_WG_HALF = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
])
_WG_MID = 0.417959183673469387755102040816327

XGK = np.concatenate([-_XK_HALF, [0.0], _XK_HALF[::-1]])
WGK = np.concatenate([_WK_HALF, [_WK_MID], _WK_HALF[::-1]])
WG = np.zeros(15)
WG[[1, 3, 5]] = _WG_HALF
WG[7] = _WG_MID
WG[[13, 11, 9]] = _WG_HALF
for _arr in (XGK, WGK, WG):
    _arr.flags.writeable = False

# Coefficients N0^(j) * pi of the expansion in powers of (4 - eps).
N0_NEAR4_COEFFS = (
    Fraction(1, 4),
    Fraction(1, 32),
    Fraction(5, 1024),
    Fraction(7, 8192),
    Fraction(169, 1048576),
    Fraction(269, 8388608),
    Fraction(1781, 268435456),
)
# Terms coef * eps^(2n) * (a ln(16/eps) - c) / pi^2 of the small-eps expansion.
N0_NEAR0_TERMS = (
    (Fraction(1, 2), 1, 0),
    (Fraction(1, 128), 1, 1),
    (Fraction(3, 2**16), 6, 7),
    (Fraction(5, 3 * 2**22), 30, 37),
    (Fraction(35, 3 * 2**33), 420, 533),
    (Fraction(63, 5 * 2**39), 1260, 1627),
)
NEAR0_WINDOW = 1.0
NEAR4_WINDOW = 3.0


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for the adaptive kernel quadrature."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("abs_tol and rel_tol must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be a positive integer")


DEFAULT_QUAD = QuadratureConfig()


def agm(a, b):
    """Arithmetic-geometric mean, elementwise, iterated to machine precision."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    a = a.copy()
    b = b.copy()
    for _ in range(64):
        if np.all(np.abs(a - b) <= 2e-16 * np.abs(a)):
            break
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    return 0.5 * (a + b)


def _n0_pos(e: np.ndarray) -> np.ndarray:
    """N0 for an array of energies in (0, 4]; no checks."""
    return 1.0 / (4.0 * math.pi * agm(1.0, 0.25 * e))


def n0(eps):
    """Density of states N0(eps).

    Parameters
    ----------
    eps : float or array_like
        Band energy.  Must be finite.

    Returns
    -------
    float or ndarray
        N0(eps).  Zero for |eps| > 4.  At |eps| = 4 the left limit 1/(4 pi)
        is returned.  At eps = 0 the logarithmic divergence is reported as
        +inf; integrals through zero must use the kernels instead.
    """
    arr = np.asarray(eps, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("n0 requires finite energies")
    e = np.abs(arr)
    out = np.zeros_like(e)
    inside = (e > 0) & (e <= BAND_EDGE)
    if np.any(inside):
        out[inside] = _n0_pos(e[inside])
    out[e == 0] = np.inf
    if out.ndim == 0:
        return float(out)
    return out


def n0_series_near4(eps: float, order: int = 6) -> float:
    """Truncated expansion of N0 in powers of (4 - |eps|)."""
    x = BAND_EDGE - abs(eps)
    total = 0.0
    for j in range(order, -1, -1):
        total = total * x + float(N0_NEAR4_COEFFS[j])
    return total / math.pi


def n0_series_near0(eps: float) -> float:
    """Truncated small-|eps| expansion of N0 with logarithmic terms."""
    e = abs(eps)
    if e == 0:
        return math.inf
    ell = math.log(16.0 / e)
    total = 0.0
    for n, (coef, a, c) in reversed(list(enumerate(N0_NEAR0_TERMS))):
        total += float(coef) * e ** (2 * n) * (a * ell - c)
    return total / math.pi**2


def small_mass(x: float) -> float:
    """Leading part of the integral of N0 over [0, x] for tiny x > 0."""
    if x <= 0:
        return 0.0
    return x * (math.log(16.0) - math.log(x) + 1.0) / (2.0 * math.pi**2)


def _integrate_s(g: Callable[[np.ndarray], np.ndarray], s_lo: float, s_hi: float,
                 cfg: QuadratureConfig, width: float = 0.5) -> tuple[float, float]:
    """Adaptive GK15 integral of g(s) over [s_lo, s_hi]; returns (value, error)."""
    if not s_hi > s_lo:
        return 0.0, 0.0
    span = s_hi - s_lo
    n = max(1, math.ceil(span / width))
    edges = np.linspace(s_lo, s_hi, n + 1)
    a, b = edges[:-1], edges[1:]
    done = 0.0
    done_err = 0.0
    splits = 0
    while True:
        c = 0.5 * (a + b)
        h = 0.5 * (b - a)
        fx = g(c[:, None] + h[:, None] * XGK)
        k = h * (fx @ WGK)
        err = np.abs(k - h * (fx @ WG))
        total = done + float(k.sum())
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        bad = err > tol * (b - a) / span
        done += float(k[~bad].sum())
        done_err += float(err[~bad].sum())
        if not bad.any():
            return done, done_err
        splits += int(bad.sum())
        if splits > cfg.max_subdivisions:
            raise QuadratureError("kernel quadrature did not converge",
                                  total, done_err + float(err[bad].sum()))
        a, b = np.concatenate([a[bad], c[bad]]), np.concatenate([c[bad], b[bad]])


def _eps_integral(h: Callable[[np.ndarray], np.ndarray], lo: float,
                  cfg: QuadratureConfig) -> float:
    """Integral of h(eps) over [lo, 4] for 0 < lo, via eps = exp(s)."""
    if lo >= BAND_EDGE:
        return 0.0

    def g(s: np.ndarray) -> np.ndarray:
        e = np.exp(s)
        return e * h(e)

    val, _ = _integrate_s(g, math.log(lo), LN4, cfg)
    return val


# Cumulative tables for the two Delta-free integrals of N0 and eps*N0.
_TABLE_STEP = 0.5
_TABLE_PANELS = 142
X_SMALL = math.exp(LN4 - _TABLE_STEP * _TABLE_PANELS)


@cache
def _tail_tables() -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    # Immutable module constants, built once on first use.
    edges = LN4 - _TABLE_STEP * np.arange(_TABLE_PANELS + 1)
    lo, hi = edges[1:], edges[:-1]
    c = 0.5 * (lo + hi)
    h = 0.5 * (hi - lo)
    e = np.exp(c[:, None] + h[:, None] * XGK)
    f0 = e * _n0_pos(e)
    f1 = f0 * e
    p0 = h * (f0 @ WGK)
    p1 = h * (f1 @ WGK)
    err = float(np.sum(np.abs(p0 - h * (f0 @ WG))) + np.sum(np.abs(p1 - h * (f1 @ WG))))
    cum0 = np.concatenate([[0.0], np.cumsum(p0)])
    cum1 = np.concatenate([[0.0], np.cumsum(p1)])
    for arr in (edges, cum0, cum1):
        arr.flags.writeable = False
    return edges, cum0, cum1, err


def _tails_pos(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(int_x^4 N0, int_x^4 eps N0) for x in [0, 4]."""
    edges, cum0, cum1, _ = _tail_tables()
    t = np.empty_like(x)
    m = np.empty_like(x)
    tiny = x < X_SMALL
    if np.any(tiny):
        xs = x[tiny]
        s_small = np.array([small_mass(v) for v in xs])
        t[tiny] = cum0[-1] + small_mass(X_SMALL) - s_small
        m[tiny] = cum1[-1] + (X_SMALL**2 * (2 * math.log(16 / X_SMALL) + 1)
                              - np.array([v * v * (2 * (math.log(16.0) - math.log(v)) + 1) if v > 0 else 0.0
                                          for v in xs])) / (8 * math.pi**2)
    top = x >= BAND_EDGE
    t[top] = 0.0
    m[top] = 0.0
    mid = ~tiny & ~top
    if np.any(mid):
        xm = x[mid]
        ls = np.log(xm)
        k = np.clip(np.floor((LN4 - ls) / _TABLE_STEP).astype(int), 0, _TABLE_PANELS - 1)
        up = edges[k]
        c = 0.5 * (ls + up)
        h = 0.5 * (up - ls)
        e = np.exp(c[:, None] + h[:, None] * XGK)
        f0 = e * _n0_pos(e)
        t[mid] = cum0[k] + h * (f0 @ WGK)
        m[mid] = cum1[k] + h * ((f0 * e) @ WGK)
    return t, m


def _check_table(cfg: QuadratureConfig) -> None:
    err = _tail_tables()[3]
    if err > cfg.abs_tol:
        raise QuadratureError("tabulated tail integrals exceed abs_tol", math.nan, err)


def _tails(x) -> tuple[np.ndarray, np.ndarray]:
    """Signed-range tails: (int_x^4 N0, int_x^4 eps N0) for any real x."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("tail arguments must be finite")
    ax = np.minimum(np.abs(x), BAND_EDGE)
    t, m = _tails_pos(ax.ravel())
    t = t.reshape(ax.shape)
    m = m.reshape(ax.shape)
    neg = x < 0
    t = np.where(neg, 1.0 - t, t)
    return t, m


def tail_mass(x, cfg: QuadratureConfig = DEFAULT_QUAD):
    """Integral of N0 over [x, 4].

    Defined for every real x: 0 for x >= 4, 1 for x <= -4, and
    1 - tail_mass(-x) for negative x by evenness.  Accepts arrays.
    """
    _check_table(cfg)
    t, _ = _tails(x)
    return float(t) if t.ndim == 0 else t


def linear_tail(x, shift, cfg: QuadratureConfig = DEFAULT_QUAD):
    """Integral of N0(eps) (eps - shift) over [x, 4]; accepts arrays."""
    _check_table(cfg)
    t, m = _tails(x)
    out = m - np.asarray(shift, dtype=float) * t
    return float(out) if np.ndim(out) == 0 else out


def moment(j: int, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Integral of eps^j N0(eps) over the real line, for j in 0..6."""
    if j not in range(7):
        raise DomainError("moment order must be an integer in 0..6")
    if j % 2:
        return 0.0
    lo = X_SMALL
    val = _eps_integral(lambda e: e**j * _n0_pos(e), lo, cfg)
    if j == 0:
        val += small_mass(lo)
    return 2.0 * val


def _check_b(b: float) -> float:
    b = float(b)
    if not math.isfinite(b) or b < 0:
        raise DomainError("lower limit b must be a finite number >= 0")
    return b


def _gapped_kernel(b: float, delta: float, g: Callable[[np.ndarray], np.ndarray],
                   g0: float, cfg: QuadratureConfig) -> float:
    """Integral of N0 g over [b, 4] where g varies on the scale delta > 0.

    Below eps = 1e-10 delta, g equals g0 to relative accuracy 1e-20, so that
    sliver is integrated against the small-eps mass of N0.
    """
    cut = 1e-10 * delta
    if b >= cut:
        return _eps_integral(lambda e: _n0_pos(e) * g(e), b, cfg)
    main = _eps_integral(lambda e: _n0_pos(e) * g(e), cut, cfg)
    return main + g0 * (small_mass(cut) - small_mass(b))


def kernel_inv_sqrt(b: float, delta: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Integral of N0(eps) / sqrt(delta^2 + eps^2) over [b, 4]."""
    b = _check_b(b)
    delta = float(delta)
    if delta < 0:
        raise DomainError("delta must be >= 0")
    if b >= BAND_EDGE:
        return 0.0
    if delta == 0:
        if b == 0:
            raise DivergentIntegralError("kernel_inv_sqrt diverges at b = 0, delta = 0")
        return inv_eps_tail(b, cfg)
    d2 = delta * delta
    return _gapped_kernel(b, delta, lambda e: 1.0 / np.sqrt(d2 + e * e), 1.0 / delta, cfg)


def kernel_sqrt(b: float, delta: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Integral of N0(eps) sqrt(delta^2 + eps^2) over [b, 4]."""
    b = _check_b(b)
    delta = float(delta)
    if delta < 0:
        raise DomainError("delta must be >= 0")
    if b >= BAND_EDGE:
        return 0.0
    if delta == 0:
        return linear_tail(b, 0.0, cfg)
    d2 = delta * delta
    return _gapped_kernel(b, delta, lambda e: np.sqrt(d2 + e * e), delta, cfg)


def kernel_inv_32(b: float, delta: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Integral of N0(eps) / (delta^2 + eps^2)^(3/2) over [b, 4]."""
    b = _check_b(b)
    delta = float(delta)
    if delta < 0:
        raise DomainError("delta must be >= 0")
    if b >= BAND_EDGE:
        return 0.0
    if delta == 0:
        if b == 0:
            raise DivergentIntegralError("kernel_inv_32 diverges at b = 0, delta = 0")
        return _eps_integral(lambda e: _n0_pos(e) / e**3, b, cfg)
    d2 = delta * delta
    return _gapped_kernel(b, delta, lambda e: (d2 + e * e) ** -1.5, delta**-3, cfg)


INV_EPS_SERIES_BELOW = 1e-8


def inv_eps_tail(b: float, cfg: QuadratureConfig = DEFAULT_QUAD) -> float:
    """Integral of N0(eps) / eps over [b, 4] for b > 0.

    For b < 1e-8 the two-term small-b expansion is used; its error is
    O(b^2 ln b), far below the quadrature tolerance.
    """
    b = float(b)
    if not b > 0 or not math.isfinite(b):
        raise DomainError("inv_eps_tail requires b > 0")
    if b >= BAND_EDGE:
        return 0.0
    if b < INV_EPS_SERIES_BELOW:
        return math.log(16.0 / b) ** 2 / (4.0 * math.pi**2) - 1.0 / 24.0
    return _eps_integral(lambda e: _n0_pos(e) / e, b, cfg)
