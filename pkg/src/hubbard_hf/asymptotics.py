"""
Closed-form asymptotic expansions and sector predicates.

Every series is stored as a tuple of :class:`Term` objects whose
coefficients are exact rationals multiplied by powers of sqrt(2), pi and
ln 2.  Evaluation converts to floating point only at the last step, so the
stored tables can be audited term by term.

Small parameters
----------------
* large-U series use ``x = 1/U``;
* series near the Stoner point use ``x = 4*pi - U``;
* small-U series use ``x = sqrt(U)`` and carry an overall factor
  ``exp(-2*pi/sqrt(U))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction as Fr

from .errors import DomainError
from .meanfield import ModelPoint

FOUR_PI = 4.0 * math.pi
LN2 = math.log(2.0)


@dataclass(frozen=True)
class Term:
    """One monomial ``coef * sqrt(2)**sqrt2 * pi**pi * ln(2)**ln2 * x**power``.

    Attributes
    ----------
    coef : Fraction
        Exact rational prefactor.
    power : Fraction
        Exponent of the small parameter.
    pi : Fraction
        Exponent of pi.
    sqrt2 : int
        Exponent of sqrt(2).
    ln2 : int
        Exponent of ln 2.
    """

    coef: Fr
    power: Fr
    pi: Fr = Fr(0)
    sqrt2: int = 0
    ln2: int = 0

    def constant(self) -> float:
        """Numerical value of everything except the power of x."""
        return (float(self.coef) * math.sqrt(2.0) ** self.sqrt2
                * math.pi ** float(self.pi) * LN2**self.ln2)

    def __call__(self, x: float) -> float:
        return self.constant() * x ** float(self.power)


def _t(num: int, den: int, power, pi=0, sqrt2: int = 0, ln2: int = 0) -> Term:
    return Term(Fr(num, den), Fr(power), Fr(pi), sqrt2, ln2)


def _poly_ln2(coeffs: list[int], den: int, power, pi, sqrt2: int) -> tuple[Term, ...]:
    """Terms for (c0 + c1 L + c2 L^2 + ...)/den with L = ln 2."""
    return tuple(_t(c, den, power, pi, sqrt2, k) for k, c in enumerate(coeffs) if c)


@dataclass(frozen=True)
class SeriesValue:
    """Value of a truncated expansion and the order of its remainder."""

    value: float
    nominal_error_order: str


@dataclass(frozen=True)
class Series:
    """A truncated expansion with its remainder descriptor."""

    name: str
    terms: tuple[Term, ...]
    error: str

    def sum(self, x: float) -> float:
        return math.fsum(t(x) for t in self.terms)


half = Fr(1, 2)

MU_I = Series("mu_I_app", (
    _t(1, 2, -1),
    _t(-4, 1, 0),
    _t(4, 1, half, half, 1),
    _t(-2, 3, 1, 1),
    _t(-5, 36, Fr(3, 2), Fr(3, 2), -1),
    _t(-11, 270, 2, 2),
    _t(-691200, 34560, Fr(5, 2), half, -1),
    _t(-1163, 34560, Fr(5, 2), Fr(5, 2), -1),
    _t(10, 3, 3, 1),
    _t(-18071, 1088640, 3, 3),
    _t(51840000, 49766400, Fr(7, 2), Fr(3, 2), -1),
    _t(-907207, 49766400, Fr(7, 2), Fr(7, 2), -1),
    _t(11, 27, 4, 2),
    _t(-561913, 52254720, 4, 4),
), "O(U^{-9/2})")

MU_II = Series("mu_II_app", (
    _t(4, 1, 0),
    _t(2, 1, 0, 1),
    _t(-4, 1, 1, -1),
    _t(-1, 2, 1),
    _t(7, 12, 2, -2),
    _t(17, 288, 3, -3),
    _t(1861, 138240, 4, -4),
    _t(15181, 3317760, 5, -5),
    _t(469909, 247726080, 6, -6),
), "O((4pi-U)^7)")

MU_III = Series("mu_III_app", (
    _t(16, 1, 0, 0, 1),
    *_poly_ln2([4, 2], 1, 1, -1, 1),
    # (ln2 - 6)(ln8 - 2) = 3L^2 - 20L + 12
    *_poly_ln2([12, -20, 3], 4, 2, -2, -1),
    # 56 + L(76 + 5(L - 6)L) = 56 + 76L - 30L^2 + 5L^3
    *_poly_ln2([56, 76, -30, 5], 32, 3, -3, -1),
    # (L - 6)(1320 + L(396 + 5L(21L - 10)))
    *_poly_ln2([-7920, -1056, 696, -680, 105], 3072, 4, -4, -1),
), "O(U^{5/2} e^{-2pi/sqrt(U)})")

NU_I_F = Series("nu_I_F", (
    _t(1, 1, half, -half, 1),
    _t(1, 3, 1),
    _t(31, 144, Fr(3, 2), half, -1),
    _t(203, 2160, 2, 1),
    # (13573 pi^2 - 691200) / (138240 sqrt(2 pi))
    _t(13573, 138240, Fr(5, 2), Fr(3, 2), -1),
    _t(-691200, 138240, Fr(5, 2), -half, -1),
    _t(979, 17010, 3, 2),
    _t(-5, 3, 3),
), "O(U^{-7/2})")

NU_II_F = Series("nu_II_F", (
    _t(1, 1, 0),
    _t(-1, 1, 1, -2),
    _t(-5, 48, 2, -3),
    _t(-19, 1152, 3, -4),
    _t(-2039, 552960, 4, -5),
    _t(-3691, 2654208, 5, -6),
    _t(-2369993, 2972712960, 6, -7),
), "O((4pi-U)^7)")

NU_II_P = Series("nu_II_P", (
    _t(1, 1, 0),
    _t(-1, 1, 1, -2),
    _t(-1, 24, 2, -3),
    _t(1, 144, 3, -4),
    _t(2851, 552960, 4, -5),
    _t(15839, 6635520, 5, -6),
    _t(207463, 198180864, 6, -7),
), "O((4pi-U)^7)")

_D0P_III_HEAD = (
    _t(32, 1, -1, -1, 1),
    *_poly_ln2([-8, -4], 1, 0, -2, 1),
)
# (22 - L)(2 + L) = 44 + 20L - L^2, over 2 sqrt(2) pi^3.
_D0P_III_THIRD = _poly_ln2([44, 20, -1], 2, 1, -3, -1)

NU_III_P = Series("nu_III_P", (
    *_D0P_III_HEAD,
    *(Term(t.coef / 2, t.power, t.pi, t.sqrt2, t.ln2) for t in _D0P_III_THIRD),
), "O(U^{1/2} e^{-2pi/sqrt(U)})")

D0P_III = Series("d0P_sector_III", (
    *_D0P_III_HEAD,
    *_D0P_III_THIRD,
    # (10 + L)(44 + L(8 + L)) = 440 + 124L + 18L^2 + L^3
    *_poly_ln2([-440, -124, -18, -1], 16, 2, -4, -1),
    # 43536 + L(16416 + L(5208 - L(184 + 15L)))
    *_poly_ln2([43536, 16416, 5208, -184, -15], 1536, 3, -5, -1),
), "O(U^2 e^{-2pi/sqrt(U)})")

M1_AF = Series("m1_af_large_U", (
    _t(1, 1, 0), _t(-8, 1, 2), _t(88, 1, 4),
), "O(U^{-6})")

F_AF_LARGE = Series("f_af_large_U", (
    _t(-1, 4, -1), _t(-4, 1, 1), _t(20, 1, 3),
), "O(U^{-5})")

F_P_AT_MU_I = Series("f_p_at_mu_I", (
    _t(-1, 4, -1),
    _t(4, 1, 0),
    _t(-4, 1, half, half, 1),
    _t(2, 3, 1, 1),
    _t(-192, 3, 1),
    _t(4608, 36, Fr(3, 2), half, -1),
    _t(5, 36, Fr(3, 2), Fr(3, 2), -1),
), "O(U^{-2})")

F_AT_MU_II = Series("f_at_mu_II", (
    _t(-4, 1, 0),
    _t(-1, 1, 0, 1),
    _t(1, 4, 1),
    _t(4, 1, 1, -1),
    _t(-24, 12, 2, -3),
    _t(-7, 12, 2, -2),
    _t(72, 288, 3, -4),
    _t(-17, 288, 3, -3),
    _t(8040, 138240, 4, -5),
    _t(-1861, 138240, 4, -4),
    _t(50952, 3317760, 5, -6),
    _t(-15181, 3317760, 5, -5),
    _t(3734192, 743178240, 6, -7),
    _t(-1409727, 743178240, 6, -6),
), "O((4pi-U)^7)")

SERIES = {s.name: s for s in (MU_I, MU_II, MU_III, NU_I_F, NU_II_F, NU_II_P, NU_III_P,
                              D0P_III, M1_AF, F_AF_LARGE, F_P_AT_MU_I, F_AT_MU_II)}


def _large(U: float) -> float:
    if not (math.isfinite(U) and U > 0):
        raise DomainError(f"U must be finite and positive, got {U!r}")
    return 1.0 / U


def _stoner(U: float) -> float:
    if not (math.isfinite(U) and 0 < U <= FOUR_PI):
        raise DomainError(f"U must lie in (0, 4pi], got {U!r}")
    return FOUR_PI - U


def _small(U: float) -> tuple[float, float]:
    if not (math.isfinite(U) and U > 0):
        raise DomainError(f"U must be finite and positive, got {U!r}")
    r = math.sqrt(U)
    return r, math.exp(-2.0 * math.pi / r)


def mu_I_app(U: float) -> SeriesValue:
    """Large-U approximation of the AF/F boundary chemical potential."""
    return SeriesValue(MU_I.sum(_large(U)), MU_I.error)


def mu_II_app(U: float) -> SeriesValue:
    """Approximation of the F/P boundary as U increases to 4 pi."""
    return SeriesValue(MU_II.sum(_stoner(U)), MU_II.error)


def mu_III_app(U: float) -> SeriesValue:
    """Small-U approximation of the AF/P boundary."""
    r, e = _small(U)
    return SeriesValue(MU_III.sum(r) * e, MU_III.error)


def nu_I_F(U: float) -> SeriesValue:
    """F doping at the AF/F boundary, large U."""
    return SeriesValue(NU_I_F.sum(_large(U)), NU_I_F.error)


def nu_II_F(U: float) -> SeriesValue:
    """F doping at the F/P boundary."""
    return SeriesValue(NU_II_F.sum(_stoner(U)), NU_II_F.error)


def nu_II_P(U: float) -> SeriesValue:
    """P doping at the F/P boundary."""
    return SeriesValue(NU_II_P.sum(_stoner(U)), NU_II_P.error)


def nu_III_P(U: float) -> SeriesValue:
    """P doping at the AF/P boundary with the last kept term halved.

    This is the plotting convention for the small-U curve; the raw
    truncated series is :func:`d0P_sector_III`.
    """
    r, e = _small(U)
    return SeriesValue(NU_III_P.sum(r) * e, NU_III_P.error)


def d0P_sector_III(U: float) -> SeriesValue:
    """P doping at the AF/P boundary, full printed series."""
    r, e = _small(U)
    return SeriesValue(D0P_III.sum(r) * e, D0P_III.error)


def m1_af_large_U(U: float) -> SeriesValue:
    """Half-filled AF magnetization at large U."""
    return SeriesValue(M1_AF.sum(_large(U)), M1_AF.error)


def delta_small_U(U: float) -> SeriesValue:
    """Half-filled AF gap at small U."""
    r, e = _small(U)
    return SeriesValue(32.0 * e, "relative O(e^{-4pi/sqrt(U)}/sqrt(U))")


def f_af_large_U(U: float) -> SeriesValue:
    """Half-filled AF free energy at large U."""
    return SeriesValue(F_AF_LARGE.sum(_large(U)), F_AF_LARGE.error)


def f_af_small_U(U: float) -> SeriesValue:
    """Half-filled AF free energy at small U."""
    r, e = _small(U)
    e2 = e * e
    val = -16.0 / math.pi**2 - 512.0 * e2 / (math.pi * r) - 128.0 * e2 / math.pi**2
    return SeriesValue(val, "O(e^{-8pi/sqrt(U)}/U)")


def f_at_mu_I(U: float) -> tuple[SeriesValue, SeriesValue]:
    """(F_AF = F_F, F_P) at the AF/F boundary."""
    x = _large(U)
    return (SeriesValue(F_AF_LARGE.sum(x), F_AF_LARGE.error),
            SeriesValue(F_P_AT_MU_I.sum(x), F_P_AT_MU_I.error))


def f_at_mu_II(U: float) -> SeriesValue:
    """F_F = F_P at the F/P boundary."""
    return SeriesValue(F_AT_MU_II.sum(_stoner(U)), F_AT_MU_II.error)


# Sectors


class Sector(str, Enum):
    I = "I"
    II = "II"
    III = "III"


@dataclass(frozen=True)
class SectorParams:
    """Constants defining the asymptotic sectors.

    Attributes
    ----------
    delta : float
        Margin used by sectors I and III.
    u0 : float
        Threshold in U (lower bound for I and II, upper bound for III).
    m_bound : float
        Width constant M of sector II.
    """

    delta: float = 0.001
    u0: float = 9.0
    m_bound: float = 1.0

    def __post_init__(self) -> None:
        if not (self.delta > 0 and self.m_bound > 0 and math.isfinite(self.u0)):
            raise DomainError("sector parameters need delta > 0, M > 0 and finite u0")


FIGURE_PARAMS = {
    Sector.I: SectorParams(0.001, 9.0, 1.0),
    Sector.II: SectorParams(0.001, 9.0, 1.0),
    Sector.III: SectorParams(0.001, 7.0, 1.0),
}


def mu_II_0(U: float) -> float:
    """Centre line of sector II."""
    x = FOUR_PI - U
    return 2.0 * math.pi + 4.0 - (8.0 + math.pi) / (2.0 * math.pi) * x + 7.0 / (12.0 * math.pi**2) * x * x


def in_sector(at: ModelPoint, which: Sector | str, params: SectorParams | None = None) -> bool:
    """Literal membership of ``at`` in sector ``which``.

    Parameters
    ----------
    at : ModelPoint
    which : Sector or {"I", "II", "III"}
    params : SectorParams, optional
        Defaults to the illustrative constants of :data:`FIGURE_PARAMS`.

    Raises
    ------
    DomainError
        If ``params`` violate the constraints of the requested sector.
    """
    which = Sector(which)
    p = FIGURE_PARAMS[which] if params is None else params
    U, mu = at.U, at.mu
    if which is Sector.I:
        if p.u0 < 2 * p.delta:
            raise DomainError("sector I requires u0 >= 2 delta")
        return U >= p.u0 and 0.0 <= mu <= 0.5 * U - p.delta
    if which is Sector.II:
        if not 0 < p.u0 < FOUR_PI:
            raise DomainError("sector II requires 0 < u0 < 4 pi")
        return p.u0 <= U < FOUR_PI and abs(mu - mu_II_0(U)) <= p.m_bound * (FOUR_PI - U) ** 3
    if p.delta >= 8:
        raise DomainError("sector III requires delta < 8")
    if not p.u0 > 0:
        raise DomainError("sector III requires u0 > 0")
    e = math.exp(-2.0 * math.pi / math.sqrt(U))
    return U <= p.u0 and (16.0 + p.delta) * e <= mu <= (32.0 - p.delta) * e
