import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hubbard_hf import asymptotics as asy
from hubbard_hf import dos
from hubbard_hf.asymptotics import FOUR_PI, Sector, SectorParams, in_sector, mu_II_0
from hubbard_hf.errors import DomainError
from hubbard_hf.meanfield import ModelPoint

# Frozen from an independent mpmath transcription of each series at 30 digits.
ORACLE = {
    asy.mu_I_app: {12: 4.659312313130021, 40: 17.52820498416461, 100: 46.98087578875977},
    asy.mu_II_app: {9: 4.832298325168194, 12: 9.298194693726657, 12.5: 10.165755225158781},
    asy.mu_III_app: {0.5: 0.0033696895027854907, 3: 0.7170865278224647,
                     6: 2.2151566707013486},
    asy.nu_I_F: {12: 0.2627886449268811, 40: 0.1355649296168818},
    asy.nu_II_F: {9: 0.5849138693307656, 12: 0.9415049078079732},
    asy.nu_II_P: {9: 0.6296641922510916, 12: 0.9421984380215086},
    asy.nu_III_P: {0.5: 0.002636779990506012, 4: 0.27281985361374844},
    asy.d0P_sector_III: {0.5: 0.002656215875910275, 4: 0.28897063557048597},
    asy.f_at_mu_II: {9: -3.24291036340395, 12: -6.318398891819413},
}
ORACLE_CASES = [(f, U, v) for f, table in ORACLE.items() for U, v in table.items()]


@pytest.mark.parametrize("fn, U, expected", ORACLE_CASES,
                         ids=[f"{f.__name__}-{U}" for f, U, _ in ORACLE_CASES])
def test_against_oracle(fn, U, expected):
    assert fn(U).value == pytest.approx(expected, rel=1e-13, abs=1e-15)


def test_f_at_mu_i_oracle():
    af, p = asy.f_at_mu_I(40)
    assert p.value == pytest.approx(-8.496677014156944, rel=1e-13)
    assert af.value == pytest.approx(-10 - 0.1 + 20 / 40**3, rel=1e-15)
    assert asy.f_at_mu_I(12)[1].value == pytest.approx(-3.180843293344123, rel=1e-13)


class TestCoefficientAudit:
    def _find(self, series, power, pi, sqrt2=0, ln2=0):
        hits = [t for t in series.terms
                if (t.power, t.pi, t.sqrt2, t.ln2) == (Fr(power), Fr(pi), sqrt2, ln2)]
        assert len(hits) == 1
        return hits[0].coef

    def test_mu_i_inverse_u(self):
        assert self._find(asy.MU_I, 1, 1) == Fr(-2, 3)

    def test_mu_i_quartic(self):
        assert self._find(asy.MU_I, 4, 4) == Fr(-561913, 52254720)

    def test_nu_ii_p_quartic(self):
        assert self._find(asy.NU_II_P, 4, -5) == Fr(2851, 552960)

    def test_mu_ii_linear(self):
        # -(8 + pi)/(2 pi) split into two monomials.
        assert self._find(asy.MU_II, 1, -1) == -4
        assert self._find(asy.MU_II, 1, 0) == Fr(-1, 2)

    def test_halved_last_term(self):
        full = [t for t in asy.D0P_III.terms if t.power == 1]
        halved = [t for t in asy.NU_III_P.terms if t.power == 1]
        assert [t.coef / 2 for t in full] == [t.coef for t in halved]

    def test_term_constant(self):
        t = asy.Term(Fr(3, 7), Fr(2), Fr(-1), 1, 2)
        expected = 3 / 7 * math.sqrt(2) / math.pi * math.log(2) ** 2
        assert t.constant() == pytest.approx(expected, rel=1e-15)
        assert t(0.5) == pytest.approx(expected / 4, rel=1e-15)

    def test_error_orders(self):
        assert asy.mu_I_app(40).nominal_error_order == "O(U^{-9/2})"
        assert asy.mu_II_app(12).nominal_error_order == "O((4pi-U)^7)"
        assert asy.mu_III_app(4).nominal_error_order == "O(U^{5/2} e^{-2pi/sqrt(U)})"


class TestLimits:
    def test_mu_ii_endpoint(self):
        assert asy.mu_II_app(FOUR_PI).value == pytest.approx(4 + 2 * math.pi, abs=1e-14)

    def test_nu_ii_endpoint(self):
        assert asy.nu_II_F(FOUR_PI).value == 1.0
        assert asy.nu_II_P(FOUR_PI).value == 1.0

    def test_f_at_mu_ii_endpoint(self):
        assert asy.f_at_mu_II(FOUR_PI).value == pytest.approx(-4 - math.pi, abs=1e-14)

    @pytest.mark.parametrize("x", [0.1, 0.5, 1.0])
    def test_nu_ii_ordering(self, x):
        assert asy.nu_II_F(FOUR_PI - x).value < asy.nu_II_P(FOUR_PI - x).value < 1

    def test_mu_i_tail_vanishes(self):
        rest = [abs(asy.mu_I_app(U).value - (U / 2 - 4)) for U in (1e2, 1e4, 1e6)]
        assert rest[0] > rest[1] > rest[2]
        assert rest[2] < 4 * math.sqrt(2 * math.pi) / 1e3 * 1.01

    def test_mu_iii_leading_coefficient(self):
        # The braced factor, since e^{-2 pi/sqrt(U)} underflows for tiny U.
        assert asy.mu_III_app(0.01).value == pytest.approx(
            asy.MU_III.sum(0.1) * math.exp(-20 * math.pi), rel=1e-15)
        vals = [asy.MU_III.sum(math.sqrt(U)) for U in (1e-2, 1e-4, 1e-6)]
        errs = [abs(v - 16 * math.sqrt(2)) for v in vals]
        assert errs[0] > errs[1] > errs[2]
        assert errs[2] < 0.01

    def test_f_af_small_u_limit(self):
        assert asy.f_af_small_U(0.05).value == pytest.approx(-16 / math.pi**2, abs=1e-12)

    def test_m1_value(self):
        assert asy.m1_af_large_U(20).value == pytest.approx(0.98055, abs=1e-15)

    def test_nu_i_f_value(self):
        # Leading terms sqrt(2/pi)/sqrt(40) + 1/120 alone give 0.13448.
        assert asy.nu_I_F(40).value == pytest.approx(0.13556, abs=1e-5)

    def test_delta_small_u(self):
        assert asy.delta_small_U(1.0).value == pytest.approx(32 * math.exp(-2 * math.pi))


class TestConsistency:
    @pytest.mark.parametrize("U", [40.0, 80.0])
    def test_nu_i_f_from_mu_i(self, U):
        # The saturated F doping at mu is 1 - tail_mass(mu - U/2).
        d = 1.0 - dos.tail_mass(asy.mu_I_app(U).value - U / 2)
        assert abs(d - asy.nu_I_F(U).value) < 3 * U**-3.5

    def test_f_af_small_u_is_increasing_to_limit(self):
        vals = [asy.f_af_small_U(U).value for U in (1.0, 0.5, 0.25)]
        assert vals[0] < vals[1] < vals[2] < -16 / math.pi**2


class TestDomains:
    @pytest.mark.parametrize("U", [0.0, -1.0, math.inf, math.nan])
    def test_large_u_domain(self, U):
        with pytest.raises(DomainError):
            asy.mu_I_app(U)

    @pytest.mark.parametrize("U", [FOUR_PI + 1e-9, 0.0])
    def test_stoner_domain(self, U):
        with pytest.raises(DomainError):
            asy.mu_II_app(U)

    def test_small_u_domain(self):
        with pytest.raises(DomainError):
            asy.mu_III_app(-0.1)


class TestSectors:
    def test_sector_i_example(self):
        assert in_sector(ModelPoint(40, 10), Sector.I)
        assert not in_sector(ModelPoint(40, 20 - 0.0005), "I")
        assert not in_sector(ModelPoint(8, 1), "I")

    def test_sector_ii_example(self):
        U = FOUR_PI - 0.1
        assert in_sector(ModelPoint(U, mu_II_0(U)), Sector.II)
        assert not in_sector(ModelPoint(U, mu_II_0(U) + 2e-3), Sector.II)
        assert not in_sector(ModelPoint(FOUR_PI, mu_II_0(FOUR_PI)), Sector.II)

    def test_sector_iii_example(self):
        e = math.exp(-math.pi)
        assert not in_sector(ModelPoint(4, 40 * e), Sector.III)
        assert in_sector(ModelPoint(4, 20 * e), Sector.III)

    def test_mu_ii_0(self):
        assert mu_II_0(FOUR_PI) == pytest.approx(4 + 2 * math.pi, abs=1e-14)

    def test_params_validation(self):
        with pytest.raises(DomainError):
            SectorParams(delta=0.0)
        with pytest.raises(DomainError):
            SectorParams(m_bound=-1.0)
        with pytest.raises(DomainError):
            in_sector(ModelPoint(4, 1), Sector.III, SectorParams(delta=8.0))
        with pytest.raises(DomainError):
            in_sector(ModelPoint(40, 1), Sector.I, SectorParams(delta=1.0, u0=1.0))
        with pytest.raises(DomainError):
            in_sector(ModelPoint(10, 1), Sector.II, SectorParams(u0=13.0))

    def test_m_bound_widens_sector_ii(self):
        U = FOUR_PI - 0.1
        at = ModelPoint(U, mu_II_0(U) + 2e-3)
        assert in_sector(at, Sector.II, SectorParams(m_bound=3.0))

    @given(st.floats(min_value=9, max_value=60), st.floats(min_value=0, max_value=1),
           st.floats(min_value=0, max_value=1))
    def test_sector_i_monotone_in_mu(self, U, a, b):
        lo, hi = sorted((a, b))
        if in_sector(ModelPoint(U, hi * U / 2), Sector.I):
            assert in_sector(ModelPoint(U, lo * U / 2), Sector.I)

    @given(st.floats(min_value=0.2, max_value=7), st.floats(min_value=16.01, max_value=31.99),
           st.floats(min_value=16.01, max_value=31.99))
    def test_sector_iii_interval(self, U, a, b):
        # Membership in mu is an interval, so it holds between two members.
        e = math.exp(-2 * math.pi / math.sqrt(U))
        lo, hi = sorted((a, b))
        mid = 0.5 * (lo + hi)
        assert in_sector(ModelPoint(U, lo * e), Sector.III)
        assert in_sector(ModelPoint(U, mid * e), Sector.III)
