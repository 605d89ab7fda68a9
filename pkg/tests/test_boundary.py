import math

import pytest

from hubbard_hf import asymptotics as asy
from hubbard_hf.boundary import (
    BoundaryConfig,
    BoundaryKind,
    auto_bracket,
    find_crossing,
    mixed_gap,
    predicted,
    trace,
)
from hubbard_hf.errors import BracketError, DomainError
from hubbard_hf.free_energy import free_energy_difference
from hubbard_hf.meanfield import ModelPoint

FP_U = asy.FOUR_PI - 0.25
FP_TOL = 1e-14


@pytest.fixture(scope="module")
def af_f_40():
    return find_crossing(40.0, BoundaryKind.AF_F, (10.0, 19.9))


@pytest.fixture(scope="module")
def f_p_point():
    return find_crossing(FP_U, BoundaryKind.F_P, auto_bracket(FP_U, BoundaryKind.F_P), FP_TOL)


@pytest.fixture(scope="module")
def af_p_4():
    e = math.exp(-math.pi)
    return find_crossing(4.0, BoundaryKind.AF_P, (16.1 * e, 31.9 * e))


class TestFindCrossing:
    def test_af_f_near_prediction(self, af_f_40):
        assert af_f_40.mu_star == pytest.approx(17.521, abs=0.01)
        # Frozen from this solver; |mu* - mu_I^app(40)| is 1.2e-5.
        assert af_f_40.mu_star == pytest.approx(17.528217048399195, abs=1e-9)
        assert abs(af_f_40.mu_star - asy.mu_I_app(40).value) < 2e-5

    def test_af_side_undoped(self, af_f_40, af_p_4):
        assert af_f_40.doping_low == 0.0
        assert af_p_4.doping_low == 0.0

    def test_f_p_near_prediction(self, f_p_point):
        assert abs(f_p_point.mu_star - asy.mu_II_app(FP_U).value) < 0.25**7

    def test_af_p_in_sector_window(self, af_p_4):
        scaled = af_p_4.mu_star * math.exp(math.pi)
        assert 16.0 < scaled < 32.0
        assert scaled == pytest.approx(27.729507127974873, abs=1e-8)

    @pytest.mark.parametrize("fixture", ["af_f_40", "f_p_point", "af_p_4"])
    def test_certificate(self, fixture, request):
        bp = request.getfixturevalue(fixture)
        a, b = bp.kind.phases
        assert bp.crossing_residual <= 1e-10 * (1 + abs(bp.f_at_crossing))
        # Phase a wins below the crossing and b above it.
        h = 1e-6 * max(1.0, bp.mu_star)
        below = free_energy_difference(ModelPoint(bp.U, bp.mu_star - h), a, b)
        above = free_energy_difference(ModelPoint(bp.U, bp.mu_star + h), a, b)
        assert below < 0 < above

    def test_window_refusal(self):
        with pytest.raises(DomainError):
            find_crossing(8.0, BoundaryKind.AF_F, (0.0, 3.9))
        with pytest.raises(DomainError):
            find_crossing(13.0, "F_P", (9.0, 11.0))

    def test_exploratory_flag(self):
        cfg = BoundaryConfig(exploratory=True)
        bp = find_crossing(10.0, BoundaryKind.AF_F, auto_bracket(10.0, BoundaryKind.AF_F, cfg=cfg),
                           cfg=cfg)
        assert bp.exploratory
        assert bp.doping_high > bp.doping_low

    def test_no_sign_change(self):
        with pytest.raises(BracketError):
            find_crossing(40.0, BoundaryKind.AF_F, (2.0, 10.0))

    def test_bad_tolerance(self):
        with pytest.raises(DomainError):
            find_crossing(40.0, BoundaryKind.AF_F, (10.0, 19.9), tol=0.0)
        with pytest.raises(DomainError):
            BoundaryConfig(tol=-1.0)

    def test_bracket_order_irrelevant(self, af_f_40):
        bp = find_crossing(40.0, "AF_F", (19.9, 10.0))
        assert bp.mu_star == af_f_40.mu_star


class TestMixedGap:
    def test_af_f(self, af_f_40):
        lo, hi = mixed_gap(af_f_40)
        assert lo == 0.0
        assert hi == pytest.approx(0.136, abs=1e-3)
        assert abs(hi - asy.nu_I_F(40).value) < 1e-5

    def test_f_p(self, f_p_point):
        lo, hi = mixed_gap(f_p_point)
        assert lo < hi < 1
        assert abs(lo - asy.nu_II_F(FP_U).value) < 0.25**7
        assert abs(hi - asy.nu_II_P(FP_U).value) < 0.25**7

    def test_af_p(self, af_p_4):
        lo, hi = mixed_gap(af_p_4)
        assert lo == 0.0 < hi
        # Within the halved third term of the series.
        third = asy.d0P_sector_III(4).value - asy.nu_III_P(4).value
        assert abs(hi - asy.nu_III_P(4).value) < 2 * abs(third)


class TestPrediction:
    @pytest.mark.parametrize("kind, U", [(BoundaryKind.AF_F, 30.0), (BoundaryKind.F_P, 12.0),
                                         (BoundaryKind.AF_P, 3.0)])
    def test_auto_bracket_straddles(self, kind, U):
        lo, hi = auto_bracket(U, kind)
        a, b = kind.phases
        assert lo < hi
        assert (free_energy_difference(ModelPoint(U, lo), a, b)
                * free_energy_difference(ModelPoint(U, hi), a, b)) <= 0

    def test_predicted_centres(self):
        assert predicted(40.0, BoundaryKind.AF_F)[0] == asy.mu_I_app(40.0).value
        assert predicted(12.0, BoundaryKind.F_P)[0] == asy.mu_II_app(12.0).value


class TestTrace:
    def test_af_f_monotone(self):
        tr = trace(BoundaryKind.AF_F, range(20, 61, 5))
        assert not tr.errors
        mus = [p.mu_star for p in tr.points]
        assert len(mus) == 9
        assert all(b > a for a, b in zip(mus[:-1], mus[1:]))
        assert all(p.doping_high > p.doping_low for p in tr.points)

    def test_f_p_endpoint(self):
        grid = [asy.FOUR_PI - x for x in (0.4, 0.2, 0.1)]
        tr = trace(BoundaryKind.F_P, grid, tol=FP_TOL)
        assert not tr.errors
        gaps = [abs(p.mu_star - (4 + 2 * math.pi)) for p in tr.points]
        assert gaps[0] > gaps[1] > gaps[2]
        lows = [p.doping_low for p in tr.points]
        highs = [p.doping_high for p in tr.points]
        assert all(b > a for a, b in zip(lows[:-1], lows[1:]))
        assert all(b > a for a, b in zip(highs[:-1], highs[1:]))
        assert min(lows[-1], highs[-1]) > 0.97

    def test_af_p_window(self):
        tr = trace(BoundaryKind.AF_P, [2.0, 3.0, 4.0, 5.0])
        assert not tr.errors
        for p in tr.points:
            assert 16 < p.mu_star * math.exp(2 * math.pi / math.sqrt(p.U)) < 32
            assert p.doping_high > p.doping_low

    def test_errors_recorded(self):
        tr = trace(BoundaryKind.AF_F, [8.0, 40.0])
        assert 8.0 in tr.errors
        assert [p.U for p in tr.points] == [40.0]

    def test_grid_must_increase(self):
        with pytest.raises(DomainError):
            trace(BoundaryKind.AF_F, [40.0, 30.0])
