import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hubbard_hf import dos
from hubbard_hf.asymptotics import FOUR_PI, mu_II_0
from hubbard_hf.errors import DomainError, RadicandError
from hubbard_hf.meanfield import (
    AFBranch,
    FBranch,
    ModelPoint,
    SolverConfig,
    af_residuals,
    b_plus_max,
    delta1,
    delta1_prime,
    delta2,
    f_residuals,
    g_map,
    gap_delta,
    solve_af_all,
    solve_f_all,
    solve_p,
    xi,
)


def e_small(U):
    return math.exp(-2 * math.pi / math.sqrt(U))


class TestModelPoint:
    def test_rejects_bad_values(self):
        with pytest.raises(DomainError):
            ModelPoint(0.0, 1.0)
        with pytest.raises(DomainError):
            ModelPoint(1.0, math.nan)

    def test_mirror(self):
        assert ModelPoint(3.0, 2.0).mirrored() == ModelPoint(3.0, -2.0)

    def test_solver_config_validation(self):
        with pytest.raises(DomainError):
            SolverConfig(scan_points=1)


class TestP:
    @pytest.mark.parametrize("mu, expected", [(0.0, 0.0), (9.0, 1.0), (-9.0, -1.0)])
    def test_trivial_points(self, mu, expected):
        assert solve_p(ModelPoint(8.0, mu)).d0 == pytest.approx(expected, abs=1e-12)

    def test_oracle_values(self):
        # mpmath oracle: bracketed root of d0 - 1 + 2 T(mu - U d0 / 2).
        assert solve_p(ModelPoint(40.0, 18.0)).d0 == pytest.approx(0.7667583069691745, abs=1e-12)
        assert solve_p(ModelPoint(8.0, 1.0)).d0 == pytest.approx(0.16585496142542236, abs=1e-12)

    def test_sector_one_expansion(self):
        # 1 - d0 in powers of 1/U at mu_hat = U/2 - mu + 4 = 6; the remainder
        # is O(U^-4), so doubling U shrinks it by about 16.
        def err(U, mh=6.0):
            one_minus = 1 - solve_p(ModelPoint(U, U / 2 + 4 - mh)).d0
            series = (2 * mh / U - 8 * math.pi * mh / U**2
                      + 2 * math.pi**2 * mh * (16 + mh) / U**3)
            return abs(one_minus - series)

        assert err(400.0) / err(200.0) <= 2 * 2.0**-4

    @given(st.floats(min_value=0.1, max_value=50), st.floats(min_value=-30, max_value=30))
    @settings(deadline=None)
    def test_residual_and_symmetry(self, U, mu):
        at = ModelPoint(U, mu)
        sol = solve_p(at)
        assert sol.residual < 1e-10
        assert solve_p(at.mirrored()).d0 == pytest.approx(-sol.d0, abs=1e-11)

    @given(st.floats(min_value=0.1, max_value=50), st.floats(min_value=-30, max_value=30),
           st.floats(min_value=1e-3, max_value=2))
    @settings(deadline=None)
    def test_monotone_in_mu(self, U, mu, step):
        assert solve_p(ModelPoint(U, mu + step)).d0 >= solve_p(ModelPoint(U, mu)).d0 - 1e-12


class TestGMap:
    def test_examples(self):
        at = ModelPoint(3.0, 1.5)
        assert g_map(at.mu, at) == pytest.approx(0.0, abs=1e-15)
        assert g_map(at.mu - 5.0, at) == 1.5
        at = ModelPoint(1.0, 0.02)
        assert g_map(0.0, at) == pytest.approx(0.5 - dos.tail_mass(0.02), abs=1e-15)

    @given(st.floats(min_value=-10, max_value=10), st.floats(min_value=0, max_value=1))
    def test_nonincreasing(self, x, step):
        at = ModelPoint(5.0, 1.0)
        assert g_map(x + step, at) <= g_map(x, at) + 1e-14


class TestF:
    def test_sector_one_saturated(self):
        sols = solve_f_all(ModelPoint(40.0, 10.0))
        assert len(sols) == 1
        assert sols[0].branch is FBranch.SATURATED
        assert (sols[0].d0, sols[0].m0) == pytest.approx((0.0, 1.0), abs=1e-12)

    def test_saturated_oracle(self):
        # m0 = T(mu - U/2), mpmath oracle at (40, 19).
        sols = solve_f_all(ModelPoint(40.0, 19.0))
        assert len(sols) == 1
        assert sols[0].m0 == pytest.approx(0.6916875925106358, abs=1e-13)
        assert sols[0].d0 == pytest.approx(1 - 0.6916875925106358, abs=1e-13)

    def test_sector_two_pair(self):
        x = 0.1
        U = FOUR_PI - x
        sols = solve_f_all(ModelPoint(U, mu_II_0(U)))
        assert len(sols) == 2
        small, large = sorted(sols, key=lambda s: s.m0)
        assert 0 < small.m0 < large.m0
        # mpmath oracle: 2D root of both F equations polished from these roots.
        assert (small.d0, small.m0) == pytest.approx((0.9898444058476074, 0.007106807989121613),
                                                     abs=1e-10)
        assert (large.d0, large.m0) == pytest.approx((0.989833960677451, 0.010166039322548951),
                                                     abs=1e-12)
        lead = x / math.pi**2 * (1 - 1 / math.sqrt(2))
        assert abs((large.m0 - small.m0) - lead) < x**2 / math.pi**2

    def test_sector_three_empty(self):
        assert solve_f_all(ModelPoint(4.0, 20 * e_small(4.0))) == []

    def test_mirror(self):
        a = solve_f_all(ModelPoint(40.0, 19.0))
        b = solve_f_all(ModelPoint(40.0, -19.0))
        assert [(-s.d0, s.m0) for s in b] == pytest.approx([(s.d0, s.m0) for s in a])

    @given(st.floats(min_value=1, max_value=50), st.floats(min_value=-30, max_value=30))
    @settings(deadline=None, max_examples=40)
    def test_every_solution_solves_the_equations(self, U, mu):
        at = ModelPoint(U, mu)
        for s in solve_f_all(at):
            assert s.m0 > 0
            assert s.residual < 1e-10
            r1, r2 = f_residuals(s.d0, s.m0, at)
            assert max(abs(r1), abs(r2)) < 1e-9


class TestGap:
    @pytest.mark.parametrize("U, expected", [
        (20.0, 9.805317178566352),
        (1.0, 0.05975543108016581),
        (0.5, 0.0044270119578847114),
        (4.0, 1.381307808842553),
        (30.0, 14.868271705613642),
    ])
    def test_oracle(self, U, expected):
        assert gap_delta(U) == pytest.approx(expected, rel=1e-13)

    @pytest.mark.parametrize("U", [0.5, 4.0, 30.0])
    def test_defining_identity(self, U):
        assert dos.kernel_inv_sqrt(0.0, gap_delta(U)) == pytest.approx(1 / U, abs=1e-10)

    def test_expansions(self):
        U = 20.0
        assert abs(gap_delta(U) - (U / 2 - 4 / U + 44 / U**3)) < 1000 / U**5
        assert gap_delta(1.0) / (32 * e_small(1.0)) == pytest.approx(1.0, abs=1e-3)

    def test_rejects(self):
        with pytest.raises(DomainError):
            gap_delta(0.0)


class TestDopedGeometry:
    @pytest.mark.parametrize("U, expected", [(0.5, 0.002018783616572585),
                                             (1.0, 0.026248002411785903),
                                             (2.0, 0.15694150144448207)])
    def test_b_plus_max_oracle(self, U, expected):
        assert b_plus_max(U) == pytest.approx(expected, rel=1e-12)
        assert dos.inv_eps_tail(b_plus_max(U)) == pytest.approx(1 / U, abs=1e-10)

    def test_b_plus_max_expansion(self):
        U = 0.5
        lead = (16 - 2 * math.pi / 3 * math.sqrt(U)) * e_small(U)
        assert abs(b_plus_max(U) - lead) < U * e_small(U)

    def test_b_plus_max_increasing(self):
        vals = [b_plus_max(U) for U in (0.5, 1.0, 2.0)]
        assert vals == sorted(vals)

    def test_delta1_endpoints(self):
        U = 1.0
        assert delta1(0.0, U) == gap_delta(U)
        assert delta1(b_plus_max(U), U) == 0.0

    def test_delta1_small_u(self):
        U = 0.5
        e = e_small(U)
        d = delta1(8 * e, U)
        assert abs(d / e - 8 * math.sqrt(8)) < 5 * math.sqrt(U)

    def test_delta1_prime(self):
        U = 0.5
        b = 8 * e_small(U)
        dp = delta1_prime(b, U)
        assert dp < 0
        assert abs(dp + 4 / math.sqrt(8)) < math.sqrt(U)

    @settings(deadline=None, max_examples=5)
    @given(st.floats(min_value=0.05, max_value=0.95))
    def test_delta1_prime_matches_difference(self, frac):
        U = 1.0
        b = frac * b_plus_max(U)
        h = 1e-6 * b
        fd = (delta1(b + h, U) - delta1(b - h, U)) / (2 * h)
        dp = delta1_prime(b, U)
        assert dp < 0
        assert abs(dp - fd) <= 1e-5 * abs(dp)

    def test_delta2_radicand(self):
        at = ModelPoint(0.5, 20 * e_small(0.5))
        with pytest.raises(RadicandError):
            delta2(0.9 * b_plus_max(0.5) * 10, at)

    def test_xi_signs_and_root(self):
        U = 0.5
        e = e_small(U)
        at = ModelPoint(U, 20 * e)
        assert xi(0.0, at) > 0
        assert xi(0.5 * e, at) > 0
        assert xi(0.99 * b_plus_max(U), at) < 0
        doped = [s for s in solve_af_all(at) if s.branch is AFBranch.DOPED]
        assert len(doped) == 1
        assert abs(doped[0].b_plus / e - 12) < 2 * math.sqrt(U)


class TestAF:
    def test_sector_one(self):
        sols = solve_af_all(ModelPoint(40.0, 10.0))
        assert len(sols) == 1
        s = sols[0]
        assert s.branch is AFBranch.HALF_FILLED and s.d0 == 0.0
        # Next coefficient -1216 from inverting the large-Delta kernel series.
        U = 40.0
        assert abs(s.m1 - (1 - 8 / U**2 + 88 / U**4 - 1216 / U**6)) < 1e5 / U**8
        assert s.m1 == pytest.approx(0.9950340810177242, abs=1e-14)

    def test_sector_two_empty(self):
        U = FOUR_PI - 0.1
        assert solve_af_all(ModelPoint(U, mu_II_0(U))) == []

    @pytest.mark.parametrize("U, mu_hat, b, delta, d0", [
        # mpmath oracle: 2D root in (b, Delta) of the gap equation and Delta = Delta2(b).
        (0.5, 20, 0.0017524032995041975, 0.0015168390375407074, 0.0017967480844841436),
        (1.0, 24, 0.016034461535625034, 0.03488851437976622, 0.012843699508202959),
    ])
    def test_sector_three(self, U, mu_hat, b, delta, d0):
        sols = solve_af_all(ModelPoint(U, mu_hat * e_small(U)))
        assert [s.branch for s in sols] == [AFBranch.HALF_FILLED, AFBranch.DOPED]
        doped = sols[1]
        assert doped.b_plus == pytest.approx(b, rel=1e-11)
        assert doped.delta == pytest.approx(delta, rel=1e-11)
        assert doped.d0 == pytest.approx(d0, rel=1e-11)
        assert all(s.residual < 1e-10 for s in sols)

    def test_mirror(self):
        U = 1.0
        mu = 24 * e_small(U)
        a = solve_af_all(ModelPoint(U, mu))
        b = solve_af_all(ModelPoint(U, -mu))
        assert [s.d0 for s in b] == [-s.d0 for s in a]

    def test_no_solution_above_half_u(self):
        assert solve_af_all(ModelPoint(4.0, 2.5)) == []

    @given(st.floats(min_value=0.5, max_value=40), st.floats(min_value=0, max_value=0.49))
    @settings(deadline=None, max_examples=30)
    def test_residuals(self, U, frac):
        at = ModelPoint(U, frac * U)
        for s in solve_af_all(at):
            assert s.m1 > 0
            assert s.residual < 1e-10
            r1, r2 = af_residuals(s.d0, s.m1, at)
            assert max(abs(r1), abs(r2)) < 1e-9


def test_scan_resolution_does_not_change_counts():
    at = ModelPoint(FOUR_PI - 0.1, mu_II_0(FOUR_PI - 0.1))
    coarse = solve_f_all(at, SolverConfig(scan_points=256))
    fine = solve_f_all(at, SolverConfig(scan_points=2048))
    assert len(coarse) == len(fine) == 2
    assert np.allclose([s.m0 for s in coarse], [s.m0 for s in fine], atol=1e-10)
