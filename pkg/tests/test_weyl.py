"""Counting integral, sublevel areas, brackets, and exponent fits."""

import math

import numpy as np
import pytest

from conftest import make_cusp, make_funnel
from hypmag import (BoundedFieldError, SurfaceEnds, WeylOptions, check_hypW,
                    eval_field, fit_exponent, landau_count, omega,
                    theorem1_bracket, weyl_integral)


def cusp_linear_weyl(lam: float, L: float = 1.0, t0: float = 0.0) -> float:
    """Closed form for b~ = y: the integrand N(mu, e^t) L e^{-t} is the
    piecewise constant L #{k : (2k+1) e^t < mu}, so the integral telescopes
    to L sum_k (ln(mu / (2k+1)) - t0)_+ ."""
    mu = lam - 0.25
    if mu <= 0.0:
        return 0.0
    total = 0.0
    k = 0
    while (2 * k + 1) < mu * math.exp(-t0):
        total += math.log(mu / (2 * k + 1)) - t0
        k += 1
    return L * total


def funnel_cosh_omega(mu: float, tau: float) -> float:
    """Area of {cosh t < mu} on a funnel with t0 = 0."""
    if mu <= 1.0:
        return 0.0
    return 2.0 * math.pi * tau * math.sinh(math.acosh(mu))


class TestWeylIntegral:
    def test_cusp_linear_closed_form(self):
        end = make_cusp([0.0, 1.0])
        for lam in (50.0, 100.0, 400.0, 800.0):
            expected = cusp_linear_weyl(lam)
            assert weyl_integral(end, lam) == pytest.approx(expected, rel=1e-8)

    def test_cusp_closed_form_with_offsets(self):
        end = make_cusp([0.0, 1.0], L=1.7, t0=0.8)
        # scaling L multiplies the area form; moving t0 shifts each log
        assert weyl_integral(end, 120.0) == pytest.approx(
            cusp_linear_weyl(120.0, L=1.7, t0=0.8), rel=1e-8)

    def test_zero_below_floor(self):
        end = make_cusp([0.0, 1.0])
        assert weyl_integral(end, 0.25) == 0.0
        assert weyl_integral(end, 0.1) == 0.0

    def test_sign_changing_field_matches_trapezoid(self):
        # b~ = y - 2 vanishes at t = ln 2; the breakpoint machinery must
        # handle the kink of |b~| exactly
        end = make_cusp([-2.0, 1.0])
        lam = 30.0
        mu = lam - 0.25
        ts = np.linspace(0.0, 12.0, 800001)
        b = np.abs(np.asarray(eval_field(end, ts)))
        f = np.array([landau_count(mu, bi) for bi in b]) * np.exp(-ts)
        brute = float(np.trapezoid(f, ts))
        assert weyl_integral(end, lam) == pytest.approx(brute, rel=1e-5)

    def test_surface_sums_over_ends(self):
        cusp = make_cusp([0.0, 1.0])
        fun = make_funnel([0.0, 1.0])
        surface = SurfaceEnds(funnels=(fun,), cusps=(cusp,))
        lam = 40.0
        total = weyl_integral(surface, lam)
        assert total == pytest.approx(
            weyl_integral(fun, lam) + weyl_integral(cusp, lam), rel=1e-10)

    def test_bounded_field_rejected(self):
        with pytest.raises(BoundedFieldError):
            weyl_integral(make_cusp([2.0]), 50.0)
        with pytest.raises(BoundedFieldError):
            weyl_integral(make_funnel([1.0]), 50.0)

    def test_options_validation(self):
        with pytest.raises(ValueError):
            WeylOptions(delta=1.0 / 3.0)
        with pytest.raises(ValueError):
            WeylOptions(delta=0.4)
        with pytest.raises(ValueError):
            WeylOptions(quad_tol=0.0)
        with pytest.raises(ValueError):
            WeylOptions(bracket_C=-0.5)


class TestOmega:
    def test_funnel_cosh_closed_form(self):
        for tau in (0.1, 0.5, 0.9):
            end = make_funnel([0.0, 1.0], tau=tau)
            for mu in (10.0, 100.0, 1000.0):
                assert omega(end, mu) == pytest.approx(
                    funnel_cosh_omega(mu, tau), rel=1e-9)

    def test_empty_sublevel(self):
        end = make_funnel([0.0, 1.0])
        # intensity cosh t >= 1 on the whole end
        assert omega(end, 0.5) == 0.0
        assert omega(end, -1.0) == 0.0

    def test_cusp_sign_change_closed_form(self):
        # |y - 2| < 1/2 is y in (3/2, 5/2): area 2 pi (2/3 - 2/5)
        end = make_cusp([-2.0, 1.0])
        expected = 2.0 * math.pi * (1.0 / 1.5 - 1.0 / 2.5)
        assert omega(end, 0.5) == pytest.approx(expected, rel=1e-12)

    def test_additive_over_surface(self):
        fun = make_funnel([0.0, 1.0], tau=0.3)
        cusp = make_cusp([0.0, 1.0])
        surface = SurfaceEnds(funnels=(fun,), cusps=(cusp,))
        mu = 25.0
        assert omega(surface, mu) == pytest.approx(
            omega(fun, mu) + omega(cusp, mu), rel=1e-12)


class TestHypW:
    def test_funnel_cosh_holds(self):
        end = make_funnel([0.0, 1.0])
        rep = check_hypW([end], (10.0, 100.0, 1000.0), (0.1, 0.5, 0.9))
        assert rep.holds
        assert math.isfinite(rep.C1_witness)
        assert rep.skipped == ()

    def test_skips_empty_sublevels(self):
        end = make_funnel([0.0, 1.0])
        rep = check_hypW([end], (0.5, 10.0), (0.5,))
        assert rep.skipped == (0.5,)
        assert rep.holds

    def test_cusp_linear_ratio(self):
        # omega(mu) = 2 pi (1 - 1/mu) for mu > 1, so the ratio has the
        # closed form 1 / ((1 + tau) (mu - 1))
        end = make_cusp([0.0, 1.0])
        rep = check_hypW([end], (5.0,), (0.25,))
        assert rep.C1_witness == pytest.approx(1.0 / (1.25 * 4.0), rel=1e-9)

    def test_validation(self):
        end = make_funnel([0.0, 1.0])
        with pytest.raises(ValueError):
            check_hypW([end], (), (0.5,))
        with pytest.raises(ValueError):
            check_hypW([end], (10.0,), ())
        with pytest.raises(ValueError):
            check_hypW([end], (10.0,), (1.0,))
        with pytest.raises(ValueError):
            check_hypW([end], (10.0,), (-0.2,))


class TestBracket:
    def test_ordering_for_all_C(self):
        end = make_cusp([0.0, 1.0])
        lam = 100.0
        w = weyl_integral(end, lam)
        for C in (0.0, 0.3, 1.0, 2.5, 10.0):
            lower, upper = theorem1_bracket(end, lam, WeylOptions(bracket_C=C))
            assert lower <= w + 1e-9 * abs(w)
            assert w <= upper + 1e-9 * abs(upper)
            assert lower <= upper

    def test_C_zero_collapses_to_integral(self):
        end = make_cusp([0.0, 1.0])
        lam = 100.0
        lower, upper = theorem1_bracket(end, lam, WeylOptions(bracket_C=0.0))
        w = weyl_integral(end, lam)
        assert lower == pytest.approx(w, rel=1e-12)
        assert upper == pytest.approx(w, rel=1e-12)

    def test_relative_width_shrinks(self):
        end = make_cusp([0.0, 1.0])
        opts = WeylOptions(delta=0.35, bracket_C=1.0)

        def rel_width(lam):
            lower, upper = theorem1_bracket(end, lam, opts)
            return (upper - lower) / weyl_integral(end, lam, opts)

        assert rel_width(200.0) < rel_width(50.0)

    def test_lambda_must_be_positive(self):
        with pytest.raises(ValueError):
            theorem1_bracket(make_cusp([0.0, 1.0]), 0.0)


class TestFitExponent:
    def test_recovers_exact_power_law(self):
        samples = [(lam, 3.0 * lam**2) for lam in (10.0, 20.0, 40.0, 80.0)]
        fit = fit_exponent(samples)
        assert fit.slope == pytest.approx(2.0, abs=1e-12)
        assert fit.alpha == pytest.approx(3.0, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            fit_exponent([(1.0, 1.0), (2.0, 2.0)])
        with pytest.raises(ValueError):
            fit_exponent([(1.0, 1.0), (1.0, 2.0), (3.0, 4.0)])
        with pytest.raises(ValueError):
            fit_exponent([(1.0, 1.0), (2.0, 0.0), (3.0, 4.0)])
