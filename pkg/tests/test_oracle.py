import cmath
import math

import pytest

from qweyl.oracle import (
    DEFAULT_CONTEXT,
    NumericContext,
    chain_check,
    convergence_table,
    exact_momentum_ratio,
    fit_slope,
    taylor_coefficients,
    truncated_value,
)
from qweyl.realization import beta_value


class TestTaylor:
    def test_exponential(self):
        coeffs = taylor_coefficients(cmath.exp, 4)
        for d, c in enumerate(coeffs):
            assert c == pytest.approx(1 / math.factorial(d), rel=1e-8)

    def test_polynomial_is_exact(self):
        coeffs = taylor_coefficients(lambda z: 3 - 2j * z + 5 * z**3, 3)
        assert coeffs == pytest.approx([3, -2j, 0, 5], abs=1e-10)

    def test_truncated_value(self):
        assert truncated_value([1, 2, 3], 0.5) == pytest.approx(2.75)


class TestMomentumRatio:
    def test_classical(self):
        k, point = (0.7, -1.1, 0.9), (0.3, 0.2, -0.4)
        for j in (1, 2, 3):
            assert exact_momentum_ratio(j, 0.0, k, 1.3, point) == pytest.approx(1.3 * k[j - 1])

    def test_matches_brute_force_sum(self):
        # direct evaluation for the last coordinate, where no later phase enters
        theta, k3, x3, hbar = 0.2, 0.9, -0.4, 1.3
        s = sum((1j * k3 * x3) ** n / math.factorial(n) * beta_value(n, theta) for n in range(40))
        want = -1j * hbar * 1j * k3 * s * cmath.exp(-1j * k3 * x3)
        got = exact_momentum_ratio(3, theta, (0.0, 0.0, k3), hbar, (0.0, 0.0, x3))
        assert got == pytest.approx(want, abs=1e-13)

    def test_later_coordinates_shift_the_phase(self):
        theta = 0.1
        k, point = (0.0, 0.5, 0.8), (0.0, 0.0, 0.6)
        got = exact_momentum_ratio(2, theta, k, 1.0, point)
        phase = cmath.exp(1j * 0.8 * 0.6 * (cmath.exp(1j * theta) - 1))
        assert got == pytest.approx(0.5 * phase, abs=1e-13)


class TestConvergence:
    def test_fit_slope(self):
        thetas = [1e-1, 1e-2, 1e-3]
        assert fit_slope(thetas, [t**3 for t in thetas]) == pytest.approx(3.0)

    def test_slopes_follow_truncation_order(self):
        rows, slopes = convergence_table(max_exp=2)
        assert len(slopes) == 27
        for s in slopes:
            assert s["expected"] == s["order"] + 1
            assert s["pass"], s

    @pytest.mark.parametrize("thetas", [(0.1,), (0.1, 0.0), (0.1, -0.01)])
    def test_bad_theta_samples(self, thetas):
        with pytest.raises(ValueError):
            convergence_table(thetas=thetas)


class TestChain:
    @pytest.mark.parametrize("order", [1, 2])
    def test_every_step_passes(self, order):
        steps = chain_check(order)
        assert [s["step"] for s in steps] == ["operator", "momentum", "gauge", "curl", "decompose"]
        for s in steps:
            assert s["pass"], s
            assert s["max_abs_error"] < DEFAULT_CONTEXT.tol

    def test_corrupted_field_is_caught(self):
        from qweyl.freeparticle import curl, decompose, gauge_potential, momentum_amplitudes

        amps = momentum_amplitudes(2)
        pot = gauge_potential(2)
        field = curl(pot)
        bad = [field[0] + field[0], field[1], field[2]]
        steps = {s["step"]: s for s in chain_check(2, symbolic=(amps, pot, bad, decompose(field, 2)))}
        assert steps["momentum"]["pass"] and steps["gauge"]["pass"]
        assert not steps["curl"]["pass"]

    def test_context_theta(self):
        ctx = NumericContext(theta=0.02)
        assert all(s["theta"] == 0.02 for s in chain_check(1, ctx))
