import math

import numpy as np
import pytest
from scipy.special import eval_hermite

from macromech.numerics import (
    MaxDepthExceeded,
    NonDecayingIntegrand,
    QuadratureSpec,
    hermite,
    hermite_function,
    hermite_function_table,
    hermite_log,
    integrate2d,
    log_factorial,
)


class TestLogFactorial:
    def test_base_cases(self):
        assert log_factorial(0) == 0.0
        assert log_factorial(1) == 0.0

    def test_ten(self):
        # oracle: direct product 10! = 3628800
        assert log_factorial(10) == pytest.approx(math.log(3628800), rel=1e-14)

    def test_ratio_is_log_n(self):
        for n in range(1, 501):
            diff = log_factorial(n) - log_factorial(n - 1)
            assert diff == pytest.approx(math.log(n), rel=1e-12)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            log_factorial(-1)


class TestHermite:
    def test_low_orders(self):
        assert hermite(0, 0.37) == 1.0
        assert hermite(1, 1.0) == 2.0
        assert hermite(2, 1.0) == 2.0  # 4 x^2 - 2

    def test_against_scipy(self):
        rng = np.random.default_rng(11)
        for _ in range(40):
            n = int(rng.integers(0, 25))
            x = float(rng.uniform(-5, 5))
            assert hermite(n, x) == pytest.approx(
                float(eval_hermite(n, x)), rel=1e-10, abs=1e-8
            )

    def test_derivative_recurrence(self):
        # H_n'(x) = 2 n H_{n-1}(x), central finite differences
        rng = np.random.default_rng(5)
        h = 1e-6
        for _ in range(50):
            n = int(rng.integers(1, 51))
            x = float(rng.uniform(-5, 5))
            deriv = (hermite(n, x + h) - hermite(n, x - h)) / (2 * h)
            expected = 2.0 * n * hermite(n - 1, x)
            scale = max(abs(expected), abs(hermite(n, x)), 1.0)
            assert abs(deriv - expected) / scale < 1e-6

    def test_log_form_matches_plain(self):
        for n in (0, 3, 17, 60):
            for x in (-2.5, 0.4, 3.0):
                sign, logabs = hermite_log(n, x)
                val = hermite(n, x)
                if val == 0.0:
                    assert sign == 0.0
                else:
                    assert sign == math.copysign(1.0, val)
                    assert logabs == pytest.approx(math.log(abs(val)), rel=1e-12)

    def test_log_form_beyond_plain_limit(self):
        sign, logabs = hermite_log(400, 2.0)
        assert sign in (-1.0, 1.0)
        assert math.isfinite(logabs) and logabs > 700  # overflows a double

    def test_plain_guard(self):
        with pytest.raises(ValueError):
            hermite(201, 1.0)


class TestHermiteFunction:
    def test_ground_state(self):
        assert hermite_function(0, 0.0) == pytest.approx(math.pi**-0.25, rel=1e-14)

    def test_odd_vanishes_at_origin(self):
        assert hermite_function(1, 0.0) == 0.0
        assert hermite_function(7, 0.0) == 0.0

    def test_second_at_origin(self):
        # H_2(0) = -2 with normalization (2^2 2!)^(-1/2)
        assert hermite_function(2, 0.0) == pytest.approx(
            -math.pi**-0.25 / math.sqrt(2.0), rel=1e-14
        )

    def test_orthonormality(self):
        # 1-D trapezoid quadrature on a wide fine grid as the independent oracle
        xs = np.linspace(-12.0, 12.0, 6001)
        table = hermite_function_table(20, xs)
        overlaps = table @ table.T * (xs[1] - xs[0])
        assert np.abs(overlaps - np.eye(21)).max() < 1e-8

    def test_no_overflow_high_order(self):
        vals = hermite_function_table(600, np.asarray([1.3]))
        assert np.all(np.isfinite(vals))
        assert np.abs(vals).max() < 1.0


def gaussian_spec(**kw):
    base = dict(half_width_u=10.0, half_width_v=10.0, rel_tol=1e-9, abs_tol=1e-10)
    base.update(kw)
    return QuadratureSpec(**base)


class TestIntegrate2d:
    def test_normalized_gaussian(self):
        res = integrate2d(
            lambda z: np.exp(-np.abs(z) ** 2) / math.pi, gaussian_spec()
        )
        assert res.value == pytest.approx(1.0, abs=1e-9)

    def test_measure_kernel_on_vacuum_is_zero(self):
        f = lambda z: np.exp(-np.abs(z) ** 2) * (np.abs(z) ** 2 - 1.0) / (2 * math.pi)
        res = integrate2d(f, gaussian_spec(abs_tol=1e-9))
        assert abs(res.value) < 1e-8

    def test_thermal_moment(self):
        # |chi_thermal|^2 with nbar = 1: s = 3, closed form (1 - s)/(2 s^2)
        s = 3.0
        f = lambda z: np.exp(-s * np.abs(z) ** 2) * (np.abs(z) ** 2 - 1.0) / (
            2 * math.pi
        )
        res = integrate2d(f, gaussian_spec())
        assert res.value == pytest.approx(-1.0 / 9.0, abs=1e-9)

    def test_rotated_anisotropic_domain(self):
        # integrate an elongated Gaussian along a rotated axis
        th = 0.6
        rot = complex(math.cos(th), math.sin(th))

        def f(z):
            w = z * np.conj(rot)
            return np.exp(-(w.real**2) / 9.0 - w.imag**2) / (3.0 * math.pi)

        spec = QuadratureSpec(
            half_width_u=30.0, half_width_v=10.0, rotation=th, rel_tol=1e-9,
            abs_tol=1e-10,
        )
        res = integrate2d(f, spec)
        assert res.value == pytest.approx(1.0, abs=1e-8)

    def test_convergence_on_tightening(self):
        f = lambda z: np.exp(-np.abs(z) ** 2) * (np.abs(z) ** 2 - 1.0) / (2 * math.pi)
        loose = integrate2d(f, gaussian_spec(rel_tol=1e-5, abs_tol=1e-5))
        tight = integrate2d(f, gaussian_spec(rel_tol=1e-8, abs_tol=5e-9))
        assert abs(loose.value - tight.value) <= loose.error + tight.error

    def test_error_estimate_reported(self):
        res = integrate2d(
            lambda z: np.exp(-np.abs(z) ** 2) / math.pi, gaussian_spec()
        )
        assert res.error >= 0.0
        assert res.evaluations > 0

    def test_non_decaying_raises(self):
        with pytest.raises(NonDecayingIntegrand):
            integrate2d(lambda z: np.ones_like(np.real(z)), gaussian_spec())

    def test_max_depth_raises(self):
        # a needle the coarse grid cannot resolve within two levels
        f = lambda z: np.exp(-np.abs(z) ** 2 * 4e4)
        spec = QuadratureSpec(
            half_width_u=10.0, half_width_v=10.0, rel_tol=1e-10, abs_tol=1e-14,
            max_depth=2,
        )
        with pytest.raises(MaxDepthExceeded):
            integrate2d(f, spec)

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            QuadratureSpec(half_width_u=-1.0, half_width_v=1.0)
        with pytest.raises(ValueError):
            QuadratureSpec(half_width_u=1.0, half_width_v=1.0, rel_tol=2.0)
        with pytest.raises(ValueError):
            QuadratureSpec(half_width_u=1.0, half_width_v=1.0, rel_tol=0.0)
