import math

import pytest

from qthermo.errors import NumericsError
from qthermo.numerics import adaptive_simpson, gamma_function


class TestGammaFunction:
    @pytest.mark.parametrize("x", [0.5, 1.0, 1.5, 2.0, 3.2, 5.0, 7.5, 12.0])
    def test_matches_math_gamma(self, x):
        assert gamma_function(x) == pytest.approx(math.gamma(x), rel=1e-13)

    def test_integers_are_factorials(self):
        fact = 1
        for n in range(1, 10):
            assert gamma_function(n) == pytest.approx(fact, rel=1e-13)
            fact *= n

    def test_half_integer(self):
        assert gamma_function(0.5) == pytest.approx(math.sqrt(math.pi),
                                                    rel=1e-14)

    @pytest.mark.parametrize("x", [-0.5, -1.5, -2.3])
    def test_reflection_for_negative_arguments(self, x):
        assert gamma_function(x) == pytest.approx(math.gamma(x), rel=1e-11)

    def test_recurrence(self):
        for x in (0.3, 1.7, 4.4):
            assert gamma_function(x + 1.0) == pytest.approx(
                x * gamma_function(x), rel=1e-12)


class TestAdaptiveSimpson:
    def test_sine_over_half_period(self):
        assert adaptive_simpson(math.sin, 0.0, math.pi) == pytest.approx(
            2.0, abs=1e-10)

    def test_polynomial_is_exact(self):
        # Simpson is exact on cubics
        assert adaptive_simpson(lambda x: x ** 3, 0.0, 2.0) == pytest.approx(
            4.0, abs=1e-12)

    def test_exponential(self):
        assert adaptive_simpson(math.exp, 0.0, 1.0) == pytest.approx(
            math.e - 1.0, abs=1e-10)

    def test_reversed_limits_flip_sign(self):
        forward = adaptive_simpson(math.cos, 0.0, 1.0)
        assert adaptive_simpson(math.cos, 1.0, 0.0) == pytest.approx(
            -forward, abs=1e-12)

    def test_empty_interval(self):
        assert adaptive_simpson(math.exp, 1.0, 1.0) == 0.0

    def test_peaked_integrand(self):
        # narrow Lorentzian: forces deep refinement
        f = lambda x: 1.0 / (1e-4 + x * x)
        exact = 2.0 / 1e-2 * math.atan(1.0 / 1e-2)
        assert adaptive_simpson(f, -1.0, 1.0, tol=1e-10) == pytest.approx(
            exact, rel=1e-9)

    def test_depth_exhaustion_raises(self):
        f = lambda x: 1.0 / (1e-12 + x * x)
        with pytest.raises(NumericsError):
            adaptive_simpson(f, -1.0, 1.0, tol=1e-14, max_depth=6)
