"""Seminorms of ramps on R x (0,1)^l through the one-dimensional reduction."""

import math

import numpy as np
import pytest
from scipy import integrate

from gagliardo._validation import DomainError
from gagliardo.domains import Strip
from gagliardo.functions import TestFunction
from gagliardo.kernels import ExponentPair, Kernel, KernelProfile
from gagliardo.strip import (ball_energy, cross_section_kernel, difference_energy, strip_effective_kernel,
                             strip_kernel_ratio, strip_seminorm_set, strip_tail_condition)


def ramp_diff_oracle(n, a):
    g = lambda x: max(1 - abs(x) / n, 0.0)  # noqa: E731
    pts = sorted({-n - a, -n, -a, 0.0, n - a, n, -a / 2})
    return integrate.quad(lambda x: (g(x + a) - g(x)) ** 2, pts[0], pts[-1], points=pts[1:-1], limit=200)[0]


class TestReduction:
    @pytest.mark.parametrize("n,a", [(4, 0.3), (4, 5.0), (8, 20.0), (2, 1.0)])
    def test_difference_energy(self, n, a):
        got = difference_energy(TestFunction.strip_ramp(n), a)[0]
        assert got == pytest.approx(ramp_diff_oracle(n, a), rel=1e-12)

    def test_difference_energy_saturates(self):
        # disjoint supports: twice the energy of the ramp itself, 2 * (2n/3)
        assert difference_energy(TestFunction.strip_ramp(4), 100.0)[0] == pytest.approx(16 / 3, rel=1e-13)

    @pytest.mark.parametrize("a,sigma", [(0.7, 3.5), (0.05, 3.0), (3.0, 4.5)])
    def test_cross_section_l2(self, a, sigma):
        f = lambda u2, u1: (1 - abs(u1)) * (1 - abs(u2)) * (a * a + u1 * u1 + u2 * u2) ** (-sigma / 2)  # noqa: E731
        oracle = 4 * integrate.dblquad(f, 0, 1, 0, 1, epsabs=0, epsrel=1e-11)[0]
        assert cross_section_kernel(a, 2, sigma)[0] == pytest.approx(oracle, rel=1e-8)

    def test_cross_section_l2_frozen(self):
        assert cross_section_kernel(0.7, 2, 3.5)[0] == pytest.approx(1.76482829289244, rel=1e-10)

    @pytest.mark.parametrize("a,alpha", [(0.01, 0.5), (1.0, 1.0), (10.0, 1.5)])
    def test_effective_kernel_l1(self, a, alpha):
        oracle = integrate.dblquad(lambda y, x: (a * a + (x - y) ** 2) ** (-(2 + alpha) / 2), 0, 1, 0, 1,
                                   epsabs=0, epsrel=1e-10)[0]
        assert strip_effective_kernel(0.0, a, alpha) == pytest.approx(oracle, rel=1e-7)

    @pytest.mark.parametrize("R,alpha", [(0.2, 0.5), (0.5, 1.5)])
    def test_ball_energy_l1(self, R, alpha):
        # polar form: int_0^R rho^(1-sigma) int_0^2pi D(rho |cos t|) dt drho
        n, sigma = 4, 2 + alpha

        def ring(rho):
            return 4 * integrate.quad(lambda t: ramp_diff_oracle(n, rho * math.cos(t)), 0, math.pi / 2)[0]

        oracle = integrate.quad(lambda rho: rho ** (1 - sigma) * ring(rho), 0, R, epsrel=1e-10)[0]
        assert ball_energy(TestFunction.strip_ramp(n), R, 1, alpha)[0] == pytest.approx(oracle, rel=1e-6)


class TestEffectiveKernel:
    def test_long_range(self):
        assert 0.9 <= strip_kernel_ratio(0.0, 10.0, 1.0) <= 1.1

    def test_short_range_constant(self):
        a, b = strip_kernel_ratio(0.0, 0.01, 0.5), strip_kernel_ratio(0.0, 0.001, 0.5)
        assert 0 < a and 0 < b and abs(a - b) <= 0.05 * a

    def test_symmetric(self):
        assert strip_effective_kernel(0.2, 1.7, 1.0) == strip_effective_kernel(1.7, 0.2, 1.0)

    def test_coincident(self):
        with pytest.raises(DomainError):
            strip_effective_kernel(0.4, 0.4, 1.0)


class TestSeminorm:
    @pytest.fixture(scope="class")
    @staticmethod
    def pair():
        k = Kernel(2, 2.0, KernelProfile.stable(1.5))
        f = TestFunction.strip_ramp(4)
        return (strip_seminorm_set(f, Strip(1, 1), k, thetas=(0.5, 1.0)),
                strip_seminorm_set(f.scaled(3.0), Strip(1, 1), k, thetas=(0.5, 1.0)))

    def test_monotone(self, pair):
        assert pair[0].monotone and pair[0].ratio(0.5) >= pair[0].ratio(1.0) >= 1.0

    def test_homogeneous(self, pair):
        a, b = pair
        assert b.full.value == pytest.approx(3 * a.full.value, rel=1e-12)
        assert b.truncated[1.0].value == pytest.approx(3 * a.truncated[1.0].value, rel=1e-12)

    def test_reports_far_range_bound(self, pair):
        full = pair[0].full
        assert 0 < full.tail_bound < 1e-6 * full.value ** 2
        assert full.abs_error <= 1e-4 * full.value

    def test_unsupported_cases(self):
        f = TestFunction.strip_ramp(4, 4)
        with pytest.raises(NotImplementedError):
            strip_seminorm_set(f, Strip(1, 3), Kernel(4, 2.0, KernelProfile.stable(1.0)))
        with pytest.raises(NotImplementedError):
            strip_seminorm_set(TestFunction.strip_ramp(4), Strip(1, 1), Kernel(2, 2.0, KernelProfile.stable(1.0)),
                               ExponentPair(3.0, 2.0))


class TestTailCondition:
    def test_stable_converges(self):
        tc = strip_tail_condition(Kernel(2, 2.0, KernelProfile.stable(0.5)))
        assert tc.converges and tc.exponent == pytest.approx(1.5, abs=0.01)

    def test_zero_order_fails(self):
        tc = strip_tail_condition(Kernel(2, 2.0, KernelProfile.constant_one()))
        assert not tc.converges and tc.exponent == pytest.approx(1.0, abs=0.01)

    def test_needs_plane(self):
        with pytest.raises(ValueError):
            strip_tail_condition(Kernel(1, 2.0, KernelProfile.stable(0.5)))
