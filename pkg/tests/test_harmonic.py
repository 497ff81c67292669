"""Maximal operator, far-field ratios, Fourier coefficients and weighted sums."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import special

from gagliardo._rules import panel_rule
from gagliardo._validation import DomainError
from gagliardo.functions import TestFunction
from gagliardo.harmonic import (FourierSeries, GridFunction, check_maximal_far, check_maximal_far_log,
                                cosine_log_integrals, fourier_coefficients, maximal_function, step3_counterexample,
                                weighted_sum)
from gagliardo.kernels import Kernel, KernelProfile

cells = arrays(np.float64, st.integers(2, 7), elements=st.floats(0, 10, allow_nan=False))


def brute_maximal_1d(g, x):
    e = g.edges(0)
    best = 0.0
    for i in range(len(e)):
        for j in range(i + 1, len(e)):
            if e[i] <= x <= e[j]:
                best = max(best, g.values[i:j].sum() / (j - i))
    return best


class TestMaximal:
    def test_constant(self):
        g = GridFunction([0.0], [1.0], np.ones(8))
        assert maximal_function(g, [0.37]) == pytest.approx(1.0)

    def test_indicator_example(self):
        g = GridFunction([-2.0], [4.0], [0, 0, 1, 0, 0, 0])
        assert maximal_function(g, [2.0]) == pytest.approx(0.5)

    def test_outside(self):
        with pytest.raises(DomainError):
            maximal_function(GridFunction([0.0], [1.0], np.ones(4)), [1.5])

    def test_negative_values_rejected(self):
        with pytest.raises(DomainError):
            GridFunction([0.0], [1.0], [1.0, -1.0])

    @settings(max_examples=60, deadline=None)
    @given(cells, st.floats(0, 1))
    def test_matches_enumeration(self, vals, x):
        g = GridFunction([0.0], [1.0], vals)
        assert maximal_function(g, [x]) == pytest.approx(brute_maximal_1d(g, x), rel=1e-12, abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 5).flatmap(lambda n: st.tuples(
        arrays(np.float64, (n, n), elements=st.floats(0, 5)), arrays(np.float64, (n, n), elements=st.floats(0, 5)))))
    def test_sublinear_and_dominates_2d(self, pair):
        a, b = (GridFunction([0.0, 0.0], [1.0, 1.0], v) for v in pair)
        s = a + b
        for x in a.centers().reshape(-1, 2):
            ms = maximal_function(s, x)
            assert ms <= maximal_function(a, x) + maximal_function(b, x) + 1e-12
            assert ms >= float(s(x)) - 1e-12


class TestFarRatios:
    KERNEL = Kernel(1, 2.0, KernelProfile.power(0.5))

    @pytest.mark.parametrize("r", [0.01, 0.1, 0.5])
    def test_constant_data(self, r):
        g = GridFunction([0.0], [1.0], np.ones(16))
        x = 0.3
        rep = check_maximal_far(g, self.KERNEL, 2.0, r, [x])
        exact = sum(max(1 / r - 1 / side, 0.0) for side in (x, 1 - x))
        assert rep.lhs == pytest.approx(exact, rel=1e-9)
        # one geometric series per side
        assert 0 < rep.ratio <= 2.0

    def test_zero_data(self):
        g = GridFunction([0.0], [1.0], np.zeros(4))
        assert check_maximal_far(g, self.KERNEL, 2.0, 0.1, [0.5]).ratio == 0.0

    def test_empty_region(self):
        g = GridFunction([0.0], [1.0], np.ones(4))
        assert check_maximal_far(g, self.KERNEL, 2.0, 1.5, [0.5]).ratio == 0.0
        assert check_maximal_far_log(g, 2.0, [0.5]).ratio == 0.0

    def test_eta_precondition(self):
        from gagliardo.kernels import ExponentPair
        g = GridFunction([0.0], [1.0], np.ones(4))
        with pytest.raises(DomainError):
            check_maximal_far(g, self.KERNEL, 0.5, 0.1, [0.5], ExponentPair(2.0, 2.0))

    def test_log_ratio_stable(self):
        g = GridFunction([0.0], [1.0], np.ones(16))
        reps = [check_maximal_far_log(g, r, [0.5]) for r in (1e-2, 1e-3, 1e-4)]
        for rep in reps:
            assert rep.lhs == pytest.approx(2 * math.log(0.5 / rep.r), rel=1e-9)
        ratios = [rep.ratio for rep in reps]
        assert all(0 < v <= 2.0 for v in ratios)

    def test_log_far_indicator(self):
        g = GridFunction([0.0], [1.0], [0, 0, 0, 0, 1])
        rep = check_maximal_far_log(g, 0.1, [0.2])
        assert rep.lhs == pytest.approx(math.log(0.8 / 0.6), rel=1e-9)
        assert rep.maximal == pytest.approx(brute_maximal_1d(g, 0.2))

    def test_polar_far_integral_2d(self):
        g = GridFunction([0.0, 0.0], [1.0, 1.0], np.ones((8, 8)))
        rep = check_maximal_far(g, Kernel(2, 2.0, KernelProfile.power(0.5)), 2.0, 0.05, [0.5, 0.5])
        assert math.isfinite(rep.ratio) and rep.ratio > 0

    @settings(max_examples=20, deadline=None)
    @given(st.floats(0.01, 100))
    def test_scale_invariant(self, c):
        g = GridFunction([0.0], [1.0], np.linspace(0.1, 2.0, 10))
        a = check_maximal_far(g, self.KERNEL, 2.0, 0.05, [0.4])
        b = check_maximal_far(g.scaled(c), self.KERNEL, 2.0, 0.05, [0.4])
        assert b.ratio == pytest.approx(a.ratio, rel=1e-12)
        la = check_maximal_far_log(g, 0.05, [0.4])
        lb = check_maximal_far_log(g.scaled(c), 0.05, [0.4])
        assert lb.ratio == pytest.approx(la.ratio, rel=1e-12)


class TestFourier:
    def test_constant(self):
        s = fourier_coefficients(lambda x: np.ones_like(x), 4)
        assert s[0] == pytest.approx(1.0)
        assert all(abs(s[m]) < 1e-14 for m in range(-4, 5) if m)

    def test_single_exponential(self):
        s = fourier_coefficients(lambda x: np.exp(2j * np.pi * x), 5)
        assert s[1] == pytest.approx(1.0)
        assert all(abs(s[m]) < 1e-13 for m in range(-5, 6) if m != 1)

    def test_identity(self):
        s = fourier_coefficients(lambda x: x, 6)
        assert s[0] == pytest.approx(0.5)
        for m in range(1, 7):
            assert s[m] == pytest.approx(1j / (2 * math.pi * m), abs=1e-14)

    def test_samples_by_fft(self):
        x = np.arange(64) / 64
        s = fourier_coefficients(np.cos(2 * np.pi * 3 * x), 5)
        assert s[3] == pytest.approx(0.5) and s[-3] == pytest.approx(0.5)

    def test_sparse_fourier_exact(self):
        f = TestFunction.sparse_fourier({2: 1 + 1j})
        s = fourier_coefficients(f, 4)
        assert s.coeffs == {2: 0.5 + 0.5j, -2: 0.5 - 0.5j} and s.is_real

    def test_json_round_trip(self):
        s = FourierSeries({3: 0.25j, -3: -0.25j})
        assert FourierSeries.from_dict(s.to_json()).coeffs == s.coeffs

    def test_parseval_identity(self):
        # int_0^1 int_0^1 (f(x) - f(x - h))^2 dx h^-1 dh = 2 sum |f^(m)|^2 I_0(m)
        coeffs = {1: 0.7, 3: 0.2 - 0.4j}
        f = TestFunction.sparse_fourier(coeffs)
        series = fourier_coefficients(f, 3)
        rhs = 2 * sum(abs(v) ** 2 * cosine_log_integrals(m)[0] for m, v in series.coeffs.items())
        h, wh = panel_rule(np.concatenate([[0.0], np.geomspace(1e-12, 1.0, 80)]), 16)
        x, wx = panel_rule(np.linspace(0, 1, 33), 16)
        diff = f(x[:, None]) [None, :] - f((x[None, :] - h[:, None])[..., None])
        lhs = float(np.sum(wh / h * np.sum(wx * diff ** 2, axis=1)))
        assert lhs == pytest.approx(rhs, rel=1e-9)


class TestCosineIntegrals:
    def test_zero_frequency(self):
        assert cosine_log_integrals(0) == (0.0, 0.0)

    @pytest.mark.parametrize("m", [1, 2, 64, 4096])
    def test_against_cosine_integral(self, m):
        exact = np.euler_gamma + math.log(2 * math.pi * m) - special.sici(2 * math.pi * m)[1]
        assert cosine_log_integrals(m)[0] == pytest.approx(exact, rel=1e-10)

    def test_m_one_value(self):
        assert cosine_log_integrals(1)[0] == pytest.approx(2.4377, abs=1e-4)

    def test_symmetric_in_sign(self):
        assert cosine_log_integrals(-5) == cosine_log_integrals(5)

    def test_log_weight_dominates(self):
        i0, il = cosine_log_integrals(100)
        assert il > i0 > 0


class TestWeightedSums:
    def test_zero_series(self):
        rep = weighted_sum(FourierSeries(), "log", [1, 10, 100])
        assert rep.sum_log == [0.0, 0.0, 0.0] and rep.sum_log2 == [0.0, 0.0, 0.0]

    def test_single_coefficient(self):
        rep = weighted_sum(FourierSeries({2: 1.0}), "log", [1, 2, 5, 1000])
        assert rep.sum_log == [0.0, math.log(2), math.log(2), math.log(2)]

    def test_csv(self):
        rep = weighted_sum(FourierSeries({2: 1.0}), "log", [2])
        assert rep.to_csv().splitlines()[0] == "cutoff,sum_log,sum_log2"

    def test_unknown_weight(self):
        with pytest.raises(ValueError):
            weighted_sum(FourierSeries(), "sqrt")

    @settings(max_examples=40, deadline=None)
    @given(st.dictionaries(st.integers(-200, 200), st.complex_numbers(max_magnitude=5, allow_nan=False),
                           max_size=20),
           st.lists(st.integers(1, 300), min_size=1, max_size=6))
    def test_partial_sums_nondecreasing(self, coeffs, cutoffs):
        rep = weighted_sum(FourierSeries(coeffs), "log", cutoffs)
        assert all(a <= b for a, b in zip(rep.sum_log, rep.sum_log[1:]))
        assert all(a <= b for a, b in zip(rep.sum_log2, rep.sum_log2[1:]))


class TestStep3:
    def test_values(self):
        n = 2
        s = step3_counterexample(n, 10)
        base = 2 * n + 1
        assert s[2 * base] == 1.0
        assert s[16 * base] == pytest.approx(1 / 8)
        assert s[3 * base] == 0.0
        assert len(s.coeffs) == 10

    def test_period(self):
        # every frequency is a multiple of 2n+1, so the function has period 1/(2n+1)
        s = step3_counterexample(3, 12)
        x = np.linspace(0, 1, 13)
        assert np.allclose(s(x), s(x + 1 / 7), atol=1e-9)

    def test_big_frequencies(self):
        s = step3_counterexample(2, 10_000)
        assert s.M == 5 * 2 ** 10_000

    def test_divergence_pattern(self):
        s = step3_counterexample(2, 10_000)
        cut = [5 * 2 ** 100, 5 * 2 ** 9_999, 5 * 2 ** 10_000]
        rep = weighted_sum(s, "log", cut)
        assert rep.verdict == "cauchy" and rep.increment < 1e-6
        assert rep.sum_log2[-1] - rep.sum_log2[0] >= 0.8 * math.log(100) * math.log(2) ** 2
        sq = weighted_sum(s, "log_squared", cut)
        assert sq.verdict == "growing" and sq.increment >= math.log(2) ** 2 / 10_000 * 0.99

    def test_arguments(self):
        with pytest.raises(ValueError):
            step3_counterexample(1, 5)
