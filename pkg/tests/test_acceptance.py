"""Acceptance criteria, each at its stated tolerance.

Every test records one ``ACn PASS|FAIL detail`` line, printed together at
the end of the run. Run alone with ``pytest tests/test_acceptance.py -v``;
``-m "not slow"`` skips the refined square suite (about three minutes).
"""

import math
import time

import pytest

from gagliardo.domains import Interval
from gagliardo.experiments import MONOTONICITY_LOG, run
from gagliardo.functions import TestFunction
from gagliardo.harmonic import cosine_log_integrals, step3_counterexample, weighted_sum
from gagliardo.kernels import ExponentPair, FlatKernel, Kernel, KernelProfile, check_a2
from gagliardo.seminorm import exact_const_kernel_full, exact_hilbert_subintegral, full_seminorm, \
    hilbert_subintegral_quadrature


@pytest.fixture
def verdict(record_property):
    def record(criterion, ok, detail):
        line = f"{criterion} {'PASS' if ok else 'FAIL'} {detail}"
        record_property("acceptance", line)
        print(line)
        assert ok, line
    return record


@pytest.fixture(scope="module")
def strip_1d():
    return run("strip-1d")


def test_ac1_const_kernel_closed_form(verdict):
    parts, ok = [], True
    for g in (0.1, 0.25, 0.4):
        t0 = time.perf_counter()
        val = full_seminorm(TestFunction.power_gamma(g), Interval(0, 1), FlatKernel(1)).value ** 2
        dt = time.perf_counter() - t0
        rel = abs(val - exact_const_kernel_full(g)) / exact_const_kernel_full(g)
        ok &= rel <= 1e-4 and dt < 10
        parts.append(f"gamma={g}: rel={rel:.1e} t={dt:.2f}s")
    verdict("AC1", ok, "; ".join(parts))


def test_ac2_hilbert_subintegral(verdict):
    parts, ok = [], True
    for n in (5, 10, 20):
        exact = exact_hilbert_subintegral(n)
        rel = abs(hilbert_subintegral_quadrature(n) - exact) / exact
        ok &= rel <= 1e-3
        parts.append(f"n={n}: rel={rel:.1e}")
    verdict("AC2", ok, "; ".join(parts))


def test_ac3a_const_kernel_blowup(verdict):
    t0 = time.perf_counter()
    rep = run("const-kernel-blowup", gammas="0.25,0.4,0.49")
    dt = time.perf_counter() - t0
    r2 = dict(zip(rep.column("gamma"), rep.column("ratio_sq")))
    growth = r2[0.49] / r2[0.25]
    verdict("AC3a", growth >= 9 and dt < 60 and rep.verdict,
            f"ratio^2(0.49)/ratio^2(0.25) = {growth:.2f} (>= 9), {dt:.1f}s, checks {rep.checks}")


def test_ac3b_hilbert_kernel_blowup(verdict):
    t0 = time.perf_counter()
    rep = run("hilbert-kernel-blowup", ns="4,16,64,256", theta=0.5)
    dt = time.perf_counter() - t0
    r2 = dict(zip(rep.column("n"), rep.column("ratio_sq")))
    growth = r2[256] / r2[16]
    verdict("AC3b", growth >= 1.5 and dt < 60 and rep.verdict,
            f"ratio^2(256)/ratio^2(16) = {growth:.2f} (>= 1.5), {dt:.1f}s, checks {rep.checks}")


@pytest.mark.slow
def test_ac4_uniform_square_suite(verdict):
    rep = run("uniform-square-ratio", alphas="0.5,1.0,1.5", thetas="0.25,1.0", refine=True, stability_tol=0.25)
    suite = {}
    for row in rep.rows:
        for key in ("ratio", "ratio_refined"):
            suite[(key, row["theta"])] = max(suite.get((key, row["theta"]), 0.0), row[key])
    change = max(abs(suite[("ratio_refined", t)] - suite[("ratio", t)]) / suite[("ratio", t)] for t in (0.25, 1.0))
    finite = all(math.isfinite(r) for r in rep.column("ratio") + rep.column("ratio_refined"))
    ok = finite and suite[("ratio", 0.25)] >= suite[("ratio", 1.0)] and change <= 0.25 and rep.verdict
    verdict("AC4", ok, f"suite max theta=1/4: {suite[('ratio', 0.25)]:.3f}, theta=1: {suite[('ratio', 1.0)]:.3f}, "
                       f"refinement change {change:.2%} (<= 25%), finite={finite}")


def test_ac5a_strip_bounded(verdict, strip_1d):
    r = [row["ratio"] for row in strip_1d.rows if row["alpha"] == 1.5]
    spread = max(r) / min(r)
    verdict("AC5a", spread <= 2 and strip_1d.checks["alpha=1.5:bounded"],
            f"alpha=1.5 ratios {[round(v, 3) for v in r]}, max/min = {spread:.3f} (<= 2)")


def test_ac5b_strip_growing(verdict, strip_1d):
    r2 = {row["n"]: row["ratio_sq"] for row in strip_1d.rows if row["alpha"] == 0.5}
    growth = r2[32] / r2[8]
    verdict("AC5b", 1.5 <= growth <= 3.0 and strip_1d.checks["alpha=0.5:growth_matches_power"],
            f"alpha=0.5 ratio^2(32)/ratio^2(8) = {growth:.3f} (in [1.5, 3.0]; n^(1-alpha) gives 2)")


def test_ac5c_strip_threshold(verdict):
    rep = run("strip-kl", cases="1:2:0.5,1:1:0.5")
    found = {}
    for row in rep.rows:
        found[(row["k"], row["l"], row["alpha"])] = row["class"]
    ok = found[(1, 2, 0.5)] == "bounded" and found[(1, 1, 0.5)] == "growing" and rep.verdict
    verdict("AC5c", ok, f"(1,2,0.5) -> {found[(1, 2, 0.5)]}, (1,1,0.5) -> {found[(1, 1, 0.5)]}")


def test_ac6_stable_a2_constant(verdict):
    exps, parts, ok = ExponentPair(2.0, 2.0), [], True
    for a in (0.5, 1.0, 1.5):
        c = check_a2(Kernel(1, 2.0, KernelProfile.stable(a)), exps).constant
        err = abs(c - 1 / (2 ** (a / 2) - 1))
        ok &= err <= 1e-12
        parts.append(f"alpha={a}: |C2 - closed form| = {err:.1e}")
    c = check_a2(Kernel(1, 2.0, KernelProfile.stable(1.99)), exps).constant
    bound = 1 / (2 ** 0.995 - 1) + 1e-9
    ok &= c <= bound
    parts.append(f"alpha=1.99: C2 = {c:.6f} <= {bound:.6f}")
    rep = run("kernel-audit")
    verdict("AC6", ok and rep.verdict, "; ".join(parts))


def test_ac7_whitney_lemmas(verdict):
    rep = run("whitney-lemmas", depth_lo=6, depth_hi=8, s=0.5, tol=0.2)
    by = {(row["lemma"], row["depth"]): row for row in rep.rows}
    parts, ok = [], True
    for name in ("sum_all_over", "shadow_sum", "chain_sum"):
        lo, hi = by[(name, 6)]["constant"], by[(name, 8)]["constant"]
        change = abs(hi - lo) / lo
        ok &= change <= 0.2
        parts.append(f"{name}: {lo:.3f} -> {hi:.3f} ({change:.1%})")
    violations = sum(row["axiom_violations"] for row in rep.rows)
    ok &= violations == 0 and rep.verdict
    verdict("AC7", ok, "; ".join(parts) + f"; axiom violations {violations}; rho {rep.rows[0]['rho']:g}")


def test_ac8a_step3_log_sum_cauchy(verdict):
    s = step3_counterexample(2, 10_000)
    rep = weighted_sum(s, "log", [5 * 2 ** 100, 5 * 2 ** 10_000])
    verdict("AC8a", rep.increment < 1e-6 and rep.verdict == "cauchy",
            f"weight=log increment at L=10^4: {rep.increment:.2e} (< 1e-6)")


def test_ac8b_step3_log_squared_diverges(verdict):
    s = step3_counterexample(2, 10_000)
    rep = weighted_sum(s, "log_squared", [5 * 2 ** 100, 5 * 2 ** 10_000])
    diff = rep.sum_log2[1] - rep.sum_log2[0]
    need = 0.8 * math.log(100) * math.log(2) ** 2
    verdict("AC8b", diff >= need, f"S(10^4) - S(10^2) = {diff:.3f} (>= {need:.3f})")


def test_ac8c_cosine_integral_scaling(verdict):
    ms = (64, 256, 1024, 4096)
    vals = [cosine_log_integrals(m) for m in ms]
    i0 = [a / math.log(m) for (a, _), m in zip(vals, ms)]
    il = [b / math.log(m) ** 2 for (_, b), m in zip(vals, ms)]
    s0, sl = max(i0) / min(i0) - 1, max(il) / min(il) - 1
    verdict("AC8c", s0 <= 0.10 and sl <= 0.10,
            f"I0/ln m {[round(v, 3) for v in i0]} spread {s0:.1%}; "
            f"Ilog/ln^2 m {[round(v, 3) for v in il]} spread {sl:.1%} (each <= 10%)")


def test_ac9_region_monotonicity(verdict):
    # runs after the experiments above when the whole file is collected
    if not MONOTONICITY_LOG:
        run("hilbert-kernel-blowup")
        run("zero-order-log")
    checked = [(name, m) for name, m in MONOTONICITY_LOG if m is not None]
    ok = bool(checked) and all(m for _, m in checked)
    names = sorted({name for name, _ in checked})
    verdict("AC9", ok, f"{len(checked)} experiment runs with seminorms, all monotone={ok}: {', '.join(names)}")
