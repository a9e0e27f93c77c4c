import math

import numpy as np
import pytest
from scipy import stats as sps

from linefield import analytic as an
from linefield.errors import DegenerateBins, DegenerateP, EmptySample, SmallSample
from linefield.montecarlo import EmpiricalDistribution, SimulationConfig, run
from linefield.sampling import CONSTANT_FULL, SINE_FULL, SINE_RESTRICTED, ThreeRandom, draw_triangles
from linefield.stats import chi_square, gof_report, ks_statistic, ks_threshold, obtuse_z

PI = math.pi


def cdf_a(x):
    return an.cdf_max_angle("A", x)


def test_ks_at_quantile_midpoints():
    n = 200
    u = (np.arange(1, n + 1) - 0.5) / n
    # case B cdf is 3t^2 - 2t^3 in t = (a - pi/2)/(pi/2); invert numerically
    from scipy.optimize import brentq

    x = np.array([brentq(lambda a: an.cdf_max_angle("B", a) - q, PI / 2, PI, xtol=1e-15) for q in u])
    assert ks_statistic(x, lambda a: an.cdf_max_angle("B", a)) == pytest.approx(1 / (2 * n), abs=1e-12)


def test_ks_single_median_sample():
    assert ks_statistic(np.array([0.0]), sps.norm.cdf) == pytest.approx(0.5)


def test_ks_matches_scipy():
    x = np.sort(draw_triangles(ThreeRandom(SINE_FULL), 4, 0, 5000).max_angles)
    f = lambda a: an.cdf_max_angle("C", a)  # noqa: E731
    assert ks_statistic(x, f) == pytest.approx(sps.kstest(x, f).statistic, abs=1e-14)


def test_ks_empty():
    with pytest.raises(EmptySample):
        ks_statistic(np.array([]), cdf_a)


def test_ks_case_a_fit():
    e = run(SimulationConfig(ThreeRandom(CONSTANT_FULL), 10**5, 7, retain_samples=True))
    assert ks_statistic(e.samples, cdf_a) < 1.95 / math.sqrt(10**5)


def test_ks_reparameterization_invariance(case_a_run):
    x = case_a_run.samples[:: 10]
    d1 = ks_statistic(x, cdf_a)
    d2 = ks_statistic(x**3, lambda y: cdf_a(np.cbrt(y)))
    assert abs(d1 - d2) < 1e-12


def test_ks_thresholds():
    assert ks_threshold(10**4, 0.01) == pytest.approx(0.01628)
    assert ks_threshold(10**6, 0.001) == pytest.approx(0.001949)
    assert ks_threshold(50, 0.05) == pytest.approx(1.358 / math.sqrt(50))
    with pytest.raises(SmallSample):
        ks_threshold(49, 0.05)
    with pytest.raises(ValueError):
        ks_threshold(100, 0.1)


def test_ks_calibration():
    n, seeds = 10**4, 200
    thr = ks_threshold(n, 0.05)
    s = ThreeRandom(CONSTANT_FULL)
    rejects = sum(ks_statistic(np.sort(draw_triangles(s, 1000 + k, 0, n).max_angles), cdf_a) >= thr for k in range(seeds))
    assert 2 <= rejects <= 25


def _exact_dist(case, n, bins=32):
    lo, hi = an.support(case)
    edges = np.linspace(lo, hi, bins + 1)
    probs = np.diff(an.cdf_max_angle(case, edges))
    counts = n * probs
    return EmpiricalDistribution(n, edges, counts), probs


def test_chi_square_zero_when_observed_equals_expected():
    e, _ = _exact_dist("A", 6400)
    stat, dof = chi_square(e, pdf=lambda a: an.pdf_max_angle("A", a), breakpoints=[PI / 2])
    assert stat == pytest.approx(0.0, abs=1e-12)
    assert dof > 1


def test_chi_square_positive_otherwise():
    e, _ = _exact_dist("A", 6400)
    counts = e.counts.copy()
    counts[3] += 5
    counts[10] -= 5
    e2 = EmpiricalDistribution(e.n, e.edges, counts)
    assert chi_square(e2, pdf=lambda a: an.pdf_max_angle("A", a), breakpoints=[PI / 2])[0] > 0


def test_chi_square_case_d_band():
    e = run(SimulationConfig(ThreeRandom(SINE_RESTRICTED), 10**6, 11))
    stat, dof = chi_square(e, pdf=lambda a: an.pdf_max_angle("D", a))
    assert dof - 4 * math.sqrt(2 * dof) <= stat <= dof + 4 * math.sqrt(2 * dof)


def test_chi_square_pools_sparse_bins():
    e = EmpiricalDistribution.from_samples(np.full(5, 2.0), np.linspace(PI / 3, PI, 65))
    with pytest.raises(DegenerateBins):
        chi_square(e, cdf=lambda a: (np.asarray(a) - PI / 3) / (2 * PI / 3))


def test_chi_square_pdf_and_cdf_routes_agree(case_a_run):
    a = chi_square(case_a_run, pdf=lambda x: an.pdf_max_angle("A", x), breakpoints=[PI / 2])
    b = chi_square(case_a_run, cdf=cdf_a)
    assert a[1] == b[1] and a[0] == pytest.approx(b[0], rel=1e-8)


def test_obtuse_z_zero_at_exact_p():
    e = EmpiricalDistribution.from_samples(np.array([1.2, 2.0, 2.5, 3.0]), np.linspace(PI / 3, PI, 5))
    assert obtuse_z(e, 0.75) == 0.0
    for p in (0.0, 1.0):
        with pytest.raises(DegenerateP):
            obtuse_z(e, p)


def test_obtuse_z_case_a(case_a_run):
    assert abs(obtuse_z(case_a_run, 0.75)) < 3


def test_obtuse_z_case_c():
    e = run(SimulationConfig(ThreeRandom(SINE_FULL), 10**6, 7))
    assert abs(obtuse_z(e, 2 - 3 * PI / 8)) < 3


def test_gof_report(case_a_run):
    r = gof_report(case_a_run, cdf_a, alpha=0.001, pdf=lambda x: an.pdf_max_angle("A", x), obtuse_p=0.75)
    assert r.pass_ == (r.ks_statistic < r.ks_threshold and abs(r.obtuse_z) < 3)
    assert r.pass_
    d = r.as_dict()
    assert set(d) == {
        "ks_statistic", "ks_threshold", "chi2_statistic", "chi2_dof",
        "obtuse_empirical", "obtuse_analytic", "obtuse_z", "pass",
    }


def test_gof_report_detects_wrong_model(case_a_run):
    r = gof_report(case_a_run, lambda x: an.cdf_max_angle("C", x), obtuse_p=an.obtuse_probability("C"))
    assert not r.pass_
