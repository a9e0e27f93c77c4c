import math

import numpy as np
import pytest
from scipy.integrate import quad

from linefield import analytic as an
from linefield.errors import BadEccentricity, UnknownCase
from linefield.montecarlo import SimulationConfig, run
from linefield.sampling import (
    CONSTANT_RESTRICTED,
    SINE_RESTRICTED,
    Circle,
    FixedLine,
    Interval,
    Rectangle,
    Square,
    draw_triangles,
)

PI = math.pi
CASES = an.CASES


def scipy_mass(case, lo, hi):
    pts = [PI / 2] if lo < PI / 2 < hi else None
    return quad(lambda t: an.pdf_max_angle(case, t), lo, hi, epsabs=1e-13, epsrel=1e-13, points=pts, limit=200)[0]


def test_unknown_case():
    for f in (an.pdf_max_angle, an.cdf_max_angle):
        with pytest.raises(UnknownCase):
            f("E", 1.0)
    with pytest.raises(UnknownCase):
        an.obtuse_probability("diag")
    with pytest.raises(UnknownCase):
        an.mode("")


def test_support_endpoints_vanish():
    assert an.pdf_max_angle("A", PI / 3) == 0.0
    assert an.pdf_max_angle("A", PI) == 0.0
    assert an.pdf_max_angle("A", 0.5) == 0.0 and an.pdf_max_angle("D", 1.0) == 0.0


def test_pdf_branch_values_at_right_angle():
    left_a, right_a = 6 * (3 * PI / 2 - PI) / PI**2, 6 * (PI / 2) / PI**2
    assert left_a == pytest.approx(3 / PI, abs=1e-15) and right_a == pytest.approx(3 / PI, abs=1e-15)
    assert an.pdf_max_angle("A", PI / 2) == pytest.approx(3 / PI, abs=1e-15)
    assert an.pdf_max_angle("C", PI / 2) == pytest.approx(0.75, abs=1e-15)


@pytest.mark.parametrize("case", ["A", "C"])
def test_continuity_at_right_angle(case):
    left = an.pdf_max_angle(case, np.nextafter(PI / 2, 0))
    right = an.pdf_max_angle(case, PI / 2)
    assert abs(left - right) < 1e-12


def test_pdf_examples():
    assert an.pdf_max_angle("D", 3 * PI / 4) == pytest.approx(1.0, abs=1e-15)
    assert an.pdf_max_angle("B", 3 * PI / 4) == pytest.approx(3 / PI, abs=1e-15)


@pytest.mark.parametrize("case", CASES)
def test_normalization(case):
    assert abs(an.total_mass(case) - 1.0) < 1e-8
    assert abs(scipy_mass(case, *an.support(case)) - 1.0) < 1e-8


@pytest.mark.parametrize("case", CASES)
def test_pdf_nonnegative(case):
    lo, hi = an.support(case)
    assert np.all(an.pdf_max_angle(case, np.linspace(lo, hi, 5001)) >= -1e-15)


@pytest.mark.parametrize("case", CASES)
def test_closed_cdf_matches_quadrature(case):
    lo, hi = an.support(case)
    for a in np.linspace(lo, hi, 41):
        ref = scipy_mass(case, lo, a) if a > lo else 0.0
        assert an.cdf_max_angle(case, a) == pytest.approx(ref, abs=1e-10)
        assert an.cdf_by_quadrature(case, a) == pytest.approx(ref, abs=1e-8)


@pytest.mark.parametrize("case", CASES)
def test_cdf_clamps_and_is_monotone(case):
    lo, hi = an.support(case)
    assert an.cdf_max_angle(case, lo - 1) == 0.0 and an.cdf_max_angle(case, lo) == 0.0
    assert an.cdf_max_angle(case, hi) == 1.0 and an.cdf_max_angle(case, 4.0) == 1.0
    assert np.all(np.diff(an.cdf_max_angle(case, np.linspace(lo, hi, 2001))) >= 0)


@pytest.mark.parametrize("case", CASES)
def test_cdf_derivative_is_pdf(case):
    lo, hi = an.support(case)
    a = np.linspace(lo, hi, 102)[1:-1]
    h = 1e-5
    fd = (an.cdf_max_angle(case, a + h) - an.cdf_max_angle(case, a - h)) / (2 * h)
    assert np.max(np.abs(fd - an.pdf_max_angle(case, a))) < 1e-6


@pytest.mark.parametrize("case", CASES)
def test_pdf_derivative(case):
    lo, hi = an.support(case)
    a = np.linspace(lo, hi, 103)[1:-1]
    a = a[np.abs(a - PI / 2) > 1e-3]
    h = 1e-6
    fd = (an.pdf_max_angle(case, a + h) - an.pdf_max_angle(case, a - h)) / (2 * h)
    assert np.max(np.abs(fd - an.pdf_derivative(case, a))) < 1e-6


def test_diagonal_cdf_examples():
    assert an.cdf_max_angle("DiagConst", PI / 2) == 0.0
    assert an.cdf_max_angle("DiagConst", PI) == 1.0
    assert an.cdf_max_angle("DiagConst", 3 * PI / 4) == pytest.approx(0.75, abs=1e-15)
    assert an.cdf_max_angle("DiagSine", 3 * PI / 4) == pytest.approx(0.75, abs=1e-15)


def test_diagonal_cdfs_from_order_statistics():
    # max angle = 5pi/4 - max(w2, w3), so P(alpha < a) = 1 - G(5pi/4 - a)^2
    from linefield.sampling import omega_cdf

    for case, model in (("DiagConst", CONSTANT_RESTRICTED), ("DiagSine", SINE_RESTRICTED)):
        a = np.linspace(PI / 2, PI, 77)
        assert np.max(np.abs(an.cdf_max_angle(case, a) - (1 - omega_cdf(model, 5 * PI / 4 - a) ** 2))) < 1e-14


def test_obtuse_probabilities():
    assert an.obtuse_probability("A") == pytest.approx(0.75, abs=1e-15)
    assert an.obtuse_probability("C") == pytest.approx(2 - 3 * PI / 8, abs=1e-14)
    assert an.obtuse_probability("C") == pytest.approx(0.8219, abs=5e-5)
    for case in ("B", "D", "DiagConst", "DiagSine"):
        assert an.obtuse_probability(case) == 1.0


@pytest.mark.parametrize("case", CASES)
def test_obtuse_is_cdf_complement(case):
    assert abs(an.obtuse_probability(case) - (1 - an.cdf_max_angle(case, PI / 2))) < 1e-10
    assert abs(an.obtuse_probability(case) - (1 - an.cdf_by_quadrature(case, PI / 2))) < 1e-9


def test_mode_values():
    assert an.mode("DiagConst") == PI / 2
    assert an.mode("DiagSine") == pytest.approx(1.7713, abs=5e-5)
    assert an.mode("A") == pytest.approx(PI / 2, abs=1e-10)
    assert an.mode("B") == pytest.approx(3 * PI / 4, abs=1e-12)


def test_diag_sine_mode_is_derivative_root():
    # pdf' = (sin a + cos a + 2 sin 2a)/2
    m = an.DIAG_SINE_MODE
    assert abs(math.sin(m) + math.cos(m) + 2 * math.sin(2 * m)) < 1e-14
    assert abs(an.numeric_mode("DiagSine") - m) < 1e-9


@pytest.mark.parametrize("case", CASES)
def test_mode_optimality(case):
    m = an.mode(case)
    lo, hi = an.support(case)
    for d in (1e-5, 1e-3):
        for x in (m - d, m + d):
            if lo <= x <= hi:
                assert an.pdf_max_angle(case, m) >= an.pdf_max_angle(case, x)
    grid = np.linspace(lo, hi, 100_001)
    assert an.pdf_max_angle(case, m) >= an.pdf_max_angle(case, grid).max() - 1e-12


def test_moments_of_diagonal_constant():
    # mean of 8(pi - a)/pi^2 on [pi/2, pi] is 2pi/3; second moment 11pi^2/24
    mean, var = an.moments("DiagConst")
    assert mean == pytest.approx(2 * PI / 3, abs=1e-10)
    assert var == pytest.approx(PI**2 / 72, abs=1e-10)


def test_density_bundle():
    d = an.density("C")
    assert d.support == (PI / 3, PI)
    assert d.obtuse_prob == pytest.approx(2 - 3 * PI / 8)
    assert d.pdf(PI / 2) == pytest.approx(0.75)


# -- windows ---------------------------------------------------------------------


def test_square_window_examples():
    assert an.window_pdf(Square(), PI / 4) == pytest.approx(math.sqrt(2) / 4, abs=1e-15)
    assert an.window_pdf(Square(), 0.0) == pytest.approx(0.25, abs=1e-15)


def test_eccentricity_rectangles():
    w = np.linspace(0, PI, 1001, endpoint=False)
    assert np.max(np.abs(an.window_pdf(Rectangle.from_eccentricity(0.0), w) - an.window_pdf(Square(), w))) < 1e-12
    thin = Rectangle.from_eccentricity(1 - 1e-8)
    assert np.max(np.abs(an.window_pdf(thin, w) - 0.5 * np.sin(w))) < 1e-4
    for eps in (1.0, -0.1, 2.0):
        with pytest.raises(BadEccentricity):
            Rectangle.from_eccentricity(eps)


@pytest.mark.parametrize(
    "window", [Circle(), Interval(), Square(), Rectangle.from_eccentricity(0.6), Rectangle.from_eccentricity(0.99)], ids=repr
)
def test_window_normalization_and_cdf(window):
    mass = quad(lambda t: an.window_pdf(window, t), 0, PI, points=[PI / 2], epsabs=1e-13)[0]
    assert abs(mass - 1.0) < 1e-8
    from linefield.quadrature import adaptive_simpson

    assert abs(adaptive_simpson(lambda t: an.window_pdf(window, t), 0, PI, breakpoints=[PI / 2]) - 1) < 1e-8
    for x in np.linspace(0, PI, 23):
        ref = quad(lambda t: an.window_pdf(window, t), 0, x, points=[PI / 2] if x > PI / 2 else None)[0]
        assert an.window_cdf(window, x) == pytest.approx(ref, abs=1e-10)


def test_square_modes():
    a, b = an.window_pdf(Square(), PI / 4), an.window_pdf(Square(), 3 * PI / 4)
    assert abs(a - b) < 1e-12
    grid = np.linspace(0, PI, 100_001, endpoint=False)
    vals = an.window_pdf(Square(), grid)
    assert vals.max() <= a + 1e-15
    peaks = grid[vals > a - 1e-9]
    assert np.all((np.abs(peaks - PI / 4) < 1e-3) | (np.abs(peaks - 3 * PI / 4) < 1e-3))


# -- fixed-line oracle ------------------------------------------------------------


def test_oracle_reproduces_diagonal_closed_forms():
    a = np.linspace(PI / 2, PI, 50)
    for case, model in (("DiagConst", CONSTANT_RESTRICTED), ("DiagSine", SINE_RESTRICTED)):
        got = np.array([an.scenario_cdf_oracle(PI / 4, model, x) for x in a])
        assert np.max(np.abs(got - an.cdf_max_angle(case, a))) < 1e-7


def test_oracle_examples():
    assert an.scenario_cdf_oracle(PI / 4, CONSTANT_RESTRICTED, 3 * PI / 4) == pytest.approx(0.75, abs=1e-8)
    assert an.scenario_cdf_oracle(PI / 4, SINE_RESTRICTED, PI) == 1.0
    # a vertical fixed line sits inside the restricted range, so the triangle is always obtuse
    assert an.scenario_cdf_oracle(PI / 2, CONSTANT_RESTRICTED, PI / 2) == pytest.approx(0.0, abs=1e-8)


def test_antidiagonal_oracle_equals_diagonal():
    for a in np.linspace(PI / 2, PI, 9):
        for model in (CONSTANT_RESTRICTED, SINE_RESTRICTED):
            assert an.scenario_cdf_oracle(3 * PI / 4, model, a) == pytest.approx(
                an.scenario_cdf_oracle(PI / 4, model, a), abs=1e-8
            )


def _mc_fraction_below(scenario, a_values, n, seed):
    below = np.zeros(len(a_values))
    step = 1_000_000
    for lo in range(0, n, step):
        m = draw_triangles(scenario, seed, lo, min(step, n - lo)).max_angles
        below += [np.count_nonzero(m < a) for a in a_values]
    return below / n


@pytest.mark.parametrize(
    "name,model,a_values",
    [
        ("vertical", CONSTANT_RESTRICTED, [PI / 2, 1.9, 2 * PI / 3, 2.6]),
        ("horizontal", SINE_RESTRICTED, [1.2, PI / 2, 1.9, 2.2]),
    ],
)
def test_oracle_against_ten_million_samples(name, model, a_values):
    n = 10**7
    fixed = FixedLine(name, model)
    emp = _mc_fraction_below(fixed, a_values, n, seed=5)
    for a, f in zip(a_values, emp):
        p = an.scenario_cdf_oracle(fixed.fixed.omega, model, a)
        sigma = math.sqrt(max(p * (1 - p), 1 / n) / n)
        assert abs(f - p) <= 3 * sigma, (a, f, p)


def test_tabulated_oracle_close_to_direct():
    cdf = an.tabulated_oracle_cdf(0.0, SINE_RESTRICTED)
    for a in np.linspace(1.06, 2.34, 13):
        assert abs(cdf(a) - an.scenario_cdf_oracle(0.0, SINE_RESTRICTED, a)) < 1e-5
    assert cdf(0.5) == 0.0 and cdf(3.0) == 1.0


def test_simulated_run_uses_support_bins():
    e = run(SimulationConfig(FixedLine("horizontal", CONSTANT_RESTRICTED), 1000, 1))
    assert e.edges[0] == pytest.approx(PI / 3) and e.edges[-1] == pytest.approx(3 * PI / 4)
