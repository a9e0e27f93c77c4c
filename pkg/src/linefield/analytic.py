"""Closed-form maximum-angle laws, window densities and a quadrature oracle.

Six cases are covered. A-D are the three-random-line triangles under the
four inclination models; ``DiagConst`` and ``DiagSine`` fix one line on the
diagonal y = x and draw the other two from the restricted range.

Densities take arrays and return arrays (scalars for scalar input).
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import UnknownCase
from .quadrature import adaptive_simpson
from .sampling import (
    AngleModel,
    Circle,
    Interval,
    Rectangle,
    Square,
    Window,
    fixed_line_support,
    omega_cdf,
    omega_pdf,
)

PI = math.pi
HALF_PI = 0.5 * PI
THIRD_PI = PI / 3
CASES = ("A", "B", "C", "D", "DiagConst", "DiagSine")
DIAG_SINE_MODE = 2.0 * math.atan(0.5 * (-3.0 + math.sqrt(17.0) + math.sqrt(2.0 * (5.0 - math.sqrt(17.0)))))

_SUPPORT = {
    "A": (THIRD_PI, PI),
    "B": (HALF_PI, PI),
    "C": (THIRD_PI, PI),
    "D": (HALF_PI, PI),
    "DiagConst": (HALF_PI, PI),
    "DiagSine": (HALF_PI, PI),
}
# interior points where the pdf changes formula
_BREAKS = {"A": (HALF_PI,), "C": (HALF_PI,)}


def _check(case_id: str) -> None:
    if case_id not in _SUPPORT:
        raise UnknownCase(f"unknown case {case_id!r}; expected one of {CASES}")


def support(case_id: str) -> tuple[float, float]:
    _check(case_id)
    return _SUPPORT[case_id]


def _scalarize(x, out):
    return float(out) if np.ndim(x) == 0 else out


def _pdf_raw(case_id: str, x: np.ndarray) -> np.ndarray:
    c, s = np.cos(x), np.sin(x)
    if case_id == "A":
        return np.where(x < HALF_PI, 6.0 * (3.0 * x - PI), 6.0 * (PI - x)) / PI**2
    if case_id == "B":
        return 24.0 * (PI - x) * (2.0 * x - PI) / PI**3
    if case_id == "C":
        left = 0.75 * ((3.0 * x - PI) * c + 2.0 * s - 2.0 * np.sin(2 * x) + np.sin(3 * x))
        right = 0.25 * (3.0 * (PI - x) * c + 3.0 * s - 2.0 * np.sin(2 * x))
        return np.where(x < HALF_PI, left, right)
    if case_id == "D":
        return 0.5 * (c + s + np.cos(2 * x) - 2.0 * np.sin(2 * x))
    if case_id == "DiagConst":
        return 8.0 * (PI - x) / PI**2
    return 0.5 * (-c + s - np.cos(2 * x))


def pdf_max_angle(case_id: str, alpha):
    """Density of the maximum angle; zero off the support."""
    _check(case_id)
    lo, hi = _SUPPORT[case_id]
    x = np.asarray(alpha, dtype=float)
    out = np.where((x >= lo) & (x <= hi), _pdf_raw(case_id, x), 0.0)
    return _scalarize(alpha, out)


def pdf_derivative(case_id: str, alpha):
    """d pdf / d alpha inside the support (right derivative at breakpoints)."""
    _check(case_id)
    x = np.asarray(alpha, dtype=float)
    c, s = np.cos(x), np.sin(x)
    if case_id == "A":
        out = np.where(x < HALF_PI, 18.0, -6.0) / PI**2 + 0.0 * x
    elif case_id == "B":
        out = 24.0 * (3.0 * PI - 4.0 * x) / PI**3
    elif case_id == "C":
        left = 0.75 * (5.0 * c - (3.0 * x - PI) * s - 4.0 * np.cos(2 * x) + 3.0 * np.cos(3 * x))
        right = 0.25 * (-3.0 * (PI - x) * s - 4.0 * np.cos(2 * x))
        out = np.where(x < HALF_PI, left, right)
    elif case_id == "D":
        out = 0.5 * (-s + c - 2.0 * np.sin(2 * x) - 4.0 * np.cos(2 * x))
    elif case_id == "DiagConst":
        out = -8.0 / PI**2 + 0.0 * x
    else:
        out = 0.5 * (s + c + 2.0 * np.sin(2 * x))
    return _scalarize(alpha, out)


def _cdf_raw(case_id: str, x: np.ndarray) -> np.ndarray:
    c, s = np.cos(x), np.sin(x)
    if case_id == "A":
        return np.where(x < HALF_PI, (3.0 * x - PI) ** 2, PI**2 - 3.0 * (PI - x) ** 2) / PI**2
    if case_id == "B":
        t = (x - HALF_PI) / HALF_PI
        return t * t * (3.0 - 2.0 * t)
    if case_id == "C":
        left = 0.75 * ((3.0 * x - PI) * s + c + np.cos(2 * x) - np.cos(3 * x) / 3.0) - 0.25
        right = 0.25 * (3.0 * (PI - x) * s - 6.0 * c + np.cos(2 * x)) - 0.75
        return np.where(x < HALF_PI, left, right)
    if case_id == "D":
        return 0.5 * (s - c + 0.5 * np.sin(2 * x) + np.cos(2 * x))
    if case_id == "DiagConst":
        return (2.0 * x - PI) * (3.0 * PI - 2.0 * x) / PI**2
    return 0.25 * (2.0 - 2.0 * c - 2.0 * s - np.sin(2 * x))


def cdf_max_angle(case_id: str, a):
    """P(max angle < a), clamped to 0 below and 1 above the support.

    The diagonal cases use their published closed forms; A-D use
    antiderivatives of the piecewise densities.
    """
    _check(case_id)
    lo, hi = _SUPPORT[case_id]
    x = np.asarray(a, dtype=float)
    inner = np.clip(_cdf_raw(case_id, np.clip(x, lo, hi)), 0.0, 1.0)
    out = np.where(x <= lo, 0.0, np.where(x >= hi, 1.0, inner))
    return _scalarize(a, out)


def cdf_by_quadrature(case_id: str, a: float, tol: float = 1e-10) -> float:
    """P(max angle < a) by adaptive Simpson over the pdf."""
    _check(case_id)
    lo, hi = _SUPPORT[case_id]
    if a <= lo:
        return 0.0
    top = min(a, hi)
    return adaptive_simpson(
        lambda t: float(_pdf_raw(case_id, np.float64(t))), lo, top, tol=tol, breakpoints=_BREAKS.get(case_id, ())
    )


def total_mass(case_id: str, tol: float = 1e-10) -> float:
    return cdf_by_quadrature(case_id, _SUPPORT[case_id][1], tol)


def obtuse_probability(case_id: str) -> float:
    _check(case_id)
    return 1.0 - float(cdf_max_angle(case_id, HALF_PI))


def numeric_mode(case_id: str, grid: int = 4001) -> float:
    """Argmax of the pdf: grid scan, then bisection on the sign of pdf'.

    Sign bisection resolves smooth maxima to rounding level and also lands
    on kinks where the derivative jumps from positive to negative.
    """
    _check(case_id)
    lo, hi = _SUPPORT[case_id]
    xs = np.linspace(lo, hi, grid)
    k = int(np.argmax(pdf_max_angle(case_id, xs)))
    if k == 0 and pdf_derivative(case_id, lo) <= 0.0:
        return lo
    if k == grid - 1 and pdf_derivative(case_id, hi) >= 0.0:
        return hi
    left, right = xs[max(k - 1, 0)], xs[min(k + 1, grid - 1)]
    while True:
        mid = 0.5 * (left + right)
        if mid <= left or mid >= right:
            return mid
        if pdf_derivative(case_id, mid) > 0.0:
            left = mid
        else:
            right = mid


def mode(case_id: str) -> float:
    _check(case_id)
    if case_id == "DiagConst":
        return HALF_PI
    if case_id == "DiagSine":
        return DIAG_SINE_MODE
    return numeric_mode(case_id)


def moments(case_id: str, tol: float = 1e-11) -> tuple[float, float]:
    """Mean and variance of the maximum angle by quadrature."""
    lo, hi = support(case_id)
    brk = _BREAKS.get(case_id, ())

    def f(k):
        return adaptive_simpson(lambda t: t**k * float(_pdf_raw(case_id, np.float64(t))), lo, hi, tol, breakpoints=brk)

    mean = f(1)
    return mean, f(2) - mean * mean


@dataclass(frozen=True)
class ClosedFormDensity:
    case_id: str
    support: tuple[float, float]
    obtuse_prob: float
    mode: float

    def pdf(self, alpha):
        return pdf_max_angle(self.case_id, alpha)

    def cdf(self, a):
        return cdf_max_angle(self.case_id, a)


@lru_cache(maxsize=None)
def density(case_id: str) -> ClosedFormDensity:
    _check(case_id)
    return ClosedFormDensity(case_id, _SUPPORT[case_id], obtuse_probability(case_id), mode(case_id))


# -- window densities --------------------------------------------------------


def window_pdf(window: Window, omega):
    """Density of the inclination of a uniform line hitting ``window``.

    The hit measure at inclination omega is proportional to the window's
    width across that direction.
    """
    w = np.asarray(omega, dtype=float)
    inside = (w >= 0.0) & (w < PI)
    if isinstance(window, Circle):
        val = np.full_like(w, 1.0 / PI)
    elif isinstance(window, Interval):
        val = 0.5 * np.sin(w)
    elif isinstance(window, Square):
        s2 = np.sin(2.0 * w)
        val = 0.25 * np.maximum(np.sqrt(1.0 + s2), np.sqrt(np.maximum(1.0 - s2, 0.0)))
    elif isinstance(window, Rectangle):
        a, b = window.a, window.b
        val = (a * np.sin(w) + b * np.abs(np.cos(w))) / (2.0 * (a + b))
    else:
        raise TypeError(f"unsupported window {window!r}")
    return _scalarize(omega, np.where(inside, val, 0.0))


def window_cdf(window: Window, omega):
    w = np.clip(np.asarray(omega, dtype=float), 0.0, PI)
    if isinstance(window, Circle):
        out = w / PI
    else:
        if isinstance(window, Interval):
            a, b = 1.0, 0.0
        elif isinstance(window, Square):
            a, b = 1.0, 1.0
        elif isinstance(window, Rectangle):
            a, b = window.a, window.b
        else:
            raise TypeError(f"unsupported window {window!r}")
        # integral of |cos| from 0 to w
        abs_cos = np.where(w <= HALF_PI, np.sin(w), 2.0 - np.sin(w))
        out = (a * (1.0 - np.cos(w)) + b * abs_cos) / (2.0 * (a + b))
    return _scalarize(omega, out)


# -- fixed-line oracle ---------------------------------------------------------


def _arc_mass(start: float, s0: float, s1: float, lo: float, hi: float, G: Callable[[float], float]) -> float:
    """Model mass of directions start + s, s in (s0, s1), taken mod pi."""
    if s1 <= s0:
        return 0.0
    x0, x1 = start + s0, start + s1
    if x0 >= PI:
        x0, x1 = x0 - PI, x1 - PI
    pieces = [(x0, x1)] if x1 <= PI else [(x0, PI), (0.0, x1 - PI)]
    total = 0.0
    for p0, p1 in pieces:
        p0, p1 = max(p0, lo), min(p1, hi)
        if p1 > p0:
            total += G(p1) - G(p0)
    return total


def scenario_cdf_oracle(fixed_omega: float, model: AngleModel, a: float, tol: float = 1e-10) -> float:
    """P(max angle < a) for one fixed line and two lines drawn from ``model``.

    The three directions split the half-turn into three arcs, which are the
    triangle's angles. For each second direction x the set of admissible
    third directions is a union of arcs whose model mass follows from the
    CDF exactly; the outer integral over x is adaptive Simpson.
    """
    if a >= PI:
        return 1.0
    if a <= 0.0:
        return 0.0
    lo, hi = model.range.bounds
    f = fixed_omega % PI

    def G(t):
        return float(omega_cdf(model, t))

    def g(t):
        return float(omega_pdf(model, t))

    def integrand(x: float) -> float:
        d = (x - f) % PI
        m = 0.0
        # third line falls between f and x (arc of length d); the other arc stays whole
        if PI - d < a:
            m += _arc_mass(f, max(0.0, d - a), min(d, a), lo, hi, G)
        if d < a:
            m += _arc_mass(x, max(0.0, PI - d - a), min(PI - d, a), lo, hi, G)
        return g(x) * m

    kinks = []
    for base in (f, lo, hi):
        for off in (a, PI - a, -a, a - PI, 0.0):
            for v in (base + off, 0.5 * (base + f + off), 0.5 * (base + f + off + PI)):
                kinks.append(v % PI)
    return min(1.0, max(0.0, adaptive_simpson(integrand, lo, hi, tol=tol, breakpoints=kinks)))


def oracle_support(fixed_omega: float, model: AngleModel) -> tuple[float, float]:
    return fixed_line_support(fixed_omega, model)


def tabulated_oracle_cdf(fixed_omega: float, model: AngleModel, points: int = 257) -> Callable:
    """Monotone cubic interpolant of :func:`scenario_cdf_oracle` over its support.

    Evaluating the oracle costs one adaptive quadrature; goodness-of-fit
    needs the CDF at every sample, so it is tabulated once.
    """
    s_lo, s_hi = oracle_support(fixed_omega, model)
    xs = np.linspace(s_lo, s_hi, points)
    ys = np.array([scenario_cdf_oracle(fixed_omega, model, float(x)) for x in xs])
    ys = np.maximum.accumulate(np.clip(ys, 0.0, 1.0))
    interp = PchipInterpolator(xs, ys, extrapolate=False)

    def cdf(a):
        x = np.asarray(a, dtype=float)
        out = np.where(x <= s_lo, 0.0, np.where(x >= s_hi, 1.0, np.nan_to_num(interp(np.clip(x, s_lo, s_hi)))))
        return _scalarize(a, out)

    return cdf
