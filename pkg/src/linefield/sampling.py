"""Random inclinations, lines, triangles and window-hitting lines.

Two inclination models compete. Constant weighting draws omega uniformly;
sine weighting uses a density proportional to sin(omega), which is what the
motion-invariant line measure induces on lines crossing a fixed segment.
Either may be restricted to [pi/4, 3pi/4] (every |slope| > 1).

Draw layout per sample index ``i`` (the Philox stream index):
line ``k`` of resample attempt ``r`` reads block ``3r + k`` as
``(u_xi, u_omega)``. Window lines read blocks ``2r`` and ``2r + 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from . import geometry
from .errors import BadEccentricity, UnknownCase
from .geometry import HALF_PI, HesseForm, InterceptForm, TriangleAngles
from .rng import RngStream, stream_range, uniform_pair

SQRT2 = math.sqrt(2.0)
QUARTER_PI = 0.25 * math.pi
MAX_ATTEMPTS = 64


class Weighting(enum.Enum):
    CONSTANT = "constant"
    SINE = "sine"


class AngleRange(enum.Enum):
    FULL = "full"
    RESTRICTED = "restricted"

    @property
    def bounds(self) -> tuple[float, float]:
        if self is AngleRange.FULL:
            return 0.0, math.pi
        return QUARTER_PI, 3 * QUARTER_PI


@dataclass(frozen=True)
class AngleModel:
    weighting: Weighting
    range: AngleRange

    @property
    def case_id(self) -> str:
        return {
            (Weighting.CONSTANT, AngleRange.FULL): "A",
            (Weighting.CONSTANT, AngleRange.RESTRICTED): "B",
            (Weighting.SINE, AngleRange.FULL): "C",
            (Weighting.SINE, AngleRange.RESTRICTED): "D",
        }[(self.weighting, self.range)]

    @classmethod
    def for_case(cls, case_id: str) -> "AngleModel":
        table = {
            "A": (Weighting.CONSTANT, AngleRange.FULL),
            "B": (Weighting.CONSTANT, AngleRange.RESTRICTED),
            "C": (Weighting.SINE, AngleRange.FULL),
            "D": (Weighting.SINE, AngleRange.RESTRICTED),
        }
        if case_id not in table:
            raise UnknownCase(case_id)
        return cls(*table[case_id])


CONSTANT_FULL = AngleModel(Weighting.CONSTANT, AngleRange.FULL)
CONSTANT_RESTRICTED = AngleModel(Weighting.CONSTANT, AngleRange.RESTRICTED)
SINE_FULL = AngleModel(Weighting.SINE, AngleRange.FULL)
SINE_RESTRICTED = AngleModel(Weighting.SINE, AngleRange.RESTRICTED)


def omega_pdf(model: AngleModel, omega):
    lo, hi = model.range.bounds
    omega = np.asarray(omega, dtype=float)
    inside = (omega >= lo) & (omega <= hi)
    if model.weighting is Weighting.CONSTANT:
        val = np.full_like(omega, 1.0 / (hi - lo))
    elif model.range is AngleRange.FULL:
        val = 0.5 * np.sin(omega)
    else:
        val = np.sin(omega) / SQRT2
    return np.where(inside, val, 0.0)


def omega_cdf(model: AngleModel, omega):
    lo, hi = model.range.bounds
    omega = np.clip(np.asarray(omega, dtype=float), lo, hi)
    if model.weighting is Weighting.CONSTANT:
        return (omega - lo) / (hi - lo)
    if model.range is AngleRange.FULL:
        return 0.5 * (1.0 - np.cos(omega))
    return 0.5 - np.cos(omega) / SQRT2


def inv_cdf_omega(model: AngleModel, u):
    """Inclination with CDF value ``u``; nondecreasing in ``u`` for every model.

    Sine weighting inverts the CDF with arccos(1 - 2u) on the full range and
    arccos((1 - 2u)/sqrt(2)) on the restricted range.
    """
    u = np.asarray(u, dtype=float)
    if model.weighting is Weighting.CONSTANT:
        lo, hi = model.range.bounds
        out = lo + u * (hi - lo)
    elif model.range is AngleRange.FULL:
        out = np.arccos(1.0 - 2.0 * u)
    else:
        out = np.arccos((1.0 - 2.0 * u) / SQRT2)
    return out if out.ndim else float(out)


def line_from_uniforms(model: AngleModel, u_xi: float, u_omega: float) -> InterceptForm:
    return InterceptForm(2.0 * u_xi - 1.0, inv_cdf_omega(model, u_omega))


def sample_line(model: AngleModel, rng: RngStream) -> InterceptForm:
    """Random line with xi ~ U[-1, 1] and omega drawn from ``model``."""
    u1, u2 = rng.block(0)
    return line_from_uniforms(model, u1, u2)


# -- scenarios ---------------------------------------------------------------

FIXED_LINES = {
    "diagonal": InterceptForm(0.0, QUARTER_PI),
    "antidiagonal": InterceptForm(0.0, 3 * QUARTER_PI),
    "vertical": InterceptForm(0.0, HALF_PI),
    # omega = 0 sentinel; xi is never used on the angle path
    "horizontal": InterceptForm(0.0, 0.0),
}


@dataclass(frozen=True)
class ThreeRandom:
    model: AngleModel

    @property
    def label(self) -> str:
        return self.model.case_id


@dataclass(frozen=True)
class FixedLine:
    name: str
    model: AngleModel

    def __post_init__(self):
        if self.name not in FIXED_LINES:
            raise ValueError(f"unknown fixed line {self.name!r}; expected one of {sorted(FIXED_LINES)}")
        if self.model.range is not AngleRange.RESTRICTED:
            raise ValueError("fixed-line scenarios draw the random lines from the restricted range")

    @property
    def fixed(self) -> InterceptForm:
        return FIXED_LINES[self.name]

    @property
    def label(self) -> str:
        return f"{self.name}-{self.model.weighting.value}"


Scenario = Union[ThreeRandom, FixedLine]


def scenario_support(s: Scenario) -> tuple[float, float]:
    """Interval that contains every maximum angle the scenario can produce."""
    if isinstance(s, ThreeRandom):
        if s.model.range is AngleRange.FULL:
            return math.pi / 3, math.pi
        return HALF_PI, math.pi
    return fixed_line_support(s.fixed.omega, s.model)


def fixed_line_support(fixed_omega: float, model: AngleModel) -> tuple[float, float]:
    lo, hi = model.range.bounds
    w = fixed_omega % math.pi
    if lo <= w <= hi:
        # three directions inside a quarter-turn window: always obtuse
        return HALF_PI, math.pi
    # the largest arc cannot exceed pi minus the gap between the fixed line and the range
    gap = min((lo - w) % math.pi, (w - hi) % math.pi)
    return math.pi / 3, math.pi - gap


class TriangleBatch(NamedTuple):
    inclinations: np.ndarray  # (n, 3)
    max_angles: np.ndarray  # (n,)
    resamples: int


def _inclination_draws(s: Scenario, seed: int, streams: np.ndarray, attempt: int) -> np.ndarray:
    n = len(streams)
    w = np.empty((n, 3))
    if isinstance(s, ThreeRandom):
        for k in range(3):
            _, u = uniform_pair(seed, streams, 3 * attempt + k)
            w[:, k] = inv_cdf_omega(s.model, u)
    else:
        w[:, 0] = s.fixed.omega
        for k in (1, 2):
            _, u = uniform_pair(seed, streams, 3 * attempt + k - 1)
            w[:, k] = inv_cdf_omega(s.model, u)
    return w


def _bad_rows(s: Scenario, w: np.ndarray) -> np.ndarray:
    bad = geometry.degenerate_rows(w)
    # sampled directions at 0 or pi have no intercept chart
    rnd = w if isinstance(s, ThreeRandom) else w[:, 1:]
    bad |= np.any((rnd <= 1e-12) | (rnd >= math.pi - 1e-12), axis=1)
    return bad


def draw_triangles(s: Scenario, seed: int, start: int, count: int) -> TriangleBatch:
    """Triangles for sample indices ``start .. start + count - 1``.

    Degenerate draws are redrawn from the next attempt's blocks of the same
    stream; the number of redraws is reported.
    """
    streams = stream_range(start, count)
    w = _inclination_draws(s, seed, streams, 0)
    bad = np.flatnonzero(_bad_rows(s, w))
    resamples = 0
    attempt = 1
    while bad.size:
        if attempt >= MAX_ATTEMPTS:
            raise RuntimeError("could not draw a non-degenerate triangle")
        resamples += bad.size
        w[bad] = _inclination_draws(s, seed, streams[bad], attempt)
        bad = bad[_bad_rows(s, w[bad])]
        attempt += 1
    return TriangleBatch(w, geometry.max_angles_array(w), resamples)


def sample_triangle(s: Scenario, rng: RngStream) -> TriangleAngles:
    batch = draw_triangles(s, rng.seed, rng.stream_index, 1)
    return geometry.angles_from_inclinations(*batch.inclinations[0])


# -- windows -----------------------------------------------------------------


@dataclass(frozen=True)
class Circle:
    r: float = 1.0


@dataclass(frozen=True)
class Square:
    """Axis-aligned square [-s, s]^2."""

    s: float = 1.0


@dataclass(frozen=True)
class Rectangle:
    """Axis-aligned rectangle [-a, a] x [-b, b]."""

    a: float = 1.0
    b: float = 1.0

    @classmethod
    def from_eccentricity(cls, eps: float) -> "Rectangle":
        """The 2 x 2 sqrt(1 - eps^2) rectangle."""
        if not 0.0 <= eps < 1.0:
            raise BadEccentricity(f"eccentricity must lie in [0, 1), got {eps!r}")
        return cls(1.0, math.sqrt(1.0 - eps * eps))


@dataclass(frozen=True)
class Interval:
    """The segment [-h, h] on the x-axis."""

    h: float = 1.0


Window = Union[Circle, Square, Rectangle, Interval]


def _half_extents(window: Window) -> tuple[float, float]:
    if isinstance(window, Square):
        return window.s, window.s
    if isinstance(window, Rectangle):
        return window.a, window.b
    if isinstance(window, Interval):
        return window.h, 0.0
    raise TypeError(window)


def _check_window(window: Window) -> None:
    dims = [window.r] if isinstance(window, Circle) else list(_half_extents(window))
    if isinstance(window, Interval):
        dims = dims[:1]
    if any(not d > 0 for d in dims):
        raise ValueError(f"window dimensions must be positive: {window!r}")


def support_halfwidth(window: Window, theta):
    """Half the range of ``x cos(theta) + y sin(theta)`` over the window.

    All supported windows are centred at the origin, so lines with normal
    direction theta hit the window exactly when |p| <= this value.
    """
    theta = np.asarray(theta, dtype=float)
    if isinstance(window, Circle):
        return np.full_like(theta, window.r)
    a, b = _half_extents(window)
    return a * np.abs(np.cos(theta)) + b * np.abs(np.sin(theta))


def max_halfwidth(window: Window) -> float:
    if isinstance(window, Circle):
        return window.r
    a, b = _half_extents(window)
    return math.hypot(a, b)


def draw_window_lines(window: Window, seed: int, start: int, count: int) -> tuple[np.ndarray, np.ndarray]:
    """Lines hitting ``window`` under the measure dp dtheta, as (p, theta) arrays.

    theta is drawn by rejection against the width function with the maximum
    width as envelope, then p uniformly over the hit interval.
    """
    _check_window(window)
    streams = stream_range(start, count)
    env = max_halfwidth(window)
    theta = np.empty(count)
    p = np.empty(count)
    pending = np.arange(count)
    attempt = 0
    while pending.size:
        if attempt >= 4 * MAX_ATTEMPTS:
            raise RuntimeError("window rejection sampler did not terminate")
        ut, ua = uniform_pair(seed, streams[pending], 2 * attempt)
        up, _ = uniform_pair(seed, streams[pending], 2 * attempt + 1)
        t = math.pi * ut
        h = support_halfwidth(window, t)
        ok = ua * env < h
        idx = pending[ok]
        theta[idx] = t[ok]
        p[idx] = (2.0 * up[ok] - 1.0) * h[ok]
        pending = pending[~ok]
        attempt += 1
    return p, theta


def sample_window_line(window: Window, rng: RngStream) -> HesseForm:
    p, theta = draw_window_lines(window, rng.seed, rng.stream_index, 1)
    return HesseForm(float(p[0]), float(theta[0]))


def draw_invariant_lines_hitting(window: Window, seed: int, start: int, count: int, radius: float | None = None):
    """Motion-invariant lines meeting the disc of ``radius``, kept if they hit ``window``.

    theta ~ U[0, pi) and p ~ U[-radius, radius] jointly; the window filter is
    the only source of directional bias. Returns (p, theta) arrays.
    """
    _check_window(window)
    radius = max_halfwidth(window) if radius is None else radius
    streams = stream_range(start, count)
    theta = np.empty(count)
    p = np.empty(count)
    pending = np.arange(count)
    attempt = 0
    while pending.size:
        if attempt >= 4 * MAX_ATTEMPTS:
            raise RuntimeError("line filter did not terminate")
        ut, up = uniform_pair(seed, streams[pending], attempt)
        t = math.pi * ut
        q = (2.0 * up - 1.0) * radius
        ok = np.abs(q) <= support_halfwidth(window, t)
        idx = pending[ok]
        theta[idx] = t[ok]
        p[idx] = q[ok]
        pending = pending[~ok]
        attempt += 1
    return p, theta


def inclination_of_normal(theta):
    """Line inclination for a Hesse normal direction, in [0, pi)."""
    return np.mod(np.asarray(theta, dtype=float) + HALF_PI, math.pi)
