"""Line representations and triangle angles.

A line is stored either by its x-intercept and inclination ``(xi, omega)``
or in Hesse normal form ``(p, theta)`` with ``x cos(theta) + y sin(theta) = p``.
All angles live in the half-open interval ``[0, pi)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLine, DegenerateTriangle, ParallelLines

HALF_PI = 0.5 * math.pi
PARALLEL_TOL = 1e-12
COINCIDENT_TOL = 1e-12


def reduce_angle(angle: float) -> float:
    """Map an angle into [0, pi)."""
    r = math.fmod(angle, math.pi)
    if r < 0.0:
        r += math.pi
    # fmod can land exactly on pi after the shift for tiny negative inputs
    return 0.0 if r >= math.pi else r


@dataclass(frozen=True)
class InterceptForm:
    xi: float
    omega: float

    def __post_init__(self):
        object.__setattr__(self, "omega", reduce_angle(self.omega))

    def point(self, t: float) -> tuple[float, float]:
        """Point at signed arc length ``t`` from the x-axis crossing."""
        return self.xi + t * math.cos(self.omega), t * math.sin(self.omega)

    def residual(self, x: float, y: float) -> float:
        # sin(w) (x - xi) - cos(w) y vanishes on the line
        return math.sin(self.omega) * (x - self.xi) - math.cos(self.omega) * y


@dataclass(frozen=True)
class HesseForm:
    p: float
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", reduce_angle(self.theta))

    def residual(self, x: float, y: float) -> float:
        return x * math.cos(self.theta) + y * math.sin(self.theta) - self.p


@dataclass(frozen=True)
class TriangleAngles:
    angles: tuple[float, float, float]

    @property
    def max_angle(self) -> float:
        return max(self.angles)


def to_hesse(line: InterceptForm) -> HesseForm:
    """Intercept form to Hesse normal form.

    ``omega < pi/2`` maps to ``(-xi sin(omega), omega + pi/2)`` and
    ``omega >= pi/2`` to ``(xi sin(omega), omega - pi/2)``.
    """
    p, theta = to_hesse_arrays(line.xi, line.omega)
    return HesseForm(float(p), float(theta))


def to_hesse_arrays(xi, omega):
    xi = np.asarray(xi, dtype=float)
    omega = np.asarray(omega, dtype=float)
    s = np.sin(omega)
    low = omega < HALF_PI
    p = np.where(low, -xi * s, xi * s)
    theta = np.where(low, omega + HALF_PI, omega - HALF_PI)
    return p, theta


def from_hesse(line: HesseForm) -> InterceptForm:
    """Inverse of :func:`to_hesse`.

    Raises:
        DegenerateLine: for horizontal lines (theta = pi/2).
    """
    if abs(line.theta - HALF_PI) <= 1e-12:
        raise DegenerateLine(f"theta={line.theta!r} is horizontal; no x-intercept")
    xi, omega = from_hesse_arrays(line.p, line.theta)
    return InterceptForm(float(xi), float(omega))


def from_hesse_arrays(p, theta):
    p = np.asarray(p, dtype=float)
    theta = np.asarray(theta, dtype=float)
    # theta in [pi/2, pi) came from the omega < pi/2 branch
    upper = theta >= HALF_PI
    omega = np.where(upper, theta - HALF_PI, theta + HALF_PI)
    s = np.sin(omega)
    with np.errstate(divide="ignore", invalid="ignore"):
        xi = np.where(upper, -p / s, p / s)
    return xi, omega


def jacobian_magnitude(line: InterceptForm) -> float:
    """|det d(p, theta)/d(xi, omega)|, which is sin(omega)."""
    return math.sin(line.omega)


def numeric_jacobian(xi: float, omega: float, step: float = 1e-6) -> float:
    """Central-difference determinant of the (xi, omega) -> (p, theta) map.

    The angle difference is taken modulo pi so a step across a branch of
    ``theta`` does not produce a spurious jump.
    """

    def f(x, w):
        p, t = to_hesse_arrays(x, w)
        return float(p), float(t)

    def dtheta(a, b):
        d = a - b
        return d - math.pi * round(d / math.pi)

    p_xp, t_xp = f(xi + step, omega)
    p_xm, t_xm = f(xi - step, omega)
    p_wp, t_wp = f(xi, omega + step)
    p_wm, t_wm = f(xi, omega - step)
    dp_dxi = (p_xp - p_xm) / (2 * step)
    dt_dxi = dtheta(t_xp, t_xm) / (2 * step)
    dp_dw = (p_wp - p_wm) / (2 * step)
    dt_dw = dtheta(t_wp, t_wm) / (2 * step)
    return dp_dxi * dt_dw - dp_dw * dt_dxi


def intersect(a: InterceptForm, b: InterceptForm) -> tuple[float, float]:
    s = math.sin(a.omega - b.omega)
    if abs(s) <= PARALLEL_TOL:
        raise ParallelLines(f"inclinations {a.omega!r} and {b.omega!r} are parallel")
    # a.point(t) lies on b:  sin(wb)(xa + t cos wa - xb) - cos(wb) t sin wa = 0
    t = math.sin(b.omega) * (b.xi - a.xi) / (-s)
    return a.point(t)


def angles_from_inclinations(w1: float, w2: float, w3: float) -> TriangleAngles:
    """Interior angles of the triangle cut out by lines of these inclinations.

    With the inclinations sorted as a <= b <= c the angles are
    ``b - a``, ``c - b`` and ``pi - (c - a)``; intercepts do not matter.
    """
    a, b, c = sorted(reduce_angle(w) for w in (w1, w2, w3))
    if b - a <= COINCIDENT_TOL or c - b <= COINCIDENT_TOL or math.pi - (c - a) <= COINCIDENT_TOL:
        raise DegenerateTriangle(f"coincident inclinations {(w1, w2, w3)!r}")
    return TriangleAngles((b - a, c - b, math.pi - (c - a)))


def max_angle(t: TriangleAngles) -> float:
    return max(t.angles)


def max_angles_array(w: np.ndarray) -> np.ndarray:
    """Vectorized max angle for an (n, 3) array of inclinations in [0, pi)."""
    s = np.sort(w, axis=1)
    g1 = s[:, 1] - s[:, 0]
    g2 = s[:, 2] - s[:, 1]
    g3 = math.pi - (s[:, 2] - s[:, 0])
    return np.maximum(np.maximum(g1, g2), g3)


def degenerate_rows(w: np.ndarray) -> np.ndarray:
    """Rows of an (n, 3) inclination array with two coincident directions."""
    s = np.sort(w, axis=1)
    g1 = s[:, 1] - s[:, 0]
    g2 = s[:, 2] - s[:, 1]
    g3 = math.pi - (s[:, 2] - s[:, 0])
    return (g1 <= COINCIDENT_TOL) | (g2 <= COINCIDENT_TOL) | (g3 <= COINCIDENT_TOL)


def vertex_angles(lines: tuple[InterceptForm, InterceptForm, InterceptForm]) -> tuple[float, float, float]:
    """Triangle angles from actual vertices, via arccos of edge dot products.

    Independent of :func:`angles_from_inclinations`; used to cross-check it.
    """
    l1, l2, l3 = lines
    verts = [intersect(l2, l3), intersect(l1, l3), intersect(l1, l2)]
    out = []
    for i in range(3):
        px, py = verts[i]
        ax, ay = verts[(i + 1) % 3][0] - px, verts[(i + 1) % 3][1] - py
        bx, by = verts[(i + 2) % 3][0] - px, verts[(i + 2) % 3][1] - py
        # atan2 form is far better conditioned than arccos near 0 and pi
        out.append(math.atan2(abs(ax * by - ay * bx), ax * bx + ay * by))
    return out[0], out[1], out[2]
