"""Adaptive Simpson quadrature with an evaluation budget."""

from __future__ import annotations

from collections.abc import Callable, Sequence

from .errors import QuadratureFailure

DEFAULT_TOL = 1e-10
DEFAULT_BUDGET = 1_000_000
MAX_DEPTH = 60


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_BUDGET,
    breakpoints: Sequence[float] = (),
) -> float:
    """Integrate ``f`` over [a, b].

    Panels are split at any ``breakpoints`` inside (a, b) first, then each is
    refined until ``|S2 - S1| <= 15 tol`` with the tolerance halved at each
    split. Accepted panels get the Richardson correction.

    Raises:
        QuadratureFailure: if more than ``budget`` evaluations are needed.
    """
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, tol, budget, breakpoints)
    cuts = [a] + sorted(x for x in set(breakpoints) if a < x < b) + [b]
    evals = 0
    total = 0.0
    panel_tol = tol / (len(cuts) - 1)
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        flo, fhi = f(lo), f(hi)
        m = 0.5 * (lo + hi)
        fm = f(m)
        evals += 3
        whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi)
        stack = [(lo, hi, flo, fm, fhi, whole, panel_tol, 0)]
        while stack:
            x0, x1, f0, fmid, f1, s, eps, depth = stack.pop()
            xm = 0.5 * (x0 + x1)
            lm = 0.5 * (x0 + xm)
            rm = 0.5 * (xm + x1)
            flm, frm = f(lm), f(rm)
            evals += 2
            if evals > budget:
                raise QuadratureFailure(f"evaluation budget {budget} exhausted on [{a}, {b}]")
            left = (xm - x0) / 6.0 * (f0 + 4.0 * flm + fmid)
            right = (x1 - xm) / 6.0 * (fmid + 4.0 * frm + f1)
            diff = left + right - s
            if abs(diff) <= 15.0 * eps or depth >= MAX_DEPTH:
                total += left + right + diff / 15.0
            else:
                stack.append((xm, x1, fmid, frm, f1, right, 0.5 * eps, depth + 1))
                stack.append((x0, xm, f0, flm, fmid, left, 0.5 * eps, depth + 1))
    return total
