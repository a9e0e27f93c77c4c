"""Goodness-of-fit: Kolmogorov-Smirnov, chi-square and the obtuse z-score."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateBins, DegenerateP, EmptySample, SmallSample
from .montecarlo import EmpiricalDistribution
from .quadrature import adaptive_simpson

# asymptotic Kolmogorov critical values c(alpha)
KS_COEFFICIENTS = {0.05: 1.358, 0.01: 1.628, 0.001: 1.949}
MIN_EXPECTED = 5.0


def ks_statistic(samples: np.ndarray, cdf: Callable) -> float:
    """Two-sided KS distance between sorted ``samples`` and ``cdf``."""
    x = np.asarray(samples, dtype=float)
    n = len(x)
    if n == 0:
        raise EmptySample("KS statistic needs at least one sample")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_threshold(n: int, alpha: float = 0.001) -> float:
    if alpha not in KS_COEFFICIENTS:
        raise ValueError(f"alpha must be one of {sorted(KS_COEFFICIENTS)}")
    if n < 50:
        raise SmallSample(f"asymptotic KS threshold needs n >= 50, got {n}")
    return KS_COEFFICIENTS[alpha] / math.sqrt(n)


def bin_probabilities(
    edges: np.ndarray, pdf: Optional[Callable] = None, cdf: Optional[Callable] = None, breakpoints=()
) -> np.ndarray:
    """Model probability of each bin, by quadrature of ``pdf`` or from ``cdf``."""
    if pdf is not None:
        return np.array(
            [
                adaptive_simpson(lambda t: float(pdf(t)), lo, hi, tol=1e-12, breakpoints=breakpoints)
                for lo, hi in zip(edges[:-1], edges[1:])
            ]
        )
    if cdf is None:
        raise ValueError("need a pdf or a cdf")
    return np.diff(np.asarray(cdf(edges), dtype=float))


def chi_square(
    e: EmpiricalDistribution, pdf: Optional[Callable] = None, cdf: Optional[Callable] = None, breakpoints=()
) -> tuple[float, int]:
    """Pearson statistic and degrees of freedom.

    Adjacent bins are pooled left to right until each group expects at least
    five samples; a short remainder joins the last group.

    Raises:
        DegenerateBins: when fewer than two groups survive pooling.
    """
    expected = e.n * bin_probabilities(e.edges, pdf, cdf, breakpoints)
    observed = e.counts.astype(float)
    groups_exp, groups_obs = [], []
    acc_e = acc_o = 0.0
    for ex, ob in zip(expected, observed):
        acc_e += ex
        acc_o += ob
        if acc_e >= MIN_EXPECTED:
            groups_exp.append(acc_e)
            groups_obs.append(acc_o)
            acc_e = acc_o = 0.0
    if acc_e > 0.0 or acc_o > 0.0:
        if groups_exp:
            groups_exp[-1] += acc_e
            groups_obs[-1] += acc_o
        else:
            groups_exp.append(acc_e)
            groups_obs.append(acc_o)
    if len(groups_exp) < 2:
        raise DegenerateBins(f"only {len(groups_exp)} bin group(s) expect {MIN_EXPECTED} or more samples")
    ge, go = np.array(groups_exp), np.array(groups_obs)
    return float(np.sum((go - ge) ** 2 / ge)), len(ge) - 1


def obtuse_z(e: EmpiricalDistribution, p: float) -> float:
    if e.n < 1:
        raise EmptySample("no samples")
    if not 0.0 < p < 1.0:
        raise DegenerateP(f"z-score undefined for p={p}; compare counts exactly")
    return (e.obtuse_count / e.n - p) / math.sqrt(p * (1.0 - p) / e.n)


@dataclass(frozen=True)
class GofReport:
    ks_statistic: float
    ks_threshold: float
    chi2_statistic: float
    chi2_dof: int
    obtuse_empirical: Optional[float]
    obtuse_analytic: Optional[float]
    obtuse_z: Optional[float]
    pass_: bool

    def as_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("pass_")
        return d


def gof_report(
    e: EmpiricalDistribution,
    cdf: Callable,
    alpha: float = 0.001,
    pdf: Optional[Callable] = None,
    obtuse_p: Optional[float] = None,
    breakpoints=(),
) -> GofReport:
    """KS, chi-square and (optionally) the obtuse check for one run.

    For p in {0, 1} the obtuse check is exact: z is 0 when every sample
    agrees and infinite otherwise. The chi-square value is informational;
    the verdict is KS plus |z| < 3.
    """
    if e.samples is None:
        raise ValueError("goodness-of-fit needs retained samples")
    ks = ks_statistic(e.samples, cdf)
    thr = ks_threshold(e.n, alpha)
    chi2, dof = chi_square(e, pdf=pdf, cdf=None if pdf is not None else cdf, breakpoints=breakpoints)
    z = emp = None
    if obtuse_p is not None:
        emp = e.obtuse_fraction
        if 0.0 < obtuse_p < 1.0:
            z = obtuse_z(e, obtuse_p)
        else:
            z = 0.0 if e.obtuse_count == round(obtuse_p * e.n) else math.inf
    ok = ks < thr and (z is None or abs(z) < 3.0)
    return GofReport(ks, thr, chi2, dof, emp, obtuse_p, z, ok)
