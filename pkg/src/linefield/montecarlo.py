"""Monte Carlo engine for maximum-angle distributions.

Sample ``i`` of a run always reads Philox stream ``start + i``, so the
result depends on (seed, start, n, scenario) only. Chunks are processed by
a thread pool and their integer histograms are added, which makes the
output bit-identical for every worker count.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import Optional

import numpy as np

from .errors import BinMismatch, LinefieldError, SamplesNotRetained
from .sampling import Scenario, draw_triangles, scenario_support

HALF_PI = 0.5 * math.pi
CHUNK = 1 << 16


class ConfigError(LinefieldError):
    pass


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    n: int
    edges: np.ndarray
    counts: np.ndarray
    obtuse_count: int = 0
    degenerate_resamples: int = 0
    samples: Optional[np.ndarray] = None

    def __post_init__(self):
        if np.any(np.diff(self.edges) <= 0):
            raise ValueError("bin edges must be strictly increasing")
        if len(self.counts) != len(self.edges) - 1:
            raise ValueError("need one count per bin")
        if round(float(self.counts.sum())) != self.n:
            raise ValueError(f"histogram holds {int(self.counts.sum())} samples, expected {self.n}")
        if not 0 <= self.obtuse_count <= self.n:
            raise ValueError("obtuse_count out of range")

    @classmethod
    def empty(cls, edges: np.ndarray, retain: bool = True) -> "EmpiricalDistribution":
        edges = np.asarray(edges, dtype=float)
        return cls(0, edges, np.zeros(len(edges) - 1, dtype=np.int64), samples=np.empty(0) if retain else None)

    @classmethod
    def from_samples(
        cls, x: np.ndarray, edges: np.ndarray, retain: bool = False, resamples: int = 0
    ) -> "EmpiricalDistribution":
        edges = np.asarray(edges, dtype=float)
        counts, _ = np.histogram(x, bins=edges)
        if counts.sum() != len(x):
            lost = x[(x < edges[0]) | (x > edges[-1])]
            raise ValueError(f"{len(lost)} samples fall outside [{edges[0]}, {edges[-1]}], e.g. {lost[:3]}")
        return cls(
            n=len(x),
            edges=edges,
            counts=counts.astype(np.int64),
            obtuse_count=int(np.count_nonzero(x > HALF_PI)),
            degenerate_resamples=resamples,
            samples=np.sort(x) if retain else None,
        )

    @property
    def bin_widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def density(self) -> np.ndarray:
        return self.counts / (max(self.n, 1) * self.bin_widths)

    @property
    def obtuse_fraction(self) -> float:
        return self.obtuse_count / self.n

    def __eq__(self, other):
        if not isinstance(other, EmpiricalDistribution):
            return NotImplemented
        same_samples = (self.samples is None and other.samples is None) or (
            self.samples is not None and other.samples is not None and np.array_equal(self.samples, other.samples)
        )
        return (
            self.n == other.n
            and np.array_equal(self.edges, other.edges)
            and np.array_equal(self.counts, other.counts)
            and self.obtuse_count == other.obtuse_count
            and self.degenerate_resamples == other.degenerate_resamples
            and same_samples
        )

    __hash__ = None


def merge(a: EmpiricalDistribution, b: EmpiricalDistribution) -> EmpiricalDistribution:
    """Add two distributions over the same bins.

    Raw samples survive only when both sides kept them.
    """
    if not np.array_equal(a.edges, b.edges):
        raise BinMismatch("cannot merge histograms with different bin edges")
    if a.samples is not None and b.samples is not None:
        samples = np.sort(np.concatenate([a.samples, b.samples]))
    else:
        samples = None
    return EmpiricalDistribution(
        n=a.n + b.n,
        edges=a.edges,
        counts=a.counts + b.counts,
        obtuse_count=a.obtuse_count + b.obtuse_count,
        degenerate_resamples=a.degenerate_resamples + b.degenerate_resamples,
        samples=samples,
    )


def empirical_cdf(e: EmpiricalDistribution, a):
    """Fraction of samples <= a (right-continuous)."""
    if e.samples is None:
        raise SamplesNotRetained("run with retain_samples=True to evaluate the empirical CDF")
    out = np.searchsorted(e.samples, np.asarray(a, dtype=float), side="right") / e.n
    return float(out) if np.ndim(a) == 0 else out


@dataclass(frozen=True)
class SimulationConfig:
    scenario: Scenario
    n: int
    seed: int
    bins: int = 64
    retain_samples: bool = False
    workers: int = 1
    start: int = 0
    chunk_size: int = field(default=CHUNK)

    def validate(self) -> None:
        if self.n < 1:
            raise ConfigError(f"n must be at least 1, got {self.n}")
        if self.bins < 4:
            raise ConfigError(f"bins must be at least 4, got {self.bins}")
        if self.workers < 1 or self.chunk_size < 1:
            raise ConfigError("workers and chunk_size must be positive")
        if not 0 <= self.seed < 2**64 or self.start < 0:
            raise ConfigError("seed must be a 64-bit unsigned integer and start non-negative")

    @property
    def edges(self) -> np.ndarray:
        lo, hi = scenario_support(self.scenario)
        return np.linspace(lo, hi, self.bins + 1)


def default_workers() -> int:
    return os.cpu_count() or 1


def run(config: SimulationConfig) -> EmpiricalDistribution:
    """Draw ``config.n`` maximum angles and histogram them."""
    config.validate()
    edges = config.edges
    bounds = [
        (lo, min(lo + config.chunk_size, config.n)) for lo in range(0, config.n, config.chunk_size)
    ]

    def one(span):
        lo, hi = span
        batch = draw_triangles(config.scenario, config.seed, config.start + lo, hi - lo)
        return EmpiricalDistribution.from_samples(
            batch.max_angles, edges, retain=config.retain_samples, resamples=batch.resamples
        )

    if config.workers == 1 or len(bounds) == 1:
        parts = [one(s) for s in bounds]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            parts = list(pool.map(one, bounds))
    return reduce(merge, parts, EmpiricalDistribution.empty(edges, retain=config.retain_samples))
