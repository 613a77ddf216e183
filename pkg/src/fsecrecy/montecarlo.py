"""Seeded Monte Carlo estimators of the secrecy metrics.

Samples are drawn in fixed-size batches. Batch ``i`` of the main channel uses
a Philox stream keyed by ``(seed, i, 0)`` and the eavesdropper ``(seed, i, 1)``,
so any batch can be regenerated on its own and the running moments are merged
in batch order: results do not depend on the number of workers.

All metrics of one call are computed from the same draws, which makes
pathwise relations (e.g. the lower-bound event implies the outage event)
hold exactly in the estimates.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import fading
from .secrecy import METRICS, Method, MetricResult, WiretapScenario

MIN_SAMPLES = 1_000


@dataclass(frozen=True)
class SimConfig:
    n_samples: int = 1_000_000
    seed: int = 0
    batch: int = 1 << 18
    workers: int = 1
    # diagnostic: the eavesdropper reuses the main channel's stream
    coupled: bool = False

    def __post_init__(self):
        if self.n_samples < MIN_SAMPLES:
            raise ValueError(f"n_samples must be at least {MIN_SAMPLES}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.batch < 1 or self.workers < 1:
            raise ValueError("batch and workers must be positive")

    @property
    def n_batches(self) -> int:
        return -(-self.n_samples // self.batch)

    def batch_size(self, index: int) -> int:
        return min(self.batch, self.n_samples - index * self.batch)


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n: int

    def to_result(self) -> MetricResult:
        return MetricResult(self.mean, Method.MONTE_CARLO, self.std_error)


def _stream(seed: int, batch: int, channel: int) -> np.random.Generator:
    seq = np.random.SeedSequence(seed, spawn_key=(batch, channel))
    return np.random.Generator(np.random.Philox(seq))


def draw_batch(s: WiretapScenario, c: SimConfig, index: int) -> tuple[np.ndarray, np.ndarray]:
    """SNR pairs (g_D, g_E) of batch ``index``; identical on every call."""
    n = c.batch_size(index)
    g_d = fading.sample(s.main, _stream(c.seed, index, 0), n)
    g_e = fading.sample(s.eve, _stream(c.seed, index, 0 if c.coupled else 1), n)
    return g_d, g_e


def _samples(metric: str, s: WiretapScenario, g_d: np.ndarray, g_e: np.ndarray) -> np.ndarray:
    theta = s.theta
    if metric == "asc":
        return np.maximum(np.log1p(g_d) - np.log1p(g_e), 0.0)
    if metric == "sop":
        return (g_d < theta * g_e + theta - 1.0).astype(float)
    if metric == "sop_lower":
        return (g_d < theta * g_e).astype(float)
    if metric == "spsc":
        # complement of the theta = 1 lower-bound event on the same draws
        return 1.0 - (g_d < g_e)
    raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


def _batch_moments(args) -> dict[str, tuple[int, float, float]]:
    s, c, index, metrics = args
    g_d, g_e = draw_batch(s, c, index)
    out = {}
    for metric in metrics:
        x = _samples(metric, s, g_d, g_e)
        mean = float(np.mean(x))
        out[metric] = (x.size, mean, float(np.sum((x - mean) ** 2)))
    return out


def _merge(a: tuple[int, float, float], b: tuple[int, float, float]) -> tuple[int, float, float]:
    """Combine (count, mean, sum of squared deviations) of two disjoint samples."""
    na, ma, qa = a
    nb, mb, qb = b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * nb / n, qa + qb + delta * delta * na * nb / n


def simulate(s: WiretapScenario, c: SimConfig,
             metrics: tuple[str, ...] = METRICS) -> dict[str, McEstimate]:
    """Estimates of several metrics from one shared set of draws."""
    for metric in metrics:
        if metric not in METRICS:
            raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    tasks = [(s, c, i, tuple(metrics)) for i in range(c.n_batches)]
    if c.workers > 1:
        with ProcessPoolExecutor(max_workers=c.workers) as pool:
            parts = list(pool.map(_batch_moments, tasks))
    else:
        parts = [_batch_moments(t) for t in tasks]
    out = {}
    for metric in metrics:
        acc = parts[0][metric]
        for part in parts[1:]:
            acc = _merge(acc, part[metric])
        n, mean, sq = acc
        std_error = math.sqrt(sq / (n - 1)) / math.sqrt(n)
        out[metric] = McEstimate(mean, std_error, n)
    return out


def mc_asc(s: WiretapScenario, c: SimConfig) -> McEstimate:
    """Sample mean of (ln(1 + g_D) - ln(1 + g_E))^+ in nats."""
    return simulate(s, c, ("asc",))["asc"]


def mc_sop(s: WiretapScenario, c: SimConfig) -> McEstimate:
    """Fraction of draws with g_D < theta g_E + theta - 1."""
    return simulate(s, c, ("sop",))["sop"]


def mc_sop_lower(s: WiretapScenario, c: SimConfig) -> McEstimate:
    """Fraction of draws with g_D < theta g_E."""
    return simulate(s, c, ("sop_lower",))["sop_lower"]


def mc_spsc(s: WiretapScenario, c: SimConfig) -> McEstimate:
    """Fraction of draws with g_D >= g_E (ties have probability zero)."""
    return simulate(s, c, ("spsc",))["spsc"]
