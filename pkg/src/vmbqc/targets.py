"""Target distributions, sample sets, dataset files and divergence metrics.

Samples are scalar integers: the basis-index value of the measured bitstring
under the little-endian convention of :mod:`vmbqc.sim`. The dataset file
format is one sample per line as a 0/1 string of length n (qubit 0
leftmost), preceded by a header line ``#n_bits=N``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .sim import bitstring, index_of


@dataclass(frozen=True)
class DiscreteDistribution:
    n_bits: int
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.shape != (1 << self.n_bits,):
            raise ValueError(f"expected {1 << self.n_bits} probabilities")
        if np.any(probs < 0):
            raise ValueError("negative probability")
        if abs(probs.sum() - 1.0) > 1e-9:
            raise ValueError(f"probabilities sum to {probs.sum()}, not 1")
        object.__setattr__(self, "probs", probs)


@dataclass(frozen=True)
class SampleSet:
    n_bits: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.int64)
        if values.ndim != 1:
            raise ValueError("samples must be a flat list")
        if values.size and (values.min() < 0 or values.max() >= (1 << self.n_bits)):
            raise ValueError("sample out of range")
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.values.size


def uniform(n_bits: int) -> DiscreteDistribution:
    return DiscreteDistribution(n_bits, np.full(1 << n_bits, 2.0 ** (-n_bits)))


def double_gaussian(
    n_bits: int, mu1: float, mu2: float, sigma_g: float
) -> DiscreteDistribution:
    """Two overlapping Gaussians evaluated on the integers [0, 2^n)."""
    if sigma_g <= 0:
        raise ValueError("sigma_g must be positive")
    x = np.arange(1 << n_bits, dtype=float)
    w = np.exp(-((x - mu1) ** 2) / (2 * sigma_g**2)) + np.exp(
        -((x - mu2) ** 2) / (2 * sigma_g**2)
    )
    return DiscreteDistribution(n_bits, w / w.sum())


def default_double_gaussian(n_bits: int) -> DiscreteDistribution:
    """Two peaks at the quarter points with width 2^n / 8."""
    span = 1 << n_bits
    return double_gaussian(n_bits, span / 4, 3 * span / 4, span / 8)


def empirical(samples: SampleSet) -> DiscreteDistribution:
    if len(samples) == 0:
        raise ValueError("empty sample set")
    counts = np.bincount(samples.values, minlength=1 << samples.n_bits)
    return DiscreteDistribution(samples.n_bits, counts / counts.sum())


def draw(dist: DiscreteDistribution, m: int, rng: np.random.Generator) -> SampleSet:
    if m < 1:
        raise ValueError("need at least one draw")
    cdf = np.cumsum(dist.probs)
    cdf[-1] = 1.0
    return SampleSet(dist.n_bits, np.searchsorted(cdf, rng.random(m), side="right"))


def total_variation(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    if p.n_bits != q.n_bits:
        raise ValueError("dimension mismatch")
    return 0.5 * float(np.abs(p.probs - q.probs).sum())


def kl_divergence(p: DiscreteDistribution, q: DiscreteDistribution) -> float:
    """sum p ln(p/q) in nats; 0 ln 0 = 0; +inf where q = 0 < p."""
    if p.n_bits != q.n_bits:
        raise ValueError("dimension mismatch")
    pp, qq = p.probs, q.probs
    support = pp > 0
    if np.any(qq[support] == 0):
        return float("inf")
    return float(np.sum(pp[support] * np.log(pp[support] / qq[support])))


def save_samples(path, samples: SampleSet):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#n_bits={samples.n_bits}\n")
        for v in samples.values:
            fh.write(bitstring(samples.n_bits, int(v)) + "\n")


def load_samples(path) -> SampleSet:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("#n_bits="):
            raise ValueError(f"bad dataset header: {header!r}")
        n_bits = int(header.split("=", 1)[1])
        values = [index_of(line.strip()) for line in fh if line.strip()]
    return SampleSet(n_bits, np.array(values, dtype=np.int64))
