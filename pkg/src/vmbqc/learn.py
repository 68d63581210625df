"""Kernel two-sample loss, analytic gradients and the training loop.

The loss is the maximum mean discrepancy with a Gaussian-mixture kernel

    K(x, y) = (1/d) sum_k exp(-(x - y)^2 / (2 sigma_k))

on integer-valued samples (note: the denominator is 2*sigma_k, not
2*sigma_k^2 - kept verbatim from the source construction). Expectations are
plug-in V-statistics over all ordered pairs, which for integer samples
reduce to histogram quadratic forms against a precomputed Gram matrix.

Angle gradients use the exact parameter-shift identity for rotations of the
form exp(i*theta*P) with a Pauli generator P: the per-branch Born
probability is a trigonometric polynomial in 2*theta, so

    dq/dtheta = q(theta + pi/4) - q(theta - pi/4)

holds exactly (also through the probabilistic angle flips, which only change
the sign of the sin(2*theta) coefficient). The loss derivative then carries
an overall factor 2 from the kernel symmetry. Correction-probability
gradients pin one cell to p = 1 and p = 0 (the mixture is linear in each
p cell); logits get the extra sigmoid chain-rule factor.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .models import (
    ModelKind,
    ModelParams,
    exact_distribution,
    sample_model,
    sigmoid,
)
from .targets import SampleSet, empirical

THETA_SHIFT = np.pi / 4
GRAD_SCALE = 2.0
DEFAULT_BANDWIDTHS = (0.5, 4.0)


@dataclass(frozen=True)
class KernelSpec:
    bandwidths: tuple = DEFAULT_BANDWIDTHS

    def __post_init__(self):
        if len(self.bandwidths) < 1 or any(s <= 0 for s in self.bandwidths):
            raise ValueError("bandwidths must be a nonempty list of positive reals")


def kernel(spec: KernelSpec, x, y):
    """Mixture-of-Gaussians kernel on integer samples (elementwise)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d2 = (x - y) ** 2
    return sum(np.exp(-d2 / (2.0 * s)) for s in spec.bandwidths) / len(spec.bandwidths)


@lru_cache(maxsize=None)
def _gram_cached(bandwidths: tuple, n_bits: int) -> np.ndarray:
    x = np.arange(1 << n_bits, dtype=float)
    d2 = (x[:, None] - x[None, :]) ** 2
    g = sum(np.exp(-d2 / (2.0 * s)) for s in bandwidths) / len(bandwidths)
    return g


def gram(spec: KernelSpec, n_bits: int) -> np.ndarray:
    """Kernel matrix over all 2^n integer outcomes."""
    return _gram_cached(tuple(spec.bandwidths), n_bits)


def _hist(samples: SampleSet) -> np.ndarray:
    return empirical(samples).probs


def mmd_from_probs(spec: KernelSpec, q: np.ndarray, pi: np.ndarray, n_bits: int) -> float:
    g = gram(spec, n_bits)
    return float(q @ g @ q - 2.0 * (q @ g @ pi) + pi @ g @ pi)


def mmd_loss(spec: KernelSpec, model_samples: SampleSet, target_samples: SampleSet) -> float:
    """V-statistic MMD between two sample sets of integer outcomes."""
    if len(model_samples) == 0 or len(target_samples) == 0:
        raise ValueError("empty sample set")
    if model_samples.n_bits != target_samples.n_bits:
        raise ValueError("sample sets live on different registers")
    return mmd_from_probs(
        spec, _hist(model_samples), _hist(target_samples), model_samples.n_bits
    )


# -- analytic gradients, sampled estimators ------------------------------------


def _shifted(params: ModelParams, i: int, j: int, delta: float) -> ModelParams:
    out = params.copy()
    out.theta[i, j] += delta
    return out


def _pinned(params: ModelParams, i: int, j: int, p_value: float) -> ModelParams:
    out = params.copy()
    out.zeta[i, j] = np.inf if p_value == 1.0 else -np.inf
    return out


def _pair_term(g, qa, qb):
    return float(qa @ g @ qb)


def grad_theta(
    kind: ModelKind,
    params: ModelParams,
    i: int,
    j: int,
    target: SampleSet,
    batch: int,
    rng: np.random.Generator,
    spec: KernelSpec = KernelSpec(),
    baseline: SampleSet | None = None,
) -> float:
    """Parameter-shift MMD gradient for theta[i, j], estimated from samples."""
    if baseline is None:
        baseline = SampleSet(params.n, sample_model(kind, params, batch, rng))
    g = gram(spec, params.n)
    qb, qt = _hist(baseline), _hist(target)
    qp = _hist(SampleSet(params.n, sample_model(kind, _shifted(params, i, j, THETA_SHIFT), batch, rng)))
    qm = _hist(SampleSet(params.n, sample_model(kind, _shifted(params, i, j, -THETA_SHIFT), batch, rng)))
    return GRAD_SCALE * (
        _pair_term(g, qp, qb) - _pair_term(g, qm, qb)
        - _pair_term(g, qp, qt) + _pair_term(g, qm, qt)
    )


def grad_p(
    kind: ModelKind,
    params: ModelParams,
    i: int,
    j: int,
    target: SampleSet,
    batch: int,
    rng: np.random.Generator,
    spec: KernelSpec = KernelSpec(),
    baseline: SampleSet | None = None,
) -> float:
    """Gradient of the loss in the correction probability p[i, j]."""
    if kind is ModelKind.UNITARY:
        raise ValueError("the unitary model has no correction probabilities")
    if baseline is None:
        baseline = SampleSet(params.n, sample_model(kind, params, batch, rng))
    g = gram(spec, params.n)
    qb, qt = _hist(baseline), _hist(target)
    q1 = _hist(SampleSet(params.n, sample_model(kind, _pinned(params, i, j, 1.0), batch, rng)))
    q0 = _hist(SampleSet(params.n, sample_model(kind, _pinned(params, i, j, 0.0), batch, rng)))
    return 2.0 * (
        _pair_term(g, q1, qb) - _pair_term(g, q0, qb)
        - _pair_term(g, q1, qt) + _pair_term(g, q0, qt)
    )


def grad_zeta(params: ModelParams, i: int, j: int, grad_p_value: float) -> float:
    """Chain rule through p = sigmoid(zeta)."""
    p = sigmoid(params.zeta[i, j])
    return grad_p_value * p * (1.0 - p)


# -- exact-expectation gradients (oracle-facing) --------------------------------


def grad_theta_exact(
    kind: ModelKind,
    params: ModelParams,
    i: int,
    j: int,
    target_probs: np.ndarray,
    spec: KernelSpec = KernelSpec(),
) -> float:
    """Same expression with every expectation replaced by its exact value."""
    g = gram(spec, params.n)
    qb = exact_distribution(kind, params)
    qp = exact_distribution(kind, _shifted(params, i, j, THETA_SHIFT))
    qm = exact_distribution(kind, _shifted(params, i, j, -THETA_SHIFT))
    return GRAD_SCALE * float((qp - qm) @ g @ (qb - target_probs))


def grad_p_exact(
    kind: ModelKind,
    params: ModelParams,
    i: int,
    j: int,
    target_probs: np.ndarray,
    spec: KernelSpec = KernelSpec(),
) -> float:
    if kind is ModelKind.UNITARY:
        raise ValueError("the unitary model has no correction probabilities")
    g = gram(spec, params.n)
    qb = exact_distribution(kind, params)
    q1 = exact_distribution(kind, _pinned(params, i, j, 1.0))
    q0 = exact_distribution(kind, _pinned(params, i, j, 0.0))
    return 2.0 * float((q1 - q0) @ g @ (qb - target_probs))


# -- optimizer and training loop ------------------------------------------------


@dataclass
class AdagradState:
    acc_theta: np.ndarray
    acc_zeta: np.ndarray

    @classmethod
    def zeros(cls, n: int, depth: int) -> "AdagradState":
        return cls(np.zeros((n, depth)), np.zeros((n, depth)))


def adagrad_step(
    state: AdagradState,
    params: ModelParams,
    grads_theta: np.ndarray,
    grads_zeta: np.ndarray | None,
    lr: float,
    eps: float = 1e-8,
) -> ModelParams:
    """One Adagrad update; mutates the accumulator, returns fresh params."""
    if grads_theta.shape != params.theta.shape:
        raise ValueError("gradient shape mismatch")
    state.acc_theta += grads_theta**2
    theta = params.theta - lr * grads_theta / (np.sqrt(state.acc_theta) + eps)
    zeta = params.zeta
    if grads_zeta is not None:
        if grads_zeta.shape != params.zeta.shape:
            raise ValueError("gradient shape mismatch")
        state.acc_zeta += grads_zeta**2
        zeta = params.zeta - lr * grads_zeta / (np.sqrt(state.acc_zeta) + eps)
    return ModelParams(params.n, params.depth, theta, zeta)


def init_learner(
    kind: ModelKind, n: int, depth: int, rng: np.random.Generator
) -> ModelParams:
    """theta ~ U[0, 1) radians; p ~ U[1 - 3/(n*depth), 1], logits clamped."""
    theta = rng.random((n, depth))
    r = 1.0 - 3.0 / (n * depth)
    p = rng.uniform(r, 1.0, size=(n, depth))
    p = np.minimum(p, 1.0 - 1e-6)
    zeta = np.log(p / (1.0 - p))
    return ModelParams(n, depth, theta, zeta)


@dataclass
class TrainConfig:
    kind: ModelKind
    n: int
    depth: int
    epochs: int
    batch: int
    learning_rate: float = 0.1
    adagrad_eps: float = 1e-8
    seed: int = 0
    kernel: KernelSpec = field(default_factory=KernelSpec)
    shared_baseline: bool = True

    def __post_init__(self):
        if self.epochs < 0 or self.batch < 1 or self.n < 3 or self.depth < 1:
            raise ValueError("invalid training configuration")


@dataclass
class TrainingTrace:
    config: TrainConfig
    losses: list
    wall_times: list
    params: ModelParams


def train(
    config: TrainConfig,
    dataset: SampleSet,
    init: ModelParams | None = None,
) -> TrainingTrace:
    """Full MMD training run; deterministic given the config seed."""
    rng = np.random.default_rng(config.seed)
    kind = config.kind
    params = init.copy() if init is not None else init_learner(kind, config.n, config.depth, rng)
    state = AdagradState.zeros(config.n, config.depth)
    g = gram(config.kernel, config.n)
    target_hist = _hist(dataset)
    mixture = kind is not ModelKind.UNITARY

    losses, wall_times = [], []
    for _ in range(config.epochs):
        t0 = time.perf_counter()
        base = SampleSet(config.n, sample_model(kind, params, config.batch, rng))
        qb = _hist(base)
        losses.append(
            float(qb @ g @ qb - 2.0 * (qb @ g @ target_hist) + target_hist @ g @ target_hist)
        )
        gt = np.zeros((config.n, config.depth))
        gz = np.zeros((config.n, config.depth)) if mixture else None
        for i in range(config.n):
            for j in range(config.depth):
                b = base if config.shared_baseline else None
                gt[i, j] = grad_theta(
                    kind, params, i, j, dataset, config.batch, rng, config.kernel, b
                )
                if mixture:
                    gp = grad_p(
                        kind, params, i, j, dataset, config.batch, rng, config.kernel, b
                    )
                    gz[i, j] = grad_zeta(params, i, j, gp)
        params = adagrad_step(
            state, params, gt, gz, config.learning_rate, config.adagrad_eps
        )
        wall_times.append(time.perf_counter() - t0)
    return TrainingTrace(config, losses, wall_times, params)
