"""The three generative models built on the cellular-automaton ansatz.

* ``UNITARY``     - the fully corrected circuit: D alternating layers of
                    single-qubit Z-rotations and the fixed Clifford layer.
* ``UNCORRECTED`` - the mixed-unitary channel with byproducts left where the
                    mask puts them (no end-of-circuit correction).
* ``CORRECTED``   - the same mixture with the propagated byproduct corrected
                    by a conditional Pauli at the end; only the angle flips
                    survive.

Byproduct masks are (n, depth) 0/1 arrays; cell (i, j) is Bernoulli with
rate (1 - p_i^j) / 2 where p = sigmoid(zeta). Per-branch circuits are
simulated either one at a time through :class:`vmbqc.sim.StateVector` or in
vectorized batches (``_batch_probs``), which is what sampling and the
Monte-Carlo distribution estimate use.

The end correction is applied classically where possible: only the X-type
support of the correction operator matters for Z-basis statistics, and it
acts by XOR on outcome indices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from . import cqca
from .pauli import PauliOperator
from .sim import StateVector, _sign_table, _cz_ring_diag, plus_state

EXACT_MASK_LIMIT = 12  # enumerate at most 2^12 masks exactly


class ModelKind(Enum):
    UNITARY = "unitary"
    UNCORRECTED = "uncorrected"
    CORRECTED = "corrected"


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logit(p):
    p = np.asarray(p, dtype=float)
    return np.log(p / (1.0 - p))


@dataclass
class ModelParams:
    """Angle matrix theta and correction-logit matrix zeta, both (n, depth)."""

    n: int
    depth: int
    theta: np.ndarray
    zeta: np.ndarray

    def __post_init__(self):
        self.theta = np.array(self.theta, dtype=float)
        self.zeta = np.array(self.zeta, dtype=float)
        if self.theta.shape != (self.n, self.depth) or self.zeta.shape != (self.n, self.depth):
            raise ValueError(f"parameter matrices must be ({self.n}, {self.depth})")

    @property
    def p(self) -> np.ndarray:
        return sigmoid(self.zeta)

    def copy(self) -> "ModelParams":
        return ModelParams(self.n, self.depth, self.theta.copy(), self.zeta.copy())


@lru_cache(maxsize=None)
def table_for(n: int) -> cqca.CqcaTable:
    return cqca.build(n)


@lru_cache(maxsize=None)
def _generator_bits(n: int, depth: int):
    gx, gz = cqca.image_bit_arrays(table_for(n), depth)
    return gx, gz


# -- masks -------------------------------------------------------------------


def mask_probabilities(params: ModelParams) -> np.ndarray:
    """Per-cell probability that a byproduct survives: (1 - p) / 2."""
    return 0.5 * (1.0 - params.p)


def sample_mask(params: ModelParams, rng: np.random.Generator) -> np.ndarray:
    return (rng.random((params.n, params.depth)) < mask_probabilities(params)).astype(np.uint8)


def sample_masks(params: ModelParams, rng: np.random.Generator, count: int) -> np.ndarray:
    q = mask_probabilities(params)
    return (rng.random((count, params.n, params.depth)) < q[None, :, :]).astype(np.uint8)


# -- single-state circuit paths ----------------------------------------------


def run_unitary(params: ModelParams, theta: np.ndarray | None = None) -> StateVector:
    """The fully corrected circuit on |+>^n."""
    theta = params.theta if theta is None else theta
    state = plus_state(params.n)
    for j in range(params.depth):
        state.apply_rz_layer(theta[:, j])
        state.apply_cqca_layer()
    return state


def run_with_mask(
    params: ModelParams,
    mask,
    kind: ModelKind,
    method: str = "angle_flip",
) -> StateVector:
    """Branch state for one byproduct mask.

    ``method="interleaved"`` places a Z at every surviving byproduct slot
    (after the rotation, before the Clifford layer); ``method="angle_flip"``
    runs the plain circuit with flipped angles. Both realize the same branch
    unitary up to the end correction, which is applied as a Pauli where the
    kind requires it.
    """
    mask = np.asarray(mask, dtype=np.uint8)
    if mask.shape != (params.n, params.depth):
        raise ValueError(f"mask shape {mask.shape} != ({params.n}, {params.depth})")
    if kind is ModelKind.UNITARY:
        raise ValueError("unitary model takes no mask")
    table = table_for(params.n)

    if method == "interleaved":
        state = plus_state(params.n)
        for j in range(params.depth):
            state.apply_rz_layer(params.theta[:, j])
            zbits = int(sum(1 << i for i in range(params.n) if mask[i, j]))
            if zbits:
                state.apply_pauli(PauliOperator(params.n, 0, zbits, 0))
            state.apply_cqca_layer()
        # interleaving realizes the uncorrected branch directly
        if kind is ModelKind.CORRECTED:
            state.apply_pauli(cqca.end_correction(table, mask, params.depth))
        return state

    if method == "angle_flip":
        flips = cqca.angle_flip_bits(table, mask, params.depth)
        signs = 1.0 - 2.0 * flips
        state = run_unitary(params, theta=params.theta * signs)
        # flipped angles realize the corrected branch directly
        if kind is ModelKind.UNCORRECTED:
            state.apply_pauli(cqca.end_correction(table, mask, params.depth))
        return state

    raise ValueError(f"unknown method {method!r}")


# -- batched branch simulation -------------------------------------------------


def _batch_flips(params: ModelParams, masks: np.ndarray):
    """Angle-flip bits and end-correction X-support for a batch of masks.

    masks: (B, n, depth) uint8. Returns (flips (B, n, depth) uint8,
    end_x (B,) int64 packed X-bit masks). Pure symplectic arithmetic: phases
    never matter here.
    """
    B, n, depth = masks.shape
    gx, gz = _generator_bits(n, depth)
    flips = np.empty((B, n, depth), dtype=np.uint8)
    px = np.zeros((B, n), dtype=np.int64)  # accumulated byproduct X bits
    pz = np.zeros((B, n), dtype=np.int64)
    for j in range(depth):
        flips[:, :, j] = (px @ gz[j].T + pz @ gx[j].T) & 1
        layer = masks[:, :, j].astype(np.int64)
        px ^= (layer @ gx[j]) & 1
        pz ^= (layer @ gz[j]) & 1
    end_x = (px << np.arange(n)[None, :]).sum(axis=1)
    return flips, end_x


def _hadamard_all(amps: np.ndarray, n: int) -> np.ndarray:
    """H on every qubit for a (B, 2^n) amplitude batch."""
    B = amps.shape[0]
    for q in range(n):
        a = amps.reshape(B, 1 << (n - q - 1), 2, 1 << q)
        lo = a[:, :, 0, :] + a[:, :, 1, :]
        hi = a[:, :, 0, :] - a[:, :, 1, :]
        a[:, :, 0, :] = lo
        a[:, :, 1, :] = hi
    amps *= 2.0 ** (-n / 2)
    return amps


def _batch_probs(params: ModelParams, masks: np.ndarray, kind: ModelKind) -> np.ndarray:
    """Z-basis outcome probabilities for every mask branch: (B, 2^n)."""
    B, n, depth = masks.shape
    flips, end_x = _batch_flips(params, masks)
    theta_eff = params.theta[None, :, :] * (1.0 - 2.0 * flips)
    signs = _sign_table(n)  # (2^n, n)
    cz = _cz_ring_diag(n)
    amps = np.full((B, 1 << n), 2.0 ** (-n / 2), dtype=complex)
    for j in range(depth):
        amps *= np.exp(1j * (theta_eff[:, :, j] @ signs.T))
        amps *= cz[None, :]
        amps = _hadamard_all(amps, n)
    probs = np.abs(amps) ** 2
    if kind is ModelKind.UNCORRECTED:
        idx = np.arange(1 << n)
        probs = probs[np.arange(B)[:, None], idx[None, :] ^ end_x[:, None]]
    return probs


# -- model-level sampling and distributions ------------------------------------


def sample_model(
    kind: ModelKind,
    params: ModelParams,
    shots: int,
    rng: np.random.Generator,
    chunk: int = 4096,
) -> np.ndarray:
    """One fresh byproduct mask per shot, one Z-basis draw per branch."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if kind is ModelKind.UNITARY:
        return run_unitary(params).sample(rng, shots)
    out = np.empty(shots, dtype=np.int64)
    done = 0
    while done < shots:
        b = min(chunk, shots - done)
        masks = sample_masks(params, rng, b)
        probs = _batch_probs(params, masks, kind)
        cdf = np.cumsum(probs, axis=1)
        cdf[:, -1] = 1.0
        u = rng.random(b)
        out[done : done + b] = (cdf < u[:, None]).sum(axis=1)
        done += b
    return out


def exact_distribution(
    kind: ModelKind,
    params: ModelParams,
    branch_budget: int | None = None,
    rng: np.random.Generator | None = None,
    chunk: int = 4096,
) -> np.ndarray:
    """Model output distribution over 2^n outcomes.

    Exact mode enumerates all 2^(n*depth) masks and requires
    n*depth <= EXACT_MASK_LIMIT; cells with p = 1 are contracted first since
    their byproduct never survives. With ``branch_budget`` set, the mixture
    is instead estimated from that many sampled branches (deterministic given
    ``rng``), each contributing its exact per-branch Born vector.
    """
    if kind is ModelKind.UNITARY:
        return run_unitary(params).probabilities()

    n, depth = params.n, params.depth
    if branch_budget is not None:
        if rng is None:
            raise ValueError("Monte-Carlo mode needs an rng")
        acc = np.zeros(1 << n)
        done = 0
        while done < branch_budget:
            b = min(chunk, branch_budget - done)
            masks = sample_masks(params, rng, b)
            acc += _batch_probs(params, masks, kind).sum(axis=0)
            done += b
        return acc / branch_budget

    q = mask_probabilities(params).reshape(-1)  # cell order: (i, j) flattened
    free = np.flatnonzero(q > 0.0)
    if free.size > EXACT_MASK_LIMIT:
        raise ValueError(
            f"{free.size} free mask cells exceed the exact-enumeration limit "
            f"{EXACT_MASK_LIMIT}; pass branch_budget for Monte-Carlo mode"
        )
    n_masks = 1 << free.size
    dist = np.zeros(1 << n)
    for start in range(0, n_masks, chunk):
        ids = np.arange(start, min(start + chunk, n_masks))
        cells = np.zeros((ids.size, n * depth), dtype=np.uint8)
        cells[:, free] = (ids[:, None] >> np.arange(free.size)[None, :]) & 1
        masks = cells.reshape(ids.size, n, depth)
        s = cells[:, free]
        weights = np.prod(np.where(s == 1, q[free], 1.0 - q[free]), axis=1)
        probs = _batch_probs(params, masks, ModelKind(kind))
        dist += weights @ probs
    return dist


def random_target(
    kind: ModelKind, n: int, depth: int, rng: np.random.Generator
) -> ModelParams:
    """Target parameters: theta and p i.i.d. uniform on [0.8, 1] (radians)."""
    theta = rng.uniform(0.8, 1.0, size=(n, depth))
    if kind is ModelKind.UNITARY:
        p = np.full((n, depth), 1.0 - 1e-9)  # sentinel, never used
    else:
        p = rng.uniform(0.8, 1.0, size=(n, depth))
        p = np.minimum(p, 1.0 - 1e-12)
    return ModelParams(n, depth, theta, logit(p))
