"""Kernel loss, analytic gradients, optimizer, and training-loop behavior."""
import numpy as np
import pytest

from vmbqc import learn, models
from vmbqc.learn import (
    AdagradState,
    KernelSpec,
    TrainConfig,
    adagrad_step,
    gram,
    kernel,
    mmd_from_probs,
    mmd_loss,
    train,
)
from vmbqc.models import ModelKind, ModelParams, exact_distribution, logit, sigmoid
from vmbqc.targets import SampleSet

RNG = np.random.default_rng(271828)
SPEC = KernelSpec()


def random_params(n, depth, rng, p_range=(0.2, 0.95)):
    theta = rng.uniform(0, 2 * np.pi, size=(n, depth))
    p = rng.uniform(*p_range, size=(n, depth))
    return ModelParams(n, depth, theta, logit(p))


# -- kernel and loss -------------------------------------------------------------


def test_kernel_frozen_values():
    assert kernel(SPEC, np.array([0.0]), np.array([1.0]))[0] == pytest.approx(
        0.6251881718780188, abs=1e-12
    )
    assert kernel(SPEC, np.array([2.0]), np.array([5.0]))[0] == pytest.approx(
        0.16238793858121822, abs=1e-12
    )
    assert kernel(SPEC, np.array([7.0]), np.array([7.0]))[0] == pytest.approx(1.0, abs=1e-12)


def test_kernel_is_mean_of_two_gaussians():
    # denominator is 2*sigma (not 2*sigma^2)
    want = 0.5 * (np.exp(-1.0 / (2 * 0.5)) + np.exp(-1.0 / (2 * 4.0)))
    assert kernel(SPEC, np.array([3.0]), np.array([4.0]))[0] == pytest.approx(want, abs=1e-12)


def test_gram_symmetric_psd():
    g = gram(SPEC, 4)
    assert np.allclose(g, g.T)
    eigs = np.linalg.eigvalsh(g)
    assert eigs.min() > -1e-10


def test_mmd_frozen_value():
    p = np.zeros(8)
    p[0] = 1.0
    q = np.full(8, 1 / 8)
    assert mmd_from_probs(SPEC, p, q, 3) == pytest.approx(0.8075407931128682, abs=1e-12)


def test_mmd_nonnegative_and_zero_on_self():
    for _ in range(20):
        p = RNG.random(8)
        p /= p.sum()
        q = RNG.random(8)
        q /= q.sum()
        assert mmd_from_probs(SPEC, p, q, 3) >= -1e-12
    s = SampleSet(3, RNG.integers(0, 8, size=500).astype(np.int64))
    assert mmd_loss(SPEC, s, s) == pytest.approx(0.0, abs=1e-12)


def test_mmd_loss_permutation_invariant():
    vals = RNG.integers(0, 8, size=400).astype(np.int64)
    tgt = SampleSet(3, RNG.integers(0, 8, size=400).astype(np.int64))
    a = mmd_loss(SPEC, SampleSet(3, vals), tgt)
    b = mmd_loss(SPEC, SampleSet(3, np.random.default_rng(0).permutation(vals)), tgt)
    assert a == pytest.approx(b, abs=1e-14)


def test_bandwidths_validated():
    with pytest.raises(ValueError):
        KernelSpec(bandwidths=())
    with pytest.raises(ValueError):
        KernelSpec(bandwidths=(1.0, -2.0))


# -- exact gradients vs finite differences ---------------------------------------


def exact_loss(kind, params, target_probs):
    q = exact_distribution(kind, params)
    return mmd_from_probs(SPEC, q, target_probs, params.n)


def fd_theta(kind, params, i, j, target_probs, h=1e-5):
    a, b = params.copy(), params.copy()
    a.theta[i, j] += h
    b.theta[i, j] -= h
    return (exact_loss(kind, a, target_probs) - exact_loss(kind, b, target_probs)) / (2 * h)


def fd_p(kind, params, i, j, target_probs, h=1e-6):
    pa = sigmoid(params.zeta).copy()
    pb = pa.copy()
    pa[i, j] += h
    pb[i, j] -= h
    a = ModelParams(params.n, params.depth, params.theta, logit(pa))
    b = ModelParams(params.n, params.depth, params.theta, logit(pb))
    return (exact_loss(kind, a, target_probs) - exact_loss(kind, b, target_probs)) / (2 * h)


@pytest.mark.parametrize("kind", [ModelKind.UNITARY, ModelKind.CORRECTED, ModelKind.UNCORRECTED])
def test_grad_theta_exact_matches_fd(kind):
    n = 3
    target = np.full(8, 1 / 8)
    for depth in (1, 2):
        for _ in range(3):
            params = random_params(n, depth, RNG)
            i = int(RNG.integers(0, n))
            j = int(RNG.integers(0, depth))
            got = learn.grad_theta_exact(kind, params, i, j, target)
            want = fd_theta(kind, params, i, j, target)
            assert got == pytest.approx(want, rel=1e-3, abs=1e-8)


@pytest.mark.parametrize("kind", [ModelKind.CORRECTED, ModelKind.UNCORRECTED])
def test_grad_p_exact_matches_fd(kind):
    n = 3
    target = np.zeros(8)
    target[1] = 0.6
    target[6] = 0.4
    for depth in (1, 2):
        for _ in range(3):
            params = random_params(n, depth, RNG)
            i = int(RNG.integers(0, n))
            j = int(RNG.integers(0, depth))
            got = learn.grad_p_exact(kind, params, i, j, target)
            want = fd_p(kind, params, i, j, target)
            assert got == pytest.approx(want, rel=1e-3, abs=1e-8)


def test_grad_zeta_chain_rule():
    params = random_params(3, 2, RNG)
    gp = 0.37
    p = sigmoid(params.zeta[1, 1])
    assert learn.grad_zeta(params, 1, 1, gp) == pytest.approx(gp * p * (1 - p), abs=1e-14)


def test_last_layer_p_gradient_vanishes_when_corrected():
    """Correcting the final layer's byproducts is already implied by the end
    correction, so those p cells cannot move the corrected distribution."""
    params = random_params(3, 2, RNG)
    target = np.full(8, 1 / 8)
    for i in range(3):
        g = learn.grad_p_exact(ModelKind.CORRECTED, params, i, params.depth - 1, target)
        assert abs(g) < 1e-10


def test_sampled_gradients_track_exact():
    n, depth = 3, 1
    params = random_params(n, depth, RNG)
    target_probs = np.full(8, 1 / 8)
    tgt = SampleSet(3, np.random.default_rng(1).integers(0, 8, size=40000).astype(np.int64))
    rng = np.random.default_rng(2)
    got = learn.grad_theta(ModelKind.CORRECTED, params, 0, 0, tgt, 40000, rng)
    want = learn.grad_theta_exact(ModelKind.CORRECTED, params, 0, 0, target_probs)
    assert got == pytest.approx(want, abs=0.02)


# -- optimizer and training loop --------------------------------------------------


def test_adagrad_rejects_shape_mismatch():
    state = AdagradState.zeros(1, 1)
    params = ModelParams(1, 1, np.array([[0.0]]), np.array([[0.0]]))
    with pytest.raises(ValueError):
        adagrad_step(state, params, np.zeros((2, 2)), None, 0.1)


def test_adagrad_accumulates():
    state = AdagradState.zeros(3, 2)
    params = ModelParams(3, 2, np.zeros((3, 2)), np.zeros((3, 2)))
    g = np.full((3, 2), 2.0)
    out = adagrad_step(state, params, g, g, lr=0.1)
    want = -0.1 * 2.0 / (2.0 + 1e-8)
    assert np.allclose(out.theta, want)
    out2 = adagrad_step(state, out, g, g, lr=0.1)
    want2 = want - 0.1 * 2.0 / (np.sqrt(8.0) + 1e-8)
    assert np.allclose(out2.theta, want2)


def test_train_zero_lr_is_constant():
    ds = SampleSet(3, np.random.default_rng(0).integers(0, 8, size=500).astype(np.int64))
    cfg = TrainConfig(
        kind=ModelKind.CORRECTED, n=3, depth=1, epochs=4, batch=500, learning_rate=0.0, seed=9
    )
    trace = train(cfg, ds)
    # parameters never move, so per-epoch losses differ only by sampling noise
    init = learn.init_learner(ModelKind.CORRECTED, 3, 1, np.random.default_rng(9))
    assert np.allclose(trace.params.theta, init.theta)


def test_train_deterministic_given_seed():
    ds = SampleSet(3, np.random.default_rng(0).integers(0, 8, size=500).astype(np.int64))
    cfg = TrainConfig(kind=ModelKind.CORRECTED, n=3, depth=1, epochs=3, batch=500, seed=5)
    a = train(cfg, ds)
    b = train(cfg, ds)
    assert a.losses == b.losses
    assert np.array_equal(a.params.theta, b.params.theta)
    assert np.array_equal(a.params.zeta, b.params.zeta)


def test_init_learner_ranges():
    init = learn.init_learner(ModelKind.CORRECTED, 5, 4, np.random.default_rng(3))
    assert np.all((init.theta >= 0) & (init.theta < 1))
    p = sigmoid(init.zeta)
    assert np.all(p >= 1 - 3 / 20 - 1e-12) and np.all(p < 1)


def test_training_reduces_loss_on_learnable_target():
    rng = np.random.default_rng(4)
    target = models.random_target(ModelKind.CORRECTED, 3, 2, rng)
    ds = SampleSet(3, models.sample_model(ModelKind.CORRECTED, target, 3000, rng))
    cfg = TrainConfig(kind=ModelKind.CORRECTED, n=3, depth=2, epochs=15, batch=3000, seed=11)
    trace = train(cfg, ds)
    assert np.mean(trace.losses[-3:]) < trace.losses[0]
