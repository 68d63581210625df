"""Channel models: branch equivalences, mask statistics, exact distributions."""
import numpy as np
import pytest

from vmbqc import models
from vmbqc.models import ModelKind, ModelParams, logit
from vmbqc.targets import total_variation, uniform, DiscreteDistribution

RNG = np.random.default_rng(314159)


def random_params(n, depth, rng, p_range=(0.2, 0.95)):
    theta = rng.uniform(0, 2 * np.pi, size=(n, depth))
    p = rng.uniform(*p_range, size=(n, depth))
    return ModelParams(n, depth, theta, logit(p))


def test_mask_probability_definition():
    params = random_params(3, 2, RNG)
    q = models.mask_probabilities(params)
    assert np.allclose(q, (1.0 - params.p) / 2.0)


def test_mask_sampling_statistics():
    params = random_params(4, 3, RNG, p_range=(0.3, 0.9))
    q = models.mask_probabilities(params)
    m = 20000
    masks = models.sample_masks(params, np.random.default_rng(2), m)
    freq = masks.mean(axis=0)
    sigma = np.sqrt(q * (1 - q) / m)
    assert np.all(np.abs(freq - q) < 4 * sigma + 1e-9)


@pytest.mark.parametrize("n,depth", [(3, 1), (3, 2), (3, 3)])
def test_angle_flip_equals_interleaved_per_mask(n, depth):
    """The two branch constructions agree per mask, both kinds, 1e-10."""
    for _ in range(12):
        params = random_params(n, depth, RNG)
        mask = RNG.integers(0, 2, size=(n, depth)).astype(np.uint8)
        for kind in (ModelKind.CORRECTED, ModelKind.UNCORRECTED):
            a = models.run_with_mask(params, mask, kind, method="angle_flip")
            b = models.run_with_mask(params, mask, kind, method="interleaved")
            assert np.allclose(a.probabilities(), b.probabilities(), atol=1e-10)


def test_corrected_p1_equals_unitary():
    """With all corrections certain, the corrected channel is the unitary."""
    for n, depth in ((3, 2), (4, 3)):
        theta = RNG.uniform(0, 2 * np.pi, size=(n, depth))
        params = ModelParams(n, depth, theta, np.full((n, depth), np.inf))
        pu = models.run_unitary(params).probabilities()
        pc = models.exact_distribution(ModelKind.CORRECTED, params)
        assert np.allclose(pu, pc, atol=1e-10)


def test_uncorrected_p0_is_uniform():
    """With no corrections, the uncorrected channel outputs uniform bits."""
    n, depth = 3, 3
    theta = RNG.uniform(0, 2 * np.pi, size=(n, depth))
    params = ModelParams(n, depth, theta, np.full((n, depth), -np.inf))
    probs = models.exact_distribution(ModelKind.UNCORRECTED, params)
    tv = total_variation(uniform(n), DiscreteDistribution(n, probs))
    assert tv < 1e-6


def test_corrected_p0_not_uniform():
    n, depth = 3, 3
    theta = np.full((n, depth), 0.4)
    params = ModelParams(n, depth, theta, np.full((n, depth), -np.inf))
    probs = models.exact_distribution(ModelKind.CORRECTED, params)
    tv = total_variation(uniform(n), DiscreteDistribution(n, probs))
    assert tv > 1e-3


def test_exact_distribution_normalized_and_matches_manual_mixture():
    n, depth = 3, 2
    params = random_params(n, depth, RNG)
    probs = models.exact_distribution(ModelKind.CORRECTED, params)
    assert abs(probs.sum() - 1.0) < 1e-10
    # manual enumeration over all masks
    q = models.mask_probabilities(params)
    manual = np.zeros(1 << n)
    for m in range(1 << (n * depth)):
        mask = np.array(
            [[(m >> (i * depth + j)) & 1 for j in range(depth)] for i in range(n)],
            dtype=np.uint8,
        )
        w = np.prod(np.where(mask == 1, q, 1 - q))
        manual += w * models.run_with_mask(params, mask, ModelKind.CORRECTED).probabilities()
    assert np.allclose(probs, manual, atol=1e-10)


def test_monte_carlo_distribution_approaches_exact():
    params = random_params(3, 2, RNG)
    exact = models.exact_distribution(ModelKind.UNCORRECTED, params)
    mc = models.exact_distribution(
        ModelKind.UNCORRECTED, params, branch_budget=4000, rng=np.random.default_rng(0)
    )
    assert abs(mc.sum() - 1.0) < 1e-10
    assert np.max(np.abs(mc - exact)) < 0.05


def test_sample_model_deterministic_and_matches_exact():
    params = random_params(3, 2, RNG)
    for kind in (ModelKind.UNITARY, ModelKind.CORRECTED, ModelKind.UNCORRECTED):
        a = models.sample_model(kind, params, 5000, np.random.default_rng(3))
        b = models.sample_model(kind, params, 5000, np.random.default_rng(3))
        assert np.array_equal(a, b)
        exact = models.exact_distribution(kind, params)
        freq = np.bincount(a, minlength=8) / 5000
        sigma = np.sqrt(exact * (1 - exact) / 5000)
        assert np.all(np.abs(freq - exact) < 4 * sigma + 1e-3)


def test_unitary_rejects_mask():
    params = random_params(3, 1, RNG)
    with pytest.raises(ValueError):
        models.run_with_mask(params, np.zeros((3, 1), dtype=np.uint8), ModelKind.UNITARY)


def test_random_target_ranges():
    rng = np.random.default_rng(8)
    t = models.random_target(ModelKind.CORRECTED, 4, 3, rng)
    assert np.all((t.theta >= 0.8) & (t.theta <= 1.0))
    assert np.all((t.p >= 0.8) & (t.p <= 1.0))
