"""Target distributions, divergences, and the sample-file format."""
import numpy as np
import pytest

from vmbqc import targets


def test_uniform():
    u = targets.uniform(4)
    assert np.allclose(u.probs, 1 / 16)


def test_double_gaussian_shape():
    d = targets.default_double_gaussian(5)
    probs = d.probs
    assert abs(probs.sum() - 1.0) < 1e-12
    # two modes at 2^N/4 and 3*2^N/4
    assert probs[8] > probs[0] and probs[8] > probs[16]
    assert probs[24] > probs[16] and probs[24] > probs[31]
    p1 = probs[np.argmax(probs[:16])]
    p2 = probs[16 + np.argmax(probs[16:])]
    assert abs(p1 - p2) < 1e-12  # symmetric peaks


def test_distribution_validates_normalization():
    with pytest.raises(ValueError):
        targets.DiscreteDistribution(2, np.array([0.5, 0.5, 0.5, 0.5]))


def test_kl_uniform_vs_point_mass():
    """KL(uniform || delta) is +inf; KL(uniform || uniform) is 0."""
    u = targets.uniform(3)
    assert targets.kl_divergence(u, u) == 0.0
    delta = np.zeros(8)
    delta[3] = 1.0
    assert targets.kl_divergence(u, targets.DiscreteDistribution(3, delta)) == np.inf


def test_kl_uniform_vs_half_support_analytic():
    """Uniform on all vs uniform on half the outcomes: KL = ln 2 exactly."""
    u = targets.uniform(3)
    half = np.zeros(8)
    half[:4] = 0.25
    got = targets.kl_divergence(targets.DiscreteDistribution(3, half), u)
    assert abs(got - np.log(2)) < 1e-12


def test_total_variation():
    u = targets.uniform(2)
    delta = np.zeros(4)
    delta[0] = 1.0
    d = targets.DiscreteDistribution(2, delta)
    assert abs(targets.total_variation(u, d) - 0.75) < 1e-12
    assert targets.total_variation(u, u) == 0.0


def test_draw_deterministic_and_empirical_roundtrip():
    dist = targets.default_double_gaussian(4)
    a = targets.draw(dist, 2000, np.random.default_rng(1))
    b = targets.draw(dist, 2000, np.random.default_rng(1))
    assert np.array_equal(a.values, b.values)
    emp = targets.empirical(a)
    assert abs(emp.probs.sum() - 1.0) < 1e-12
    assert targets.total_variation(emp, dist) < 0.1


def test_sample_file_roundtrip(tmp_path):
    dist = targets.uniform(5)
    s = targets.draw(dist, 100, np.random.default_rng(0))
    path = tmp_path / "samples.txt"
    targets.save_samples(path, s)
    loaded = targets.load_samples(path)
    assert loaded.n_bits == 5
    assert np.array_equal(loaded.values, s.values)
    text = path.read_text().splitlines()
    assert text[0] == "#n_bits=5"
    assert set(text[1]) <= {"0", "1"} and len(text[1]) == 5
