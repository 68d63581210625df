"""Symplectic Pauli algebra against dense 2^n x 2^n matrix computations."""
import numpy as np
import pytest

from vmbqc import pauli

RNG = np.random.default_rng(20260826)


def random_pauli(n: int, rng) -> pauli.PauliOperator:
    return pauli.PauliOperator(
        n,
        int(rng.integers(0, 1 << n)),
        int(rng.integers(0, 1 << n)),
        int(rng.integers(0, 4)),
    )


def dense_close(a: np.ndarray, b: np.ndarray, atol=1e-10) -> bool:
    return np.allclose(a, b, atol=atol)


def test_single_site_definitions():
    x = pauli.to_dense(pauli.single(1, 0, "X"))
    z = pauli.to_dense(pauli.single(1, 0, "Z"))
    y = pauli.to_dense(pauli.single(1, 0, "Y"))
    assert dense_close(x, np.array([[0, 1], [1, 0]], dtype=complex))
    assert dense_close(z, np.array([[1, 0], [0, -1]], dtype=complex))
    assert dense_close(y, np.array([[0, -1j], [1j, 0]]))


def test_zx_equals_iy():
    z = pauli.single(1, 0, "Z")
    x = pauli.single(1, 0, "X")
    zx = pauli.multiply(z, x)
    y = pauli.single(1, 0, "Y")
    assert dense_close(pauli.to_dense(zx), 1j * pauli.to_dense(y))


def test_identity_and_inverse():
    for n in (1, 2, 3, 4):
        for _ in range(20):
            p = random_pauli(n, RNG)
            e = pauli.multiply(p, pauli.inverse(p))
            assert e.x == 0 and e.z == 0 and e.phase == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_multiply_matches_dense_randomized(n):
    # part of the randomized algebra oracle: >= 1000 cases across the suite
    for _ in range(125):
        a = random_pauli(n, RNG)
        b = random_pauli(n, RNG)
        ab = pauli.multiply(a, b)
        dense = pauli.to_dense(a) @ pauli.to_dense(b)
        assert dense_close(pauli.to_dense(ab), dense)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_commutes_matches_dense_randomized(n):
    for _ in range(125):
        a = random_pauli(n, RNG)
        b = random_pauli(n, RNG)
        da, db = pauli.to_dense(a), pauli.to_dense(b)
        comm_dense = np.allclose(da @ db, db @ da, atol=1e-10)
        assert pauli.commutes(a, b) == comm_dense


def test_associativity_randomized():
    for _ in range(200):
        n = int(RNG.integers(1, 5))
        a, b, c = (random_pauli(n, RNG) for _ in range(3))
        left = pauli.multiply(pauli.multiply(a, b), c)
        right = pauli.multiply(a, pauli.multiply(b, c))
        assert (left.x, left.z, left.phase) == (right.x, right.z, right.phase)


def test_phase_is_quartic():
    p = pauli.single(3, 1, "Y")
    q = p
    for _ in range(3):
        q = pauli.multiply(q, p)
    # Y^4 = I with no leftover phase
    assert (q.x, q.z, q.phase) == (0, 0, 0)


def test_str_rendering():
    p = pauli.multiply(pauli.single(2, 0, "Z"), pauli.single(2, 0, "X"))
    s = str(p)
    assert "Y" in s
    assert str(pauli.single(2, 1, "X")) == "+IX"


def test_to_dense_rejects_large_n():
    with pytest.raises(ValueError):
        pauli.to_dense(pauli.identity(13))
