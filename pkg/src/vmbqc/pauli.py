"""N-qubit Pauli operators in symplectic (bit-vector) form.

An operator is stored as

    P = i^phase * X^x * Z^z

where ``x`` and ``z`` are length-n bit-vectors packed into Python integers
(qubit ``q`` lives at bit ``q``), the per-qubit factors are ordered with all
X's to the left of all Z's, and ``phase`` is the exponent of ``i`` modulo 4.
Under this convention ``Y = i X Z``, so ``Z * X = iY`` and ``X * Z = -iY``.

All values are immutable; operations return new operators.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_PHASE_STR = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True)
class PauliOperator:
    """Symplectic Pauli: ``i^phase * X^x * Z^z`` on ``n`` qubits."""

    n: int
    x: int
    z: int
    phase: int  # exponent of i, mod 4

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one qubit, got n={self.n}")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise ValueError("bit-vector exceeds qubit count")
        if not 0 <= self.phase < 4:
            object.__setattr__(self, "phase", self.phase % 4)

    def __str__(self):
        letters = []
        for q in range(self.n):
            xq, zq = (self.x >> q) & 1, (self.z >> q) & 1
            letters.append("IXZY"[xq + 2 * zq] if not (xq and zq) else "Y")
        return _PHASE_STR[self.phase] + "".join(letters)


def identity(n: int) -> PauliOperator:
    """All-identity operator with phase +1."""
    return PauliOperator(n, 0, 0, 0)


def single(n: int, site: int, kind: str) -> PauliOperator:
    """Single-site X, Y or Z generator; Y carries phase i so that Y = iXZ."""
    if not 0 <= site < n:
        raise ValueError(f"site {site} out of range for n={n}")
    bit = 1 << site
    if kind == "X":
        return PauliOperator(n, bit, 0, 0)
    if kind == "Z":
        return PauliOperator(n, 0, bit, 0)
    if kind == "Y":
        return PauliOperator(n, bit, bit, 1)
    raise ValueError(f"unknown Pauli kind {kind!r}")


def _parity(v: int) -> int:
    return bin(v).count("1") & 1


def multiply(a: PauliOperator, b: PauliOperator) -> PauliOperator:
    """Product a*b.

    Reordering ``Z^za`` past ``X^xb`` picks up ``(-1)^|za & xb|``, i.e. two
    units of i-phase per overlapping bit.
    """
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    phase = (a.phase + b.phase + 2 * (bin(a.z & b.x).count("1") & 1)) % 4
    return PauliOperator(a.n, a.x ^ b.x, a.z ^ b.z, phase)


def inverse(p: PauliOperator) -> PauliOperator:
    """Inverse (= adjoint) of p."""
    # (i^f X^x Z^z)^-1 = i^-f Z^z X^x = i^{-f + 2|x&z|} X^x Z^z
    phase = (-p.phase + 2 * (bin(p.x & p.z).count("1") & 1)) % 4
    return PauliOperator(p.n, p.x, p.z, phase)


def commutes(a: PauliOperator, b: PauliOperator) -> bool:
    """True iff a and b commute (symplectic inner product is even)."""
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} vs {b.n}")
    return (_parity(a.x & b.z) ^ _parity(a.z & b.x)) == 0


def to_dense(p: PauliOperator) -> np.ndarray:
    """Dense 2^n x 2^n matrix; test-oracle bridge, guarded to n <= 12.

    Qubit 0 is the lowest bit of the basis index, so it is the *last*
    Kronecker factor.
    """
    if p.n > 12:
        raise ValueError("dense form limited to n <= 12")
    m = np.array([[1]], dtype=complex)
    for q in range(p.n - 1, -1, -1):
        xq, zq = (p.x >> q) & 1, (p.z >> q) & 1
        f = _SINGLE["X"] @ _SINGLE["Z"] if xq and zq else _SINGLE["XZ"[zq] if (xq or zq) else "I"]
        m = np.kron(m, f)
    return (1j ** p.phase) * m
