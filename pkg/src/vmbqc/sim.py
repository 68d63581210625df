"""Dense state-vector simulation for small registers.

Basis convention: qubit q is bit q of the basis index (little-endian).
Bitstring renderings put qubit 0 first, so basis index 1 on two qubits
renders as "10". The rotation exp(i*theta*Z) multiplies the bit-0 amplitude
by e^{i theta} and the bit-1 amplitude by e^{-i theta} (Z eigenvalue +1 on
|0>). Registers are capped at 16 qubits.
"""
from __future__ import annotations

import numpy as np

from .pauli import PauliOperator

MAX_QUBITS = 16
NORM_TOL = 1e-10


class StateVector:
    """2^n complex amplitudes, mutated in place by the apply_* methods."""

    def __init__(self, n: int, amps: np.ndarray | None = None):
        if not 1 <= n <= MAX_QUBITS:
            raise ValueError(f"qubit count {n} outside [1, {MAX_QUBITS}]")
        self.n = n
        if amps is None:
            amps = np.zeros(1 << n, dtype=complex)
            amps[0] = 1.0
        else:
            amps = np.asarray(amps, dtype=complex)
            if amps.shape != (1 << n,):
                raise ValueError(f"expected {1 << n} amplitudes, got {amps.shape}")
        self.amps = amps

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))

    def check_norm(self):
        if abs(self.norm() - 1.0) > NORM_TOL:
            raise AssertionError(f"state norm drifted to {self.norm()}")

    # -- unitaries ---------------------------------------------------------

    def apply_rz(self, site: int, angle: float) -> "StateVector":
        """exp(i*angle*Z) on one site."""
        if not 0 <= site < self.n:
            raise ValueError(f"site {site} out of range")
        a = self.amps.reshape(1 << (self.n - site - 1), 2, 1 << site)
        a[:, 0, :] *= np.exp(1j * angle)
        a[:, 1, :] *= np.exp(-1j * angle)
        return self

    def apply_rz_layer(self, angles: np.ndarray) -> "StateVector":
        """exp(i*angles[q]*Z_q) on every qubit, as one diagonal pass."""
        angles = np.asarray(angles, dtype=float)
        if angles.shape != (self.n,):
            raise ValueError(f"expected {self.n} angles")
        self.amps *= np.exp(1j * (_sign_table(self.n) @ angles))
        return self

    def apply_h(self, site: int) -> "StateVector":
        a = self.amps.reshape(1 << (self.n - site - 1), 2, 1 << site)
        lo, hi = a[:, 0, :].copy(), a[:, 1, :].copy()
        a[:, 0, :] = (lo + hi) / np.sqrt(2.0)
        a[:, 1, :] = (lo - hi) / np.sqrt(2.0)
        return self

    def apply_cz(self, a: int, b: int) -> "StateVector":
        if a == b:
            raise ValueError("CZ needs two distinct qubits")
        idx = np.arange(1 << self.n)
        both = ((idx >> a) & 1) * ((idx >> b) & 1)
        self.amps *= 1.0 - 2.0 * both
        return self

    def apply_cz_ring(self) -> "StateVector":
        """CZ on every neighbor pair (q, q+1 mod n), one diagonal pass."""
        if self.n < 3:
            raise ValueError("ring needs n >= 3")
        self.amps *= _cz_ring_diag(self.n)
        return self

    def apply_cqca_layer(self) -> "StateVector":
        """The fixed Clifford layer: CZ ring, then Hadamard everywhere."""
        self.apply_cz_ring()
        for q in range(self.n):
            self.apply_h(q)
        return self

    def apply_pauli(self, p: PauliOperator) -> "StateVector":
        """Exact action of a Pauli operator, phase included."""
        if p.n != self.n:
            raise ValueError(f"size mismatch: {p.n} vs {self.n}")
        idx = np.arange(1 << self.n)
        # i^f X^x Z^z |y> = i^f (-1)^(z.y) |y ^ x>
        signs = 1.0 - 2.0 * _parity_of(idx & p.z)
        self.amps = (1j ** p.phase) * (signs * self.amps)[idx ^ p.x] if p.x else (
            (1j ** p.phase) * signs * self.amps
        )
        return self

    # -- readout -----------------------------------------------------------

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def sample(self, rng: np.random.Generator, shots: int) -> np.ndarray:
        """i.i.d. Z-basis samples as basis-index integers (inverse CDF)."""
        if shots < 1:
            raise ValueError("shots must be >= 1")
        cdf = np.cumsum(self.probabilities())
        cdf[-1] = 1.0
        return np.searchsorted(cdf, rng.random(shots), side="right").astype(np.int64)


def plus_state(n: int) -> StateVector:
    """|+>^n: uniform amplitudes 2^(-n/2)."""
    return StateVector(n, np.full(1 << n, 2.0 ** (-n / 2), dtype=complex))


def basis_state(n: int, index: int) -> StateVector:
    s = StateVector(n)
    s.amps[0] = 0.0
    s.amps[index] = 1.0
    return s


def bitstring(n: int, index: int) -> str:
    """Render a basis index with qubit 0 leftmost."""
    return "".join(str((index >> q) & 1) for q in range(n))


def index_of(bits: str) -> int:
    """Inverse of :func:`bitstring`."""
    return sum(int(b) << q for q, b in enumerate(bits))


_sign_cache: dict[int, np.ndarray] = {}
_cz_cache: dict[int, np.ndarray] = {}


def _sign_table(n: int) -> np.ndarray:
    """(2^n, n) array of (-1)^bit_q(y): Z_q eigenvalues per basis state."""
    tab = _sign_cache.get(n)
    if tab is None:
        idx = np.arange(1 << n)
        tab = np.stack([1.0 - 2.0 * ((idx >> q) & 1) for q in range(n)], axis=1)
        _sign_cache[n] = tab
    return tab


def _cz_ring_diag(n: int) -> np.ndarray:
    diag = _cz_cache.get(n)
    if diag is None:
        idx = np.arange(1 << n)
        par = np.zeros(1 << n, dtype=np.int64)
        for q in range(n):
            par += ((idx >> q) & 1) * ((idx >> ((q + 1) % n)) & 1)
        diag = (1.0 - 2.0 * (par & 1)).astype(complex)
        _cz_cache[n] = diag
    return diag


def _parity_of(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    out = np.zeros_like(v)
    while np.any(v):
        out ^= v & 1
        v >>= 1
    return out.astype(float)
