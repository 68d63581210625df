"""The Clifford cellular automaton on a ring and its byproduct bookkeeping.

The automaton acts on a ring of n qubits (periodic boundary) and is fixed by
its action on the generators,

    T(Z_i) = X_i
    T(X_i) = X_{i-1} Z_i X_{i+1}      (indices mod n)

It is periodic with period L = n for even n and L = 2n for odd n. For odd n
the periodicity is projective: with exact phase tracking T^L conjugates every
generator to minus itself (T^L is a Y-string up to phase), and signs only
close up after 2L steps. A ``CqcaTable`` therefore precomputes the images
``T^k(Z_i)`` and ``T^k(X_i)`` over the exact period; everything else
(conjugation of arbitrary Paulis, propagated byproduct products, angle-flip
bits) composes these images with exact phase tracking. The sign subtlety is
unobservable downstream: angle-flip bits only probe commutation, and the
end-correction operator enters as a Pauli whose global phase drops out.

Layer/depth indexing: circuits have rotation layers j = 1..D (math
convention); mask arrays are 0-based with entry ``s[i, j-1]`` for site i,
layer j. The propagated byproduct collected from layers 1..m is exposed as
``propagated_byproduct(table, s, upto_layer=m)``; ``m = j-1`` gives the
operator sitting in front of layer j, and ``m = D`` the end-of-circuit
correction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliOperator, commutes, identity, inverse, multiply, single


def period(n: int) -> int:
    """Cycle length of the automaton: n for even n, 2n for odd n."""
    return n if n % 2 == 0 else 2 * n


@dataclass(frozen=True)
class CqcaTable:
    """Precomputed generator images T^k(Z_i), T^k(X_i).

    ``L`` is the projective period (n or 2n); ``exact_period`` (L for even n,
    2L for odd n) is the smallest power at which the images repeat with their
    phases, and is what power reduction actually uses.
    """

    n: int
    L: int
    exact_period: int
    z_images: tuple  # z_images[k][i] = T^k(Z_i), 0 <= k < exact_period
    x_images: tuple  # x_images[k][i] = T^k(X_i)


def _step(p: PauliOperator) -> PauliOperator:
    """One application of the transition rule to an arbitrary Pauli."""
    n = p.n
    out = PauliOperator(n, 0, 0, p.phase)
    # X^x Z^z maps factor-wise: all X images first, then all Z images,
    # matching the storage order of the operand.
    for q in range(n):
        if (p.x >> q) & 1:
            img = PauliOperator(n, (1 << ((q - 1) % n)) | (1 << ((q + 1) % n)), 1 << q, 0)
            out = multiply(out, img)
    for q in range(n):
        if (p.z >> q) & 1:
            out = multiply(out, single(n, q, "X"))
    return out


def build(n: int) -> CqcaTable:
    """Fill the image table by iterating the transition rule.

    n >= 3: on a 2-ring the two neighbor slots coincide and the rule
    degenerates.
    """
    if n < 3:
        raise ValueError(f"ring size must be >= 3, got {n}")
    L = period(n)
    z_rows = [tuple(single(n, i, "Z") for i in range(n))]
    x_rows = [tuple(single(n, i, "X") for i in range(n))]
    for _ in range(2 * L):
        z_rows.append(tuple(_step(p) for p in z_rows[-1]))
        x_rows.append(tuple(_step(p) for p in x_rows[-1]))
    if z_rows[L] == z_rows[0] and x_rows[L] == x_rows[0]:
        exact = L
    elif z_rows[2 * L] == z_rows[0] and x_rows[2 * L] == x_rows[0]:
        exact = 2 * L  # odd n: T^L is a Y-string, signs close up at 2L
    else:
        raise AssertionError(f"automaton on {n} qubits not periodic at {2 * L}")
    # the projective period must hold regardless (bit patterns repeat at L)
    for row_l, row_0 in ((z_rows[L], z_rows[0]), (x_rows[L], x_rows[0])):
        for a, b in zip(row_l, row_0):
            assert (a.x, a.z) == (b.x, b.z)
    return CqcaTable(n, L, exact, tuple(z_rows[:exact]), tuple(x_rows[:exact]))


def conjugate(table: CqcaTable, k: int, p: PauliOperator) -> PauliOperator:
    """T^k p T^-k, with k reduced mod the period."""
    if p.n != table.n:
        raise ValueError(f"size mismatch: {p.n} vs {table.n}")
    k = k % table.exact_period
    zs, xs = table.z_images[k], table.x_images[k]
    out = PauliOperator(p.n, 0, 0, p.phase)
    for q in range(p.n):
        if (p.x >> q) & 1:
            out = multiply(out, xs[q])
    for q in range(p.n):
        if (p.z >> q) & 1:
            out = multiply(out, zs[q])
    return out


def _as_mask(s, n: int, depth: int) -> np.ndarray:
    s = np.asarray(s, dtype=np.uint8)
    if s.shape != (n, depth):
        raise ValueError(f"mask shape {s.shape} != ({n}, {depth})")
    return s


def propagated_byproduct(table: CqcaTable, s, depth: int, upto_layer: int) -> PauliOperator:
    """Product of the byproducts of layers 1..upto_layer, each Z_i propagated
    through T^(D-j+1) to the end of the circuit.

    ``upto_layer = j-1`` yields the operator in front of rotation layer j;
    ``upto_layer = depth`` yields the end-of-circuit correction.
    """
    s = _as_mask(s, table.n, depth)
    if not 0 <= upto_layer <= depth:
        raise ValueError(f"upto_layer {upto_layer} out of range for depth {depth}")
    out = identity(table.n)
    # outer product runs j' = upto_layer..1 left to right, sites high to low
    for j in range(upto_layer, 0, -1):
        imgs = table.z_images[(depth - j + 1) % table.exact_period]
        for i in range(table.n - 1, -1, -1):
            if s[i, j - 1]:
                out = multiply(out, imgs[i])
    return out


def kappa(table: CqcaTable, s, depth: int, i: int, j: int) -> int:
    """Angle-flip bit for the rotation at site i (0-based), layer j (1..D):
    1 iff the propagated byproduct in front of layer j anticommutes with the
    propagated rotation generator T^(D-j+1)(Z_i).
    """
    if not (0 <= i < table.n and 1 <= j <= depth):
        raise ValueError(f"position ({i}, {j}) out of range")
    p = propagated_byproduct(table, s, depth, j - 1)
    gen = table.z_images[(depth - j + 1) % table.exact_period][i]
    return 0 if commutes(p, gen) else 1


def angle_flip_bits(table: CqcaTable, s, depth: int) -> np.ndarray:
    """All kappa bits for one mask as an (n, depth) 0/1 array.

    Same result as calling :func:`kappa` per entry, but accumulates the
    byproduct product incrementally (training hot path).
    """
    s = _as_mask(s, table.n, depth)
    n = table.n
    flips = np.zeros((n, depth), dtype=np.uint8)
    acc = identity(n)  # P_j(s) for the current layer j
    for j in range(1, depth + 1):
        imgs = table.z_images[(depth - j + 1) % table.exact_period]
        for i in range(n):
            flips[i, j - 1] = 0 if commutes(acc, imgs[i]) else 1
        # extend to P_{j+1}: prepend this layer's propagated byproducts
        layer = identity(n)
        for i in range(n - 1, -1, -1):
            if s[i, j - 1]:
                layer = multiply(layer, imgs[i])
        acc = multiply(layer, acc)
    return flips


def image_bit_arrays(table: CqcaTable, depth: int):
    """Symplectic bits of the propagated rotation generators, vectorized.

    Returns (gx, gz) of shape (depth, n, n) with gx[j-1, i, q] the X-bit on
    qubit q of T^(depth-j+1)(Z_i). Feeds the batched mask kernels in
    :mod:`vmbqc.models`.
    """
    n = table.n
    gx = np.zeros((depth, n, n), dtype=np.uint8)
    gz = np.zeros((depth, n, n), dtype=np.uint8)
    for j in range(1, depth + 1):
        imgs = table.z_images[(depth - j + 1) % table.exact_period]
        for i in range(n):
            for q in range(n):
                gx[j - 1, i, q] = (imgs[i].x >> q) & 1
                gz[j - 1, i, q] = (imgs[i].z >> q) & 1
    return gx, gz


def end_correction(table: CqcaTable, s, depth: int) -> PauliOperator:
    """The end-of-circuit correction operator for mask s (all layers)."""
    return propagated_byproduct(table, s, depth, depth)


__all__ = [
    "CqcaTable",
    "angle_flip_bits",
    "build",
    "conjugate",
    "end_correction",
    "image_bit_arrays",
    "kappa",
    "period",
    "propagated_byproduct",
]
