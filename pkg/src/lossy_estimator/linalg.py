"""Dense complex matrix kernel for the 2x2 and 4x4 problems used everywhere else.

Matrices are plain immutable-by-convention ``numpy`` arrays; every routine
returns a fresh array and never mutates its input.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDimension, NoConvergence, NotHermitian

IDENTITY_2 = np.eye(2, dtype=complex)
IDENTITY_4 = np.eye(4, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

# Cyclic Jacobi stops once the off-diagonal Frobenius mass drops below
# OFF_DIAGONAL_FACTOR * ||H||_F; MAX_SWEEPS is generous for 4x4 inputs.
OFF_DIAGONAL_FACTOR = 1e-14
MAX_SWEEPS = 100
HERMITICITY_RTOL = 1e-10


def _as_square(m, name: str = "matrix") -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidDimension(f"{name} must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidDimension(f"{name} contains non-finite entries")
    return a


def frobenius(m) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(m)))


def hermitize(m) -> np.ndarray:
    """Return the Hermitian part (M + M^dagger) / 2."""
    a = np.asarray(m, dtype=complex)
    return (a + a.conj().T) / 2


def hermiticity_residual(m) -> float:
    """Frobenius distance between M and its Hermitian part."""
    a = np.asarray(m, dtype=complex)
    return frobenius(a - a.conj().T)


def kron(a, b) -> np.ndarray:
    """Kronecker product: entry (i*u+k, j*v+l) = a[i,j] * b[k,l]."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def partial_trace(m, keep: int) -> np.ndarray:
    """Trace out one qubit factor of a 4x4 two-mode matrix.

    ``keep=1`` keeps the first tensor factor (sums over the second basis),
    ``keep=2`` keeps the second. The trace is preserved either way.
    """
    a = _as_square(m)
    if a.shape != (4, 4):
        raise InvalidDimension(f"partial_trace expects a 4x4 matrix, got {a.shape}")
    r = a.reshape(2, 2, 2, 2)
    if keep == 1:
        return np.ascontiguousarray(np.einsum("ikjk->ij", r))
    if keep == 2:
        return np.ascontiguousarray(np.einsum("kikj->ij", r))
    raise InvalidDimension(f"keep must be 1 or 2, got {keep!r}")


@dataclass(frozen=True)
class HermitianEigenSystem:
    """Ascending eigenvalues and matching unitary eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eigh(h) -> HermitianEigenSystem:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each rotation zeroes one off-diagonal pair; sweeps repeat until the
    off-diagonal Frobenius mass is below OFF_DIAGONAL_FACTOR * ||H||_F.
    Raises NotHermitian for inputs outside the Hermiticity tolerance and
    NoConvergence if MAX_SWEEPS sweeps do not reach the target.
    """
    a = _as_square(h, "eigh input")
    n = a.shape[0]
    norm = frobenius(a)
    if hermiticity_residual(a) > HERMITICITY_RTOL * max(1.0, norm):
        raise NotHermitian("eigh requires a Hermitian matrix")
    a = hermitize(a)
    v = np.eye(n, dtype=complex)
    if norm == 0.0 or n == 1:
        return HermitianEigenSystem(np.real(np.diag(a)).copy(), v)

    target = OFF_DIAGONAL_FACTOR * norm
    mask = ~np.eye(n, dtype=bool)
    for _ in range(MAX_SWEEPS):
        off = float(np.linalg.norm(a[mask]))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mod = abs(apq)
                if mod == 0.0:
                    continue
                # diag(1, e^{-i phase}) makes the pivot real; the inner
                # rotation (|angle| <= pi/4) then zeroes it and keeps the
                # cyclic sweep provably convergent.
                phase = np.conj(apq) / mod
                double_angle = math.atan2(2.0 * mod, a[p, p].real - a[q, q].real)
                if double_angle > 0.5 * math.pi:
                    double_angle -= math.pi
                angle = 0.5 * double_angle
                c, s = math.cos(angle), math.sin(angle)
                u = np.eye(n, dtype=complex)
                u[p, p] = c
                u[p, q] = -s
                u[q, p] = phase * s
                u[q, q] = phase * c
                a = u.conj().T @ a @ u
                v = v @ u
    else:
        raise NoConvergence(f"Jacobi did not converge within {MAX_SWEEPS} sweeps")

    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return HermitianEigenSystem(w[order].copy(), np.ascontiguousarray(v[:, order]))


def eigvalsh(h) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    return eigh(h).eigenvalues


def trace_distance(a, b) -> float:
    """(1/2) ||a - b||_1 for Hermitian a, b."""
    delta = hermitize(np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex))
    return 0.5 * float(np.sum(np.abs(eigvalsh(delta))))
