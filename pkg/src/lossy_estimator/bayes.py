"""Bayesian delta-cost optimality of the covariant cat-basis measurement.

The estimated quantity is the basis angle theta of the probe, with a uniform
prior 1/(2 pi) on [0, 2 pi). ``k = 2 gamma - 1`` carries the purity of the
reduced single-mode state (k = 1 for the single channel). The decidable
optimality criterion is the spectrum of the risk gap: the measurement family
is optimal at exactly the angles where its smaller eigenvalue stays
nonnegative for every decoherence factor chi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .channel import ChannelParams, SchmidtInput, double_output, mixed_output

TWO_PI = 2.0 * math.pi
QUADRATURE_NODES = 10_000
POSITIVITY_TOLERANCE = 1e-12

# Maximally entangled projector direction in any real orthonormal product
# basis: (|bb> + |b'b'>)/sqrt(2) has coordinates (1, 0, 0, 1)/sqrt(2).
_PSI = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)


def _check_chi_k(chi: float, k: float) -> None:
    if not 0.0 < chi <= 1.0:
        raise ValueError(f"chi must lie in (0, 1], got {chi!r}")
    if not abs(k) <= 1.0:
        raise ValueError(f"k must lie in [-1, 1], got {k!r}")


def _pointer(theta: float, chi: float, k: float) -> np.ndarray:
    return (
        linalg.IDENTITY_2
        + k * chi * math.sin(2.0 * theta) * linalg.PAULI_X
        - k * math.cos(2.0 * theta) * linalg.PAULI_Z
    )


def povm_density(theta: float, chi: float, k: float = 1.0) -> np.ndarray:
    """Density of the covariant POVM generator with respect to theta.

    Returns (1/2pi) (I + k chi sin(2 theta) sigma_x - k cos(2 theta) sigma_z);
    integrating it over a full period gives the identity.
    """
    _check_chi_k(chi, k)
    return _pointer(theta, chi, k) / TWO_PI


def weighted_state(theta: float, chi: float, k: float = 1.0) -> np.ndarray:
    """Prior-weighted reduced output state W(theta) = rho(theta) / (2 pi)."""
    _check_chi_k(chi, k)
    return _pointer(theta, chi, k) / (2.0 * TWO_PI)


def risk_operator(
    chi: float,
    k: float = 1.0,
    method: str = "closed-form",
    nodes: int = QUADRATURE_NODES,
) -> np.ndarray:
    """Prior-averaged risk operator: the integral of W(theta) dPi(theta).

    ``closed-form`` evaluates (I / 4 pi) [1 + k^2 (chi^2 + 1) / 2].
    ``quadrature`` integrates on a uniform periodic grid, where the composite
    trapezoid rule is exact up to roundoff because the integrand is a low
    order trigonometric polynomial.
    """
    _check_chi_k(chi, k)
    if method == "closed-form":
        return (1.0 + 0.5 * k * k * (chi * chi + 1.0)) / (2.0 * TWO_PI) * linalg.IDENTITY_2
    if method == "quadrature":
        if nodes < 8:
            raise ValueError(f"quadrature needs at least 8 nodes, got {nodes!r}")
        step = TWO_PI / nodes
        total = np.zeros((2, 2), dtype=complex)
        for i in range(nodes):
            theta = i * step
            total += weighted_state(theta, chi, k) @ povm_density(theta, chi, k)
        return total * step
    raise ValueError(f"method must be 'closed-form' or 'quadrature', got {method!r}")


def gap_matrix(theta: float, chi: float, k: float = 1.0) -> np.ndarray:
    """Risk gap (risk operator - W(theta)), assembled from matrices."""
    return risk_operator(chi, k) - weighted_state(theta, chi, k)


def gap_eigenvalues(theta: float, chi: float, k: float = 1.0) -> tuple[float, float]:
    """(lambda_minus, lambda_plus) of the scaled gap 8 pi (risk - W).

    Equals k^2 (chi^2 + 1) -/+ 2 |k| sqrt(cos^2 2theta + chi^2 sin^2 2theta).
    """
    scaled = 4.0 * TWO_PI * gap_matrix(theta, chi, k)
    w = linalg.eigvalsh(scaled)
    return float(w[0]), float(w[-1])


def zero_product_residual(theta: float, chi: float, k: float = 1.0) -> float:
    """Frobenius norm of (risk - W(theta)) dPi(theta).

    The textbook optimality condition asks this product to vanish; for this
    family it is proportional to (1 - chi^2)(I - chi sigma_x) at the optimal
    angles, so the residual is reported rather than asserted.
    """
    return linalg.frobenius(gap_matrix(theta, chi, k) @ povm_density(theta, chi, k))


@dataclass(frozen=True)
class OptimalityReport:
    """Risk-gap spectrum scan over a uniform angle grid."""

    theta_grid: np.ndarray
    chi: float
    k: float
    lambda_minus: np.ndarray
    lambda_plus: np.ndarray
    product_residual: np.ndarray
    positivity_set: np.ndarray


def optimality_scan(chi: float, k: float = 1.0, grid_size: int = 720) -> OptimalityReport:
    """Scan the risk-gap spectrum over theta in [0, 2 pi).

    ``positivity_set`` collects the grid angles where lambda_minus >= -1e-12;
    as chi -> 1 it shrinks to the angles with cos(2 theta) = 0, since
    lambda_minus >= 0 is equivalent to cos^2(2 theta) <= (1 - chi^2) / 4 for
    k = 1. Grid sizes divisible by 8 place pi/4 exactly on the grid.
    """
    _check_chi_k(chi, k)
    if grid_size < 8:
        raise ValueError(f"grid_size must be >= 8, got {grid_size!r}")
    thetas = TWO_PI * np.arange(grid_size) / grid_size
    lam_minus = np.empty(grid_size)
    lam_plus = np.empty(grid_size)
    residual = np.empty(grid_size)
    for i, theta in enumerate(thetas):
        lam_minus[i], lam_plus[i] = gap_eigenvalues(float(theta), chi, k)
        residual[i] = zero_product_residual(float(theta), chi, k)
    keep = lam_minus >= -POSITIVITY_TOLERANCE
    return OptimalityReport(
        theta_grid=thetas,
        chi=chi,
        k=k,
        lambda_minus=lam_minus,
        lambda_plus=lam_plus,
        product_residual=residual,
        positivity_set=thetas[keep].copy(),
    )


@dataclass(frozen=True)
class JointMeasurementResult:
    """Click probabilities of the maximally entangled projector measurement."""

    theta: float
    gamma: float
    p_mixed: float
    p_double: float
    printed_formula_value: float


def printed_joint_formula(gamma: float, theta: float) -> float:
    """Reference closed-form click probability, kept verbatim for comparison.

    Evaluates (1/2) {1 + sqrt(gamma (1-gamma)) [sin^2 t + 2 gamma (sin^4 t +
    cos^4 t)]}. It is independent of chi and disagrees with the direct matrix
    contraction; both numbers are reported side by side so the gap is visible
    in emitted data.
    """
    s2 = math.sin(theta) ** 2
    c2 = math.cos(theta) ** 2
    root = math.sqrt(max(gamma * (1.0 - gamma), 0.0))
    return 0.5 * (1.0 + root * (s2 + 2.0 * gamma * (s2 * s2 + c2 * c2)))


def joint_probability(s: SchmidtInput, p: ChannelParams) -> JointMeasurementResult:
    """Probability of the (|phi phi> + |psi psi>)/sqrt(2) projector clicking.

    p_mixed and p_double contract the assembled 4x4 output states directly;
    printed_formula_value evaluates the chi-free reference expression.
    """
    p_mixed = float(np.real(_PSI @ mixed_output(s, p) @ _PSI))
    p_double = float(np.real(_PSI @ double_output(s, p) @ _PSI))
    return JointMeasurementResult(
        theta=s.theta,
        gamma=s.gamma,
        p_mixed=p_mixed,
        p_double=p_double,
        printed_formula_value=printed_joint_formula(s.gamma, s.theta),
    )
