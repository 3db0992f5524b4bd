"""SLD Fisher information of loss-channel outputs.

The estimated parameter is the decay rate eta throughout; every output state
depends on eta only through chi = exp(-2 |alpha|^2 eta tau), so analytic
derivatives are chain rules through chi, and the chi-parameterised information
J_chi = J_eta / (d chi / d eta)^2 is reported alongside J_eta.

The numeric pipeline solves d rho = (L rho + rho L) / 2 in the eigenbasis of
rho, zero-fills L on the kernel block (those entries are unconstrained and do
not contribute), and evaluates J = Tr rho L^2 there. Closed forms exist for a
catalog of special cases and serve as the independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import linalg
from .channel import (
    _POW_DOUBLE,
    _POW_MIXED,
    ChannelParams,
    SchmidtInput,
    _schmidt_cat_vector,
    double_output,
    mixed_output,
    single_output,
)
from .errors import DegenerateParameter, InvalidDimension, UnsupportedDerivative

KINDS = ("single", "mixed", "double")

# chi = 1 makes every J formula 0/0: refuse rather than extrapolate.
DEGENERACY_FLOOR = 1e-12
# Eigenvalue pairs with p_i + p_j at or below this fraction of the largest
# eigenvalue form the kernel block of the SLD solve.
KERNEL_FRACTION = 1e-12
KERNEL_DERIVATIVE_TOLERANCE = 1e-9
ANGLE_TOLERANCE = 1e-12
FINITE_DIFFERENCE_SCALE = 1e-6


@dataclass(frozen=True)
class DensityFamily:
    """One-parameter family eta -> rho(eta) of channel outputs.

    ``kind`` picks the channel ('single', 'mixed' or 'double'); ``probe``
    carries (gamma, theta), of which single channels use only theta.
    """

    kind: str
    probe: SchmidtInput
    params: ChannelParams

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")

    def state_at(self, eta: float) -> np.ndarray:
        p = ChannelParams(eta=eta, tau=self.params.tau, alpha=self.params.alpha)
        if self.kind == "single":
            return single_output(self.probe.theta, p)
        if self.kind == "mixed":
            return mixed_output(self.probe, p)
        return double_output(self.probe, p)

    def state(self) -> np.ndarray:
        return self.state_at(self.params.eta)


AGREEMENT_RTOL = 1e-8


@dataclass(frozen=True)
class FisherReport:
    """Numeric Fisher information with its cross-checks.

    Attributes:
        j_numeric: Tr rho L^2 from the eigenbasis SLD solve (units time^2).
        j_closed_form: cataloged closed-form value, or None outside the catalog.
        j_chi: the same information for chi as the parameter.
        sld_residual: ||P (d rho - (L rho + rho L)/2) P||_F on the support.
        derivative_method: 'analytic' or 'finite-difference'.
        kernel_rank: number of rho eigenvalues below the kernel threshold.
        agrees: numeric-vs-closed-form verdict at 1e-8 relative; None off
            the catalog.
    """

    j_numeric: float
    j_closed_form: float | None
    j_chi: float
    sld_residual: float
    derivative_method: str
    kernel_rank: int
    agrees: bool | None = None


def _dchi_deta(p: ChannelParams) -> float:
    return -2.0 * p.alpha**2 * p.tau * p.chi


def require_estimable(p: ChannelParams) -> None:
    """Reject parameters with no decoherence contrast (chi indistinguishable from 1)."""
    if 1.0 - p.chi**2 < DEGENERACY_FLOOR:
        raise DegenerateParameter(
            f"1 - chi^2 = {1.0 - p.chi**2:.3e} is below {DEGENERACY_FLOOR:.0e}; "
            "the estimation problem is singular at eta*tau ~ 0"
        )


def d_rho_d_eta(f: DensityFamily, method: str = "analytic") -> np.ndarray:
    """Derivative of the family's output state with respect to eta.

    Args:
        f: the density family to differentiate.
        method: 'analytic' applies the chain rule through chi (every matrix
            entry is a monomial in chi); 'finite-difference' uses a central
            stencil with step 1e-6 * max(eta, 1).

    Returns:
        A Hermitian, traceless matrix the same shape as the state.
    """
    p = f.params
    if method == "analytic":
        chi = p.chi
        if f.kind == "single":
            s, c = math.sin(f.probe.theta), math.cos(f.probe.theta)
            d_dchi = np.array([[0.0, s * c], [s * c, 0.0]], dtype=complex)
        else:
            powers = _POW_MIXED if f.kind == "mixed" else _POW_DOUBLE
            w = _schmidt_cat_vector(f.probe)
            base = np.outer(w, w).astype(complex)
            d_dchi = base * np.where(powers > 0, powers * chi ** np.maximum(powers - 1, 0), 0.0)
        return linalg.hermitize(_dchi_deta(p) * d_dchi)
    if method == "finite-difference":
        h = FINITE_DIFFERENCE_SCALE * max(p.eta, 1.0)
        return linalg.hermitize((f.state_at(p.eta + h) - f.state_at(p.eta - h)) / (2.0 * h))
    raise ValueError(f"method must be 'analytic' or 'finite-difference', got {method!r}")


def _eigenbasis_pieces(rho, drho):
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    if rho.shape != drho.shape:
        raise InvalidDimension(f"rho {rho.shape} and drho {drho.shape} differ in shape")
    es = linalg.eigh(rho)
    if linalg.hermiticity_residual(drho) > 1e-10 * max(1.0, linalg.frobenius(drho)):
        raise InvalidDimension("drho must be Hermitian")
    probs = es.eigenvalues
    v = es.eigenvectors
    d_eig = v.conj().T @ drho @ v

    threshold = KERNEL_FRACTION * float(probs.max())
    pair_sum = probs[:, None] + probs[None, :]
    supported = pair_sum > threshold

    kernel_block = d_eig[~supported]
    if kernel_block.size and float(np.linalg.norm(kernel_block)) > (
        KERNEL_DERIVATIVE_TOLERANCE * max(1.0, linalg.frobenius(drho))
    ):
        raise UnsupportedDerivative(
            "derivative has weight on the kernel of rho; the family leaves "
            "the support and J is ill-defined"
        )

    l_eig = np.where(supported, 2.0 * d_eig / np.where(supported, pair_sum, 1.0), 0.0)
    kernel_rank = int(np.sum(probs < threshold))
    return probs, v, d_eig, l_eig, supported, pair_sum, kernel_rank


def sld_solve(rho, drho) -> np.ndarray:
    """Hermitian L with d rho = (L rho + rho L) / 2 on the support of rho.

    In the eigenbasis of rho, L[i, j] = 2 d rho[i, j] / (p_i + p_j) wherever
    p_i + p_j clears the kernel threshold; the kernel-kernel block is set to
    zero (it is unconstrained by the equation and does not affect J). Raises
    UnsupportedDerivative when d rho is nonzero on that block.
    """
    _, v, _, l_eig, _, _, _ = _eigenbasis_pieces(rho, drho)
    return linalg.hermitize(v @ l_eig @ v.conj().T)


def fisher_j(rho, drho) -> float:
    """SLD Fisher information Tr rho L^2, evaluated in the eigenbasis.

    Equals sum over supported pairs of 2 |d rho[i, j]|^2 / (p_i + p_j); the
    result is nonnegative by construction.
    """
    _, _, d_eig, _, supported, pair_sum, _ = _eigenbasis_pieces(rho, drho)
    terms = 2.0 * np.abs(d_eig) ** 2 / np.where(supported, pair_sum, 1.0)
    return float(np.sum(terms[supported]))


def sld_residual(rho, drho, l_matrix) -> float:
    """Frobenius norm of the SLD defect projected onto the support of rho."""
    rho = np.asarray(rho, dtype=complex)
    es = linalg.eigh(rho)
    threshold = KERNEL_FRACTION * float(es.eigenvalues.max())
    cols = es.eigenvectors[:, es.eigenvalues >= threshold]
    proj = cols @ cols.conj().T
    defect = drho - 0.5 * (l_matrix @ rho + rho @ l_matrix)
    return linalg.frobenius(proj @ defect @ proj)


def closed_form_j(f: DensityFamily) -> float | None:
    """Cataloged closed-form J for the special angles, or None elsewhere.

    At the balanced angle (|sin 2 theta| = 1): single and mixed channels give
    4 a^4 tau^2 chi^2 / (1 - chi^2) for every gamma; the double channel gives
    twice that at gamma in {0, 1} and 16 a^4 tau^2 chi^4 / (1 - chi^4) at
    gamma = 1/2. On the coherent axis (sin 2 theta = 0): the single channel
    carries no information; mixed and double give
    16 gamma (1-gamma) a^4 tau^2 chi^2 / (1 - chi^2) and
    64 gamma (1-gamma) a^4 tau^2 chi^4 / (1 - chi^4).
    """
    p = f.params
    require_estimable(p)
    chi = p.chi
    base = p.alpha**4 * p.tau**2
    gamma = f.probe.gamma
    sin2 = math.sin(2.0 * f.probe.theta)
    cos2 = math.cos(2.0 * f.probe.theta)
    balanced = abs(abs(sin2) - 1.0) <= ANGLE_TOLERANCE or abs(cos2) <= ANGLE_TOLERANCE
    coherent_axis = abs(sin2) <= ANGLE_TOLERANCE

    j_single = 4.0 * base * chi**2 / (1.0 - chi**2)
    if f.kind == "single":
        if balanced:
            return j_single
        if coherent_axis:
            return 0.0
        return None
    if f.kind == "mixed":
        if balanced:
            return j_single
        if coherent_axis:
            return 4.0 * gamma * (1.0 - gamma) * j_single
        return None
    if balanced:
        if min(gamma, 1.0 - gamma) <= ANGLE_TOLERANCE:
            return 2.0 * j_single
        if abs(gamma - 0.5) <= ANGLE_TOLERANCE:
            return 16.0 * base * chi**4 / (1.0 - chi**4)
        return None
    if coherent_axis:
        return 64.0 * gamma * (1.0 - gamma) * base * chi**4 / (1.0 - chi**4)
    return None


def printed_form_j(f: DensityFamily) -> float | None:
    """Coherent-axis reference formulas kept verbatim for discrepancy logging.

    These expressions disagree with the numeric pipeline away from
    gamma = 1/2 (for the mixed channel they disagree everywhere); they are
    emitted alongside the numeric values, never asserted against them.
    """
    if abs(math.sin(2.0 * f.probe.theta)) > ANGLE_TOLERANCE or f.kind == "single":
        return None
    p = f.params
    chi = p.chi
    base = p.alpha**4 * p.tau**2
    g = f.probe.gamma
    quad = 8.0 * g * g - 8.0 * g + 1.0
    if f.kind == "mixed":
        denom = 4.0 * g * (1.0 - g) * g**4 + quad * g**2 - (2.0 * g - 1.0) ** 2
        if abs(denom) < 1e-300:
            return None
        return 16.0 * g * (g - 1.0) * chi**4 * base / denom
    denom = 4.0 * g * (1.0 - g) * chi**4 + quad * chi**2 - (2.0 * g - 1.0) ** 2
    if abs(denom) < 1e-300:
        return None
    return 64.0 * g * (g - 1.0) * chi**8 * base / denom


def fisher_report(f: DensityFamily, derivative_method: str = "analytic") -> FisherReport:
    """Full numeric Fisher pipeline for one family, with cross-checks attached."""
    require_estimable(f.params)
    rho = f.state()
    drho = d_rho_d_eta(f, method=derivative_method)
    probs, v, d_eig, l_eig, supported, pair_sum, kernel_rank = _eigenbasis_pieces(rho, drho)
    terms = 2.0 * np.abs(d_eig) ** 2 / np.where(supported, pair_sum, 1.0)
    j = float(np.sum(terms[supported]))
    l_matrix = linalg.hermitize(v @ l_eig @ v.conj().T)
    j_closed = closed_form_j(f)
    agrees = None
    if j_closed is not None:
        agrees = abs(j - j_closed) <= AGREEMENT_RTOL * max(abs(j_closed), abs(j))
    return FisherReport(
        j_numeric=j,
        j_closed_form=j_closed,
        j_chi=j / _dchi_deta(f.params) ** 2,
        sld_residual=sld_residual(rho, drho, l_matrix),
        derivative_method=derivative_method,
        kernel_rank=kernel_rank,
        agrees=agrees,
    )


def sweep_j(template: DensityFamily, gamma_grid, tau_grid) -> list[tuple]:
    """Numeric J over a (gamma, tau) grid, gamma-major, deterministic order.

    Returns rows (gamma, tau, j_numeric, j_closed_form) where the closed form
    entry is None off the catalog. Numeric-domain failures are re-raised with
    the offending grid point named.
    """
    gamma_grid = [float(g) for g in np.atleast_1d(gamma_grid)]
    tau_grid = [float(t) for t in np.atleast_1d(tau_grid)]
    if not gamma_grid or not tau_grid:
        raise ValueError("gamma and tau grids must be nonempty")
    rows = []
    for gamma in gamma_grid:
        for tau in tau_grid:
            family = DensityFamily(
                kind=template.kind,
                probe=SchmidtInput(gamma=gamma, theta=template.probe.theta),
                params=replace(template.params, tau=tau),
            )
            try:
                report = fisher_report(family)
            except (DegenerateParameter, UnsupportedDerivative) as exc:
                raise type(exc)(f"{exc} (at gamma={gamma!r}, tau={tau!r})") from exc
            rows.append((gamma, tau, report.j_numeric, report.j_closed_form))
    return rows
