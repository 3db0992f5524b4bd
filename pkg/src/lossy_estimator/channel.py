"""Pure-loss channel physics for Schroedinger-cat probes.

Two pictures live here side by side:

* the two-level (cat-qubit) picture, where ``{|alpha>, |-alpha>}`` is treated
  as an orthonormal basis and a loss channel of decay rate ``eta`` acting for
  time ``tau`` multiplies every basis coherence by the decoherence factor
  ``chi = exp(-2 |alpha|^2 eta tau)``;

* an exact picture built from sums of coherent-state dyads
  ``c |a><b|``, which evolve in closed form under pure loss and never assume
  orthogonality. The exact picture is the oracle that quantifies how good the
  two-level picture is.

Two-mode matrices are indexed row-major as (mode1, mode2) with per-mode basis
order (first basis vector, second basis vector): for channel outputs that is
the time-varying pair (|alpha t>, |-alpha t>), for the abstract Schmidt input
it is (|phi>, |psi>).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DegenerateFrame, InvalidDimension

GRAM_EIGENVALUE_FLOOR = 1e-12


@dataclass(frozen=True)
class ChannelParams:
    """Physical knobs of one lossy channel.

    Attributes:
        eta: energy decay rate (1/time), >= 0 (0 gives the identity channel).
        tau: interaction time, >= 0.
        alpha: probe amplitude modulus |alpha|, > 0.
    """

    eta: float
    tau: float
    alpha: float

    def __post_init__(self):
        for name in ("eta", "tau", "alpha"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.eta < 0:
            raise ValueError(f"eta must be >= 0, got {self.eta!r}")
        if self.tau < 0:
            raise ValueError(f"tau must be >= 0, got {self.tau!r}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha!r}")

    @property
    def t(self) -> float:
        """Amplitude survival factor exp(-eta tau / 2), in (0, 1]."""
        return math.exp(-0.5 * self.eta * self.tau)

    @property
    def chi(self) -> float:
        """Cat-coherence decoherence factor exp(-2 |alpha|^2 eta tau)."""
        return math.exp(-2.0 * self.alpha**2 * self.eta * self.tau)


@dataclass(frozen=True)
class SchmidtInput:
    """Two-mode probe sqrt(gamma)|phi phi> + sqrt(1-gamma)|psi psi>.

    The basis pair is |phi> = sin(theta)|alpha> + cos(theta)|-alpha> and
    |psi> = cos(theta)|alpha> - sin(theta)|-alpha>; gamma = 1/2 is maximally
    entangled, gamma in {0, 1} is a product state.
    """

    gamma: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.gamma) and math.isfinite(self.theta)):
            raise ValueError("gamma and theta must be finite")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma!r}")


def coherent_overlap(a: complex, b: complex) -> complex:
    """<a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)."""
    a = complex(a)
    b = complex(b)
    return complex(np.exp(-0.5 * abs(a) ** 2 - 0.5 * abs(b) ** 2 + np.conj(a) * b))


@dataclass(frozen=True)
class CoherentDyadSum:
    """Operator sum_k c_k |a_k><b_k| over (multi-mode) coherent amplitudes.

    ``terms`` holds (coefficient, left amplitudes, right amplitudes) triples;
    the amplitude tuples have one entry per bosonic mode. The representation
    is exact: no basis truncation and no orthogonality assumption.
    """

    terms: tuple[tuple[complex, tuple[complex, ...], tuple[complex, ...]], ...]

    def __post_init__(self):
        norm = []
        modes = None
        for coeff, left, right in self.terms:
            left = tuple(complex(x) for x in np.atleast_1d(left))
            right = tuple(complex(x) for x in np.atleast_1d(right))
            if modes is None:
                modes = len(left)
            if len(left) != modes or len(right) != modes:
                raise InvalidDimension("all dyad terms must share one mode count")
            norm.append((complex(coeff), left, right))
        object.__setattr__(self, "terms", tuple(norm))

    @property
    def n_modes(self) -> int:
        return len(self.terms[0][1]) if self.terms else 0

    def trace(self) -> complex:
        """Trace via the overlap formula: tr c|a><b| = c <b|a>."""
        total = 0.0 + 0.0j
        for coeff, left, right in self.terms:
            ov = 1.0 + 0.0j
            for am, bm in zip(left, right):
                ov *= coherent_overlap(bm, am)
            total += coeff * ov
        return total

    def merged(self) -> dict:
        """Coefficients keyed by (left, right) amplitudes, duplicates summed."""
        acc: dict = {}
        for coeff, left, right in self.terms:
            key = (left, right)
            acc[key] = acc.get(key, 0.0 + 0.0j) + coeff
        return acc

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        """True when every term (c, a, b) is matched by (conj(c), b, a)."""
        acc = self.merged()
        scale = max((abs(c) for c in acc.values()), default=0.0)
        for (left, right), coeff in acc.items():
            partner = acc.get((right, left), 0.0 + 0.0j)
            if abs(partner - np.conj(coeff)) > tol * max(1.0, scale):
                return False
        return True


def evolve_dyad(d: CoherentDyadSum, p: ChannelParams, modes=None) -> CoherentDyadSum:
    """Closed-form loss-channel action on every dyad of ``d``.

    Each term c |a><b| on an evolved mode becomes
    ``c <b|a>^(1 - t^2) |a t><b t|`` with ``t = exp(-eta tau / 2)``; the
    power of the overlap is exactly what keeps the total trace constant.
    ``modes`` selects which modes evolve (default: all of them).
    """
    t = p.t
    lam = 1.0 - t * t
    out = []
    for coeff, left, right in d.terms:
        which = range(len(left)) if modes is None else modes
        new_left = list(left)
        new_right = list(right)
        factor = 1.0 + 0.0j
        for m in which:
            a, b = left[m], right[m]
            factor *= np.exp(lam * (-0.5 * abs(a) ** 2 - 0.5 * abs(b) ** 2 + np.conj(b) * a))
            new_left[m] = t * a
            new_right[m] = t * b
        out.append((coeff * factor, tuple(new_left), tuple(new_right)))
    return CoherentDyadSum(tuple(out))


def frame_gram(frame) -> np.ndarray:
    """Gram matrix of a product coherent frame (tuples of per-mode amplitudes)."""
    n = len(frame)
    g = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            ov = 1.0 + 0.0j
            for am, bm in zip(frame[i], frame[j]):
                ov *= coherent_overlap(am, bm)
            g[i, j] = ov
    return g


def gram_sqrt(gram: np.ndarray) -> np.ndarray:
    """Hermitian square root of a Gram matrix (symmetric Loewdin factor)."""
    es = linalg.eigh(gram)
    if float(es.eigenvalues.min()) <= GRAM_EIGENVALUE_FLOOR:
        raise DegenerateFrame(
            f"coherent frame is numerically singular (min Gram eigenvalue "
            f"{es.eigenvalues.min():.3e})"
        )
    v = es.eigenvectors
    return (v * np.sqrt(es.eigenvalues)) @ v.conj().T


def coefficient_matrix(d: CoherentDyadSum, frame) -> np.ndarray:
    """Coefficients of ``d`` on the dyads of ``frame``: d = sum C[i,j] |f_i><f_j|."""
    n = len(frame)
    c = np.zeros((n, n), dtype=complex)

    def slot(amps):
        for i, f in enumerate(frame):
            if all(np.isclose(a, b, rtol=1e-12, atol=1e-300) for a, b in zip(amps, f)):
                return i
        raise InvalidDimension(f"amplitudes {amps!r} not in the given frame")

    for coeff, left, right in d.terms:
        c[slot(left), slot(right)] += coeff
    return c


# --- cat-qubit (two-level) picture -----------------------------------------


def _basis_coefficients(theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Cat-basis coordinates of |phi> and |psi> at angle theta."""
    s, c = math.sin(theta), math.cos(theta)
    return np.array([s, c]), np.array([c, -s])


def _schmidt_cat_vector(s: SchmidtInput) -> np.ndarray:
    """Coordinates of the Schmidt probe in the two-mode cat product basis."""
    v, u = _basis_coefficients(s.theta)
    return math.sqrt(s.gamma) * np.kron(v, v) + math.sqrt(1.0 - s.gamma) * np.kron(u, u)


def _decay_powers(n_modes: int, evolved: tuple[int, ...]) -> np.ndarray:
    """Entrywise count of evolved modes whose basis index differs (0, 1 or 2)."""
    dim = 2**n_modes
    pw = np.zeros((dim, dim))
    for i in range(dim):
        for j in range(dim):
            n = 0
            for m in evolved:
                shift = n_modes - 1 - m
                if (i >> shift) & 1 != (j >> shift) & 1:
                    n += 1
            pw[i, j] = n
    return pw


_POW_SINGLE = _decay_powers(1, (0,))
_POW_MIXED = _decay_powers(2, (0,))
_POW_DOUBLE = _decay_powers(2, (0, 1))


def single_output(theta: float, p: ChannelParams) -> np.ndarray:
    """One cat probe through one loss channel, in the evolved cat basis.

    Returns [[sin^2 t, chi sin t cos t], [chi sin t cos t, cos^2 t]] with
    t = theta: the populations survive, the coherence picks up chi.
    """
    s, c = math.sin(theta), math.cos(theta)
    chi = p.chi
    rho = np.array(
        [[s * s, chi * s * c], [chi * s * c, c * c]],
        dtype=complex,
    )
    return linalg.hermitize(rho)


def schmidt_state(s: SchmidtInput) -> np.ndarray:
    """Input projector of the Schmidt probe in the (phi phi, phi psi, psi phi, psi psi) basis."""
    w = np.zeros(4)
    w[0] = math.sqrt(s.gamma)
    w[3] = math.sqrt(1.0 - s.gamma)
    return np.outer(w, w).astype(complex)


def _composite_output(s: SchmidtInput, p: ChannelParams, powers: np.ndarray) -> np.ndarray:
    w = _schmidt_cat_vector(s)
    rho = np.outer(w, w) * p.chi**powers
    return linalg.hermitize(rho.astype(complex))


def mixed_output(s: SchmidtInput, p: ChannelParams) -> np.ndarray:
    """Loss on mode 1 only (channel (x) identity), in the evolved cat product basis."""
    return _composite_output(s, p, _POW_MIXED)


def double_output(s: SchmidtInput, p: ChannelParams) -> np.ndarray:
    """Loss on both modes (channel (x) channel), in the evolved cat product basis."""
    return _composite_output(s, p, _POW_DOUBLE)


def density_residuals(rho) -> tuple[float, float, float]:
    """(|trace - 1|, Hermiticity residual, minimum eigenvalue) of a state."""
    a = np.asarray(rho, dtype=complex)
    trace_err = abs(float(np.real(np.trace(a))) - 1.0) + abs(float(np.imag(np.trace(a))))
    herm = linalg.hermiticity_residual(a)
    min_eig = float(linalg.eigvalsh(linalg.hermitize(a)).min())
    return trace_err, herm, min_eig


# --- exact oracle -----------------------------------------------------------


def exact_decay_factor(p: ChannelParams) -> float:
    """Exact cat-coherence decay exp(-2 |alpha|^2 (1 - t^2)) of one channel.

    Tends to chi as eta tau -> 0; the gap between the two is the short-time
    error of the chi model, reported by coherence_factor_gap.
    """
    return math.exp(-2.0 * p.alpha**2 * (1.0 - p.t**2))


def coherence_factor_gap(p: ChannelParams) -> float:
    """|exact decay factor - chi|: the finite-time model error of chi."""
    return abs(exact_decay_factor(p) - p.chi)


_KIND_EVOLVED = {"single": (0,), "mixed": (0,), "double": (0, 1)}


def qubit_vs_exact_discrepancy(s: SchmidtInput, p: ChannelParams, kind: str) -> float:
    """Trace distance between the two-level picture and the exact dyad picture.

    Both sides apply the same exact per-dyad decay; what is compared is purely
    the orthonormal-frame idealisation. The exact side evolves the probe as a
    CoherentDyadSum, normalises by the true input trace, and expresses the
    result in the Loewdin-orthogonalised evolved frame; the two-level side
    keeps the frame orthonormal. The gap is dominated by the residual overlap
    exp(-2 |alpha|^2) and shrinks rapidly with |alpha|.
    """
    if kind not in _KIND_EVOLVED:
        raise ValueError(f"kind must be one of {sorted(_KIND_EVOLVED)}, got {kind!r}")
    evolved = _KIND_EVOLVED[kind]
    alpha = p.alpha

    if kind == "single":
        w, _ = _basis_coefficients(s.theta)
        frame_in = [(alpha,), (-alpha,)]
        powers = _POW_SINGLE
    else:
        w = _schmidt_cat_vector(s)
        one_mode = [(alpha,), (-alpha,)]
        frame_in = [(a[0], b[0]) for a in one_mode for b in one_mode]
        powers = _POW_MIXED if kind == "mixed" else _POW_DOUBLE

    coeffs = np.outer(w, w)
    terms = []
    for i, left in enumerate(frame_in):
        for j, right in enumerate(frame_in):
            if coeffs[i, j] != 0.0:
                terms.append((complex(coeffs[i, j]), left, right))
    probe = CoherentDyadSum(tuple(terms))

    input_trace = float(np.real(probe.trace()))
    evolved_sum = evolve_dyad(probe, p, modes=evolved)

    t = p.t
    frame_out = [
        tuple(t * a if m in evolved else a for m, a in enumerate(slot)) for slot in frame_in
    ]
    c_exact = coefficient_matrix(evolved_sum, frame_out) / input_trace
    loewdin = gram_sqrt(frame_gram(frame_out))
    exact_state = loewdin @ c_exact @ loewdin

    qubit_state = coeffs * exact_decay_factor(p) ** powers
    return linalg.trace_distance(qubit_state, exact_state)
