"""Cat-state probes of bosonic pure-loss channels.

Library layout:
    linalg   -- dense complex 2x2/4x4 kernel (Kronecker, partial trace, Jacobi eigh)
    channel  -- channel physics: cat-qubit outputs and the exact dyad oracle
    bayes    -- covariant-measurement optimality and joint-projector probabilities
    fisher   -- SLD Fisher information (numeric pipeline plus closed-form catalog)
    report   -- deterministic CSV/JSON emission and figure rendering
    cli      -- the ``lossy-estimator`` command-line front end
"""

from .bayes import (
    JointMeasurementResult,
    OptimalityReport,
    gap_eigenvalues,
    joint_probability,
    optimality_scan,
    povm_density,
    risk_operator,
)
from .channel import (
    ChannelParams,
    CoherentDyadSum,
    SchmidtInput,
    coherent_overlap,
    double_output,
    evolve_dyad,
    mixed_output,
    qubit_vs_exact_discrepancy,
    schmidt_state,
    single_output,
)
from .fisher import (
    DensityFamily,
    FisherReport,
    closed_form_j,
    d_rho_d_eta,
    fisher_j,
    fisher_report,
    sld_solve,
    sweep_j,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams",
    "CoherentDyadSum",
    "DensityFamily",
    "FisherReport",
    "JointMeasurementResult",
    "OptimalityReport",
    "SchmidtInput",
    "closed_form_j",
    "coherent_overlap",
    "d_rho_d_eta",
    "double_output",
    "evolve_dyad",
    "fisher_j",
    "fisher_report",
    "gap_eigenvalues",
    "joint_probability",
    "mixed_output",
    "optimality_scan",
    "povm_density",
    "qubit_vs_exact_discrepancy",
    "risk_operator",
    "schmidt_state",
    "single_output",
    "sld_solve",
    "sweep_j",
    "__version__",
]
