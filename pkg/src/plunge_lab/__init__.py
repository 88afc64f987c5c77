"""Numerical laboratory for the eigenvalue plunge of time-frequency localization.

Computes reference eigenvalues of the interval localization operator via a
Nystrom discretization of the sinc kernel, builds the constructive disk
packing of the unit square, realizes the associated system of time-frequency
shifted Hermite functions, evaluates every explicit bound constant, and
certifies eigenvalue lower bounds through a generalized Rayleigh pencil.
"""

from .numerics import (
    GramSingularError,
    LogMagnitude,
    NumericsError,
    QuadratureRule,
    SymMatrix,
    gauss_legendre_rule,
    hermite_block,
    hermitian_embed,
    pencil_eigen_min,
    symmetric_eigen,
)
from .prolate import (
    EigenSpectrum,
    plunge_count,
    prolate_spectrum,
    sinc_kernel_value,
    trace_defect,
)
from .packing import (
    Disk,
    Packing,
    PackingBudgetError,
    SquareClassification,
    classify_squares,
    packing_from_disks,
    packing_stats,
    covering_packing,
)
from .fock import (
    ConventionError,
    SystemMember,
    SystemSpec,
    bargmann_numeric,
    build_system,
    eval_member,
    eval_member_fourier,
    gram_block,
    gram_entry_oracle,
    gram_matrix,
)
from .bounds import (
    AsymptoticEstimates,
    CertificateConstants,
    MainLowerBound,
    certificate_constants,
    classical_asymptotics,
    karnik_plunge_bound,
    landau_widom,
    main_lower_bound,
    proposition_pair_bound,
    proposition_tail_bound,
)
from .certify import (
    CertificateReport,
    ResidualTriple,
    certify_lower_bound,
    localized_gram,
    residual_norms,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticEstimates",
    "CertificateConstants",
    "CertificateReport",
    "ConventionError",
    "Disk",
    "EigenSpectrum",
    "GramSingularError",
    "LogMagnitude",
    "MainLowerBound",
    "NumericsError",
    "Packing",
    "PackingBudgetError",
    "QuadratureRule",
    "ResidualTriple",
    "SquareClassification",
    "SymMatrix",
    "SystemMember",
    "SystemSpec",
    "bargmann_numeric",
    "build_system",
    "certificate_constants",
    "certify_lower_bound",
    "classical_asymptotics",
    "classify_squares",
    "eval_member",
    "eval_member_fourier",
    "gauss_legendre_rule",
    "gram_block",
    "gram_entry_oracle",
    "gram_matrix",
    "hermite_block",
    "hermitian_embed",
    "karnik_plunge_bound",
    "landau_widom",
    "localized_gram",
    "main_lower_bound",
    "packing_from_disks",
    "packing_stats",
    "covering_packing",
    "pencil_eigen_min",
    "plunge_count",
    "prolate_spectrum",
    "proposition_pair_bound",
    "proposition_tail_bound",
    "residual_norms",
    "sinc_kernel_value",
    "symmetric_eigen",
    "trace_defect",
]
