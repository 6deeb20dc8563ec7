"""Basis-expansion pairings of tempered distributions.

The package expands distributions in the harmonic-oscillator eigenfunction
basis, forms the pairing  sum_n conj(F[e_n]) G[e_n],  classifies the series
(absolutely convergent, convergent, Abel-summable, divergent, zero by
parity, or inconclusive), and evaluates it under the appropriate summation
method at configurable precision.
"""

from .distributions import (
    CosWave,
    DeltaDeriv,
    Distribution,
    ExpReal,
    L2Sample,
    LinearCombo,
    Monomial,
    NormalizedDeltaDeriv,
    NormalizedMonomial,
    SinWave,
    UnsupportedActionError,
    coeff,
    coeff_exact,
    coeff_sequence,
    derivative,
    multiply_by_x,
    parity,
    zero_distribution,
)
from .eproduct import (
    ABEL_SUMMABLE,
    ABSOLUTELY_CONVERGENT,
    CONVERGENT,
    DIVERGENT,
    INCONCLUSIVE,
    ZERO_BY_PARITY,
    ConfigError,
    EProductResult,
    SummationConfig,
    TermSource,
    abel_sum,
    classify_and_sum,
    classify_series,
    pair_partial_sums_exact,
    pair_term_exact,
    partial_sums,
    phi_phi_product,
    phi_psi_product,
    psi_psi_product,
    raabe_test,
    series_row_source,
    series_term,
)
from .exact import ComplexRational, ExactTerm, IncompatibleTermError, SqrtTerm
from .hermite import (
    eigenfunction_at_zero,
    eigenfunction_derivative_at_zero,
    eigenfunction_eval,
    eigenfunction_kernel,
    hermite_eval,
    mehler_kernel,
)
from .cli import canonical_text, operator_text, parse_distribution, parse_operator
from .operators import (
    AdjointCheckReport,
    InconclusivePairingError,
    OperatorExpr,
    adjoint_check,
    adjoint_defect,
    apply_operator,
)
from .precision import DEFAULT_DPS

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "DEFAULT_DPS",
    "CosWave",
    "DeltaDeriv",
    "Distribution",
    "ExpReal",
    "L2Sample",
    "LinearCombo",
    "Monomial",
    "NormalizedDeltaDeriv",
    "NormalizedMonomial",
    "SinWave",
    "UnsupportedActionError",
    "coeff",
    "coeff_exact",
    "coeff_sequence",
    "derivative",
    "multiply_by_x",
    "parity",
    "zero_distribution",
    "ABEL_SUMMABLE",
    "ABSOLUTELY_CONVERGENT",
    "CONVERGENT",
    "DIVERGENT",
    "INCONCLUSIVE",
    "ZERO_BY_PARITY",
    "ConfigError",
    "EProductResult",
    "SummationConfig",
    "TermSource",
    "abel_sum",
    "classify_and_sum",
    "classify_series",
    "pair_partial_sums_exact",
    "pair_term_exact",
    "partial_sums",
    "phi_phi_product",
    "phi_psi_product",
    "psi_psi_product",
    "raabe_test",
    "series_row_source",
    "series_term",
    "ComplexRational",
    "ExactTerm",
    "IncompatibleTermError",
    "SqrtTerm",
    "eigenfunction_at_zero",
    "eigenfunction_derivative_at_zero",
    "eigenfunction_eval",
    "eigenfunction_kernel",
    "hermite_eval",
    "mehler_kernel",
    "canonical_text",
    "operator_text",
    "parse_distribution",
    "parse_operator",
    "AdjointCheckReport",
    "InconclusivePairingError",
    "OperatorExpr",
    "adjoint_check",
    "adjoint_defect",
    "apply_operator",
]
