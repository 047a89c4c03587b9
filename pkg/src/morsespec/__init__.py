"""Spectra of the Morse potential on a half-line via zeros of Whittaker functions."""
from .errors import (
    ConvergenceError,
    CorrespondenceViolation,
    DomainError,
    HBViolation,
    InterlacingViolation,
    MonotonicityViolation,
    MorseSpecError,
    PoleError,
    PrecisionLossError,
    ScanExhaustedError,
    StiffnessError,
    TruncationWarning,
)
from .scaled import DEFAULT_PRECISION, PRECISION_LADDER, PrecisionConfig, ScaledValue
from .special import (
    gamma_complex,
    hyp1f1_regularized,
    k_bessel,
    k_bessel_asymptotic_imag,
    whittaker_m,
    whittaker_m_regularized,
    whittaker_w,
    whittaker_w_asymptotic,
    whittaker_w_prime,
)
from .spectrum import (
    CountingReport,
    MorseProblem,
    SpectralZero,
    asymptotic_count,
    counting_report,
    dirichlet_zero_scan,
    eigenvalues_general_alpha,
    exceptional_real_zeros,
    monotonicity_check,
    potential_value,
    weyl_integral,
    z_function,
)

__version__ = "0.1.0"
