"""Spectral and scattering data of indefinite strings with Lebesgue or Alpha tails."""
from .approximation import ApproximationSequence, density_positivity, truncate, weyl_convergence
from .camassa_holm import (CHProfile, CHSpectrum, CHTransformResult, ch_spectrum, ch_transform,
                           ch_weyl_m)
from .model import (AtomicMeasure, MobiusNormalization, PiecewiseConstantFn, SpecError,
                    StringSpec, Tail, coefficient_functionals, denormalize, normalize, validate)
from .ode import (FundamentalState, apply_jump, fundamental_system, propagate_free,
                  taylor_at_zero)
from .scattering import (PoleError, ScatteringValue, SpectralSample, branch_k, jost_at_zero,
                         scattering_ab, spectral_density, weyl_m, zhukovsky, zhukovsky_inverse)
from .spectral import (GapSpectrum, InterlacingError, QuadratureError, TraceReport,
                       a_taylor_checks, a_zeros, asymptotic_type, gap_eigenvalues, gap_spectrum,
                       lieb_thirring_check, reconstruct_a, trace_formula_lebesgue,
                       trace_formulas_alpha)

__all__ = [
    "a_taylor_checks", "a_zeros", "apply_jump", "ApproximationSequence", "asymptotic_type",
    "AtomicMeasure", "branch_k", "ch_spectrum", "ch_transform", "ch_weyl_m", "CHProfile",
    "CHSpectrum", "CHTransformResult", "coefficient_functionals", "denormalize",
    "density_positivity", "fundamental_system", "FundamentalState", "gap_eigenvalues",
    "gap_spectrum", "GapSpectrum", "InterlacingError", "jost_at_zero", "lieb_thirring_check",
    "MobiusNormalization", "normalize", "PiecewiseConstantFn", "PoleError", "propagate_free",
    "QuadratureError", "reconstruct_a", "scattering_ab", "ScatteringValue", "SpecError",
    "spectral_density", "SpectralSample", "StringSpec", "Tail", "taylor_at_zero",
    "trace_formula_lebesgue", "trace_formulas_alpha", "TraceReport", "truncate", "validate",
    "weyl_convergence", "weyl_m", "zhukovsky", "zhukovsky_inverse",
]

__version__ = "0.1.0"
