"""Chernoff's distribution: the law of sup argmax {W(t) - c t^2}.

The density is ``f(t) = g_c(t) g_c(-t) / 2`` where g_c has Fourier
transform ``2^(1/3) c^(-1/3) / Ai(i (2c^2)^(-1/3) lam)``.  The package
evaluates Ai in the complex plane, inverts that transform, builds the
density, CDF and quantiles, checks log-concavity numerically, and provides
samplers including a Brownian-motion oracle.
"""

from .airy import AiryConstants, ai, ai_hadamard, ai_prime, airy_constants, airy_pair, airy_zero, airy_zeros
from .distribution import (ChernoffDist, DiagnosticsReport, TransportReport, correlation_inequality,
                           pf2_check, pf2_random_min, scaling_check, sigma0, strong_lc_profile,
                           transport_map, w)
from .errors import ChernoffError, ConvergenceError, DomainError, IllConditionedError, PrecisionError
from .gaussfact import GaussFactorValue, factorization_residual_scan, g_normal
from .gfunc import GParams, QuadratureConfig, g, g_deriv, g_derivs, gtilde_cdf, v
from .hypoexp import (GTildeRep, HypoExpRates, RngSeed, harrison_pdf, sample_chernoff, sample_gtilde,
                      sample_hypoexp, simulate_argmax, vm_convexity_probe)

__version__ = "0.1.0"

__all__ = [
    "AiryConstants", "ai", "ai_prime", "airy_pair", "airy_constants", "airy_zero", "airy_zeros",
    "ai_hadamard", "ChernoffDist", "DiagnosticsReport", "TransportReport", "correlation_inequality",
    "pf2_check", "pf2_random_min", "scaling_check", "sigma0", "strong_lc_profile", "transport_map",
    "w", "ChernoffError", "ConvergenceError", "DomainError", "IllConditionedError", "PrecisionError",
    "GaussFactorValue", "factorization_residual_scan", "g_normal", "GParams", "QuadratureConfig",
    "g", "g_deriv", "g_derivs", "gtilde_cdf", "v", "GTildeRep", "HypoExpRates", "RngSeed",
    "harrison_pdf", "sample_chernoff", "sample_gtilde", "sample_hypoexp", "simulate_argmax",
    "vm_convexity_probe",
]
