"""Reconstruct fractional Brownian motion from sparse random samples.

The spectrum of an fBm path decays as a power of frequency, so the path is
compressible in the DFT basis. Given samples at random positions, the full
path is recovered by basis pursuit on the spectrum or by minimising the
spectrum's total variation.
"""

from .analysis import dominant_fraction, reconstruction_sweep, snr_db, sparsity_sweep
from .core import (
    ComplexSignal,
    HurstParameter,
    QualityReport,
    SampleMask,
    SolverConfig,
    SparsityReport,
    Spectrum,
    SubsampledSignal,
    ValidationError,
)
from .fbm import FbmSpec, fbm_covariance, synthesize_fbm, theoretical_amplitude
from .sampling import measure, measure_adjoint, random_mask, subsample
from .solver import ReconstructionResult, reconstruct_time_domain, soft_threshold, solve_bp, solve_tv, tv_norm
from .transform import coherence, dft_forward, dft_inverse, sufficient_sample_bound

__version__ = "0.1.0"

__all__ = [
    "ComplexSignal",
    "Spectrum",
    "HurstParameter",
    "SampleMask",
    "SubsampledSignal",
    "SolverConfig",
    "QualityReport",
    "SparsityReport",
    "ValidationError",
    "FbmSpec",
    "theoretical_amplitude",
    "synthesize_fbm",
    "fbm_covariance",
    "dft_forward",
    "dft_inverse",
    "coherence",
    "sufficient_sample_bound",
    "random_mask",
    "subsample",
    "measure",
    "measure_adjoint",
    "soft_threshold",
    "tv_norm",
    "solve_bp",
    "solve_tv",
    "reconstruct_time_domain",
    "ReconstructionResult",
    "snr_db",
    "dominant_fraction",
    "sparsity_sweep",
    "reconstruction_sweep",
]
