"""Unitary DFT pair, spike/Fourier coherence and the CS sample-count bound."""

from __future__ import annotations

import math

import numpy as np

from .core import ComplexSignal, SampleMask, Spectrum, ValidationError, to_array

__all__ = ["dft_forward", "dft_inverse", "coherence", "sufficient_sample_bound"]


def dft_forward(f) -> Spectrum:
    """Unitary DFT, ``F[k] = n**-0.5 * sum_t f[t] exp(-2j pi k t / n)``.

    Any length is accepted; pocketfft switches to Bluestein for awkward sizes.
    """
    return Spectrum(np.fft.fft(to_array(f), norm="ortho"))


def dft_inverse(F) -> ComplexSignal:
    """Inverse of :func:`dft_forward`."""
    return ComplexSignal(np.fft.ifft(to_array(F), norm="ortho"))


def coherence(mask: SampleMask) -> float:
    """Coherence between the selected spike rows and the DFT basis.

    Computes ``sqrt(n) * max_{k in mask, j} |<e_k, psi_j>|`` explicitly by
    transforming each selected spike.
    """
    n = mask.n
    spikes = np.zeros((mask.m, n), dtype=np.complex128)
    spikes[np.arange(mask.m), mask.indices] = 1.0
    # <e_k, psi_j> = conj(psi_j[k]); its modulus is |DFT(e_k)[j]|.
    inner = np.fft.fft(spikes, axis=1, norm="ortho")
    return float(math.sqrt(n) * np.max(np.abs(inner)))


def sufficient_sample_bound(mu: float, k_sparsity: int, n: int, c: float = 1.0) -> int:
    """``ceil(c * mu**2 * K * ln(n))`` samples suffice w.h.p. for K-sparse recovery."""
    if not (mu >= 1.0 and math.isfinite(mu)):
        raise ValidationError(f"coherence must be >= 1, got {mu!r}")
    if int(k_sparsity) != k_sparsity or k_sparsity < 1:
        raise ValidationError(f"sparsity must be a positive integer, got {k_sparsity!r}")
    if int(n) != n or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    if not (c > 0 and math.isfinite(c)):
        raise ValidationError(f"constant must be positive, got {c!r}")
    return int(math.ceil(c * mu * mu * k_sparsity * math.log(n)))
