"""Fourier-synthesis fBm generator and the analytic fBm covariance."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ComplexSignal, HurstParameter, ValidationError, as_hurst, rng_stream

__all__ = [
    "FbmSpec",
    "signed_frequencies",
    "theoretical_amplitude",
    "amplitude_profile",
    "synthesize_fbm",
    "covariance_coefficient",
    "fbm_covariance",
]

SYNTH_STREAM = 0


@dataclass(frozen=True)
class FbmSpec:
    n: int
    h: HurstParameter
    seed: int = 0

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValidationError(f"fBm length must be an integer >= 2, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "h", as_hurst(self.h))
        seed = int(self.seed)
        if seed < 0 or seed >= 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, "seed", seed)


def signed_frequencies(n: int) -> np.ndarray:
    """Signed bin frequencies: ``k`` for ``k <= n/2``, ``k - n`` above."""
    k = np.arange(n)
    return np.where(k <= n // 2, k, k - n)


def theoretical_amplitude(h, n: int, k: int) -> float:
    """Amplitude ``|w_k|**(-(2h+1)/2)`` of bin ``k``; zero at DC."""
    h = as_hurst(h).h
    if int(k) != k or not (0 <= k < n):
        raise ValidationError(f"frequency index {k!r} outside [0, {n})")
    k = int(k)
    if k == 0:
        return 0.0
    w = k if k <= n // 2 else k - n
    return abs(w) ** (-(2.0 * h + 1.0) / 2.0)


def amplitude_profile(h, n: int) -> np.ndarray:
    """Vectorised :func:`theoretical_amplitude` over all ``n`` bins."""
    h = as_hurst(h).h
    w = np.abs(signed_frequencies(n)).astype(np.float64)
    amp = np.zeros(n)
    amp[1:] = w[1:] ** (-(2.0 * h + 1.0) / 2.0)
    return amp


def _hermitian(g: np.ndarray) -> np.ndarray:
    # Average each bin with the conjugate of its mirror; unit variance is kept
    # off the self-mirrored bins, which become real with unit variance.
    mirror = np.conj(np.roll(g[::-1], 1))
    sym = (g + mirror) / math.sqrt(2.0)
    n = g.size
    sym[0] = math.sqrt(2.0) * g[0].real
    if n % 2 == 0:
        sym[n // 2] = math.sqrt(2.0) * g[n // 2].real
    return sym


def synthesize_fbm(spec: FbmSpec, real: bool = False) -> ComplexSignal:
    """Draw one discrete fBm path by spectral synthesis.

    Standard complex Gaussian coefficients are weighted by the power-law
    amplitude of :func:`amplitude_profile`, mapped back with the inverse
    unitary DFT and shifted so the first sample is exactly zero.

    Parameters
    ----------
    spec : FbmSpec
        Length, Hurst parameter and seed. The draw uses stream ``(0,)`` of
        ``spec.seed`` (see :func:`fbmcs.core.rng_stream`).
    real : bool, optional
        Hermitian-symmetrise the coefficients so the path is real valued
        (returned with zero imaginary part).

    Returns
    -------
    ComplexSignal
    """
    n, h = spec.n, spec.h.h
    rng = rng_stream(spec.seed, SYNTH_STREAM)
    g = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / math.sqrt(2.0)
    if real:
        g = _hermitian(g)
    path = np.fft.ifft(g * amplitude_profile(h, n), norm="ortho")
    if real:
        path = path.real.astype(np.complex128)
    path = path - path[0]
    path[0] = 0.0
    return ComplexSignal(path)


def covariance_coefficient(h) -> float:
    """``C_H = Gamma(1 - 2H) cos(pi H) / (pi H)``, equal to 1 at H = 1/2.

    ``cos(pi H)`` is evaluated as ``sin(pi (1/2 - H))`` so the removable
    singularity at H = 1/2 cancels cleanly.
    """
    h = as_hurst(h).h
    if h == 0.5:
        return 1.0
    return math.gamma(1.0 - 2.0 * h) * math.sin(math.pi * (0.5 - h)) / (math.pi * h)


def fbm_covariance(t: float, s: float, h) -> float:
    """``E[B(t) B(s)] = (C_H / 2)(|t|^2H + |s|^2H - |t - s|^2H)``."""
    h = as_hurst(h).h
    two_h = 2.0 * h
    return 0.5 * covariance_coefficient(h) * (
        abs(t) ** two_h + abs(s) ** two_h - abs(t - s) ** two_h
    )
