"""Random sample masks and the matrix-free partial-DFT measurement operator.

The measurement operator is ``A = Phi Psi``: ``Psi`` is the inverse unitary
DFT (spectrum -> signal) and ``Phi`` keeps the masked rows. Its rows are
orthonormal, so ``A A^H = I`` on the measurement space.
"""

from __future__ import annotations

import numpy as np

from .core import (
    SampleMask,
    Spectrum,
    SubsampledSignal,
    ValidationError,
    rng_stream,
    to_array,
)

__all__ = ["random_mask", "subsample", "scatter", "measure", "measure_adjoint"]

MASK_STREAM = 1


def random_mask(n: int, factor: int, seed: int) -> SampleMask:
    """Choose ``floor(n / factor)`` distinct positions uniformly at random.

    A partial Fisher-Yates shuffle over ``range(n)`` driven by stream
    ``(1,)`` of ``seed``; the first M slots of the shuffled array are kept
    and sorted.
    """
    if int(n) != n or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    if int(factor) != factor or not (1 <= factor <= n):
        raise ValidationError(f"subsampling factor must be an integer in [1, {n}], got {factor!r}")
    n, factor = int(n), int(factor)
    m = n // factor
    rng = rng_stream(seed, MASK_STREAM)
    pool = np.arange(n)
    # j_i uniform on [i, n) for i < m
    picks = rng.integers(np.arange(m), n)
    for i, j in enumerate(picks):
        pool[i], pool[j] = pool[j], pool[i]
    return SampleMask(n, np.sort(pool[:m]))


def subsample(f, mask: SampleMask) -> SubsampledSignal:
    values = to_array(f)
    if values.size != mask.n:
        raise ValidationError(f"signal length {values.size} does not match mask length {mask.n}")
    return SubsampledSignal(mask, values[mask.indices])


def scatter(samples: SubsampledSignal) -> np.ndarray:
    """Zero-filled length-n vector carrying ``samples`` at their positions."""
    out = np.zeros(samples.n, dtype=np.complex128)
    out[samples.mask.indices] = samples.values
    return out


def measure(F, mask: SampleMask) -> SubsampledSignal:
    """Apply ``A``: inverse-transform the spectrum, then gather the masked rows."""
    coeffs = to_array(F)
    if coeffs.size != mask.n:
        raise ValidationError(f"spectrum length {coeffs.size} does not match mask length {mask.n}")
    return SubsampledSignal(mask, np.fft.ifft(coeffs, norm="ortho")[mask.indices])


def measure_adjoint(y: SubsampledSignal) -> Spectrum:
    """Apply ``A^H``: scatter into zeros, then forward-transform."""
    return Spectrum(np.fft.fft(scatter(y), norm="ortho"))

