"""Shared domain types for fBm compressive-sampling reconstruction.

All containers are immutable: numeric payloads are copied into read-only
numpy arrays at construction so they can be shared freely between threads
or worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ValidationError",
    "ComplexSignal",
    "Spectrum",
    "HurstParameter",
    "SampleMask",
    "SubsampledSignal",
    "SolverConfig",
    "QualityReport",
    "SparsityReport",
    "rng_stream",
]


class ValidationError(ValueError):
    """Raised when an input violates a type invariant or precondition."""


def _frozen_complex(values, what):
    arr = np.array(values, dtype=np.complex128, copy=True)
    if arr.ndim != 1:
        raise ValidationError(f"{what} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValidationError(f"{what} must have at least one element")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} contains non-finite entries")
    arr.setflags(write=False)
    return arr


class _ComplexVector:
    """Common behaviour for the complex vector containers."""

    __slots__ = ()

    def __len__(self):
        return self._data.size

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._data
        return self._data.astype(dtype)

    @property
    def n(self) -> int:
        return self._data.size

    def energy(self) -> float:
        return float(np.vdot(self._data, self._data).real)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return np.array_equal(self._data, other._data)

    def __hash__(self):
        return hash((type(self).__name__, self._data.tobytes()))

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class ComplexSignal(_ComplexVector):
    """A length-n complex time/space-domain signal."""

    __slots__ = ("_data",)

    def __init__(self, values):
        self._data = _frozen_complex(values, "ComplexSignal")

    @property
    def values(self) -> np.ndarray:
        return self._data


class Spectrum(_ComplexVector):
    """Coefficients of a signal under the unitary DFT.

    Index 0 is DC; bins above n/2 hold the negative frequencies k - n.
    """

    __slots__ = ("_data",)

    def __init__(self, coeffs):
        self._data = _frozen_complex(coeffs, "Spectrum")

    @property
    def coeffs(self) -> np.ndarray:
        return self._data


@dataclass(frozen=True)
class HurstParameter:
    h: float

    def __post_init__(self):
        h = float(self.h)
        if not (0.0 < h < 1.0):
            raise ValidationError(f"Hurst parameter must lie in (0, 1), got {self.h!r}")
        object.__setattr__(self, "h", h)

    def __float__(self):
        return self.h


def as_hurst(h) -> HurstParameter:
    return h if isinstance(h, HurstParameter) else HurstParameter(h)


@dataclass(frozen=True, eq=False)
class SampleMask:
    """Sorted positions of the known samples inside a length-n signal.

    Equivalent to the zero-one M x n selection matrix that picks those rows.
    """

    n: int
    indices: np.ndarray

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise ValidationError(f"mask length must be >= 1, got {self.n}")
        idx = np.asarray(self.indices)
        if idx.ndim != 1 or idx.size == 0:
            raise ValidationError("mask needs a non-empty 1-D index list")
        if not np.issubdtype(idx.dtype, np.integer):
            as_int = idx.astype(np.int64)
            if not np.array_equal(as_int, idx):
                raise ValidationError("mask indices must be integers")
            idx = as_int
        idx = idx.astype(np.int64, copy=True)
        if idx[0] < 0 or idx[-1] >= n or np.any(idx < 0) or np.any(idx >= n):
            raise ValidationError(f"mask indices must lie in [0, {n})")
        if np.any(np.diff(idx) <= 0):
            raise ValidationError("mask indices must be strictly increasing (no duplicates)")
        idx.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "indices", idx)

    @property
    def m(self) -> int:
        return int(self.indices.size)

    def complement(self) -> np.ndarray:
        keep = np.ones(self.n, dtype=bool)
        keep[self.indices] = False
        return np.flatnonzero(keep)

    def __eq__(self, other):
        if not isinstance(other, SampleMask):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.indices, other.indices)

    def __hash__(self):
        return hash((self.n, self.indices.tobytes()))


@dataclass(frozen=True, eq=False)
class SubsampledSignal:
    """Known sample values together with the mask that locates them."""

    mask: SampleMask
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.complex128, copy=True).ravel()
        if vals.size != self.mask.m:
            raise ValidationError(
                f"{vals.size} sample values supplied for a mask with {self.mask.m} positions"
            )
        if not np.all(np.isfinite(vals)):
            raise ValidationError("sample values contain non-finite entries")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> int:
        return self.mask.m

    @property
    def n(self) -> int:
        return self.mask.n


@dataclass(frozen=True)
class SolverConfig:
    """Iteration controls for the splitting solvers.

    ``tol_primal`` bounds the relative split residual (distance between the
    feasible iterate and the proximal iterate), ``tol_change`` the relative
    change of the proximal iterate between sweeps.
    """

    max_iters: int = 5000
    tol_primal: float = 1e-6
    tol_change: float = 1e-6
    rho: float = 1.0

    def __post_init__(self):
        if int(self.max_iters) != self.max_iters or self.max_iters < 1:
            raise ValidationError(f"max_iters must be a positive integer, got {self.max_iters!r}")
        for name in ("tol_primal", "tol_change", "rho"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be a positive finite number, got {value!r}")
        object.__setattr__(self, "max_iters", int(self.max_iters))

    def as_dict(self) -> dict:
        return {
            "max_iters": self.max_iters,
            "tol_primal": self.tol_primal,
            "tol_change": self.tol_change,
            "rho": self.rho,
        }


@dataclass(frozen=True)
class QualityReport:
    snr_db: float
    residual: float
    iters: int


@dataclass(frozen=True)
class SparsityReport:
    threshold_fraction: float
    dominant_percent: float

    def __post_init__(self):
        if not (0.0 < self.threshold_fraction < 1.0):
            raise ValidationError("threshold_fraction must lie in (0, 1)")
        if not (0.0 <= self.dominant_percent <= 100.0):
            raise ValidationError("dominant_percent must lie in [0, 100]")


def rng_stream(seed: int, *key: int) -> np.random.Generator:
    """Return an independent PCG64 stream for ``seed`` and a spawn ``key``.

    Every consumer of randomness derives its generator through this function
    so that results depend only on (seed, key) and never on call order or
    scheduling. Keys in use: ``(0,)`` fBm synthesis, ``(1,)`` sample masks;
    sweeps append the trial coordinates after those.
    """
    seed = int(seed)
    if seed < 0 or seed >= 2**64:
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {seed}")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def to_array(x) -> np.ndarray:
    """Complex ndarray view of a signal, spectrum, or array-like."""
    if isinstance(x, _ComplexVector):
        return x._data
    return np.asarray(x, dtype=np.complex128)
