"""Basis pursuit and total-variation reconstruction from partial samples.

Both engines solve an equality-constrained convex program of the form::

    minimize    R(x)
    subject to  (U x)[mask] = y

with ``U`` unitary. For sparse time-domain samples of a signal whose
spectrum is the unknown, ``x`` is the spectrum and ``U`` the inverse DFT.
``R`` is the complex L1 norm (basis pursuit) or the non-circular total
variation ``sum |x[k+1] - x[k]|``.

Because the selected rows of a unitary matrix are orthonormal, projecting
onto the constraint set is exact and costs two FFTs. The solvers are ADMM
loops that alternate that constraint handling with complex soft
thresholding and a scaled dual update.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    ComplexSignal,
    SolverConfig,
    Spectrum,
    SubsampledSignal,
    ValidationError,
    to_array,
)
from .transform import dft_inverse

__all__ = [
    "SolverReport",
    "ReconstructionResult",
    "soft_threshold",
    "tv_norm",
    "solve_bp",
    "solve_tv",
    "reconstruct_time_domain",
]

_TINY = 1e-300


@dataclass(frozen=True)
class SolverReport:
    method: str
    residual: float
    iters: int
    objective: float
    converged: bool
    # best objective seen up to each iteration; non-increasing by construction
    history: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class ReconstructionResult:
    spectrum: Spectrum
    signal: ComplexSignal
    report: SolverReport

    @property
    def converged(self) -> bool:
        return self.report.converged


def soft_threshold(z, kappa: float):
    """Complex shrinkage ``z * max(1 - kappa / |z|, 0)``; works on scalars and arrays."""
    if kappa < 0:
        raise ValidationError(f"threshold must be non-negative, got {kappa!r}")
    arr = np.asarray(z, dtype=np.complex128)
    mag = np.abs(arr)
    out = arr * np.maximum(1.0 - kappa / np.maximum(mag, _TINY), 0.0)
    if np.ndim(z) == 0:
        return complex(out)
    return out


def tv_norm(F) -> float:
    """Non-circular total variation ``sum_k |F[k+1] - F[k]|``."""
    x = to_array(F)
    if x.size < 1:
        raise ValidationError("total variation needs at least one element")
    return float(np.sum(np.abs(np.diff(x))))


class _Constraint:
    """The affine set ``{x : (U x)[idx] = y}`` for ``U`` = inverse or forward DFT."""

    def __init__(self, samples: SubsampledSignal, domain: str):
        self.idx = samples.mask.indices
        self.n = samples.n
        self.y = samples.values
        if domain == "spectrum":
            self.U, self.UH = _ifft, _fft
        elif domain == "signal":
            self.U, self.UH = _fft, _ifft
        else:
            raise ValidationError(f"unknown domain {domain!r}; use 'spectrum' or 'signal'")

    def lift(self, y):
        v = np.zeros(self.n, dtype=np.complex128)
        v[self.idx] = y
        return self.UH(v)

    def project(self, v, y):
        return v + self.lift(y - self.U(v)[self.idx])

    def residual(self, x) -> float:
        ynorm = np.linalg.norm(self.y)
        err = np.linalg.norm(self.U(x)[self.idx] - self.y)
        return float(err / ynorm) if ynorm > 0 else float(err)


def _fft(x, axis=-1):
    return np.fft.fft(x, axis=axis, norm="ortho")


def _ifft(x, axis=-1):
    return np.fft.ifft(x, axis=axis, norm="ortho")


def _rel(a: float, b: float) -> float:
    return a / b if b > _TINY else (0.0 if a <= _TINY else math.inf)


def _check(samples: SubsampledSignal, config: SolverConfig | None) -> SolverConfig:
    if not isinstance(samples, SubsampledSignal):
        raise ValidationError("samples must be a SubsampledSignal")
    if samples.m < 1:
        raise ValidationError("at least one sample is required")
    return SolverConfig() if config is None else config


def _finish(method, constraint, x, domain, iters, objective, converged, history):
    if domain == "spectrum":
        spectrum = Spectrum(x)
    else:
        spectrum = Spectrum(_fft(x))
    signal = dft_inverse(spectrum)
    report = SolverReport(
        method=method,
        residual=constraint.residual(x),
        iters=iters,
        objective=objective,
        converged=converged,
        history=np.asarray(history, dtype=np.float64),
    )
    return ReconstructionResult(spectrum=spectrum, signal=signal, report=report)


def solve_bp(samples: SubsampledSignal, config: SolverConfig | None = None) -> ReconstructionResult:
    """Minimise the complex L1 norm of the spectrum subject to matching the samples.

    ADMM on ``min |z|_1 + indicator(x feasible)`` with consensus ``x = z``::

        x <- P(z - u)                  exact affine projection
        z <- soft(x + u, 1 / rho)
        u <- u + x - z

    The data are rescaled to unit RMS internally so ``rho`` is
    scale-free. The returned spectrum is the best feasible iterate. A
    result with ``report.converged == False`` means ``max_iters`` ran out
    before both tolerances were met; it is still feasible.

    Parameters
    ----------
    samples : SubsampledSignal
        Known time-domain values and their positions.
    config : SolverConfig, optional
        Defaults to ``SolverConfig()``.

    Returns
    -------
    ReconstructionResult
    """
    config = _check(samples, config)
    con = _Constraint(samples, "spectrum")
    scale = float(np.linalg.norm(samples.values) / math.sqrt(samples.m))
    if scale == 0.0:
        zero = np.zeros(samples.n, dtype=np.complex128)
        return _finish("bp", con, zero, "spectrum", 0, 0.0, True, [])

    y = samples.values / scale
    kappa = 1.0 / config.rho
    z = con.lift(y)
    u = np.zeros_like(z)
    best_x, best_obj = z.copy(), np.sum(np.abs(z))
    history = []
    converged = False
    it = 0
    for it in range(1, config.max_iters + 1):
        x = con.project(z - u, y)
        z_old = z
        z = soft_threshold(x + u, kappa)
        u = u + x - z

        obj = np.sum(np.abs(x))
        if obj < best_obj:
            best_obj, best_x = obj, x
        history.append(best_obj * scale)

        r = _rel(np.linalg.norm(x - z), max(np.linalg.norm(x), np.linalg.norm(z)))
        c = _rel(np.linalg.norm(z - z_old), np.linalg.norm(z))
        if r < config.tol_primal and c < config.tol_change:
            converged = True
            break
    return _finish("bp", con, best_x * scale, "spectrum", it, float(best_obj * scale), converged, history)


class _TVSubproblem:
    """Least-squares step ``argmin_{x feasible} |D x - c|^2``.

    Feasible points are ``x0 + Q w`` where ``Q`` spans the unconstrained
    coordinates. The normal matrix ``(DQ)^H DQ`` is factored once with a
    Hermitian eigendecomposition. It is singular exactly when constant
    vectors are feasible directions (position 0 unsampled); the
    pseudo-inverse then picks the minimum-norm step.
    """

    def __init__(self, con: _Constraint):
        free = np.setdiff1d(np.arange(con.n), con.idx)
        self.free = free
        if free.size == 0:
            self.Q = None
            return
        cols = np.zeros((con.n, free.size), dtype=np.complex128)
        cols[free, np.arange(free.size)] = 1.0
        self.Q = con.UH(cols, axis=0)
        self.G = np.diff(self.Q, axis=0)
        gram = self.G.conj().T @ self.G
        w, V = np.linalg.eigh(gram)
        cutoff = 1e-10 * max(w.max(), _TINY)
        self.winv = np.where(w > cutoff, 1.0 / np.where(w > cutoff, w, 1.0), 0.0)
        self.V = V

    def solve(self, x0, c):
        if self.Q is None:
            return x0
        rhs = self.G.conj().T @ (c - np.diff(x0))
        w = self.V @ (self.winv * (self.V.conj().T @ rhs))
        return x0 + self.Q @ w


def solve_tv(
    samples: SubsampledSignal,
    config: SolverConfig | None = None,
    mode: str = "spectrum",
) -> ReconstructionResult:
    """Minimise total variation subject to the sample constraints.

    ``mode="spectrum"`` treats ``samples`` as time-domain values and seeks
    the spectrum with least TV whose inverse DFT passes through them; this
    is the fBm reconstruction. ``mode="signal"`` swaps the roles:
    ``samples`` are DFT coefficients at the masked frequencies and the
    unknown is the time-domain signal with least TV.

    ADMM with split variable ``d = D x`` (first differences)::

        x <- argmin_{x feasible} |D x - d + u|^2
        d <- soft(D x + u, 1 / rho)
        u <- u + D x - d

    Feasibility holds at every iterate, so termination is governed by the
    split residual ``|D x - d|`` and the change in ``d``.
    """
    config = _check(samples, config)
    con = _Constraint(samples, mode)
    scale = float(np.linalg.norm(samples.values) / math.sqrt(samples.m))
    if scale == 0.0:
        zero = np.zeros(samples.n, dtype=np.complex128)
        return _finish("tv", con, zero, mode, 0, 0.0, True, [])

    y = samples.values / scale
    kappa = 1.0 / config.rho
    x0 = con.lift(y)
    sub = _TVSubproblem(con)
    d = np.diff(x0)
    u = np.zeros_like(d)
    best_x, best_obj = x0, np.sum(np.abs(d))
    history = []
    converged = False
    it = 0
    for it in range(1, config.max_iters + 1):
        x = sub.solve(x0, d - u)
        dx = np.diff(x)
        d_old = d
        d = soft_threshold(dx + u, kappa)
        u = u + dx - d

        obj = np.sum(np.abs(dx))
        if obj < best_obj:
            best_obj, best_x = obj, x
        history.append(best_obj * scale)

        r = _rel(np.linalg.norm(dx - d), max(np.linalg.norm(dx), np.linalg.norm(d)))
        c = _rel(np.linalg.norm(d - d_old), np.linalg.norm(d))
        if r < config.tol_primal and c < config.tol_change:
            converged = True
            break
    return _finish("tv", con, best_x * scale, mode, it, float(best_obj * scale), converged, history)


def reconstruct_time_domain(F) -> ComplexSignal:
    """Map a recovered spectrum back to the time domain (inverse unitary DFT)."""
    return dft_inverse(F)
