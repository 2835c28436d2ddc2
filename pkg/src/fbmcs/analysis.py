"""Reconstruction quality, spectral sparsity and the benchmark sweeps."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import (
    SolverConfig,
    SparsityReport,
    ValidationError,
    rng_stream,
    to_array,
)
from .fbm import FbmSpec, synthesize_fbm
from .sampling import random_mask, subsample
from .solver import solve_bp, solve_tv
from .transform import dft_forward

__all__ = [
    "snr_db",
    "dominant_fraction",
    "sparsity_sweep",
    "reconstruction_sweep",
    "SweepRow",
    "SweepResult",
    "trial_seeds",
]


def snr_db(original, estimate) -> float:
    """``10 log10(|original|^2 / |original - estimate|^2)``; ``inf`` for a perfect estimate."""
    a = to_array(original)
    b = to_array(estimate)
    if a.shape != b.shape:
        raise ValidationError(f"length mismatch: {a.size} vs {b.size}")
    signal = float(np.vdot(a, a).real)
    if signal == 0.0:
        raise ValidationError("original signal is identically zero")
    err = a - b
    noise = float(np.vdot(err, err).real)
    if noise == 0.0:
        return math.inf
    return 10.0 * math.log10(signal / noise)


def dominant_fraction(F, threshold_fraction: float = 0.1) -> SparsityReport:
    """Percentage of coefficients whose magnitude is strictly above
    ``threshold_fraction`` times the largest magnitude."""
    if not (0.0 < threshold_fraction < 1.0):
        raise ValidationError(f"threshold_fraction must lie in (0, 1), got {threshold_fraction!r}")
    mag = np.abs(to_array(F))
    peak = mag.max()
    if peak == 0.0:
        raise ValidationError("spectrum is identically zero")
    percent = 100.0 * np.count_nonzero(mag > threshold_fraction * peak) / mag.size
    return SparsityReport(threshold_fraction=float(threshold_fraction), dominant_percent=float(percent))


def _stream_seed(seed: int, *key: int) -> int:
    return int(rng_stream(seed, *key).integers(0, 2**63))


def trial_seeds(seed: int, factor: int, h: float, trial: int) -> tuple[int, int]:
    """Per-trial (signal, mask) seeds, a pure function of the trial coordinates.

    ``h`` enters as integer micro-units so the derivation is exact.
    """
    key = (int(factor), int(round(h * 1_000_000)), int(trial))
    return _stream_seed(seed, 2, *key), _stream_seed(seed, 3, *key)


def sparsity_sweep(
    h_values=(0.2, 0.4, 0.6, 0.8),
    n: int = 1024,
    trials: int = 10,
    threshold: float = 0.1,
    seed: int = 0,
) -> list[tuple[float, float]]:
    """Mean dominant-coefficient percentage of synthesized fBm for each H.

    Returns ``[(h, mean_percent), ...]`` in the order of ``h_values``.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    rows = []
    for h in h_values:
        pct = []
        for t in range(trials):
            sig_seed, _ = trial_seeds(seed, 0, h, t)
            f = synthesize_fbm(FbmSpec(n, h, sig_seed))
            pct.append(dominant_fraction(dft_forward(f), threshold).dominant_percent)
        rows.append((float(h), float(np.mean(pct))))
    return rows


@dataclass(frozen=True)
class SweepRow:
    factor: int
    h: float
    mean_snr_bp_db: float
    mean_snr_tv_db: float
    trials: int
    seed_base: int
    # trials in which a solver hit max_iters
    unconverged_bp: int = 0
    unconverged_tv: int = 0

    @property
    def flagged(self) -> bool:
        return bool(self.unconverged_bp or self.unconverged_tv)


@dataclass(frozen=True)
class SweepResult:
    n: int
    rows: tuple

    def row(self, factor: int, h: float) -> SweepRow:
        for r in self.rows:
            if r.factor == factor and math.isclose(r.h, h):
                return r
        raise KeyError((factor, h))


def _one_trial(args):
    n, factor, h, trial, seed, config = args
    sig_seed, mask_seed = trial_seeds(seed, factor, h, trial)
    f = synthesize_fbm(FbmSpec(n, h, sig_seed))
    samples = subsample(f, random_mask(n, factor, mask_seed))
    bp = solve_bp(samples, config)
    tv = solve_tv(samples, config)
    return snr_db(f, bp.signal), snr_db(f, tv.signal), bp.converged, tv.converged


def reconstruction_sweep(
    factors=(2, 4),
    h_values=(0.2, 0.4, 0.6, 0.8),
    n: int = 128,
    trials: int = 10,
    config: SolverConfig | None = None,
    seed: int = 0,
    workers: int = 1,
) -> SweepResult:
    """SNR of BP and TV reconstructions averaged over fresh fBm trials.

    For every (factor, h) pair, ``trials`` signals are synthesized,
    subsampled and reconstructed with both solvers. Trial seeds come from
    :func:`trial_seeds`, so the table is identical for any ``workers``.
    """
    if trials < 1:
        raise ValidationError("trials must be >= 1")
    config = SolverConfig() if config is None else config
    jobs = [
        (n, int(factor), float(h), t, seed, config)
        for factor in factors
        for h in h_values
        for t in range(trials)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_one_trial, jobs, chunksize=max(1, trials // 2)))
    else:
        outcomes = [_one_trial(job) for job in jobs]

    rows = []
    for i in range(0, len(jobs), trials):
        chunk = outcomes[i : i + trials]
        _, factor, h, _, _, _ = jobs[i]
        bp_snr = np.array([o[0] for o in chunk])
        tv_snr = np.array([o[1] for o in chunk])
        rows.append(
            SweepRow(
                factor=factor,
                h=h,
                mean_snr_bp_db=float(np.mean(bp_snr)),
                mean_snr_tv_db=float(np.mean(tv_snr)),
                trials=trials,
                seed_base=int(seed),
                unconverged_bp=sum(not o[2] for o in chunk),
                unconverged_tv=sum(not o[3] for o in chunk),
            )
        )
    return SweepResult(n=int(n), rows=tuple(rows))
