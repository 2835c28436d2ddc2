"""Command-line interface: ``fbmcs synth | sample | reconstruct | bench | spectrum | ingest``.

Exit codes: 0 success, 2 invalid arguments or inputs, 3 file I/O or
format errors, 4 solver did not converge (outputs are still written).
"""

from __future__ import annotations

import functools
import sys
from importlib.resources import as_file

import click

from .analysis import reconstruction_sweep, snr_db, sparsity_sweep
from .core import HurstParameter, SolverConfig, SubsampledSignal, ValidationError, to_array
from .fbm import FbmSpec, synthesize_fbm
from .io import (
    FileFormatError,
    load_timeseries,
    make_report,
    read_mask,
    read_signal,
    standin_path,
    write_mask,
    write_report,
    write_signal,
    write_table,
)
from .sampling import random_mask, subsample
from .solver import reconstruct_time_domain, solve_bp, solve_tv
from .transform import dft_forward

EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_NOT_CONVERGED = 4


def _fail(message, code):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValidationError as exc:
            _fail(exc, EXIT_VALIDATION)
        except (FileFormatError, OSError) as exc:
            _fail(exc, EXIT_IO)

    return wrapper


def _hurst(ctx, param, value):
    if value is None:
        return None
    try:
        return HurstParameter(value).h
    except ValidationError as exc:
        raise click.BadParameter(str(exc)) from None


@click.group()
def main():
    """Compressive-sampling reconstruction of fractional Brownian motion."""


@main.command()
@click.option("--n", "n", type=int, required=True, help="Signal length.")
@click.option("--hurst", type=float, required=True, callback=_hurst, help="Hurst parameter in (0, 1).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--real", is_flag=True, help="Real-valued path (Hermitian spectrum).")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@_guarded
def synth(n, hurst, seed, real, out):
    """Synthesize one fBm path by spectral synthesis."""
    write_signal(out, synthesize_fbm(FbmSpec(n, hurst, seed), real=real))


@main.command()
@click.option("--in", "in_path", type=click.Path(dir_okay=False), required=True)
@click.option("--factor", type=int, required=True, help="Subsampling factor n/M.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-values", type=click.Path(dir_okay=False), required=True)
@click.option("--out-mask", type=click.Path(dir_okay=False), required=True)
@_guarded
def sample(in_path, factor, seed, out_values, out_mask):
    """Keep floor(n/factor) random samples of a signal file."""
    f = read_signal(in_path)
    samples = subsample(f, random_mask(f.n, factor, seed))
    write_signal(out_values, samples.values)
    write_mask(out_mask, samples.mask)


@main.command()
@click.option("--method", type=click.Choice(["bp", "tv"]), required=True)
@click.option("--samples", "samples_path", type=click.Path(dir_okay=False), required=True)
@click.option("--mask", "mask_path", type=click.Path(dir_okay=False), required=True)
@click.option("--n", "n", type=int, default=None, help="Full length; must match the mask metadata.")
@click.option("--tv-mode", type=click.Choice(["spectrum", "signal"]), default="spectrum", show_default=True,
              help="spectrum: samples are time values (fBm case); signal: samples are DFT coefficients.")
@click.option("--max-iters", type=int, default=SolverConfig.max_iters, show_default=True)
@click.option("--tol-primal", type=float, default=SolverConfig.tol_primal, show_default=True)
@click.option("--tol-change", type=float, default=SolverConfig.tol_change, show_default=True)
@click.option("--rho", type=float, default=SolverConfig.rho, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@click.option("--report", "report_path", type=click.Path(dir_okay=False), required=True)
@click.option("--truth", type=click.Path(dir_okay=False), default=None, help="Ground-truth signal for SNR.")
@click.option("--hurst", type=float, default=None, callback=_hurst, help="Recorded in the report only.")
@click.option("--seed", type=int, default=None, help="Recorded in the report only.")
@_guarded
def reconstruct(method, samples_path, mask_path, n, tv_mode, max_iters, tol_primal, tol_change, rho,
                out, report_path, truth, hurst, seed):
    """Recover the full signal from samples and their mask."""
    mask = read_mask(mask_path)
    if n is not None and n != mask.n:
        raise ValidationError(f"--n {n} disagrees with mask metadata n={mask.n}")
    values = read_signal(samples_path)
    samples = SubsampledSignal(mask, to_array(values))
    config = SolverConfig(max_iters=max_iters, tol_primal=tol_primal, tol_change=tol_change, rho=rho)

    if method == "bp":
        result = solve_bp(samples, config)
        estimate = reconstruct_time_domain(result.spectrum)
    else:
        result = solve_tv(samples, config, mode=tv_mode)
        estimate = result.signal

    snr = None
    if truth is not None:
        ref = read_signal(truth)
        if ref.n != mask.n:
            raise ValidationError(f"truth has length {ref.n}, mask expects {mask.n}")
        snr = snr_db(ref, estimate)

    write_signal(out, estimate)
    report = make_report(result, mask, config, method, tv_mode=tv_mode if method == "tv" else None,
                         snr=snr, hurst=hurst, seed=seed)
    write_report(report_path, report)
    if not result.converged:
        _fail(f"solver stopped at max_iters={max_iters} without converging "
              f"(residual {result.report.residual:.3g})", EXIT_NOT_CONVERGED)


@main.command()
@click.argument("table", type=click.Choice(["table1", "table2"]))
@click.option("--trials", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--n", "n", type=int, default=None, help="Signal length (table1: 1024, table2: 128).")
@click.option("--workers", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@_guarded
def bench(table, trials, seed, n, workers, out):
    """Reproduce the dominant-coefficient (table1) or SNR (table2) sweep."""
    if trials < 1:
        raise ValidationError("--trials must be >= 1")
    if table == "table1":
        n = 1024 if n is None else n
        rows = sparsity_sweep(n=n, trials=trials, seed=seed)
        write_table(out, ["hurst", "dominant_percent", "trials", "n", "seed"],
                    [(h, pct, trials, n, seed) for h, pct in rows])
    else:
        n = 128 if n is None else n
        sweep = reconstruction_sweep(n=n, trials=trials, seed=seed, workers=workers)
        write_table(
            out,
            ["factor", "hurst", "snr_cs_bp_db", "snr_cs_tv_db", "trials", "seed_base", "n",
             "unconverged_bp", "unconverged_tv"],
            [(r.factor, r.h, r.mean_snr_bp_db, r.mean_snr_tv_db, r.trials, r.seed_base, n,
              r.unconverged_bp, r.unconverged_tv) for r in sweep.rows],
        )


@main.command()
@click.option("--in", "in_path", type=click.Path(dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@_guarded
def spectrum(in_path, out):
    """Write the unitary DFT of a signal file as index,magnitude,re,im."""
    F = dft_forward(read_signal(in_path)).coeffs
    write_table(out, ["index", "magnitude", "re", "im"],
                [(k, float(abs(c)), float(c.real), float(c.imag)) for k, c in enumerate(F)])


@main.command()
@click.argument("path", type=click.Path(dir_okay=False), required=False)
@click.option("--column", default=None, help="Column name or 0-based position.")
@click.option("--standin", is_flag=True, help="Use the bundled 512-month stand-in series.")
@click.option("--out", type=click.Path(dir_okay=False), required=True)
@_guarded
def ingest(path, column, standin, out):
    """Convert a real-valued time-series CSV into a signal file."""
    if standin == (path is not None):
        raise ValidationError("give exactly one of PATH or --standin")
    if standin:
        with as_file(standin_path()) as p:
            signal = load_timeseries(p, column)
    else:
        signal = load_timeseries(path, column)
    write_signal(out, signal)


if __name__ == "__main__":  # pragma: no cover
    main()
