"""Command-line interface.

Exit codes: 0 success, 2 unreadable/malformed input, 3 invalid arguments
to the engine or selection, 4 dispersion estimation failure.  Numeric
output always uses the C locale ('.' decimal separator).
"""

from __future__ import annotations

import functools
import math
import sys
import time

import click
import numpy as np

from .constrained import best_segmentation
from .dispersion import estimate_phi
from .engine import DEFAULT_MEMORY_CAP, segment
from .errors import ArgumentError, DispersionError, InputError
from .io import ResultDoc, atomic_write_text, load_counts, read_result, write_result, write_tsv
from .losses import LossFamily
from .selection import AIC, BIC, MBIC, ORACLE, select_ic, select_mbic, select_oracle
from .simulate import SimulationSpec, breakpoints_to_labels, rand_index, run_benchmark, simulate

LARGE_N_GUARD = 10_000_000

_MODELS = ["poisson", "nb", "gauss-mean", "gauss-var"]


def _exit_codes(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except InputError as exc:
            raise SystemExit(_fail(exc, 2))
        except DispersionError as exc:
            for h, total, valid in exc.attempts:
                click.echo(f"  window h={h}: {valid}/{total} windows usable", err=True)
            raise SystemExit(_fail(exc, 4))
        except ArgumentError as exc:
            raise SystemExit(_fail(exc, 3))

    return wrapper


def _fail(exc, code):
    click.echo(f"countseg: error: {exc}", err=True)
    return code


def _resolve_family(model, phi, series, h0):
    """Build the loss family, estimating phi when asked; returns (family, phi_mode)."""
    if model != "nb":
        if phi is not None:
            raise ArgumentError(f"model {model!r} does not take --phi")
        return LossFamily.from_name(model), None
    if phi is None:
        raise ArgumentError("the nb model requires --phi VALUE or --phi auto")
    if phi == "auto":
        est = estimate_phi(series, h0=h0)
        return LossFamily.negative_binomial(est.phi_hat), "auto"
    try:
        value = float(phi)
    except ValueError:
        raise ArgumentError(f"--phi must be a number or 'auto', got {phi!r}")
    return LossFamily.negative_binomial(value), "fixed"


def _resolve_kmax(kmax, n):
    if kmax == "sqrt":
        return math.ceil(math.sqrt(n))
    try:
        return int(kmax)
    except ValueError:
        raise ArgumentError(f"--kmax must be an integer or 'sqrt', got {kmax!r}")


def _guard_large(series, force):
    if series.size > LARGE_N_GUARD and not force:
        raise ArgumentError(
            f"input has {series.size} points; pass --force (and, if needed, "
            "--memory-cap) to run at this scale"
        )


@click.group()
def main():
    """Exact change-point detection for long count series."""


@main.command("segment")
@click.argument("input_path", metavar="INPUT")
@click.option("-o", "--output", "output_path", required=True, help="Result document path.")
@click.option("--model", type=click.Choice(_MODELS), default="nb", show_default=True)
@click.option("--kmax", default="sqrt", show_default=True, help="Integer or 'sqrt'.")
@click.option("--phi", default=None, help="NB dispersion value or 'auto'.")
@click.option("--h0", default=15, show_default=True, help="Initial dispersion window width.")
@click.option("--csv", "csv_column", default=None, help="Read this column of a headered CSV.")
@click.option("--force", is_flag=True, help="Allow very large inputs.")
@click.option("--memory-cap", default=DEFAULT_MEMORY_CAP, show_default=True, type=int,
              help="Table allocation cap in bytes.")
@_exit_codes
def cmd_segment(input_path, output_path, model, kmax, phi, h0, csv_column, force, memory_cap):
    """Segment INPUT and write per-k costs, breakpoints and parameters.

    Gaussian-variance input is assumed centered at 0.
    """
    series = load_counts(input_path, csv_column)
    _guard_large(series, force)
    family, phi_mode = _resolve_family(model, phi, series, h0)
    kmax_val = _resolve_kmax(kmax, series.size)
    t0 = time.perf_counter()
    res = segment(series, family, kmax_val, memory_cap=memory_cap)
    elapsed = time.perf_counter() - t0
    doc = ResultDoc(
        n=series.size,
        model=model,
        kmax=kmax_val,
        phi=family.phi if model == "nb" else None,
        phi_mode=phi_mode,
        h0=h0 if phi_mode == "auto" else None,
        time_seconds=elapsed,
        costs=[res.cost(k) for k in range(1, kmax_val + 1)],
        breakpoints=[res.breaks(k) for k in range(1, kmax_val + 1)],
        params=[res.params(k) for k in range(1, kmax_val + 1)],
    )
    write_result(doc, output_path)
    click.echo(f"segmented n={series.size} with kmax={kmax_val} in {elapsed:.3f}s -> {output_path}")


@main.command("select")
@click.argument("result_path", metavar="RESULT")
@click.option("--criterion", type=click.Choice([AIC, BIC, ORACLE, MBIC]), default=ORACLE,
              show_default=True)
@_exit_codes
def cmd_select(result_path, criterion):
    """Choose the number of segments for a stored RESULT document."""
    doc = read_result(result_path)
    if criterion == ORACLE:
        sel = select_oracle(doc.costs, doc.n)
    elif criterion == MBIC:
        family = LossFamily.from_name(doc.model, doc.phi if doc.model == "nb" else None)
        sel = select_mbic(doc.costs, doc.breakpoints, doc.n, family)
    else:
        sel = select_ic(doc.costs, doc.n, criterion)
    doc.selection = {
        "criterion": sel.criterion,
        "k_hat": sel.k_hat,
        "beta": sel.beta,
        "values": [float(v) for v in sel.values],
    }
    write_result(doc, result_path)
    click.echo(f"criterion={sel.criterion} k_hat={sel.k_hat}")


@main.command("estimate-phi")
@click.argument("input_path", metavar="INPUT")
@click.option("--h0", default=15, show_default=True)
@click.option("--csv", "csv_column", default=None)
@_exit_codes
def cmd_estimate_phi(input_path, h0, csv_column):
    """Estimate the NB dispersion of INPUT by windowed median-of-moments."""
    series = load_counts(input_path, csv_column)
    est = estimate_phi(series, h0=h0)
    click.echo(
        f"phi_hat {est.phi_hat!r}\nwindow_used {est.window_used}\n"
        f"windows_total {est.windows_total}\nwindows_valid {est.windows_valid}"
    )


@main.command("bestseg")
@click.argument("input_path", metavar="INPUT")
@click.option("-o", "--output", "output_path", default="-", show_default=True,
              help="TSV output path ('-' for stdout).")
@click.option("--model", type=click.Choice(_MODELS), default="nb", show_default=True)
@click.option("--phi", default=None, help="NB dispersion value or 'auto'.")
@click.option("--h0", default=15, show_default=True)
@click.option("-k", "--segments", "k_value", type=int, required=True, help="Total segments K.")
@click.option("-j", "--change-point", "j_value", type=int, default=None,
              help="Restrict output to one change-point index.")
@click.option("--csv", "csv_column", default=None)
@_exit_codes
def cmd_bestseg(input_path, output_path, model, phi, h0, k_value, j_value, csv_column):
    """Cost of the best K-segmentation per pinned change-point location."""
    series = load_counts(input_path, csv_column)
    family, _ = _resolve_family(model, phi, series, h0)
    cc = best_segmentation(series, family, k_value, j_value)
    js = [j_value] if j_value is not None else list(range(1, k_value))
    rows = (
        {"j": j, "t": t, "cost": float(cc.best_cost[j, t])}
        for j in js
        for t in range(1, cc.n)
        if np.isfinite(cc.best_cost[j, t])
    )
    write_tsv(output_path, ["j", "t", "cost"], rows)


@main.command("simulate")
@click.option("-o", "--output", "output_path", required=True, help="Counts output path.")
@click.option("-n", "size", type=int, required=True)
@click.option("-k", "segments", type=int, required=True)
@click.option("--phi", type=float, required=True)
@click.option("--p-even", type=float, default=0.8, show_default=True)
@click.option("--p-odd", type=float, default=0.2, show_default=True)
@click.option("--layout", type=click.Choice(["equal", "random"]), default="equal",
              show_default=True)
@click.option("--min-len", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--labels-out", default=None, help="Also write true labels, one per line.")
@_exit_codes
def cmd_simulate(output_path, size, segments, phi, p_even, p_odd, layout, min_len, seed,
                 labels_out):
    """Draw a synthetic NB series with alternating low/high segments."""
    spec = SimulationSpec(size, segments, phi, p_even, p_odd, layout, min_len, seed)
    sim = simulate(spec)
    header = (
        f"# countseg simulated series: n={size} k={segments} phi={phi!r} "
        f"layout={layout} seed={seed}\n"
        f"# true_breakpoints: {' '.join(str(b) for b in sim.true_breakpoints)}\n"
    )
    body = "\n".join(str(int(v)) for v in sim.series)
    atomic_write_text(output_path, header + body + "\n")
    if labels_out:
        atomic_write_text(labels_out, "\n".join(str(c) for c in sim.labels) + "\n")
    click.echo(f"wrote n={size} counts -> {output_path}")


@main.command("evaluate")
@click.option("--truth", "truth_path", required=True, help="True labels, one per line.")
@click.option("--est", "est_path", default=None, help="Estimated labels, one per line.")
@click.option("--result", "result_path", default=None, help="Result document to evaluate.")
@click.option("-k", "k_value", type=int, default=None,
              help="Segment count to take from the result (default: its selection).")
@_exit_codes
def cmd_evaluate(truth_path, est_path, result_path, k_value):
    """Rand index between a true labeling and an estimate."""
    truth = load_counts(truth_path).astype(np.int64)
    if (est_path is None) == (result_path is None):
        raise ArgumentError("pass exactly one of --est or --result")
    if est_path is not None:
        est = load_counts(est_path).astype(np.int64)
    else:
        doc = read_result(result_path)
        if k_value is None:
            if doc.selection is None:
                raise ArgumentError("result has no selection block; pass -k")
            k_value = doc.selection["k_hat"]
        if not 1 <= k_value <= len(doc.breakpoints):
            raise ArgumentError(f"result has no breakpoints for k={k_value}")
        est = breakpoints_to_labels(doc.breakpoints[k_value - 1], doc.n)
    click.echo(repr(rand_index(truth, est)))


@main.command("bench")
@click.option("--sizes", default="1000", show_default=True,
              help="Comma-separated series lengths.")
@click.option("--phi", type=float, default=0.3, show_default=True)
@click.option("--k-divisor", type=float, default=3.0, show_default=True,
              help="Segments per cell: ceil(sqrt(n)/divisor).")
@click.option("--reps", type=int, default=10, show_default=True)
@click.option("--phi-mode", type=click.Choice(["known", "estimated"]), default="known",
              show_default=True)
@click.option("--layout", type=click.Choice(["equal", "random"]), default="equal",
              show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("-o", "--output", "output_path", default="-", show_default=True)
@_exit_codes
def cmd_bench(sizes, phi, k_divisor, reps, phi_mode, layout, seed, jobs, output_path):
    """Runtime and quality benchmark over a grid of simulated signals."""
    try:
        ns = [int(s) for s in sizes.split(",") if s.strip()]
    except ValueError:
        raise ArgumentError(f"--sizes must be comma-separated integers, got {sizes!r}")
    if not ns:
        raise ArgumentError("--sizes is empty")
    grid = [
        SimulationSpec(n, max(1, math.ceil(math.sqrt(n) / k_divisor)), phi, layout=layout)
        for n in ns
    ]
    rows = run_benchmark(grid, reps, phi_mode=phi_mode, master_seed=seed, jobs=jobs)
    header = [
        "cell", "rep", "n", "k_true", "phi_true", "phi_mode", "kmax", "phi_used",
        "time_seconds", "time_per_kmax", "k_hat", "k_err", "rand_index", "error",
    ]
    write_tsv(output_path, header, rows)


if __name__ == "__main__":
    main()
