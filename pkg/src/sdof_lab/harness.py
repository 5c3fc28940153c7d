"""Monte Carlo driver, power sweeps, and CSV reporting.

Trials are split into fixed-size blocks with independently seeded noise
streams; error counts are integers, so serial and parallel execution of the
same sweep produce byte-identical output.
"""
import csv
import io
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._backend import count_decode_errors
from .errors import DegenerateFit, DomainError
from .rng import RngHandle

BLOCK = 4096
_Z95 = 1.959963984540054  # two-sided 95% normal quantile


def wilson_interval(errors, trials, z=_Z95):
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise DomainError("need at least one trial")
    phat = errors / trials
    denom = 1.0 + z * z / trials
    centre = phat + z * z / (2 * trials)
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
    return max((centre - half) / denom, 0.0), min((centre + half) / denom, 1.0)


def monte_carlo_pe(values, trials, rng: RngHandle, noiseless=False, jobs=1):
    """Symbol error rate of nearest-point decoding on a sorted constellation.

    Labels are uniform per trial; unit Gaussian noise is added unless
    noiseless. Returns (pe_hat, ci_lo, ci_hi) with a Wilson 95% interval.
    """
    values = np.ascontiguousarray(values, dtype=np.float64)
    blocks = [(i, min(BLOCK, trials - i * BLOCK)) for i in range((trials + BLOCK - 1) // BLOCK)]

    def run_block(args):
        bi, size = args
        g = rng.substream(bi).generator()
        sent = g.integers(0, len(values), size=size)
        noise = np.zeros(size) if noiseless else g.standard_normal(size)
        return count_decode_errors(values, sent.astype(np.int64), noise)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            errors = sum(pool.map(run_block, blocks))
    else:
        errors = sum(map(run_block, blocks))
    pe = errors / trials
    lo, hi = wilson_interval(errors, trials)
    return pe, lo, hi


def fit_sdof_slope(xs, rates):
    """Least-squares slope of rate against (1/2) log2 P; finite-P surrogate
    for the degrees-of-freedom limit."""
    xs = np.asarray(xs, dtype=float)
    rates = np.asarray(rates, dtype=float)
    if len(np.unique(xs)) < 2:
        raise DegenerateFit("need at least two distinct abscissae")
    slope, _ = np.polyfit(xs, rates, 1)
    return float(slope)


def geometric_grid(lo, hi, count):
    if not (lo >= 1 and hi >= lo and count >= 2):
        raise DomainError(f"bad grid ({lo}, {hi}, {count})")
    return np.geomspace(lo, hi, count)


@dataclass(frozen=True)
class SweepConfig:
    scheme: str  # "ria" or "multilayer"
    params: dict
    grid_lo: float
    grid_hi: float
    grid_count: int
    trials: int
    seed: int
    out: str = None

    def __post_init__(self):
        if self.scheme not in ("ria", "multilayer"):
            raise DomainError(f"unknown scheme {self.scheme!r}")
        geometric_grid(self.grid_lo, self.grid_hi, self.grid_count)
        if self.trials < 1:
            raise DomainError("trials must be >= 1")


RIA_COLUMNS = ["ptilde", "Q", "A", "d_min", "pe_hat", "pe_ci_lo", "pe_ci_hi",
               "rate_lb_bits"]
MULTILAYER_COLUMNS = ["ptilde", "a", "W", "L", "A", "dmin", "pe_hat",
                      "pe_ci_lo", "pe_ci_hi", "rate_bits", "sdof_formula"]


def _fmt(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def ria_sweep_rows(gains, eps, grid, trials, seed, jobs=1):
    """One row per power point for the integer-constellation scheme."""
    from .ria import RiaParams, build_received_constellation, scale_params, sum_rate_lower_bound
    h = np.asarray(gains, dtype=float)
    h_tilde = h / h[-1]
    K = len(h_tilde)
    rows = []
    for i, pt in enumerate(grid):
        Q, A = scale_params(K, pt, eps)
        params = RiaParams(h_tilde=tuple(h_tilde), eps=eps, P_tilde=pt, Q=Q, A=A)
        vr = build_received_constellation(params)
        point_rng = RngHandle(seed=seed, stream_id=0).substream(i)
        pe, lo, hi = monte_carlo_pe(vr.values, trials, point_rng, jobs=jobs)
        _, rate_lb = sum_rate_lower_bound(K, Q, pe)
        rows.append(dict(zip(RIA_COLUMNS, [pt, Q, A, vr.d_min, pe, lo, hi, rate_lb])))
    return rows


def multilayer_sweep_rows(n, m, eps, grid, trials, seed, jobs=1):
    """One row per power point for the two-user layered scheme."""
    from .multilayer import build_layered_decoder, make_layered_params, multilayer_sdof
    eta = multilayer_sdof(n, m)
    rows = []
    for i, pt in enumerate(grid):
        params = make_layered_params(n, m, pt, eps)
        dec = build_layered_decoder(params)
        point_rng = RngHandle(seed=seed, stream_id=0).substream(i)
        pe, lo, hi = monte_carlo_pe(dec.values, trials, point_rng, jobs=jobs)
        rate = params.L * math.log2(params.a) if not params.degenerate else 0.0
        rows.append(dict(zip(MULTILAYER_COLUMNS,
                             [pt, params.a, params.W, params.L, params.A,
                              params.A / params.m, pe, lo, hi, rate, eta])))
    return rows


def rows_to_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def write_atomic(path, text):
    """Write via a temp file and rename, so readers never see partial output."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def gnuplot_script(csv_path, xcol, ycol):
    return (f'set datafile separator ","\n'
            f'set logscale x\nset logscale y\n'
            f'set xlabel "{xcol}"\nset ylabel "{ycol}"\n'
            f'plot "{csv_path}" using "{xcol}":"{ycol}" with linespoints title "{ycol}"\n')


def run_sweep(cfg: SweepConfig, jobs=1):
    """Run a configured power sweep; returns (csv_text, columns). Writes the
    CSV (and a gnuplot script next to it) when cfg.out is set."""
    grid = geometric_grid(cfg.grid_lo, cfg.grid_hi, cfg.grid_count)
    if cfg.scheme == "ria":
        rows = ria_sweep_rows(cfg.params["gains"], cfg.params.get("eps", 0.05),
                              grid, cfg.trials, cfg.seed, jobs=jobs)
        columns = RIA_COLUMNS
        ycol = "pe_hat"
    else:
        rows = multilayer_sweep_rows(cfg.params["n"], cfg.params["m"],
                                     cfg.params.get("eps", 0.05),
                                     grid, cfg.trials, cfg.seed, jobs=jobs)
        columns = MULTILAYER_COLUMNS
        ycol = "pe_hat"
    text = rows_to_csv(rows, columns)
    if cfg.out:
        write_atomic(cfg.out, text)
        write_atomic(cfg.out + ".gp", gnuplot_script(cfg.out, "ptilde", ycol))
    return text, columns
