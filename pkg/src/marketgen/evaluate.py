"""Distribution- and dependence-fidelity metrics for training vs synthetic data.

Everything here is pure and safe for concurrent use.  Percentiles use linear
interpolation of order statistics at position 1 + p * (T - 1); the ACF uses
the biased (divide by T, common mean) estimator so the sample autocovariance
sequence stays positive semidefinite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstantColumn, EmptyInput, ShapeError, SupportError, TooFewRows
from .frames import SeriesFrame


@dataclass(frozen=True)
class SampleSummary:
    """Per-column mean, sample std, 1st and 99th percentiles.

    When built from replications, ``*_spread`` fields hold +/- one standard
    deviation of each statistic across replications.
    """

    columns: tuple
    mean: np.ndarray
    std: np.ndarray
    p1: np.ndarray
    p99: np.ndarray
    mean_spread: np.ndarray | None = None
    std_spread: np.ndarray | None = None
    p1_spread: np.ndarray | None = None
    p99_spread: np.ndarray | None = None


@dataclass(frozen=True)
class AcfResult:
    lags: np.ndarray
    estimate: np.ndarray
    null_band: float  # +/- 2 / sqrt(T)


def empirical_quantile(x: np.ndarray, p) -> np.ndarray:
    """Quantile by linear interpolation of order statistics at 1 + p(T-1)."""
    x = np.sort(np.asarray(x, dtype=float))
    p = np.asarray(p, dtype=float)
    pos = p * (len(x) - 1)
    lo = np.floor(pos).astype(int)
    hi = np.minimum(lo + 1, len(x) - 1)
    frac = pos - lo
    return x[lo] + frac * (x[hi] - x[lo])


def summary(frame: SeriesFrame, reps: list | None = None) -> SampleSummary:
    """Summary statistics of one frame, or mean +/- std across replications."""
    if reps is not None:
        singles = [summary(r) for r in reps]
        stats = {
            name: np.vstack([getattr(s, name) for s in singles])
            for name in ("mean", "std", "p1", "p99")
        }
        return SampleSummary(
            frame.columns if frame is not None else singles[0].columns,
            *[stats[name].mean(axis=0) for name in ("mean", "std", "p1", "p99")],
            *[stats[name].std(axis=0, ddof=1) if len(singles) > 1 else np.zeros(singles[0].mean.shape)
              for name in ("mean", "std", "p1", "p99")],
        )
    if frame.n_rows < 2:
        raise TooFewRows("summary needs at least 2 rows")
    data = frame.data
    return SampleSummary(
        frame.columns,
        data.mean(axis=0),
        data.std(axis=0, ddof=1),
        np.array([empirical_quantile(data[:, j], 0.01) for j in range(frame.n_cols)]),
        np.array([empirical_quantile(data[:, j], 0.99) for j in range(frame.n_cols)]),
    )


def corr_matrix(frame: SeriesFrame) -> np.ndarray:
    """Pearson correlation matrix (symmetric, unit diagonal)."""
    if frame.n_rows < 3:
        raise TooFewRows("corr_matrix needs at least 3 rows")
    std = frame.data.std(axis=0)
    for j, s in enumerate(std):
        if not s > 0:
            raise ConstantColumn(f"column {frame.columns[j]!r} is constant")
    c = np.corrcoef(frame.data, rowvar=False)
    return np.atleast_2d(c)


def acf(series: np.ndarray, max_lag: int) -> AcfResult:
    """Autocorrelation at lags 1..max_lag of a single column."""
    x = np.asarray(series, dtype=float).ravel()
    T = len(x)
    if T <= max_lag + 2:
        raise TooFewRows(f"need more than {max_lag + 2} observations")
    centered = x - x.mean()
    denom = float(centered @ centered)
    if denom == 0.0:
        raise ConstantColumn("series is constant")
    lags = np.arange(1, max_lag + 1)
    est = np.array([float(centered[:-k] @ centered[k:]) / denom for k in lags])
    return AcfResult(lags, est, 2.0 / np.sqrt(T))


def wasserstein1_1d(x, y) -> float:
    """1-D Wasserstein distance between two empirical samples.

    Equal sizes reduce to the mean absolute difference of sorted order
    statistics (the monotone rearrangement).  Unequal sizes integrate the
    absolute difference of the two empirical quantile functions exactly.
    """
    x = np.sort(np.asarray(x, dtype=float).ravel())
    y = np.sort(np.asarray(y, dtype=float).ravel())
    if len(x) == 0 or len(y) == 0:
        raise EmptyInput("wasserstein1_1d needs nonempty samples")
    if len(x) == len(y):
        return float(np.mean(np.abs(x - y)))
    # both quantile functions are piecewise constant on a common grid
    nx, ny = len(x), len(y)
    cuts = np.union1d(np.arange(1, nx) / nx, np.arange(1, ny) / ny)
    edges = np.concatenate([[0.0], cuts, [1.0]])
    mids = 0.5 * (edges[:-1] + edges[1:])
    widths = np.diff(edges)
    xi = np.minimum((mids * nx).astype(int), nx - 1)
    yi = np.minimum((mids * ny).astype(int), ny - 1)
    return float(np.sum(widths * np.abs(x[xi] - y[yi])))


def kl_discrete(p, q) -> float:
    """KL divergence sum p log(p / q) between two probability vectors."""
    p = np.asarray(p, dtype=float).ravel()
    q = np.asarray(q, dtype=float).ravel()
    if p.shape != q.shape:
        raise ShapeError("p and q must have the same length")
    if abs(p.sum() - 1.0) > 1e-9 or abs(q.sum() - 1.0) > 1e-9:
        raise SupportError("p and q must each sum to 1")
    if np.any(p < -1e-15) or np.any(q < -1e-15):
        raise SupportError("probabilities must be nonnegative")
    mask = p > 0
    if np.any(q[mask] <= 0):
        raise SupportError("q must be positive wherever p is")
    return float(np.sum(p[mask] * np.log(p[mask] / q[mask])))


def qq_points(a, b, k: int) -> np.ndarray:
    """Matched empirical quantiles of a and b at levels (i - 0.5) / k.

    Returns a (k, 2) array of (quantile of a, quantile of b) pairs.
    """
    if k < 2:
        raise ShapeError("qq_points needs k >= 2")
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if len(a) == 0 or len(b) == 0:
        raise EmptyInput("qq_points needs nonempty samples")
    levels = (np.arange(1, k + 1) - 0.5) / k
    return np.column_stack([empirical_quantile(a, levels), empirical_quantile(b, levels)])


# ---------------------------------------------------------------------------
# report helpers (CSV rows / markdown sections; file I/O lives in the CLI)
# ---------------------------------------------------------------------------

def comparison_rows(real: SeriesFrame, synth: SeriesFrame, max_lag: int = 10) -> list:
    """Rows of (metric, column, real, synthetic) comparing two frames."""
    if real.n_cols != synth.n_cols:
        raise ShapeError("real and synthetic frames must have matching column counts")
    s_real, s_synth = summary(real), summary(synth)
    rows = []
    for j, name in enumerate(real.columns):
        rows.append(("mean", name, s_real.mean[j], s_synth.mean[j]))
        rows.append(("std", name, s_real.std[j], s_synth.std[j]))
        rows.append(("p1", name, s_real.p1[j], s_synth.p1[j]))
        rows.append(("p99", name, s_real.p99[j], s_synth.p99[j]))
        rows.append(("wasserstein1", name,
                     0.0, wasserstein1_1d(real.data[:, j], synth.data[:, j])))
        if real.n_rows > max_lag + 2 and synth.n_rows > max_lag + 2:
            try:
                acf_r = acf(real.data[:, j], 1).estimate[0]
                acf_s = acf(synth.data[:, j], 1).estimate[0]
                rows.append(("acf_lag1", name, acf_r, acf_s))
            except ConstantColumn:
                pass
    return rows


def comparison_markdown(real: SeriesFrame, synth: SeriesFrame, max_lag: int = 10) -> str:
    lines = [
        "## Training vs synthetic comparison",
        "",
        "| metric | column | training | synthetic |",
        "|---|---|---:|---:|",
    ]
    for metric, name, rv, sv in comparison_rows(real, synth, max_lag):
        lines.append(f"| {metric} | {name} | {rv:.6g} | {sv:.6g} |")
    if real.n_cols >= 2:
        cr = corr_matrix(real)
        cs = corr_matrix(synth)
        lines += ["", "### Correlation matrices (training / synthetic)", ""]
        header = "| | " + " | ".join(real.columns) + " |"
        lines.append(header)
        lines.append("|" + "---|" * (real.n_cols + 1))
        for i, name in enumerate(real.columns):
            cells = " | ".join(f"{cr[i, j]:.3f} / {cs[i, j]:.3f}" for j in range(real.n_cols))
            lines.append(f"| {name} | {cells} |")
    return "\n".join(lines) + "\n"
