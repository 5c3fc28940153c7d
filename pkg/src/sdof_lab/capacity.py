"""Gaussian secrecy sum rate and its maximization for degraded channels.

The objective is

    f(Q_1..Q_K) = 1/2 log2|I + sum_k H_k Q_k H_k'| - 1/2 log2|I + sum_k He_k Q_k He_k'|

over PSD covariances with Tr(Q_k) <= P. For degraded channels f is concave,
so projected gradient ascent with a backtracking line search converges to the
secrecy sum capacity.
"""
from dataclasses import dataclass

import numpy as np

from .channel import degradedness_witness, validate_channel
from .errors import NumericFailure

LN2 = np.log(2.0)


@dataclass(frozen=True)
class OptimizerReport:
    Q_star: tuple
    value: float  # bits, clamped at 0
    iterations: int
    gradient_norm: float
    degraded: bool
    converged: bool


def _gram(mats, covs):
    n = mats[0].shape[0]
    s = np.eye(n)
    for h, q in zip(mats, covs):
        s = s + h @ q @ h.T
    return s


def _logdet2(mat):
    sign, logabs = np.linalg.slogdet(mat)
    if sign <= 0:
        raise NumericFailure("log-det argument is not positive definite")
    return logabs / LN2


def gaussian_sum_rate(ch, covs):
    """Achievable Gaussian secrecy sum rate in bits; returns (raw, clamped)."""
    covs = [np.asarray(q, dtype=float) for q in covs]
    raw = 0.5 * _logdet2(_gram(ch.H, covs)) - 0.5 * _logdet2(_gram(ch.He, covs))
    return raw, max(raw, 0.0)


def _project_psd_trace(q, budget):
    """Euclidean projection onto {Q symmetric PSD, tr Q <= budget}.

    The set is orthogonally invariant, so projecting reduces to projecting the
    eigenvalues onto {w >= 0, sum w <= budget}: clamp negatives, and if the
    trace still exceeds the budget shift all eigenvalues down uniformly with
    re-clamping (the standard simplex projection).
    """
    q = 0.5 * (q + q.T)
    w, v = np.linalg.eigh(q)
    w = np.clip(w, 0.0, None)
    if w.sum() > budget:
        u = np.sort(w)[::-1]
        css = np.cumsum(u)
        ks = np.arange(1, len(u) + 1)
        k = int(ks[u - (css - budget) / ks > 0][-1])
        theta = (css[k - 1] - budget) / k
        w = np.clip(w - theta, 0.0, None)
    return (v * w) @ v.T


def _gradient(ch, covs):
    """Analytic gradient of the log-det difference w.r.t. each Q_k, in bits."""
    sy = np.linalg.inv(_gram(ch.H, covs))
    sz = np.linalg.inv(_gram(ch.He, covs))
    return [(h.T @ sy @ h - he.T @ sz @ he) * (0.5 / LN2)
            for h, he in zip(ch.H, ch.He)]


def maximize_degraded_sum_capacity(ch, tol=1e-8, max_iter=5000):
    """Projected gradient ascent on the secrecy sum rate.

    For degraded channels the reported value is the secrecy sum capacity; for
    non-degraded channels the result is best-effort (degraded flag False).
    """
    validate_channel(ch)
    degraded = degradedness_witness(ch) is not None
    covs = [np.eye(m) * (ch.P / m) for m in ch.M]
    value, _ = gaussian_sum_rate(ch, covs)
    grad_norm = np.inf
    it = 0
    for it in range(1, max_iter + 1):
        grads = _gradient(ch, covs)
        # Gradient mapping at unit step measures stationarity under projection.
        mapped = [_project_psd_trace(q + g, ch.P) for q, g in zip(covs, grads)]
        grad_norm = float(np.sqrt(sum(np.sum((m - q) ** 2) for m, q in zip(mapped, covs))))
        if grad_norm <= tol:
            break
        step = 1.0
        ascent = sum(np.sum(g * (m - q)) for g, m, q in zip(grads, mapped, covs))
        moved = False
        for _ in range(60):
            trial = [_project_psd_trace(q + step * g, ch.P) for q, g in zip(covs, grads)]
            try:
                tval, _ = gaussian_sum_rate(ch, trial)
            except NumericFailure:
                step *= 0.5
                continue
            if tval >= value + 1e-4 * step * ascent:
                covs, value, moved = trial, tval, True
                break
            step *= 0.5
        if not moved:
            break
    raw, clamped = gaussian_sum_rate(ch, covs)
    return OptimizerReport(Q_star=tuple(covs), value=clamped, iterations=it,
                           gradient_norm=grad_norm, degraded=degraded,
                           converged=grad_norm <= tol)
