"""Pure-numpy implementations of the solver inner loops."""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"


def _lse_axis(arr: np.ndarray, axis: int) -> np.ndarray:
    """Log-sum-exp reduction that maps all-(-inf) slices to -inf."""
    mx = np.max(arr, axis=axis, keepdims=True)
    finite = np.isfinite(mx)
    mx_safe = np.where(finite, mx, 0.0)
    with np.errstate(divide="ignore"):
        out = np.log(np.sum(np.exp(arr - mx_safe), axis=axis)) + np.squeeze(mx_safe, axis=axis)
    return np.where(np.squeeze(finite, axis=axis), out, -np.inf)


def sinkhorn_log(
    logK: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    log_a: np.ndarray,
    log_b: np.ndarray,
    max_iters: int,
    tol: float,
):
    """Return (u, v, iterations, residual) for the balanced problem.

    logK: (n, m) log Gibbs kernel, all entries finite
    a, b: marginals; log_a, log_b their logs (-inf where zero)
    Scaling u, v are log potentials: P = exp(u[:, None] + logK + v[None, :]).
    Residual is the max-norm violation of both marginal constraints.
    """
    n, m = logK.shape
    u = np.zeros(n)
    v = np.zeros(m)
    residual = np.inf
    iterations = 0
    for _ in range(max_iters):
        u = log_a - _lse_axis(logK + v[None, :], axis=1)
        v = log_b - _lse_axis(logK + u[:, None], axis=0)
        iterations += 1
        P = np.exp(u[:, None] + logK + v[None, :])
        residual = max(
            float(np.max(np.abs(P.sum(axis=1) - a))),
            float(np.max(np.abs(P.sum(axis=0) - b))),
        )
        if residual <= tol:
            break
    return u, v, iterations, residual


def partial_dykstra_log(
    logK0: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    log_a: np.ndarray,
    log_b: np.ndarray,
    p: float,
    max_iters: int,
    tol: float,
):
    """Return (logx, logy, logc, iterations, residual) for the partial problem.

    Dykstra iteration over three KL projections: row caps a, column caps b,
    and total mass p. Each projection is a row-constant, column-constant or
    scalar rescale, so the plan stays exp(logK0 + logx[:, None] + logy + logc)
    and the correction terms collapse to vectors (logq1, logq2) and a scalar.
    Caps must be strictly positive; zero-cap rows and columns are removed by
    the caller. Residual is the max over positive cap violations and the
    absolute mass error.
    """
    n, m = logK0.shape
    logx = np.zeros(n)
    logy = np.zeros(m)
    logc = 0.0
    logq1 = np.zeros(n)
    logq2 = np.zeros(m)
    logq3 = 0.0
    log_p = np.log(p)
    residual = np.inf
    iterations = 0
    for _ in range(max_iters):
        # rows: scale each row i by min(a_i / rowsum_i, 1)
        logr = _lse_axis(logK0 + logy[None, :], axis=1) + logx + logq1 + logc
        logs = np.minimum(log_a - logr, 0.0)
        logx = logx + logq1 + logs
        logq1 = -logs
        # columns
        logcol = _lse_axis(logK0 + logx[:, None], axis=0) + logy + logq2 + logc
        logs = np.minimum(log_b - logcol, 0.0)
        logy = logy + logq2 + logs
        logq2 = -logs
        # total mass: exact equality constraint
        logtot = _lse_axis((logK0 + logx[:, None] + logy[None, :]).ravel(), axis=0) + logc + logq3
        logsc = log_p - logtot
        logc = logc + logq3 + logsc
        logq3 = -logsc
        iterations += 1
        P = np.exp(logK0 + logx[:, None] + logy[None, :] + logc)
        row_violation = float(np.max(np.maximum(P.sum(axis=1) - a, 0.0)))
        col_violation = float(np.max(np.maximum(P.sum(axis=0) - b, 0.0)))
        mass_error = abs(float(P.sum()) - p)
        residual = max(row_violation, col_violation, mass_error)
        if residual <= tol:
            break
    return logx, logy, logc, iterations, residual
