"""Numba-compiled implementations of the solver inner loops.

Semantics mirror numpy_backend exactly; only the execution strategy differs
(explicit loops under @njit, cached to disk so repeat runs skip compilation).
parallel=False keeps summation order fixed and results reproducible.
"""

from __future__ import annotations

import numpy as np
from numba import njit

BACKEND_NAME = "numba"


@njit(cache=True)
def _lse_row(logK: np.ndarray, i: int, add: np.ndarray) -> float:
    """Log-sum-exp of logK[i, :] + add, -inf when every term is -inf."""
    m = logK.shape[1]
    mx = -np.inf
    for j in range(m):
        t = logK[i, j] + add[j]
        if t > mx:
            mx = t
    if mx == -np.inf:
        return -np.inf
    s = 0.0
    for j in range(m):
        s += np.exp(logK[i, j] + add[j] - mx)
    return np.log(s) + mx


@njit(cache=True)
def _lse_col(logK: np.ndarray, j: int, add: np.ndarray) -> float:
    """Log-sum-exp of logK[:, j] + add, -inf when every term is -inf."""
    n = logK.shape[0]
    mx = -np.inf
    for i in range(n):
        t = logK[i, j] + add[i]
        if t > mx:
            mx = t
    if mx == -np.inf:
        return -np.inf
    s = 0.0
    for i in range(n):
        s += np.exp(logK[i, j] + add[i] - mx)
    return np.log(s) + mx


@njit(cache=True)
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

    Same contract as numpy_backend.sinkhorn_log.
    """
    n, m = logK.shape
    u = np.zeros(n)
    v = np.zeros(m)
    residual = np.inf
    iterations = 0
    for _ in range(max_iters):
        for i in range(n):
            u[i] = log_a[i] - _lse_row(logK, i, v)
        for j in range(m):
            v[j] = log_b[j] - _lse_col(logK, j, u)
        iterations += 1
        residual = 0.0
        for i in range(n):
            rs = 0.0
            for j in range(m):
                rs += np.exp(u[i] + logK[i, j] + v[j])
            d = abs(rs - a[i])
            if d > residual:
                residual = d
        for j in range(m):
            cs = 0.0
            for i in range(n):
                cs += np.exp(u[i] + logK[i, j] + v[j])
            d = abs(cs - b[j])
            if d > residual:
                residual = d
        if residual <= tol:
            break
    return u, v, iterations, residual


@njit(cache=True)
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

    Same contract as numpy_backend.partial_dykstra_log.
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
        for i in range(n):
            logr = _lse_row(logK0, i, logy) + logx[i] + logq1[i] + logc
            logs = log_a[i] - logr
            if logs > 0.0:
                logs = 0.0
            logx[i] = logx[i] + logq1[i] + logs
            logq1[i] = -logs
        for j in range(m):
            logcol = _lse_col(logK0, j, logx) + logy[j] + logq2[j] + logc
            logs = log_b[j] - logcol
            if logs > 0.0:
                logs = 0.0
            logy[j] = logy[j] + logq2[j] + logs
            logq2[j] = -logs
        mx = -np.inf
        for i in range(n):
            for j in range(m):
                t = logK0[i, j] + logx[i] + logy[j]
                if t > mx:
                    mx = t
        s = 0.0
        for i in range(n):
            for j in range(m):
                s += np.exp(logK0[i, j] + logx[i] + logy[j] - mx)
        logtot = np.log(s) + mx + logc + logq3
        logsc = log_p - logtot
        logc = logc + logq3 + logsc
        logq3 = -logsc
        iterations += 1
        residual = 0.0
        for i in range(n):
            rs = 0.0
            for j in range(m):
                rs += np.exp(logK0[i, j] + logx[i] + logy[j] + logc)
            v = rs - a[i]
            if v > residual:
                residual = v
        total = 0.0
        for j in range(m):
            cs = 0.0
            for i in range(n):
                cs += np.exp(logK0[i, j] + logx[i] + logy[j] + logc)
            total += cs
            v = cs - b[j]
            if v > residual:
                residual = v
        merr = abs(total - p)
        if merr > residual:
            residual = merr
        if residual <= tol:
            break
    return logx, logy, logc, iterations, residual
