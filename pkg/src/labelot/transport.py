"""Entropy-regularized optimal transport over a fixed cost matrix.

Two solvers: a balanced one whose plan marginalizes exactly to the given
row and column distributions, and a partial one that moves only a fraction
``mass_p`` of the total mass while treating the distributions as caps.
Both run in the log domain, so large entropy weights do not underflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InputError, SolverError

_MARGINAL_SUM_TOL = 1e-9


def _frozen_array(raw, dims: int, name: str) -> np.ndarray:
    # always copy so freezing never makes a caller-owned array read-only
    arr = np.array(raw, dtype=np.float64, order="C", copy=True)
    if arr.ndim != dims:
        raise InputError(f"{name} must be {dims}-dimensional, got shape {arr.shape}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class CostMatrix:
    """Pairwise non-negative costs between n source and m target points."""

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = _frozen_array(self.values, 2, "cost matrix")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InputError(f"cost matrix must be at least 1x1, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputError("cost matrix entries must be finite")
        if np.any(arr < 0):
            raise InputError("cost matrix entries must be non-negative")
        object.__setattr__(self, "values", arr)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class Marginal:
    """Probability mass per point; total mass must be 1.

    For the partial solver the weights act as per-point upper bounds rather
    than exact targets, but the vector still sums to 1.
    """

    weights: np.ndarray

    def __post_init__(self) -> None:
        arr = _frozen_array(self.weights, 1, "marginal")
        if arr.size < 1:
            raise InputError("marginal must have at least one entry")
        if not np.all(np.isfinite(arr)):
            raise InputError("marginal entries must be finite")
        if np.any(arr < 0):
            raise InputError("marginal entries must be non-negative")
        total = float(arr.sum())
        if abs(total - 1.0) > _MARGINAL_SUM_TOL:
            raise InputError(f"marginal must sum to 1 within {_MARGINAL_SUM_TOL}, got {total!r}")
        object.__setattr__(self, "weights", arr)

    @classmethod
    def uniform(cls, size: int) -> "Marginal":
        if size < 1:
            raise InputError("uniform marginal needs size >= 1")
        return cls(np.full(size, 1.0 / size))

    @property
    def size(self) -> int:
        return self.weights.size


@dataclass(frozen=True)
class TransportPlan:
    """Solved coupling plus convergence diagnostics.

    values: non-negative n x m mass matrix
    total_mass: sum of all entries
    converged: residual reached the configured tolerance
    iterations: solver sweeps performed
    residual: max-norm violation of the marginal (or cap/mass) constraints
    """

    values: np.ndarray
    total_mass: float
    converged: bool
    iterations: int
    residual: float

    def __post_init__(self) -> None:
        arr = _frozen_array(self.values, 2, "plan")
        object.__setattr__(self, "values", arr)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    def row_marginal(self) -> np.ndarray:
        """Mass received by each source point; the hardening confidence signal."""
        return self.values.sum(axis=1)


@dataclass(frozen=True)
class SolverConfig:
    """Solver knobs.

    lam: entropy weight; larger values sharpen the plan toward the exact
        unregularized optimum (default 1.0)
    max_iters: sweep budget before giving up (plan still returned, converged=False)
    tolerance: max-norm marginal residual that counts as converged
    mass_p: fraction of mass to transport; set only for partial solves
    """

    lam: float = 1.0
    max_iters: int = 1000
    tolerance: float = 1e-8
    mass_p: float | None = None

    def __post_init__(self) -> None:
        if not np.isfinite(self.lam) or self.lam <= 0:
            raise InputError(f"lam must be a positive finite number, got {self.lam!r}")
        if self.max_iters < 1:
            raise InputError(f"max_iters must be >= 1, got {self.max_iters!r}")
        if not np.isfinite(self.tolerance) or self.tolerance <= 0:
            raise InputError(f"tolerance must be positive, got {self.tolerance!r}")
        if self.mass_p is not None:
            if not np.isfinite(self.mass_p) or not 0 < self.mass_p <= 1:
                raise InputError(f"mass_p must lie in (0, 1], got {self.mass_p!r}")


def _check_dims(cost: CostMatrix, a: Marginal, b: Marginal) -> None:
    if a.size != cost.rows or b.size != cost.cols:
        raise InputError(
            f"dimension mismatch: cost is {cost.rows}x{cost.cols}, "
            f"marginals have sizes {a.size} and {b.size}"
        )


def _log_weights(arr: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(arr)


def sinkhorn_complete(cost: CostMatrix, a: Marginal, b: Marginal, cfg: SolverConfig) -> TransportPlan:
    """Solve min <C, Q> - (1/lam) H(Q) subject to Q1 = a and Q^T 1 = b.

    Returns the plan with convergence diagnostics; a non-converged run is
    reported via converged=False, not raised. Zero-weight rows or columns
    in the marginals force the matching plan entries to zero.
    """
    _check_dims(cost, a, b)
    logK = np.ascontiguousarray(-cfg.lam * cost.values)
    aw = np.ascontiguousarray(a.weights)
    bw = np.ascontiguousarray(b.weights)
    u, v, iterations, residual = _kernels.sinkhorn_log(
        logK, aw, bw, _log_weights(aw), _log_weights(bw), cfg.max_iters, cfg.tolerance
    )
    with np.errstate(invalid="ignore"):
        values = np.exp(u[:, None] + logK + v[None, :])
    # -inf potentials on zero-weight points give nan only via inf-inf; force those to 0
    values[~np.isfinite(values)] = 0.0
    if not np.all(np.isfinite(u[np.isfinite(_log_weights(aw))])):
        raise SolverError("scaling vectors became non-finite; try a different lam or check inputs")
    return TransportPlan(
        values=values,
        total_mass=float(values.sum()),
        converged=bool(residual <= cfg.tolerance),
        iterations=int(iterations),
        residual=float(residual),
    )


def sinkhorn_partial(cost: CostMatrix, a: Marginal, b: Marginal, cfg: SolverConfig) -> TransportPlan:
    """Solve the entropic problem moving exactly mass_p of the unit mass.

    Row sums are capped by a, column sums by b, and the total transported
    mass equals cfg.mass_p. Implemented as cyclic KL projections onto the
    three constraint sets, iterated until the worst cap violation and the
    mass error drop below tolerance.
    """
    _check_dims(cost, a, b)
    if cfg.mass_p is None:
        raise InputError("partial solve requires cfg.mass_p in (0, 1]")
    p = float(cfg.mass_p)
    aw = a.weights
    bw = b.weights
    # zero-cap rows/columns can never carry mass; solve the reduced problem
    keep_r = aw > 0
    keep_c = bw > 0
    sub = np.ascontiguousarray(cost.values[np.ix_(keep_r, keep_c)])
    a_sub = np.ascontiguousarray(aw[keep_r])
    b_sub = np.ascontiguousarray(bw[keep_c])
    G = -cfg.lam * sub
    flat_mx = float(G.max())
    log_norm = np.log(np.sum(np.exp(G - flat_mx))) + flat_mx
    logK0 = np.ascontiguousarray(G + np.log(p) - log_norm)
    logx, logy, logc, iterations, residual = _kernels.partial_dykstra_log(
        logK0,
        a_sub,
        b_sub,
        _log_weights(a_sub),
        _log_weights(b_sub),
        p,
        cfg.max_iters,
        cfg.tolerance,
    )
    sub_values = np.exp(logK0 + np.asarray(logx)[:, None] + np.asarray(logy)[None, :] + float(logc))
    if not np.all(np.isfinite(sub_values)):
        raise SolverError("scaling vectors became non-finite; try a different lam or check inputs")
    values = np.zeros((cost.rows, cost.cols))
    values[np.ix_(keep_r, keep_c)] = sub_values
    return TransportPlan(
        values=values,
        total_mass=float(values.sum()),
        converged=bool(residual <= cfg.tolerance),
        iterations=int(iterations),
        residual=float(residual),
    )


def wasserstein_cost(plan: TransportPlan, cost: CostMatrix) -> float:
    """Aggregate transport cost sum_ij C[i,j] * Q[i,j]."""
    if plan.values.shape != cost.values.shape:
        raise InputError(
            f"dimension mismatch: plan is {plan.values.shape}, cost is {cost.values.shape}"
        )
    return float(np.sum(plan.values * cost.values))
