"""Parity and selection tests for the numba and numpy solver kernels."""

import os
import subprocess
import sys

import numpy as np
import pytest

from labelot._kernels import BACKEND_NAME, active_backend
from labelot._kernels import numpy_backend

numba_backend = pytest.importorskip("labelot._kernels.numba_backend")


def random_problem(rng: np.random.Generator, n: int, m: int):
    cost = rng.uniform(0.0, 3.0, size=(n, m))
    a = rng.uniform(0.1, 1.0, size=n)
    a /= a.sum()
    b = rng.uniform(0.1, 1.0, size=m)
    b /= b.sum()
    return cost, a, b


def log_kernel(cost: np.ndarray, lam: float) -> np.ndarray:
    return -lam * cost


class TestBackendParity:
    def test_sinkhorn_outputs_match(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            n = int(rng.integers(1, 7))
            m = int(rng.integers(1, 7))
            cost, a, b = random_problem(rng, n, m)
            logk = log_kernel(cost, 2.0)
            args = (logk, a, b, np.log(a), np.log(b), 500, 1e-10)
            u1, v1, it1, r1 = numpy_backend.sinkhorn_log(*args)
            u2, v2, it2, r2 = numba_backend.sinkhorn_log(*args)
            assert it1 == it2
            assert np.allclose(u1, u2, atol=1e-12, rtol=0)
            assert np.allclose(v1, v2, atol=1e-12, rtol=0)
            assert abs(r1 - r2) < 1e-12

    def test_partial_outputs_match(self):
        rng = np.random.default_rng(12)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            m = int(rng.integers(2, 6))
            cost, a, b = random_problem(rng, n, m)
            p = float(rng.uniform(0.3, 1.0))
            g = -3.0 * cost
            logk0 = g + np.log(p) - logsumexp_all(g)
            args = (logk0, a, b, np.log(a), np.log(b), p, 2000, 1e-10)
            x1, y1, c1, it1, r1 = numpy_backend.partial_dykstra_log(*args)
            x2, y2, c2, it2, r2 = numba_backend.partial_dykstra_log(*args)
            assert it1 == it2
            assert np.allclose(x1, x2, atol=1e-12, rtol=0)
            assert np.allclose(y1, y2, atol=1e-12, rtol=0)
            assert abs(c1 - c2) < 1e-12
            assert abs(r1 - r2) < 1e-12

    def test_zero_weight_entries_match(self):
        # -inf log weights must propagate identically in both kernels
        a = np.array([0.5, 0.5, 0.0])
        b = np.array([0.25, 0.75])
        with np.errstate(divide="ignore"):
            log_a = np.log(a)
            log_b = np.log(b)
        logk = log_kernel(np.array([[0.0, 1.0], [2.0, 0.5], [1.0, 1.0]]), 4.0)
        u1, v1, it1, r1 = numpy_backend.sinkhorn_log(logk, a, b, log_a, log_b, 500, 1e-10)
        u2, v2, it2, r2 = numba_backend.sinkhorn_log(logk, a, b, log_a, log_b, 500, 1e-10)
        plan1 = np.exp(logk + u1[:, None] + v1[None, :])
        plan2 = np.exp(logk + u2[:, None] + v2[None, :])
        assert np.allclose(plan1, plan2, atol=1e-14, rtol=0)
        assert plan1[2].sum() == pytest.approx(0.0, abs=1e-14)
        assert it1 == it2 and abs(r1 - r2) < 1e-14


def logsumexp_all(arr: np.ndarray) -> float:
    hi = arr.max()
    return float(hi + np.log(np.exp(arr - hi).sum()))


SELECT_SNIPPET = """
import labelot._kernels as k
print(k.BACKEND_NAME)
"""


class TestBackendSelection:
    def test_active_backend_matches_name(self):
        assert active_backend() == BACKEND_NAME
        assert BACKEND_NAME in ("numba", "numpy")

    @pytest.mark.parametrize("flag", ["numpy", "numba"])
    def test_env_flag_selects_backend(self, flag: str):
        env = dict(os.environ, LABELOT_BACKEND=flag)
        out = subprocess.run(
            [sys.executable, "-c", SELECT_SNIPPET],
            capture_output=True,
            text=True,
            env=env,
            check=True,
        )
        assert out.stdout.strip() == flag

    def test_unknown_flag_is_rejected(self):
        env = dict(os.environ, LABELOT_BACKEND="cuda")
        out = subprocess.run(
            [sys.executable, "-c", SELECT_SNIPPET],
            capture_output=True,
            text=True,
            env=env,
        )
        assert out.returncode != 0
        assert "LABELOT_BACKEND" in out.stderr
