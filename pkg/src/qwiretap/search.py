"""Parameterizations and a deterministic multistart simplex optimizer.

Probability vectors come from a softmax, pure states from normalized re/im
coordinate pairs, and unitaries/isometries from exponentials of anti-Hermitian
generators.  All maps are smooth surjections from unconstrained real vectors,
so a gradient-free local search can explore them directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import expm, logm
from scipy.optimize import minimize

from .errors import ParameterError


def softmax(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    w = np.exp(z - z.max())
    return w / w.sum()


def complex_vector(params: np.ndarray, dim: int) -> np.ndarray:
    """Unit complex vector from 2*dim reals (re/im pairs)."""
    params = np.asarray(params, dtype=float)
    if params.size != 2 * dim:
        raise ParameterError(f"expected {2 * dim} reals, got {params.size}")
    v = params[:dim] + 1j * params[dim:]
    norm = np.linalg.norm(v)
    if norm < 1e-12:
        v = np.zeros(dim, dtype=complex)
        v[0] = 1.0
        return v
    return v / norm


def anti_hermitian(params: np.ndarray, d: int) -> np.ndarray:
    """Anti-Hermitian d x d generator from d^2 reals."""
    params = np.asarray(params, dtype=float)
    if params.size != d * d:
        raise ParameterError(f"expected {d * d} reals, got {params.size}")
    diag = params[:d]
    rest = params[d:]
    m = 1j * np.diag(diag).astype(complex)
    k = 0
    for i in range(d):
        for j in range(i + 1, d):
            re, im = rest[2 * k], rest[2 * k + 1]
            m[i, j] += re + 1j * im
            m[j, i] += -re + 1j * im
            k += 1
    return m


def unitary_from_params(params: np.ndarray, d: int) -> np.ndarray:
    return expm(anti_hermitian(params, d))


def isometry_from_params(params: np.ndarray, d_in: int, d_out: int) -> np.ndarray:
    """d_out x d_in isometry: first d_in columns of a parameterized unitary."""
    if d_in > d_out:
        raise ParameterError(f"isometry needs d_in <= d_out, got {d_in} > {d_out}")
    return unitary_from_params(params, d_out)[:, :d_in]


def params_from_unitary(u: np.ndarray) -> np.ndarray:
    """Inverse of unitary_from_params up to branch choice; exact round trip
    is not required, only that the forward map reproduces u."""
    d = u.shape[0]
    g = logm(np.asarray(u, dtype=complex))
    g = (g - g.conj().T) / 2
    out = np.empty(d * d)
    out[:d] = np.imag(np.diag(g))
    k = 0
    rest = out[d:]
    for i in range(d):
        for j in range(i + 1, d):
            rest[2 * k] = g[i, j].real
            rest[2 * k + 1] = g[i, j].imag
            k += 1
    return out


@dataclass(frozen=True)
class SearchResult:
    x: np.ndarray
    value: float
    evals: int


def multistart_minimize(
    fn: Callable[[np.ndarray], float],
    n_params: int,
    budget: int,
    seed: int,
    starts: int = 16,
    structured_starts: Sequence[np.ndarray] = (),
) -> SearchResult:
    """Nelder-Mead from several starts; deterministic given (seed, budget).

    Structured starts are tried first, then random ones; every objective call
    counts against the shared budget and the overall best point wins (ties go
    to the earlier start).
    """
    if budget <= 0:
        raise ParameterError(f"budget must be positive, got {budget}")
    rng = np.random.default_rng(seed)
    start_points = [np.asarray(s, dtype=float) for s in structured_starts]
    while len(start_points) < max(starts, len(start_points)):
        start_points.append(rng.normal(scale=1.0, size=n_params))
    evals = 0
    best_x = start_points[0]
    best_val = np.inf

    def counted(x):
        nonlocal evals
        evals += 1
        return fn(x)

    per_start = max(budget // len(start_points), 10)
    for x0 in start_points:
        remaining = budget - evals
        if remaining <= 0:
            break
        v0 = counted(x0)
        if v0 < best_val:
            best_val, best_x = v0, x0.copy()
        maxfev = min(per_start, budget - evals)
        if maxfev <= 0:
            break
        res = minimize(
            counted,
            x0,
            method="Nelder-Mead",
            options={"maxfev": maxfev, "xatol": 1e-6, "fatol": 1e-9},
        )
        if res.fun < best_val:
            best_val, best_x = float(res.fun), np.asarray(res.x, dtype=float)
    return SearchResult(best_x, float(best_val), evals)
