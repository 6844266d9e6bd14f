"""Entropic functionals in bits, with eigenvalue clipping for stability.

All logarithms are base 2 and all rates are bits per channel use.  States are
symmetrized and eigenvalues below the cutoff are dropped before evaluating
``lambda * log(lambda)``; the removed mass is reported on request.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import RegisterError, ValidityError
from .labeled import LabeledOperator, partial_trace

EIG_CUTOFF = 1e-12


@dataclass(frozen=True)
class EntropyReport:
    value: float
    clipped_mass: float


def binary_entropy(p: float) -> float:
    """H_2(p) in bits."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def _spectrum(rho: LabeledOperator) -> np.ndarray:
    m = rho.matrix
    if np.abs(m - m.conj().T).max() > 1e-8:
        raise ValidityError("entropy input is not Hermitian")
    return np.linalg.eigvalsh((m + m.conj().T) / 2)


def von_neumann_report(rho: LabeledOperator) -> EntropyReport:
    vals = _spectrum(rho)
    tr = vals.sum()
    if abs(tr - 1.0) > 1e-8:
        raise ValidityError(f"entropy input has trace {tr}, expected 1")
    if vals.min() < -1e-8:
        raise ValidityError(f"entropy input has eigenvalue {vals.min()}")
    kept = vals[vals >= EIG_CUTOFF]
    clipped = float(abs(vals[vals < EIG_CUTOFF]).sum())
    value = float(-(kept * np.log2(kept)).sum())
    return EntropyReport(max(value, 0.0), clipped)


def von_neumann(rho: LabeledOperator) -> float:
    """H(rho) = -tr[rho log2 rho]."""
    return von_neumann_report(rho).value


def _marginal_entropy(rho: LabeledOperator, keep: Iterable[str]) -> float:
    keep = set(keep)
    if keep == set(rho.names):
        return von_neumann(rho)
    if not keep:
        return 0.0
    return von_neumann(partial_trace(rho, keep))


def conditional_entropy(rho: LabeledOperator, condition_on: Iterable[str]) -> float:
    """H(A|B) = H(AB) - H(B) with B = condition_on."""
    cond = set(condition_on)
    if not cond < set(rho.names):
        raise RegisterError(f"condition set {sorted(cond)} must be a proper subset of {rho.names}")
    return von_neumann(rho) - _marginal_entropy(rho, cond)


def mutual_information(rho: LabeledOperator, cut: Iterable[str]) -> float:
    """I(A;B) across the bipartition cut | rest."""
    cut = set(cut)
    if not cut or not cut < set(rho.names):
        raise RegisterError(f"cut {sorted(cut)} must be a proper nonempty subset of {rho.names}")
    rest = set(rho.names) - cut
    return _marginal_entropy(rho, cut) + _marginal_entropy(rho, rest) - von_neumann(rho)


def conditional_mutual_information(
    rho: LabeledOperator,
    a: Iterable[str],
    b: Iterable[str],
    c: Iterable[str],
) -> float:
    """I(A;B|C) = H(AC) + H(BC) - H(ABC) - H(C)."""
    a, b, c = set(a), set(b), set(c)
    if a & b or a & c or b & c or (a | b | c) != set(rho.names):
        raise RegisterError(
            f"(a, b, c) = ({sorted(a)}, {sorted(b)}, {sorted(c)}) must partition {rho.names}"
        )
    h_ac = _marginal_entropy(rho, a | c)
    h_bc = _marginal_entropy(rho, b | c)
    h_abc = von_neumann(rho)
    h_c = _marginal_entropy(rho, c) if c else 0.0
    return h_ac + h_bc - h_abc - h_c


def holevo_chi(
    ensemble: Sequence[tuple[float, np.ndarray]],
    kraus: Sequence[np.ndarray] | None = None,
) -> float:
    """Holevo information I(X;B) of the cq state sum_x p(x)|x><x| (x) L(rho_x).

    ``ensemble`` holds (probability, density matrix) pairs; ``kraus`` is the
    channel marginal applied to each state (identity if omitted).
    """
    probs = np.array([p for p, _ in ensemble], dtype=float)
    if abs(probs.sum() - 1.0) > 1e-10 or probs.min() < -1e-12:
        raise ValidityError(f"ensemble probabilities sum to {probs.sum()}")
    outputs = []
    for _, rho in ensemble:
        rho = np.asarray(rho, dtype=complex)
        if kraus is not None:
            rho = sum(k @ rho @ k.conj().T for k in kraus)
        outputs.append(rho)
    avg = sum(p * out for p, out in zip(probs, outputs))
    chi = _matrix_entropy(avg)
    for p, out in zip(probs, outputs):
        if p > 0:
            chi -= p * _matrix_entropy(out)
    return float(chi)


def _matrix_entropy(m: np.ndarray) -> float:
    vals = np.linalg.eigvalsh((m + m.conj().T) / 2)
    kept = vals[vals >= EIG_CUTOFF]
    if kept.size == 0:
        return 0.0
    return float(-(kept * np.log2(kept)).sum())
