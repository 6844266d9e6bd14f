"""Exact complex linear algebra over labeled multi-register systems.

Operators and pure states carry an ordered list of named registers, so that
partial traces, tensor products and basis permutations can be requested by
register name instead of by raw index arithmetic.  Everything is dense; the
supported total dimension is capped by DENSE_BUDGET.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, RegisterError, ShapeError, ValidityError

DENSE_BUDGET = 4096

STATE_TOL = 1e-10
UNITARY_TOL = 1e-10
PROJECTOR_TOL = 1e-10
NORM_TOL = 1e-12


@dataclass(frozen=True)
class Register:
    """A named tensor factor with a fixed dimension."""

    name: str
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValidityError(f"register {self.name!r}: dim must be >= 1, got {self.dim}")


def _check_unique(registers: Sequence[Register]):
    names = [r.name for r in registers]
    if len(set(names)) != len(names):
        raise RegisterError(f"duplicate register names in {names}")


def _total_dim(registers: Sequence[Register]) -> int:
    return math.prod(r.dim for r in registers)


@dataclass(frozen=True)
class LabeledOperator:
    """A square complex matrix attached to an ordered list of registers.

    ``kind`` is one of ``state``, ``unitary``, ``projector``, ``generic`` and
    is validated at construction time.
    """

    registers: tuple[Register, ...]
    matrix: np.ndarray
    kind: str = "generic"

    def __post_init__(self):
        regs = tuple(self.registers)
        object.__setattr__(self, "registers", regs)
        _check_unique(regs)
        d = _total_dim(regs)
        if d > DENSE_BUDGET:
            raise CapacityError(f"total dimension {d} exceeds dense budget {DENSE_BUDGET}")
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (d, d):
            raise ShapeError(f"matrix shape {m.shape} does not match register dims (product {d})")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        self._validate_kind()

    def _validate_kind(self):
        m, kind = self.matrix, self.kind
        if kind == "generic":
            return
        if kind == "state":
            if np.abs(m - m.conj().T).max() > STATE_TOL:
                raise ValidityError("state is not Hermitian")
            if abs(np.trace(m).real - 1.0) > STATE_TOL or abs(np.trace(m).imag) > STATE_TOL:
                raise ValidityError(f"state trace {np.trace(m)} is not 1")
            lo = np.linalg.eigvalsh((m + m.conj().T) / 2).min()
            if lo < -STATE_TOL:
                raise ValidityError(f"state has negative eigenvalue {lo}")
        elif kind == "unitary":
            d = m.shape[0]
            if np.abs(m.conj().T @ m - np.eye(d)).max() > UNITARY_TOL:
                raise ValidityError("operator is not unitary")
        elif kind == "projector":
            if np.abs(m - m.conj().T).max() > PROJECTOR_TOL or np.abs(m @ m - m).max() > PROJECTOR_TOL:
                raise ValidityError("operator is not an orthogonal projector")
        else:
            raise ValidityError(f"unknown kind {kind!r}")

    # -- register helpers -------------------------------------------------

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.registers)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(r.dim for r in self.registers)

    @property
    def total_dim(self) -> int:
        return _total_dim(self.registers)

    def register(self, name: str) -> Register:
        for r in self.registers:
            if r.name == name:
                return r
        raise RegisterError(f"no register named {name!r} in {self.names}")

    def reordered(self, order: Sequence[str]) -> "LabeledOperator":
        """Permute the tensor factors into the given name order."""
        order = tuple(order)
        if sorted(order) != sorted(self.names):
            raise RegisterError(f"order {order} is not a permutation of {self.names}")
        if order == self.names:
            return self
        perm = [self.names.index(n) for n in order]
        k = len(self.registers)
        dims = self.dims
        tensor = self.matrix.reshape(dims + dims)
        tensor = tensor.transpose(tuple(perm) + tuple(p + k for p in perm))
        d = self.total_dim
        regs = tuple(self.registers[p] for p in perm)
        return LabeledOperator(regs, tensor.reshape(d, d), self.kind)

    def canonicalized(self) -> "LabeledOperator":
        """Lexicographic register order; the shared order used before combining."""
        return self.reordered(sorted(self.names))

    @staticmethod
    def identity(registers: Iterable[Register]) -> "LabeledOperator":
        regs = tuple(registers)
        return LabeledOperator(regs, np.eye(_total_dim(regs)), "unitary")


@dataclass(frozen=True)
class PureState:
    """A unit-norm complex amplitude vector over labeled registers."""

    registers: tuple[Register, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        regs = tuple(self.registers)
        object.__setattr__(self, "registers", regs)
        _check_unique(regs)
        d = _total_dim(regs)
        if d > DENSE_BUDGET:
            raise CapacityError(f"total dimension {d} exceeds dense budget {DENSE_BUDGET}")
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if v.shape != (d,):
            raise ShapeError(f"amplitude length {v.shape} does not match register dims (product {d})")
        if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
            raise ValidityError(f"amplitudes have norm {np.linalg.norm(v)}, expected 1")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.registers)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(r.dim for r in self.registers)

    def reordered(self, order: Sequence[str]) -> "PureState":
        order = tuple(order)
        if sorted(order) != sorted(self.names):
            raise RegisterError(f"order {order} is not a permutation of {self.names}")
        if order == self.names:
            return self
        perm = [self.names.index(n) for n in order]
        vec = self.amplitudes.reshape(self.dims).transpose(perm).reshape(-1)
        return PureState(tuple(self.registers[p] for p in perm), vec)

    def to_density(self) -> LabeledOperator:
        v = self.amplitudes
        return LabeledOperator(self.registers, np.outer(v, v.conj()), "state")


# -- operations -----------------------------------------------------------


def tensor(a: LabeledOperator, b: LabeledOperator) -> LabeledOperator:
    """Kronecker product; result registers are a's followed by b's."""
    if set(a.names) & set(b.names):
        raise RegisterError(f"register name collision: {set(a.names) & set(b.names)}")
    kind = a.kind if a.kind == b.kind else "generic"
    return LabeledOperator(a.registers + b.registers, np.kron(a.matrix, b.matrix), kind)


def tensor_pure(a: PureState, b: PureState) -> PureState:
    if set(a.names) & set(b.names):
        raise RegisterError(f"register name collision: {set(a.names) & set(b.names)}")
    return PureState(a.registers + b.registers, np.kron(a.amplitudes, b.amplitudes))


def partial_trace(op: LabeledOperator, keep: Iterable[str]) -> LabeledOperator:
    """Trace out every register not in ``keep``; kept registers stay in order."""
    keep = set(keep)
    unknown = keep - set(op.names)
    if unknown:
        raise RegisterError(f"unknown register names {sorted(unknown)}; have {op.names}")
    kept = [i for i, r in enumerate(op.registers) if r.name in keep]
    dropped = [i for i, r in enumerate(op.registers) if r.name not in keep]
    if not dropped:
        return op
    k = len(op.registers)
    dims = op.dims
    tensor_form = op.matrix.reshape(dims + dims)
    for off, i in enumerate(sorted(dropped, reverse=True)):
        # axes shift as earlier traces collapse pairs; trace highest index first
        tensor_form = np.trace(tensor_form, axis1=i, axis2=i + k - off)
    regs = tuple(op.registers[i] for i in kept)
    d = _total_dim(regs)
    kind = "state" if op.kind == "state" else "generic"
    mat = tensor_form.reshape(d, d)
    if kind == "state":
        mat = (mat + mat.conj().T) / 2
    return LabeledOperator(regs, mat, kind)


def eig_hermitian(h: LabeledOperator) -> tuple[np.ndarray, LabeledOperator]:
    """Eigenvalues (descending) and eigenvector matrix of a Hermitian operator."""
    m = h.matrix
    if np.abs(m - m.conj().T).max() > 1e-10:
        raise ValidityError("eig_hermitian: operator is not Hermitian within 1e-10")
    vals, vecs = np.linalg.eigh((m + m.conj().T) / 2)
    order = np.argsort(vals)[::-1]
    vals = vals[order]
    vecs = vecs[:, order]
    return vals, LabeledOperator(h.registers, vecs, "unitary")


def trace_distance(a: LabeledOperator, b: LabeledOperator) -> float:
    """Half the trace norm of a - b, after aligning register order."""
    if sorted(a.names) != sorted(b.names):
        raise ShapeError(f"register mismatch: {a.names} vs {b.names}")
    if {(r.name, r.dim) for r in a.registers} != {(r.name, r.dim) for r in b.registers}:
        raise ShapeError("register dimensions differ between the two operators")
    b = b.reordered(a.names)
    diff = a.matrix - b.matrix
    vals = np.linalg.eigvalsh((diff + diff.conj().T) / 2)
    return float(np.abs(vals).sum() / 2)


def schmidt_decompose(
    psi: PureState, cut: Iterable[str]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Schmidt decomposition across the bipartition (cut | rest).

    Returns descending coefficients ``sqrt(p_i)`` and matrices whose columns are
    the left (cut side) and right (complement) Schmidt vectors.
    """
    cut = set(cut)
    if not cut or cut == set(psi.names) or not cut <= set(psi.names):
        raise RegisterError(f"cut {sorted(cut)} must be a proper nonempty subset of {psi.names}")
    left = [n for n in psi.names if n in cut]
    right = [n for n in psi.names if n not in cut]
    ordered = psi.reordered(left + right)
    by_name = dict(zip(ordered.names, ordered.dims))
    dl = math.prod(by_name[n] for n in left)
    dr = math.prod(by_name[n] for n in right)
    mat = ordered.amplitudes.reshape(dl, dr)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    nz = s > 1e-14
    # right vectors as kets: psi = sum_i s_i u[:, i] (x) vh[i, :]
    return s[nz], u[:, nz], vh[nz, :].T


def purify(rho: LabeledOperator, ref_name: str = "REF") -> PureState:
    """Spectral purification; appends a reference register of dim = rank(rho)."""
    if rho.kind != "state":
        rho = LabeledOperator(rho.registers, rho.matrix, "state")
    if ref_name in rho.names:
        raise RegisterError(f"reference name {ref_name!r} collides with {rho.names}")
    vals, vecs = eig_hermitian(rho)
    support = vals > 1e-12
    vals = vals[support]
    cols = vecs.matrix[:, support]
    rank = max(int(support.sum()), 1)
    if vals.size == 0:
        raise ValidityError("state has no support")
    amp = np.zeros(rho.total_dim * rank, dtype=complex).reshape(rho.total_dim, rank)
    for i, (lam, col) in enumerate(zip(vals, cols.T)):
        amp[:, i] = np.sqrt(lam) * col
    amp = amp.reshape(-1)
    amp = amp / np.linalg.norm(amp)
    regs = rho.registers + (Register(ref_name, rank),)
    return PureState(regs, amp)
