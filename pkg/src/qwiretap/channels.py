"""Quantum wiretap channels: construction, conversion, composition, degradedness.

A wiretap channel is stored as an isometric dilation V: A -> B (x) E.  The
legitimate receiver's and eavesdropper's marginals are obtained by tracing the
other side out; both are exposed in Kraus form.  The Choi convention is
Tr_out(J) = I_in (unnormalized maximally entangled state).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, ParameterError, ShapeError, ValidityError
from .labeled import DENSE_BUDGET, LabeledOperator, PureState, Register

ISOMETRY_TOL = 1e-10


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators of a CPTP map; sum K^dag K = I within 1e-9."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.operators)
        if not ops:
            raise ValidityError("empty Kraus set")
        din = ops[0].shape[1]
        comp = sum(k.conj().T @ k for k in ops)
        if np.abs(comp - np.eye(din)).max() > 1e-9:
            raise ValidityError("Kraus completeness sum K^dag K != I")
        object.__setattr__(self, "operators", ops)

    @property
    def dim_in(self) -> int:
        return self.operators[0].shape[1]

    @property
    def dim_out(self) -> int:
        return self.operators[0].shape[0]

    def apply(self, rho: np.ndarray) -> np.ndarray:
        rho = np.asarray(rho, dtype=complex)
        return sum(k @ rho @ k.conj().T for k in self.operators)


@dataclass(frozen=True)
class ChoiMatrix:
    """Choi operator on input (x) output with Tr_out(J) = I_in."""

    matrix: np.ndarray
    dim_in: int
    dim_out: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.dim_in * self.dim_out
        if m.shape != (d, d):
            raise ShapeError(f"Choi shape {m.shape}, expected {(d, d)}")
        object.__setattr__(self, "matrix", m)

    def trace_out_output(self) -> np.ndarray:
        t = self.matrix.reshape(self.dim_in, self.dim_out, self.dim_in, self.dim_out)
        return np.trace(t, axis1=1, axis2=3)

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Channel action Tr_in[J (rho^T (x) I)]."""
        t = self.matrix.reshape(self.dim_in, self.dim_out, self.dim_in, self.dim_out)
        return np.einsum("iajb,ij->ab", t, np.asarray(rho, dtype=complex))


@dataclass(frozen=True)
class CptpReport:
    psd_violation: float
    tp_violation: float
    passed: bool


def validate_cptp(choi: ChoiMatrix, tol: float = 1e-9) -> CptpReport:
    m = (choi.matrix + choi.matrix.conj().T) / 2
    lo = float(np.linalg.eigvalsh(m).min())
    psd_violation = max(0.0, -lo)
    tp_violation = float(np.linalg.norm(choi.trace_out_output() - np.eye(choi.dim_in)))
    return CptpReport(psd_violation, tp_violation, psd_violation <= tol and tp_violation <= tol)


def to_choi(kraus: KrausSet) -> ChoiMatrix:
    din, dout = kraus.dim_in, kraus.dim_out
    j = np.zeros((din * dout, din * dout), dtype=complex)
    for k in kraus.operators:
        v = k.T.reshape(-1)  # v[(i, a)] = K[a, i]
        j += np.outer(v, v.conj())
    return ChoiMatrix(j, din, dout)


def from_choi(choi: ChoiMatrix, tol: float = 1e-9) -> KrausSet:
    report = validate_cptp(choi, tol)
    if not report.passed:
        which = []
        if report.psd_violation > tol:
            which.append(f"positivity (violation {report.psd_violation:.3e})")
        if report.tp_violation > tol:
            which.append(f"trace preservation (violation {report.tp_violation:.3e})")
        raise ValidityError("Choi is not CPTP: " + ", ".join(which))
    m = (choi.matrix + choi.matrix.conj().T) / 2
    vals, vecs = np.linalg.eigh(m)
    ops = []
    for lam, v in zip(vals, vecs.T):
        if lam > 1e-12:
            ops.append(np.sqrt(lam) * v.reshape(choi.dim_in, choi.dim_out).T)
    return KrausSet(tuple(ops))


@dataclass(frozen=True)
class WiretapChannel:
    """Isometric dilation with named input and output registers.

    The isometry's output rows follow the order of ``out_regs``; each output
    register belongs to Bob or Eve according to ``bob_names``/``eve_names``.
    """

    input_regs: tuple[Register, ...]
    out_regs: tuple[Register, ...]
    bob_names: frozenset[str]
    eve_names: frozenset[str]
    isometry: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.isometry, dtype=complex)
        din = math.prod(r.dim for r in self.input_regs)
        dout = math.prod(r.dim for r in self.out_regs)
        if v.shape != (dout, din):
            raise ShapeError(f"isometry shape {v.shape}, expected {(dout, din)}")
        if np.abs(v.conj().T @ v - np.eye(din)).max() > ISOMETRY_TOL:
            raise ValidityError("V^dag V != I: not an isometry")
        names = {r.name for r in self.out_regs}
        if self.bob_names | self.eve_names != names or self.bob_names & self.eve_names:
            raise ValidityError("bob/eve names must partition the output registers")
        object.__setattr__(self, "isometry", v)
        object.__setattr__(self, "input_regs", tuple(self.input_regs))
        object.__setattr__(self, "out_regs", tuple(self.out_regs))

    @property
    def dim_in(self) -> int:
        return math.prod(r.dim for r in self.input_regs)

    @property
    def dim_bob(self) -> int:
        return math.prod(r.dim for r in self.out_regs if r.name in self.bob_names)

    @property
    def dim_eve(self) -> int:
        return math.prod(r.dim for r in self.out_regs if r.name in self.eve_names)

    @property
    def input_names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.input_regs)


def _grouped_isometry(channel: WiretapChannel, first: str) -> np.ndarray:
    """Isometry reshaped to (d_first, d_other, d_in) with first = 'bob'|'eve'."""
    dims = tuple(r.dim for r in channel.out_regs)
    v = channel.isometry.reshape(dims + (channel.dim_in,))
    bob_axes = [i for i, r in enumerate(channel.out_regs) if r.name in channel.bob_names]
    eve_axes = [i for i, r in enumerate(channel.out_regs) if r.name in channel.eve_names]
    order = (bob_axes + eve_axes) if first == "bob" else (eve_axes + bob_axes)
    v = np.moveaxis(v, order, range(len(order)))
    d1 = channel.dim_bob if first == "bob" else channel.dim_eve
    d2 = channel.dim_eve if first == "bob" else channel.dim_bob
    return v.reshape(d1, d2, channel.dim_in)


def marginal(channel: WiretapChannel, receiver: str) -> KrausSet:
    """Kraus set of the marginal channel to ``receiver`` in {'bob', 'eve'}."""
    if receiver not in ("bob", "eve"):
        raise ParameterError(f"receiver must be 'bob' or 'eve', got {receiver!r}")
    v = _grouped_isometry(channel, receiver)
    return KrausSet(tuple(v[:, j, :] for j in range(v.shape[1])))


def apply(channel: WiretapChannel, rho: LabeledOperator) -> LabeledOperator:
    """Channel action on a state carrying the input registers (bystanders allowed)."""
    missing = set(channel.input_names) - set(rho.names)
    if missing:
        raise ShapeError(f"state lacks channel input registers {sorted(missing)}")
    for r in channel.input_regs:
        if rho.register(r.name).dim != r.dim:
            raise ShapeError(f"register {r.name!r} has dim {rho.register(r.name).dim}, channel expects {r.dim}")
    rest = [n for n in rho.names if n not in channel.input_names]
    ordered = rho.reordered(list(channel.input_names) + rest)
    d_rest = ordered.total_dim // channel.dim_in
    out_total = math.prod(r.dim for r in channel.out_regs)
    if out_total * d_rest > DENSE_BUDGET:
        raise CapacityError("channel output exceeds dense budget")
    big = np.kron(channel.isometry, np.eye(d_rest))
    out = big @ ordered.matrix @ big.conj().T
    regs = channel.out_regs + tuple(ordered.registers[len(channel.input_regs):])
    kind = "state" if rho.kind == "state" else "generic"
    if kind == "state":
        out = (out + out.conj().T) / 2
    return LabeledOperator(regs, out, kind)


def apply_pure(channel: WiretapChannel, psi: PureState) -> PureState:
    """Isometry action on a pure state; output stays pure on (B, E, bystanders)."""
    missing = set(channel.input_names) - set(psi.names)
    if missing:
        raise ShapeError(f"state lacks channel input registers {sorted(missing)}")
    rest = [n for n in psi.names if n not in channel.input_names]
    ordered = psi.reordered(list(channel.input_names) + rest)
    d_rest = math.prod(dict(zip(ordered.names, ordered.dims))[n] for n in rest) if rest else 1
    vec = ordered.amplitudes.reshape(channel.dim_in, d_rest)
    out = channel.isometry @ vec
    regs = channel.out_regs + tuple(ordered.registers[len(channel.input_regs):])
    return PureState(regs, out.reshape(-1))


def tensor_power(channel: WiretapChannel, n: int) -> WiretapChannel:
    """n-fold product channel with registers relabeled A1.., B1.., E1.. per copy."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if n == 1:
        return channel
    if channel.dim_in ** n > DENSE_BUDGET or (channel.dim_bob * channel.dim_eve) ** n > DENSE_BUDGET:
        raise CapacityError(f"tensor power {n} exceeds dense budget")
    v = np.array([[1.0]], dtype=complex)
    in_regs: list[Register] = []
    out_regs: list[Register] = []
    bob: set[str] = set()
    eve: set[str] = set()
    for i in range(1, n + 1):
        v = np.kron(v, channel.isometry)
        in_regs += [Register(f"{r.name}{i}", r.dim) for r in channel.input_regs]
        for r in channel.out_regs:
            nm = f"{r.name}{i}"
            out_regs.append(Register(nm, r.dim))
            (bob if r.name in channel.bob_names else eve).add(nm)
    return WiretapChannel(tuple(in_regs), tuple(out_regs), frozenset(bob), frozenset(eve), v)


def eve_trivial(channel: WiretapChannel) -> WiretapChannel:
    """Same dilation with every output handed to Bob and a dim-1 Eve register."""
    regs = channel.out_regs + (Register("E0", 1),)
    bob = frozenset(r.name for r in channel.out_regs)
    return WiretapChannel(channel.input_regs, regs, bob, frozenset({"E0"}), channel.isometry)


# -- channel zoo ----------------------------------------------------------


def _stinespring(kraus_ops: Sequence[np.ndarray], in_name="A", b_name="B", e_name="E") -> WiretapChannel:
    ops = [np.asarray(k, dtype=complex) for k in kraus_ops]
    dout, din = ops[0].shape
    de = len(ops)
    v = np.zeros((dout * de, din), dtype=complex)
    for e, k in enumerate(ops):
        for b in range(dout):
            v[b * de + e, :] = v[b * de + e, :] + k[b, :]
    return WiretapChannel(
        (Register(in_name, din),),
        (Register(b_name, dout), Register(e_name, de)),
        frozenset({b_name}),
        frozenset({e_name}),
        v,
    )


def identity_dilation(d: int) -> WiretapChannel:
    if d < 1:
        raise ParameterError("identity_dilation: dimension must be >= 1")
    return _stinespring([np.eye(d)])


def erasure_wiretap(eps: float) -> WiretapChannel:
    """Qubit in; Bob gets the qubit w.p. 1-eps, Eve gets it exactly when Bob does not.

    Both outputs are qutrits whose index 2 is an orthogonal erasure flag.
    """
    if not 0.0 <= eps <= 1.0:
        raise ParameterError(f"erasure probability {eps} outside [0, 1]")
    v = np.zeros((9, 2), dtype=complex)
    flag = 2
    for a in range(2):
        v[a * 3 + flag, a] = np.sqrt(1.0 - eps)  # Bob |a>, Eve flag
        v[flag * 3 + a, a] = np.sqrt(eps)        # Bob flag, Eve |a>
    return WiretapChannel(
        (Register("A", 2),),
        (Register("B", 3), Register("E", 3)),
        frozenset({"B"}),
        frozenset({"E"}),
        v,
    )


def dephasing_wiretap(p: float) -> WiretapChannel:
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"dephasing probability {p} outside [0, 1]")
    z = np.diag([1.0, -1.0])
    return _stinespring([np.sqrt(1 - p) * np.eye(2), np.sqrt(p) * z])


def depolarizing_wiretap(p: float) -> WiretapChannel:
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"depolarizing probability {p} outside [0, 1]")
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    z = np.diag([1.0, -1.0])
    ops = [
        np.sqrt(1 - 3 * p / 4) * np.eye(2),
        np.sqrt(p / 4) * x,
        np.sqrt(p / 4) * y,
        np.sqrt(p / 4) * z,
    ]
    return _stinespring(ops)


def amplitude_damping_wiretap(gamma: float) -> WiretapChannel:
    if not 0.0 <= gamma <= 1.0:
        raise ParameterError(f"damping rate {gamma} outside [0, 1]")
    k0 = np.diag([1.0, np.sqrt(1 - gamma)])
    k1 = np.zeros((2, 2))
    k1[0, 1] = np.sqrt(gamma)
    return _stinespring([k0, k1])


def cq_classical_wiretap(w_bob: np.ndarray, w_eve: np.ndarray) -> WiretapChannel:
    """Classical wiretap pair embedded as an isometry.

    ``w_bob[x, b]`` and ``w_eve[x, e]`` are row-stochastic.  Each input basis
    state |x> maps to the coherent square-root vectors of the two rows.  When
    those columns are not already orthonormal, a dephasing record register
    carrying |x> is appended on Bob's side to complete the isometry.
    """
    w_bob = np.asarray(w_bob, dtype=float)
    w_eve = np.asarray(w_eve, dtype=float)
    if w_bob.ndim != 2 or w_eve.ndim != 2 or w_bob.shape[0] != w_eve.shape[0]:
        raise ParameterError("w_bob and w_eve must be matrices with equal row counts")
    for w, label in ((w_bob, "w_bob"), (w_eve, "w_eve")):
        if w.min() < -1e-12 or np.abs(w.sum(axis=1) - 1.0).max() > 1e-10:
            raise ParameterError(f"{label} is not row-stochastic")
    dx, db = w_bob.shape
    de = w_eve.shape[1]
    beta = np.sqrt(w_bob)  # (x, b)
    eta = np.sqrt(w_eve)   # (x, e)
    gram = (beta @ beta.T) * (eta @ eta.T)
    if np.abs(gram - np.eye(dx)).max() <= 1e-12:
        v = np.einsum("xb,xe->bex", beta, eta).reshape(db * de, dx)
        return WiretapChannel(
            (Register("A", dx),),
            (Register("B", db), Register("E", de)),
            frozenset({"B"}),
            frozenset({"E"}),
            v,
        )
    v = np.zeros((db, dx, de, dx), dtype=complex)
    for x in range(dx):
        v[:, x, :, x] = np.outer(beta[x], eta[x])
    v = v.reshape(db * dx * de, dx)
    return WiretapChannel(
        (Register("A", dx),),
        (Register("B", db), Register("Bx", dx), Register("E", de)),
        frozenset({"B", "Bx"}),
        frozenset({"E"}),
        v,
    )


_ZOO = {
    "identity_dilation": (identity_dilation, 1),
    "erasure_wiretap": (erasure_wiretap, 1),
    "dephasing_wiretap": (dephasing_wiretap, 1),
    "depolarizing_wiretap": (depolarizing_wiretap, 1),
    "amplitude_damping_wiretap": (amplitude_damping_wiretap, 1),
    "cq_classical_wiretap": (cq_classical_wiretap, 2),
}


def make_channel(name: str, params: Sequence) -> WiretapChannel:
    """Build a zoo channel from its name and parameter list."""
    if name not in _ZOO:
        raise ParameterError(f"unknown channel {name!r}; known: {sorted(_ZOO)}")
    ctor, nargs = _ZOO[name]
    if len(params) != nargs:
        raise ParameterError(f"{name} expects {nargs} parameter(s), got {len(params)}")
    if name == "identity_dilation":
        return ctor(int(params[0]))
    return ctor(*params)


# -- degradedness ---------------------------------------------------------


@dataclass(frozen=True)
class DegradingReport:
    distance: float
    witness: ChoiMatrix
    verdict: str
    solver: str


def _partial_transpose_second(m: np.ndarray, d1: int, d2: int) -> np.ndarray:
    t = m.reshape(d1, d2, d1, d2)
    return t.transpose(0, 3, 2, 1).reshape(d1 * d2, d1 * d2)


def compose_choi(j_first: ChoiMatrix, j_second: ChoiMatrix) -> ChoiMatrix:
    """Choi of (second o first); middle dimensions must match."""
    da, db = j_first.dim_in, j_first.dim_out
    if j_second.dim_in != db:
        raise ShapeError("composition dimension mismatch")
    de = j_second.dim_out
    m1 = np.kron(_partial_transpose_second(j_first.matrix, da, db), np.eye(de))
    m2 = np.kron(np.eye(da), j_second.matrix)
    prod = (m1 @ m2).reshape(da, db, de, da, db, de)
    comp = np.trace(prod, axis1=1, axis2=4).reshape(da * de, da * de)
    return ChoiMatrix(comp, da, de)


def degrading_distance(channel: WiretapChannel, budget: int = 50000, seed: int = 0) -> DegradingReport:
    """Minimum Frobenius distance between Choi(Eve) and Choi(P o Bob) over CPTP P.

    The minimization is a convex least-squares over the degrading map's Choi
    matrix and is solved to optimality; ``budget`` and ``seed`` are accepted for
    interface stability but the convex solve does not need restarts.  The
    Frobenius-Choi surrogate for "approximately degraded" is a tool choice,
    not a channel-theoretic standard; reports flag it.
    """
    import cvxpy as cp

    del budget, seed
    j_bob = to_choi(marginal(channel, "bob"))
    j_eve = to_choi(marginal(channel, "eve"))
    da, db, de = channel.dim_in, channel.dim_bob, channel.dim_eve
    jp = cp.Variable((db * de, db * de), hermitian=True)
    constraints = [
        jp >> 0,
        cp.partial_trace(jp, [db, de], axis=1) == np.eye(db),
    ]
    m1 = np.kron(_partial_transpose_second(j_bob.matrix, da, db), np.eye(de))
    m2 = cp.kron(np.eye(da), jp)
    comp = cp.partial_trace(m1 @ m2, [da, db, de], axis=1)
    objective = cp.Minimize(cp.norm(comp - j_eve.matrix, "fro"))
    problem = cp.Problem(objective, constraints)
    solver = "CLARABEL"
    try:
        problem.solve(solver=cp.CLARABEL)
    except (cp.error.SolverError, ValueError):
        solver = "SCS"
        problem.solve(solver=cp.SCS, eps=1e-10, max_iters=200000)
    jp_val = (np.asarray(jp.value) + np.asarray(jp.value).conj().T) / 2
    witness = ChoiMatrix(jp_val, db, de)
    distance = float(np.linalg.norm(compose_choi(j_bob, witness).matrix - j_eve.matrix))
    if distance <= 1e-6:
        verdict = "degraded (numerical)"
    elif distance >= 1e-2:
        verdict = "likely non-degraded"
    else:
        verdict = "inconclusive"
    return DegradingReport(distance, witness, verdict, solver)
