"""Method of types at small blocklength: typical sets, typical projectors,
and covering-lemma experiments.

Typicality here is one-sided: a sequence is delta-typical when every letter's
empirical frequency satisfies N(a)/n <= (1 + delta) p(a).  With this convention
the dimension bound and the lower sandwich bound are exact identities at every
n, which is what the verification reports check; the complementary bounds are
asymptotic and are checked in measured-exponent form with a type-counting
slack, flagged "small_n" below n = 6.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapacityError, ParameterError, ValidityError
from .labeled import DENSE_BUDGET, LabeledOperator, Register, eig_hermitian

ENUMERATION_LIMIT = 1 << 20
SMALL_N = 6


@dataclass(frozen=True)
class TypeClass:
    """All length-n sequences over [0, alphabet) with the given letter counts."""

    alphabet: int
    n: int
    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.alphabet or sum(self.counts) != self.n:
            raise ValidityError(f"counts {self.counts} do not form a type for n={self.n}")
        if min(self.counts) < 0:
            raise ValidityError("negative count")

    @property
    def size(self) -> int:
        num = math.factorial(self.n)
        for c in self.counts:
            num //= math.factorial(c)
        return num

    def contains(self, seq: Sequence[int]) -> bool:
        return empirical_counts(seq, self.alphabet) == self.counts

    def members(self) -> list[tuple[int, ...]]:
        """Sequences of this type in lexicographic order."""
        letters: list[int] = []
        for a, c in enumerate(self.counts):
            letters += [a] * c
        return sorted(set(itertools.permutations(letters)))


def empirical_counts(seq: Sequence[int], alphabet: int) -> tuple[int, ...]:
    counts = [0] * alphabet
    for s in seq:
        counts[s] += 1
    return tuple(counts)


def _counts_typical(counts: Sequence[int], p: np.ndarray, n: int, delta: float) -> bool:
    return all(c <= n * (1.0 + delta) * pa + 1e-12 for c, pa in zip(counts, p))


def typical_set(p: Sequence[float], n: int, delta: float) -> list[tuple[int, ...]]:
    """All sequences with N(a)/n <= (1 + delta) p(a) for every letter a."""
    p = np.asarray(p, dtype=float)
    if p.min() < -1e-12 or abs(p.sum() - 1.0) > 1e-9:
        raise ParameterError(f"not a probability vector: {p}")
    if delta <= 0:
        raise ParameterError(f"delta must be positive, got {delta}")
    if n > 16 or len(p) ** n > ENUMERATION_LIMIT:
        raise CapacityError(f"enumeration of {len(p)}^{n} sequences exceeds budget")
    out = []
    for seq in itertools.product(range(len(p)), repeat=n):
        if _counts_typical(empirical_counts(seq, len(p)), p, n, delta):
            out.append(seq)
    return out


def typical_type_classes(p: Sequence[float], n: int, delta: float) -> list[TypeClass]:
    p = np.asarray(p, dtype=float)
    classes = []
    for counts in itertools.product(range(n + 1), repeat=len(p)):
        if sum(counts) == n and _counts_typical(counts, p, n, delta):
            classes.append(TypeClass(len(p), n, counts))
    return classes


@dataclass(frozen=True)
class TypicalProjector:
    projector: LabeledOperator
    delta: float
    n: int
    spectra: tuple[tuple[float, ...], ...]
    xseq: tuple[int, ...] | None

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.projector.matrix).real))


def _state_eig(rho: LabeledOperator) -> tuple[np.ndarray, np.ndarray]:
    """Spectrum (descending, clipped) and eigenvector columns of a state."""
    vals, vecs = eig_hermitian(rho)
    vals = np.clip(vals, 0.0, None)
    return vals, vecs.matrix


def typical_projector(rho: LabeledOperator, n: int, delta: float) -> TypicalProjector:
    """Projector onto eigenbasis sequences whose index type is delta-typical."""
    vals, vecs = _state_eig(rho)
    d = rho.total_dim
    if d ** n > DENSE_BUDGET:
        raise CapacityError(f"dimension {d}^{n} exceeds dense budget")
    typical = set(typical_set(vals, n, delta))
    mask = np.zeros(d ** n)
    for seq in typical:
        idx = 0
        for s in seq:
            idx = idx * d + s
        mask[idx] = 1.0
    w = np.array([[1.0]], dtype=complex)
    for _ in range(n):
        w = np.kron(w, vecs)
    proj = (w * mask) @ w.conj().T
    proj = (proj + proj.conj().T) / 2
    regs = tuple(Register(f"T{i + 1}", d) for i in range(n))
    return TypicalProjector(LabeledOperator(regs, proj, "projector"), delta, n, (tuple(vals),), None)


def conditional_typical_projector(
    ensemble: Sequence[tuple[float, LabeledOperator]],
    xseq: Sequence[int],
    delta: float,
) -> TypicalProjector:
    """Projector onto products of per-symbol eigenvectors whose index subsequence
    over each symbol class I_n(a) = {i : x_i = a} is delta-typical for rho_a."""
    xseq = tuple(int(x) for x in xseq)
    n = len(xseq)
    if max(xseq) >= len(ensemble):
        raise ParameterError(f"sequence letter {max(xseq)} outside ensemble of size {len(ensemble)}")
    spectra = []
    bases = []
    for _, rho in ensemble:
        vals, vecs = _state_eig(rho)
        spectra.append(vals)
        bases.append(vecs)
    d = ensemble[0][1].total_dim
    if d ** n > DENSE_BUDGET:
        raise CapacityError(f"dimension {d}^{n} exceeds dense budget")
    classes = {a: [i for i, x in enumerate(xseq) if x == a] for a in set(xseq)}
    mask = np.zeros(d ** n)
    for yseq in itertools.product(range(d), repeat=n):
        ok = True
        for a, idx in classes.items():
            sub = [yseq[i] for i in idx]
            if not _counts_typical(empirical_counts(sub, d), spectra[a], len(idx), delta):
                ok = False
                break
        if ok:
            flat = 0
            for y in yseq:
                flat = flat * d + y
            mask[flat] = 1.0
    w = np.array([[1.0]], dtype=complex)
    for x in xseq:
        w = np.kron(w, bases[x])
    proj = (w * mask) @ w.conj().T
    proj = (proj + proj.conj().T) / 2
    regs = tuple(Register(f"T{i + 1}", d) for i in range(n))
    return TypicalProjector(
        LabeledOperator(regs, proj, "projector"),
        delta,
        n,
        tuple(tuple(s) for s in spectra),
        xseq,
    )


# -- projector property verification ----------------------------------------


@dataclass(frozen=True)
class PropertyCheck:
    name: str
    measured: float
    bound: float
    passed: bool


@dataclass(frozen=True)
class ProjectorReport:
    checks: tuple[PropertyCheck, ...]
    small_n: bool
    conditional: bool

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _entropy_of(p: np.ndarray) -> float:
    kept = p[p > 1e-12]
    return float(-(kept * np.log2(kept)).sum()) if kept.size else 0.0


def _sandwich_eigs(proj: np.ndarray, rho_n: np.ndarray) -> tuple[float, float]:
    """(min, max) eigenvalue of Pi rho Pi restricted to the support of Pi."""
    m = proj @ rho_n @ proj
    vals = np.linalg.eigvalsh((m + m.conj().T) / 2)
    rank = int(round(np.trace(proj).real))
    if rank == 0:
        return 0.0, 0.0
    support = np.sort(vals)[::-1][:rank]
    return float(support.min()), float(support.max())


def _property_checks(
    proj: np.ndarray,
    rho_n: np.ndarray,
    n: int,
    delta: float,
    h_bits: float,
    alphabet: int,
    labels: tuple[str, str, str],
) -> list[PropertyCheck]:
    capture = float(np.trace(proj @ rho_n).real)
    rank = float(np.trace(proj).real)
    dim_bound = 2.0 ** (n * (1.0 + delta) * h_bits)
    lo, hi = _sandwich_eigs(proj, rho_n)
    slack = alphabet * np.log2(n + 1.0) / n
    upper_bound_exp = max((1.0 - delta) * h_bits - slack, 0.0)
    checks = [
        PropertyCheck(labels[0], capture, 0.0, 0.0 < capture <= 1.0 + 1e-10),
        PropertyCheck(labels[1], rank, dim_bound, rank <= dim_bound * (1.0 + 1e-9)),
        PropertyCheck(
            labels[2] + "_lower",
            lo,
            2.0 ** (-n * (1.0 + delta) * h_bits),
            lo >= 2.0 ** (-n * (1.0 + delta) * h_bits) * (1.0 - 1e-9) or rank == 0,
        ),
        PropertyCheck(
            labels[2] + "_upper",
            hi,
            2.0 ** (-n * upper_bound_exp),
            hi <= 2.0 ** (-n * upper_bound_exp) * (1.0 + 1e-9),
        ),
    ]
    return checks


def verify_projector_properties(
    rho_or_ensemble,
    n: int,
    delta: float,
    xseq: Sequence[int] | None = None,
) -> ProjectorReport:
    """Numerical check of the typical-projector properties.

    Unconditional form (``rho_or_ensemble`` a state, ``xseq`` omitted): capture,
    dimension bound, and sandwich bounds of the n-fold typical projector.
    Conditional form (an ensemble plus ``xseq``): the same checks for the
    conditional projector, with the entropy rate taken against the empirical
    type of ``xseq``.
    """
    if xseq is None:
        rho: LabeledOperator = rho_or_ensemble
        tp = typical_projector(rho, n, delta)
        vals, _ = _state_eig(rho)
        rho_n = np.array([[1.0]], dtype=complex)
        for _ in range(n):
            rho_n = np.kron(rho_n, rho.matrix)
        h = _entropy_of(vals)
        checks = _property_checks(
            tp.projector.matrix, rho_n, n, delta, h, rho.total_dim,
            ("capture", "dimension", "sandwich"),
        )
        return ProjectorReport(tuple(checks), n < SMALL_N, False)
    ensemble = rho_or_ensemble
    xseq = tuple(int(x) for x in xseq)
    tp = conditional_typical_projector(ensemble, xseq, delta)
    rho_n = np.array([[1.0]], dtype=complex)
    for x in xseq:
        rho_n = np.kron(rho_n, ensemble[x][1].matrix)
    # entropy rate H(B|X') with X' the empirical type of xseq
    h = 0.0
    for a in set(xseq):
        weight = xseq.count(a) / n
        h += weight * _entropy_of(np.asarray(tp.spectra[a]))
    d = ensemble[0][1].total_dim
    checks = _property_checks(
        tp.projector.matrix, rho_n, n, delta, h, d * len(set(xseq)),
        ("capture_cond", "dimension_cond", "sandwich_cond"),
    )
    return ProjectorReport(tuple(checks), n < SMALL_N, True)


# -- covering experiments ---------------------------------------------------


@dataclass(frozen=True)
class CoveringStats:
    distances: tuple[float, ...]
    rate_r0: float
    n: int
    trials: int
    seed: int

    @property
    def median(self) -> float:
        return float(np.median(self.distances))


def _half_trace_norm(m: np.ndarray) -> float:
    vals = np.linalg.eigvalsh((m + m.conj().T) / 2)
    return float(np.abs(vals).sum() / 2)


def covering_experiment(
    ensemble: Sequence[tuple[float, np.ndarray]],
    n: int,
    rate_r0: float,
    trials: int,
    seed: int,
) -> CoveringStats:
    """Random-codebook simulation of the covering lemma.

    Each trial draws |K| = round(2^{n R0}) codewords i.i.d. from p^n and records
    the trace distance between the codebook-averaged product state and the true
    average's n-fold power.  Per-trial generators derive from (seed, trial).
    """
    probs = np.array([p for p, _ in ensemble], dtype=float)
    if abs(probs.sum() - 1.0) > 1e-9 or probs.min() < -1e-12:
        raise ParameterError(f"ensemble probabilities sum to {probs.sum()}")
    states = [np.asarray(s, dtype=complex) for _, s in ensemble]
    d = states[0].shape[0]
    if d ** n > DENSE_BUDGET:
        raise CapacityError(f"dimension {d}^{n} exceeds dense budget")
    k_count = max(int(round(2.0 ** (n * rate_r0))), 1)
    avg = sum(p * s for p, s in zip(probs, states))
    target = np.array([[1.0]], dtype=complex)
    for _ in range(n):
        target = np.kron(target, avg)
    distances = []
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        mixture = np.zeros((d ** n, d ** n), dtype=complex)
        for _ in range(k_count):
            xseq = rng.choice(len(states), size=n, p=probs)
            prod = np.array([[1.0]], dtype=complex)
            for x in xseq:
                prod = np.kron(prod, states[x])
            mixture += prod
        mixture /= k_count
        distances.append(_half_trace_norm(mixture - target))
    return CoveringStats(tuple(distances), rate_r0, n, trials, seed)


# -- covering-lemma projector properties ------------------------------------


@dataclass(frozen=True)
class CoveringReport:
    checks: tuple[PropertyCheck, ...]
    rotation_consistency: float
    small_n: bool

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def verify_covering_properties(config, channel, xseq: Sequence[int], gamma, delta: float) -> CoveringReport:
    """Check the four projector conditions behind the covering-lemma step.

    Builds the eavesdropper-side states omega_{E G2 | x} from the coding
    configuration and channel, forms (i) the product of the conditional typical
    projectors on E^n and G2^n and (ii) the joint conditional projector rotated
    by the encoding unitary, and evaluates capture, dimension, and sandwich
    conditions against the conditional entropy rates of the empirical type.
    """
    from . import spcsim
    from .labeled import partial_trace

    xseq = tuple(int(x) for x in xseq)
    n = len(xseq)
    omega_eg = [spcsim.eve_side_state(config, channel, x) for x in range(len(config.p_x))]
    e_name, g_name = omega_eg[0].names
    ens_e = [(p, partial_trace(w, {e_name})) for p, w in zip(config.p_x, omega_eg)]
    ens_g = [(p, partial_trace(w, {g_name})) for p, w in zip(config.p_x, omega_eg)]
    ens_joint = list(zip(config.p_x, omega_eg))

    tp_e = conditional_typical_projector(ens_e, xseq, delta)
    tp_g = conditional_typical_projector(ens_g, xseq, delta)
    tp_joint = conditional_typical_projector(ens_joint, xseq, delta)

    de = ens_e[0][1].total_dim
    dg = ens_g[0][1].total_dim
    # omega^{x^n} grouped as (E^n, G2^n)
    omega_n = np.array([[1.0]], dtype=complex)
    for x in xseq:
        omega_n = np.kron(omega_n, omega_eg[x].matrix)
    omega_n = _regroup_pairs(omega_n, de, dg, n)
    pi_product = np.kron(tp_e.projector.matrix, tp_g.projector.matrix)
    pi_joint = _regroup_pairs(tp_joint.projector.matrix, de, dg, n)

    u_g2 = spcsim.block_unitary(spcsim.schmidt_blocks(config, xseq), gamma, side="G2")
    big_u = np.kron(np.eye(de ** n), u_g2)
    rho_gamma = big_u @ omega_n @ big_u.conj().T
    pi_gamma = big_u @ pi_joint @ big_u.conj().T

    h_e = _type_entropy_rate(ens_e, xseq)
    h_g = _type_entropy_rate(ens_g, xseq)
    h_eg = _type_entropy_rate(ens_joint, xseq)

    capture_product = float(np.trace(pi_product @ rho_gamma).real)
    capture_rotated = float(np.trace(pi_gamma @ rho_gamma).real)
    capture_unrotated = float(np.trace(pi_joint @ omega_n).real)
    rank = float(np.trace(pi_product).real)
    dim_bound = 2.0 ** (n * (1.0 + delta) * (h_e + h_g))
    _, hi = _sandwich_eigs(pi_gamma, rho_gamma)
    slack = de * dg * len(set(xseq)) * np.log2(n + 1.0) / n
    upper_exp = max((1.0 - delta) * h_eg - slack, 0.0)
    checks = (
        PropertyCheck("covering_capture_product", capture_product, 0.0, 0.0 < capture_product <= 1.0 + 1e-9),
        PropertyCheck("covering_capture_rotated", capture_rotated, 0.0, 0.0 < capture_rotated <= 1.0 + 1e-9),
        PropertyCheck("covering_dimension", rank, dim_bound, rank <= dim_bound * (1.0 + 1e-9)),
        PropertyCheck(
            "covering_sandwich_upper",
            hi,
            2.0 ** (-n * upper_exp),
            hi <= 2.0 ** (-n * upper_exp) * (1.0 + 1e-9),
        ),
    )
    return CoveringReport(checks, abs(capture_rotated - capture_unrotated), n < SMALL_N)


def _type_entropy_rate(ensemble, xseq: tuple[int, ...]) -> float:
    n = len(xseq)
    h = 0.0
    for a in set(xseq):
        vals, _ = _state_eig(ensemble[a][1])
        h += (xseq.count(a) / n) * _entropy_of(vals)
    return h


def _regroup_pairs(m: np.ndarray, de: int, dg: int, n: int) -> np.ndarray:
    """Permute ((E G2) ... (E G2)) ordering into (E^n, G2^n)."""
    dims = (de, dg) * n
    t = m.reshape(dims + dims)
    perm = [2 * i for i in range(n)] + [2 * i + 1 for i in range(n)]
    full = tuple(perm) + tuple(p + 2 * n for p in perm)
    d = (de * dg) ** n
    return t.transpose(full).reshape(d, d)
