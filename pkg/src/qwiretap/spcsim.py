"""Exact small-blocklength simulation of the superposition-coding scheme.

A classical codebook carries the guaranteed message over sequences x^n; the
excess message rides on the entangled resource through block-diagonal
Heisenberg-Weyl unitaries applied to Alice's share.  Because each block is
maximally entangled across the Schmidt bases of |psi^{x^n}>, the encoder's
unitary ricochets onto the receiver's share as its transpose, which is what
makes both the decoding and the leakage analysis tractable.

Decoding uses the pretty-good measurement as a computable surrogate for the
existence-only decoders of the achievability argument; the sequential
(guaranteed-then-excess) structure is replaced by a joint measurement, exact
at this scale.  Leakage is computed from the global cq state, not sampled.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channels import WiretapChannel, apply_pure, tensor_power
from .entropy import holevo_chi
from .errors import CapacityError, ParameterError, StructureError
from .labeled import DENSE_BUDGET, LabeledOperator, PureState, Register, partial_trace
from .regions import CodingConfig, encoded_input


def heisenberg_weyl(a: int, b: int, d: int) -> np.ndarray:
    """Shift/phase unitary Sigma_X^a Sigma_Z^b on a d-dimensional space."""
    if not (0 <= a < d and 0 <= b < d):
        raise ParameterError(f"(a, b) = ({a}, {b}) outside [0, {d})")
    shift = np.zeros((d, d), dtype=complex)
    for k in range(d):
        shift[(k + 1) % d, k] = 1.0
    phase = np.diag(np.exp(2j * np.pi * np.arange(d) / d))
    return np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(phase, b)


# -- Schmidt block structure ------------------------------------------------


@dataclass(frozen=True)
class SchmidtBlocks:
    """Block decomposition of the encoded state |psi^{x^n}> on (A^n, G2^n).

    Each block collects the product Schmidt vectors indexed by a group of
    Schmidt-index sequences y^n (by default one group per conditional type of
    y^n given x^n); within a block the state restricts to a maximally
    entangled pair of subspaces.
    """

    xseq: tuple[int, ...]
    dim_a: int
    dim_g2: int
    members: tuple[tuple[tuple[int, ...], ...], ...]
    a_bases: tuple[np.ndarray, ...]
    g_bases: tuple[np.ndarray, ...]
    weights: tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.xseq)

    @property
    def block_dims(self) -> tuple[int, ...]:
        return tuple(len(m) for m in self.members)


def _symbol_schmidt(config: CodingConfig):
    """Per-symbol Schmidt data of (F^(x) (x) 1)|phi>: coeffs, A and G2 bases."""
    phi_mat = config.phi.amplitudes.reshape(config.dim_g1, config.dim_g2)
    out = []
    for f in config.encoders:
        mat = f @ phi_mat
        u, s, vh = np.linalg.svd(mat, full_matrices=False)
        nz = s > 1e-12
        out.append((s[nz], u[:, nz], vh[nz, :].T))
    return out


def schmidt_blocks(
    config: CodingConfig,
    xseq: Sequence[int],
    partition: Sequence[Sequence[Sequence[int]]] | None = None,
) -> SchmidtBlocks:
    """Build the block structure for x^n; ``partition`` overrides the default
    grouping of Schmidt-index sequences by conditional type."""
    xseq = tuple(int(x) for x in xseq)
    data = _symbol_schmidt(config)
    n = len(xseq)
    ranks = [data[x][0].size for x in xseq]
    if config.dim_a ** n > DENSE_BUDGET or config.dim_g2 ** n > DENSE_BUDGET:
        raise CapacityError("block construction exceeds dense budget")
    all_y = list(itertools.product(*(range(r) for r in ranks)))
    if partition is None:
        groups: dict[tuple, list[tuple[int, ...]]] = {}
        letters = sorted(set(xseq))
        for yseq in all_y:
            key = []
            for a in letters:
                idx = [i for i, x in enumerate(xseq) if x == a]
                counts = [0] * data[a][0].size
                for i in idx:
                    counts[yseq[i]] += 1
                key.append(tuple(counts))
            groups.setdefault(tuple(key), []).append(yseq)
        blocks = [tuple(sorted(g)) for _, g in sorted(groups.items())]
    else:
        blocks = [tuple(tuple(int(y) for y in seq) for seq in group) for group in partition]
        seen = set()
        for group in blocks:
            for yseq in group:
                if len(yseq) != n or yseq not in set(all_y):
                    raise StructureError(f"sequence {yseq} invalid for x^n = {xseq}")
                if yseq in seen:
                    raise StructureError(f"sequence {yseq} appears in two blocks")
                seen.add(yseq)
    a_bases, g_bases, weights = [], [], []
    for group in blocks:
        a_cols, g_cols, w = [], [], 0.0
        for yseq in group:
            a_vec = np.array([1.0], dtype=complex)
            g_vec = np.array([1.0], dtype=complex)
            prob = 1.0
            for x, y in zip(xseq, yseq):
                s, ua, ug = data[x]
                a_vec = np.kron(a_vec, ua[:, y])
                g_vec = np.kron(g_vec, ug[:, y])
                prob *= s[y] ** 2
            a_cols.append(a_vec)
            g_cols.append(g_vec)
            w += prob
        a_bases.append(np.stack(a_cols, axis=1))
        g_bases.append(np.stack(g_cols, axis=1))
        weights.append(w)
    return SchmidtBlocks(
        xseq,
        config.dim_a,
        config.dim_g2,
        tuple(blocks),
        tuple(a_bases),
        tuple(g_bases),
        tuple(weights),
    )


@dataclass(frozen=True)
class HWParams:
    """One Heisenberg-Weyl triple (a_t, b_t, c_t) per block of the decomposition."""

    xseq: tuple[int, ...]
    triples: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "xseq", tuple(int(x) for x in self.xseq))
        object.__setattr__(
            self, "triples", tuple((int(a), int(b), int(c)) for a, b, c in self.triples)
        )


def zero_gamma(blocks: SchmidtBlocks) -> HWParams:
    return HWParams(blocks.xseq, tuple((0, 0, 0) for _ in blocks.members))


def sample_gamma(blocks: SchmidtBlocks, rng: np.random.Generator) -> HWParams:
    triples = tuple(
        (int(rng.integers(d)), int(rng.integers(d)), int(rng.integers(2)))
        for d in blocks.block_dims
    )
    return HWParams(blocks.xseq, triples)


def block_unitary(blocks: SchmidtBlocks, gamma: HWParams, side: str = "A") -> np.ndarray:
    """U(gamma) = (+/-) Sigma(a_t, b_t) on each block, identity elsewhere.

    ``side='A'`` gives the encoder's unitary on A^n; ``side='G2'`` gives its
    ricochet partner on G2^n (the transpose taken in the matched Schmidt
    bases), satisfying (U (x) 1)|psi> = (1 (x) U_G2)|psi>.
    """
    if side not in ("A", "G2"):
        raise ParameterError(f"side must be 'A' or 'G2', got {side!r}")
    if gamma.xseq != blocks.xseq:
        raise StructureError(f"gamma built for {gamma.xseq}, blocks for {blocks.xseq}")
    if len(gamma.triples) != len(blocks.members):
        raise StructureError(
            f"{len(gamma.triples)} triples for {len(blocks.members)} blocks"
        )
    n = blocks.n
    d_full = (blocks.dim_a if side == "A" else blocks.dim_g2) ** n
    u = np.eye(d_full, dtype=complex)
    bases = blocks.a_bases if side == "A" else blocks.g_bases
    for (a, b, c), d_t, basis in zip(gamma.triples, blocks.block_dims, bases):
        if not (0 <= a < d_t and 0 <= b < d_t and c in (0, 1)):
            raise StructureError(f"triple ({a}, {b}, {c}) invalid for block of dim {d_t}")
        m = (-1) ** c * heisenberg_weyl(a, b, d_t)
        if side == "G2":
            m = m.T
        u += basis @ (m - np.eye(d_t)) @ basis.conj().T
    return u


# -- codebooks --------------------------------------------------------------

MAX_CODEWORDS = 1024


@dataclass(frozen=True)
class Codebook:
    """Classical sequences x^n(m, k) and per-(m', k') unitary parameters."""

    rates: tuple[float, float, float, float]  # (R, R', R0, R0')
    n: int
    x_sequences: tuple[tuple[tuple[int, ...], ...], ...]  # [m][k]
    gammas: tuple  # [m][k][mp][kp] -> HWParams
    seed: int
    partition: tuple | None = None

    @property
    def counts(self) -> tuple[int, int, int, int]:
        m = len(self.x_sequences)
        k = len(self.x_sequences[0])
        mp = len(self.gammas[0][0])
        kp = len(self.gammas[0][0][0])
        return (m, mp, k, kp)

    @property
    def rates_realized(self) -> tuple[float, float, float, float]:
        m, mp, k, kp = self.counts
        return tuple(math.log2(c) / self.n for c in (m, mp, k, kp))


def _count(rate: float, n: int) -> int:
    return max(int(round(2.0 ** (n * rate))), 1)


def generate_codebook(
    config: CodingConfig,
    rates: tuple[float, float, float, float],
    n: int,
    seed: int,
    partition=None,
) -> Codebook:
    """Random codebook: x^n(m,k) i.i.d. per p_X, gamma uniform per (m', k')."""
    r, rp, r0, r0p = rates
    m_count, mp_count = _count(r, n), _count(rp, n)
    k_count, kp_count = _count(r0, n), _count(r0p, n)
    if m_count * mp_count * k_count * kp_count > MAX_CODEWORDS:
        raise CapacityError("codebook size exceeds the exact-evaluation budget")
    rng = np.random.default_rng(seed)
    p = np.asarray(config.p_x)
    xseqs, gammas = [], []
    for _ in range(m_count):
        row_x, row_g = [], []
        for _ in range(k_count):
            xseq = tuple(int(v) for v in rng.choice(p.size, size=n, p=p))
            blocks = schmidt_blocks(config, xseq, partition)
            row_x.append(xseq)
            row_g.append(
                tuple(
                    tuple(sample_gamma(blocks, rng) for _ in range(kp_count))
                    for _ in range(mp_count)
                )
            )
        xseqs.append(tuple(row_x))
        gammas.append(tuple(row_g))
    return Codebook((r, rp, r0, r0p), n, tuple(xseqs), tuple(gammas), seed, partition)


def encode(
    codebook: Codebook,
    config: CodingConfig,
    m: int,
    mp: int,
    k: int,
    kp: int,
    channel: WiretapChannel | None = None,
) -> PureState:
    """Encoded pure input |chi> = (U(gamma) F^{(x^n)} (x) 1)|phi>^{(x)n} on (A^n, G2^n)."""
    n = codebook.n
    xseq = codebook.x_sequences[m][k]
    gamma = codebook.gammas[m][k][mp][kp]
    blocks = schmidt_blocks(config, xseq, codebook.partition)
    u = block_unitary(blocks, gamma, side="A")
    phi_mat = config.phi.amplitudes.reshape(config.dim_g1, config.dim_g2)
    tensor = np.array([[1.0]], dtype=complex)
    for x in xseq:
        tensor = np.kron(tensor, config.encoders[x] @ phi_mat)
    vec = (u @ tensor).reshape(-1)
    if channel is not None:
        if len(channel.input_regs) != n:
            raise ParameterError(f"channel has {len(channel.input_regs)} input registers, n = {n}")
        a_regs = channel.input_regs
    else:
        a_regs = tuple(Register(f"A{i + 1}", config.dim_a) for i in range(n))
    g_regs = tuple(Register(f"G2{i + 1}" if n > 1 else "G2", config.dim_g2) for i in range(n))
    return PureState(a_regs + g_regs, vec)


# -- measurement and evaluation ---------------------------------------------


def pgm(states: Sequence[tuple[float, np.ndarray]]) -> list[np.ndarray]:
    """Pretty-good measurement; the last element is an explicit abort outcome.

    Lambda_i = S^{-1/2} p_i rho_i S^{-1/2} with the inverse square root taken
    on the support of S = sum p_i rho_i; the abort element completes to I.
    """
    probs = np.array([p for p, _ in states], dtype=float)
    if abs(probs.sum() - 1.0) > 1e-9:
        raise ParameterError(f"priors sum to {probs.sum()}")
    mats = [np.asarray(s, dtype=complex) for _, s in states]
    d = mats[0].shape[0]
    s_avg = sum(p * m for p, m in zip(probs, mats))
    vals, vecs = np.linalg.eigh((s_avg + s_avg.conj().T) / 2)
    inv_sqrt = np.where(vals > 1e-12, 1.0 / np.sqrt(np.clip(vals, 1e-300, None)), 0.0)
    root = (vecs * inv_sqrt) @ vecs.conj().T
    elements = [root @ (p * m) @ root for p, m in zip(probs, mats)]
    elements = [(e + e.conj().T) / 2 for e in elements]
    abort = np.eye(d) - sum(elements)
    abort = (abort + abort.conj().T) / 2
    return elements + [abort]


@dataclass(frozen=True)
class CodeEvaluation:
    rates_requested: tuple[float, float, float, float]
    rates_realized: tuple[float, float, float, float]
    p_e: float
    p_e_star: float
    leakage_bits: float
    leakage_split: tuple[float, float]
    leakage_no_share_bits: float
    seed: int
    n: int

    def to_json_dict(self) -> dict:
        return {
            "rates_requested": list(self.rates_requested),
            "rates_realized": list(self.rates_realized),
            "P_e": self.p_e,
            "P_e_star": self.p_e_star,
            "leakage_bits": self.leakage_bits,
            "leakage_split": list(self.leakage_split),
            "leakage_no_share_bits": self.leakage_no_share_bits,
            "seed": self.seed,
            "n": self.n,
        }


def eve_side_state(config: CodingConfig, channel: WiretapChannel, x: int) -> LabeledOperator:
    """Single-use state omega_{E G2 | x} seen by the eavesdropper side."""
    out = apply_pure(channel, encoded_input(config, channel, x))
    return partial_trace(out.to_density(), set(channel.eve_names) | {"G2"})


def evaluate_code(codebook: Codebook, config: CodingConfig, channel: WiretapChannel) -> CodeEvaluation:
    """Exact error probabilities and leakage of a concrete code.

    P_e: joint pretty-good measurement over (m, m') on (B^n, G2^n), averaged
    over the common randomness (k, k').  P_e*: measurement over m on B^n
    alone, with (m', k, k') averaged out.  Leakage: I(M M'; E^n G2^n) of the
    exact extended cq state, with its chain-rule split, plus the same quantity
    without the intercepted share G2^n.
    """
    n = codebook.n
    ch_n = tensor_power(channel, n)
    m_count, mp_count, k_count, kp_count = codebook.counts
    g2_names = {f"G2{i + 1}" if n > 1 else "G2" for i in range(n)}
    bob = set(ch_n.bob_names)
    eve = set(ch_n.eve_names)

    rho: list[list[LabeledOperator]] = []
    for m in range(m_count):
        row = []
        for mp in range(mp_count):
            acc = None
            for k in range(k_count):
                for kp in range(kp_count):
                    psi = encode(codebook, config, m, mp, k, kp, channel=ch_n)
                    dens = apply_pure(ch_n, psi).to_density()
                    acc = dens.matrix if acc is None else acc + dens.matrix
            row.append(LabeledOperator(dens.registers, acc / (k_count * kp_count), "state"))
        rho.append(row)

    # assisted decoding: joint PGM over (m, m') on Bob's output plus his share
    joint = [
        (1.0 / (m_count * mp_count), partial_trace(rho[m][mp], bob | g2_names).matrix)
        for m in range(m_count)
        for mp in range(mp_count)
    ]
    povm = pgm(joint)
    success = sum(p * float(np.trace(e @ s).real) for (p, s), e in zip(joint, povm))
    p_e = min(max(1.0 - success, 0.0), 1.0)

    # unassisted decoding: PGM over m on B^n with (m', k, k') averaged out
    bob_only = []
    for m in range(m_count):
        avg = sum(partial_trace(rho[m][mp], bob).matrix for mp in range(mp_count)) / mp_count
        bob_only.append((1.0 / m_count, avg))
    povm_b = pgm(bob_only)
    success_b = sum(p * float(np.trace(e @ s).real) for (p, s), e in zip(bob_only, povm_b))
    p_e_star = min(max(1.0 - success_b, 0.0), 1.0)

    # leakage from the exact cq decomposition over (m, m')
    eve_states = [
        [partial_trace(rho[m][mp], eve | g2_names).matrix for mp in range(mp_count)]
        for m in range(m_count)
    ]
    flat = [
        (1.0 / (m_count * mp_count), eve_states[m][mp])
        for m in range(m_count)
        for mp in range(mp_count)
    ]
    leakage = holevo_chi(flat)
    per_m = [(1.0 / m_count, sum(eve_states[m]) / mp_count) for m in range(m_count)]
    i_m = holevo_chi(per_m)
    eve_only = [
        (1.0 / (m_count * mp_count), partial_trace(rho[m][mp], eve).matrix)
        for m in range(m_count)
        for mp in range(mp_count)
    ]
    leakage_no_share = holevo_chi(eve_only)

    return CodeEvaluation(
        codebook.rates,
        codebook.rates_realized,
        p_e,
        p_e_star,
        max(leakage, 0.0),
        (max(i_m, 0.0), max(leakage - i_m, 0.0)),
        max(leakage_no_share, 0.0),
        codebook.seed,
        n,
    )
