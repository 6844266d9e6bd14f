"""Achievable rate pairs for wiretap channels with unreliable assistance.

A coding configuration is the triple (p_X, phi_{G1G2}, F^(x)): an input
distribution, a pure entangled resource, and one encoding isometry per symbol.
The guaranteed rate R is decodable without the receiver's entangled share; the
excess rate R' additionally requires it.  Frontier search runs a multistart
simplex over smooth parameterizations of the configuration triple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import search
from .channels import WiretapChannel, apply_pure, marginal, tensor_power
from .entropy import (
    conditional_mutual_information,
    holevo_chi,
    mutual_information,
)
from .errors import ParameterError, ShapeError, ValidityError
from .labeled import LabeledOperator, PureState, Register, partial_trace


@dataclass(frozen=True)
class CodingConfig:
    """Input distribution, resource state, and per-symbol encoders."""

    p_x: tuple[float, ...]
    phi: PureState
    encoders: tuple[np.ndarray, ...]

    def __post_init__(self):
        p = np.asarray(self.p_x, dtype=float)
        if abs(p.sum() - 1.0) > 1e-10 or p.min() < -1e-12:
            raise ValidityError(f"p_x sums to {p.sum()}")
        if len(self.encoders) != p.size:
            raise ValidityError(f"{len(self.encoders)} encoders for {p.size} symbols")
        if self.phi.names != ("G1", "G2"):
            raise ValidityError(f"phi registers {self.phi.names}, expected ('G1', 'G2')")
        encs = []
        g1 = self.phi.dims[0]
        for x, f in enumerate(self.encoders):
            f = np.asarray(f, dtype=complex)
            if f.shape[1] != g1:
                raise ShapeError(f"encoder {x} maps dim {f.shape[1]}, G1 has dim {g1}")
            if np.abs(f.conj().T @ f - np.eye(g1)).max() > 1e-10:
                raise ValidityError(f"encoder {x} is not an isometry")
            encs.append(f)
        object.__setattr__(self, "p_x", tuple(float(v) for v in p))
        object.__setattr__(self, "encoders", tuple(encs))

    @property
    def dim_g1(self) -> int:
        return self.phi.dims[0]

    @property
    def dim_g2(self) -> int:
        return self.phi.dims[1]

    @property
    def dim_a(self) -> int:
        return self.encoders[0].shape[0]

    def to_json_dict(self) -> dict:
        return {
            "p_x": list(self.p_x),
            "phi_re": list(self.phi.amplitudes.real),
            "phi_im": list(self.phi.amplitudes.imag),
            "dims": {"g1": self.dim_g1, "g2": self.dim_g2, "a": self.dim_a},
            "encoders": [
                {"re": np.real(f).reshape(-1).tolist(), "im": np.imag(f).reshape(-1).tolist()}
                for f in self.encoders
            ],
        }

    @staticmethod
    def from_json_dict(d: dict) -> "CodingConfig":
        g1, g2, da = d["dims"]["g1"], d["dims"]["g2"], d["dims"]["a"]
        amps = np.asarray(d["phi_re"], dtype=float) + 1j * np.asarray(d["phi_im"], dtype=float)
        phi = PureState((Register("G1", g1), Register("G2", g2)), amps)
        encs = tuple(
            (np.asarray(e["re"]) + 1j * np.asarray(e["im"])).reshape(da, g1)
            for e in d["encoders"]
        )
        return CodingConfig(tuple(d["p_x"]), phi, encs)


@dataclass(frozen=True)
class RatePoint:
    r: float
    rp: float
    n: int = 1
    config: CodingConfig | None = field(default=None, compare=False)


@dataclass(frozen=True)
class RegionPoint:
    weight: float
    rate: RatePoint
    objective: float
    evals: int
    seed: int
    frontier: bool


@dataclass(frozen=True)
class RegionSample:
    points: tuple[RegionPoint, ...]

    def frontier_points(self) -> list[RegionPoint]:
        return [p for p in self.points if p.frontier]


def _mark_frontier(rows: list[RegionPoint]) -> tuple[RegionPoint, ...]:
    out = []
    for i, a in enumerate(rows):
        dominated = any(
            j != i
            and b.rate.r >= a.rate.r - 1e-12
            and b.rate.rp >= a.rate.rp - 1e-12
            and (b.rate.r > a.rate.r + 1e-9 or b.rate.rp > a.rate.rp + 1e-9)
            for j, b in enumerate(rows)
        )
        out.append(replace(a, frontier=not dominated))
    return tuple(out)


# -- state construction ----------------------------------------------------


def encoded_input(config: CodingConfig, channel: WiretapChannel, x: int) -> PureState:
    """|psi^x> = (F^(x) (x) 1) |phi> on (channel inputs, G2)."""
    phi_mat = config.phi.amplitudes.reshape(config.dim_g1, config.dim_g2)
    vec = (config.encoders[x] @ phi_mat).reshape(-1)
    regs = channel.input_regs + (Register("G2", config.dim_g2),)
    return PureState(regs, vec)


def build_omega(config: CodingConfig, channel: WiretapChannel) -> LabeledOperator:
    """The cq state on (X, outputs, G2) obtained by encoding and transmitting."""
    if config.dim_a != channel.dim_in:
        raise ShapeError(f"encoder output dim {config.dim_a} != channel input dim {channel.dim_in}")
    dx = len(config.p_x)
    blocks = []
    for x in range(dx):
        out = apply_pure(channel, encoded_input(config, channel, x)).to_density()
        blocks.append(out)
    d_out = blocks[0].total_dim
    total = np.zeros((dx * d_out, dx * d_out), dtype=complex)
    for x, out in enumerate(blocks):
        total[x * d_out:(x + 1) * d_out, x * d_out:(x + 1) * d_out] = config.p_x[x] * out.matrix
    regs = (Register("X", dx),) + blocks[0].registers
    return LabeledOperator(regs, total, "state")


def _rate_terms(config: CodingConfig, channel: WiretapChannel) -> dict[str, float]:
    omega = build_omega(config, channel)
    bob = set(channel.bob_names)
    eve = set(channel.eve_names)
    i_xb = mutual_information(partial_trace(omega, {"X"} | bob), {"X"})
    i_xeg = mutual_information(partial_trace(omega, {"X"} | eve | {"G2"}), {"X"})
    i_xe = mutual_information(partial_trace(omega, {"X"} | eve), {"X"}) if eve else 0.0
    i_gb_x = conditional_mutual_information(
        partial_trace(omega, {"X", "G2"} | bob), {"G2"}, bob, {"X"}
    )
    i_ge_x = conditional_mutual_information(
        partial_trace(omega, {"X", "G2"} | eve), {"G2"}, eve, {"X"}
    )
    return {"i_xb": i_xb, "i_xeg": i_xeg, "i_xe": i_xe, "i_gb_x": i_gb_x, "i_ge_x": i_ge_x}


def rate_pair_secure(config: CodingConfig, channel: WiretapChannel) -> RatePoint:
    """Guaranteed/excess secrecy rates, clipped at zero."""
    t = _rate_terms(config, channel)
    return RatePoint(
        max(t["i_xb"] - t["i_xeg"], 0.0),
        max(t["i_gb_x"] - t["i_ge_x"], 0.0),
        1,
        config,
    )


def rate_pair_nonsecure(config: CodingConfig, channel: WiretapChannel) -> RatePoint:
    """Rates without a secrecy requirement (no eavesdropper subtraction)."""
    t = _rate_terms(config, channel)
    return RatePoint(t["i_xb"], t["i_gb_x"], 1, config)


def rate_pair_no_interception(config: CodingConfig, channel: WiretapChannel) -> RatePoint:
    """Secrecy against an eavesdropper who never holds the entangled share."""
    t = _rate_terms(config, channel)
    return RatePoint(max(t["i_xb"] - t["i_xe"], 0.0), t["i_gb_x"], 1, config)


# -- presets and random configurations -------------------------------------


def classical_signaling_config(dim_a: int, num_x: int | None = None) -> CodingConfig:
    """Trivial assistance; symbol x is sent as the basis state |x mod dim_a>."""
    num_x = dim_a if num_x is None else num_x
    phi = PureState((Register("G1", 1), Register("G2", 1)), np.array([1.0]))
    encs = []
    for x in range(num_x):
        f = np.zeros((dim_a, 1), dtype=complex)
        f[x % dim_a, 0] = 1.0
        encs.append(f)
    return CodingConfig(tuple([1.0 / num_x] * num_x), phi, tuple(encs))


def dense_coding_config(dim_a: int = 2) -> CodingConfig:
    """Uniform X over dim_a^2 symbols, maximally entangled phi, shift/phase encoders."""
    from .spcsim import heisenberg_weyl

    num_x = dim_a * dim_a
    amps = np.eye(dim_a).reshape(-1) / np.sqrt(dim_a)
    phi = PureState((Register("G1", dim_a), Register("G2", dim_a)), amps)
    encs = tuple(heisenberg_weyl(x // dim_a, x % dim_a, dim_a) for x in range(num_x))
    return CodingConfig(tuple([1.0 / num_x] * num_x), phi, encs)


def random_config(
    channel: WiretapChannel,
    rng: np.random.Generator,
    num_x: int | None = None,
    dim_g1: int | None = None,
    dim_g2: int | None = None,
) -> CodingConfig:
    da = channel.dim_in
    num_x = da * da if num_x is None else num_x
    dim_g1 = da if dim_g1 is None else dim_g1
    dim_g2 = da if dim_g2 is None else dim_g2
    p = rng.dirichlet(np.ones(num_x))
    amps = rng.normal(size=dim_g1 * dim_g2) + 1j * rng.normal(size=dim_g1 * dim_g2)
    amps /= np.linalg.norm(amps)
    phi = PureState((Register("G1", dim_g1), Register("G2", dim_g2)), amps)
    encs = []
    for _ in range(num_x):
        g = rng.normal(size=(da, da)) + 1j * rng.normal(size=(da, da))
        q, r = np.linalg.qr(g)
        q = q * np.sign(np.diag(r))
        encs.append(q[:, :dim_g1])
    return CodingConfig(tuple(p), phi, tuple(encs))


# -- baselines -------------------------------------------------------------


def _ensemble_from_params(params: np.ndarray, num_x: int, da: int):
    probs = search.softmax(params[:num_x])
    states = []
    for x in range(num_x):
        chunk = params[num_x + 2 * da * x: num_x + 2 * da * (x + 1)]
        v = search.complex_vector(chunk, da)
        states.append(np.outer(v, v.conj()))
    return list(zip(probs, states))


def _assisted_state(params: np.ndarray, channel: WiretapChannel) -> LabeledOperator:
    da = channel.dim_in
    v = search.complex_vector(params, da * da)
    regs = (Register("G", da),) + channel.input_regs
    psi = PureState(regs, v)
    out = apply_pure(channel, psi)  # (outputs..., G)
    return out.to_density()


def baseline(kind: str, channel: WiretapChannel, budget: int = 20000, seed: int = 0) -> float:
    """Single-letter reference quantities found by multistart search.

    ``holevo``: max_X I(X;B).  ``ea``: max_phi I(G;B) with entangled input.
    ``private``: max_X [I(X;B) - I(X;E)].  ``sea``: max_phi [I(G;B) - I(G;E)].
    """
    if budget <= 0:
        raise ParameterError(f"budget must be positive, got {budget}")
    da = channel.dim_in
    kraus_b = marginal(channel, "bob").operators
    kraus_e = marginal(channel, "eve").operators
    bob = set(channel.bob_names)
    eve = set(channel.eve_names)

    if kind in ("holevo", "private"):
        num_x = da * da + (1 if kind == "private" else 0)
        n_params = num_x + 2 * da * num_x

        def objective(params):
            ens = _ensemble_from_params(params, num_x, da)
            val = holevo_chi(ens, kraus_b)
            if kind == "private":
                val -= holevo_chi(ens, kraus_e)
            return -val

        start = np.zeros(n_params)
        for x in range(min(num_x, da)):  # orthogonal computational ensemble
            start[num_x + 2 * da * x + x] = 1.0
        result = search.multistart_minimize(objective, n_params, budget, seed, structured_starts=[start])
        return -result.value

    if kind in ("ea", "sea"):
        n_params = 2 * da * da

        def objective(params):
            rho = _assisted_state(params, channel)
            val = mutual_information(partial_trace(rho, {"G"} | bob), {"G"})
            if kind == "sea":
                val -= mutual_information(partial_trace(rho, {"G"} | eve), {"G"})
            return -val

        bell = np.eye(da).reshape(-1) / np.sqrt(da)
        start = np.concatenate([bell, np.zeros(da * da)])
        result = search.multistart_minimize(objective, n_params, budget, seed, structured_starts=[start])
        return -result.value

    raise ParameterError(f"unknown baseline kind {kind!r}")


# -- frontier search -------------------------------------------------------


@dataclass(frozen=True)
class SearchDims:
    num_x: int
    g1: int
    g2: int


def default_dims(channel: WiretapChannel) -> SearchDims:
    da = channel.dim_in
    return SearchDims(da * da, da, da)


def _config_from_params(params: np.ndarray, dims: SearchDims, da: int) -> CodingConfig:
    nx, g1, g2 = dims.num_x, dims.g1, dims.g2
    probs = search.softmax(params[:nx])
    off = nx
    amps = search.complex_vector(params[off:off + 2 * g1 * g2], g1 * g2)
    off += 2 * g1 * g2
    phi = PureState((Register("G1", g1), Register("G2", g2)), amps)
    encs = []
    per = da * da
    for x in range(nx):
        encs.append(search.isometry_from_params(params[off + per * x: off + per * (x + 1)], g1, da))
    return CodingConfig(tuple(probs), phi, tuple(encs))


def _params_from_config(config: CodingConfig, dims: SearchDims, da: int) -> np.ndarray:
    p = np.log(np.asarray(config.p_x) + 1e-300)
    amps = config.phi.amplitudes
    phi_part = np.concatenate([amps.real, amps.imag])
    enc_parts = []
    for f in config.encoders:
        u = _complete_to_unitary(f, da)
        enc_parts.append(search.params_from_unitary(u))
    return np.concatenate([p, phi_part] + enc_parts)


def _complete_to_unitary(f: np.ndarray, da: int) -> np.ndarray:
    g1 = f.shape[1]
    if g1 == da:
        return f
    basis = np.eye(da, dtype=complex)
    cols = [f[:, j] for j in range(g1)]
    for b in basis.T:
        v = b - sum(np.vdot(c, b) * c for c in cols)
        if np.linalg.norm(v) > 1e-8:
            cols.append(v / np.linalg.norm(v))
        if len(cols) == da:
            break
    return np.stack(cols, axis=1)


def _structured_configs(channel: WiretapChannel, dims: SearchDims) -> list[CodingConfig]:
    da = channel.dim_in
    out = []
    # classical signaling embedded at the search dims
    if dims.g1 <= da:
        phi = np.zeros(dims.g1 * dims.g2, dtype=complex)
        phi[0] = 1.0
        pure = PureState((Register("G1", dims.g1), Register("G2", dims.g2)), phi)
        encs = []
        for x in range(dims.num_x):
            u = np.eye(da, dtype=complex)
            t = x % da
            if t != 0:
                u[[0, t]] = u[[t, 0]]
            encs.append(u[:, :dims.g1])
        out.append(CodingConfig(tuple([1.0 / dims.num_x] * dims.num_x), pure, tuple(encs)))
    # dense coding embedded when the resource matches the input dimension
    if dims.g1 == da and dims.g2 == da and dims.num_x >= da * da:
        from .spcsim import heisenberg_weyl

        amps = np.eye(da).reshape(-1).astype(complex) / np.sqrt(da)
        pure = PureState((Register("G1", da), Register("G2", da)), amps)
        encs = tuple(
            heisenberg_weyl((x % (da * da)) // da, x % da, da) for x in range(dims.num_x)
        )
        out.append(CodingConfig(tuple([1.0 / dims.num_x] * dims.num_x), pure, encs))
    return out


def optimize_region(
    channel: WiretapChannel,
    weights: Sequence[float],
    budget: int = 20000,
    seed: int = 0,
    dims: SearchDims | None = None,
    extra_start_configs: Sequence[CodingConfig] = (),
    n_label: int = 1,
) -> RegionSample:
    """Trace the achievable frontier by weighted-sum scalarization.

    For each weight lambda, maximizes lambda*R + (1-lambda)*R' of the secure
    rate pair over parameterized configurations.  Scalarization only reaches
    the convex hull of the frontier; points are Pareto-filtered afterwards.
    Deterministic for fixed (seed, budget, weights).
    """
    if budget <= 0:
        raise ParameterError(f"budget must be positive, got {budget}")
    dims = dims or default_dims(channel)
    da = channel.dim_in
    if dims.g1 > da:
        raise ParameterError(f"dim G1 = {dims.g1} exceeds channel input dim {da}")
    n_params = dims.num_x + 2 * dims.g1 * dims.g2 + dims.num_x * da * da
    starts = [
        _params_from_config(c, dims, da)
        for c in list(_structured_configs(channel, dims)) + list(extra_start_configs)
    ]
    per_weight = max(budget // max(len(weights), 1), 50)
    rows: list[RegionPoint] = []
    for w_idx, lam in enumerate(weights):

        def objective(params, lam=lam):
            try:
                cfg = _config_from_params(params, dims, da)
                pt = rate_pair_secure(cfg, channel)
            except (ValidityError, ShapeError, FloatingPointError):
                return 1e6
            return -(lam * pt.r + (1.0 - lam) * pt.rp)

        result = search.multistart_minimize(
            objective,
            n_params,
            per_weight,
            [seed, w_idx],
            starts=8,
            structured_starts=starts,
        )
        cfg = _config_from_params(result.x, dims, da)
        pt = rate_pair_secure(cfg, channel)
        pt = RatePoint(pt.r / n_label, pt.rp / n_label, n_label, cfg)
        rows.append(RegionPoint(float(lam), pt, -result.value / n_label, result.evals, seed, True))
    return RegionSample(_mark_frontier(rows))


def product_embedding(config: CodingConfig) -> CodingConfig:
    """Two-fold product configuration achieving twice the single-use rates."""
    p = np.asarray(config.p_x)
    p2 = np.outer(p, p).reshape(-1)
    g1, g2 = config.dim_g1, config.dim_g2
    phi = config.phi.amplitudes.reshape(g1, g2)
    phi2 = np.einsum("ab,cd->acbd", phi, phi).reshape(-1)
    pure = PureState((Register("G1", g1 * g1), Register("G2", g2 * g2)), phi2)
    encs = tuple(
        np.kron(config.encoders[x1], config.encoders[x2])
        for x1 in range(p.size)
        for x2 in range(p.size)
    )
    return CodingConfig(tuple(p2), pure, encs)


def regularized_points(
    channel: WiretapChannel,
    n: int,
    weights: Sequence[float],
    budget: int = 20000,
    seed: int = 0,
) -> RegionSample:
    """Frontier of the n-fold product channel, rates reported per channel use."""
    if n not in (1, 2):
        raise ParameterError(f"regularized evaluation supports n in {{1, 2}}, got {n}")
    if n == 1:
        return optimize_region(channel, weights, budget, seed)
    base = optimize_region(channel, weights, budget // 2, seed)
    embedded = [product_embedding(p.rate.config) for p in base.points if p.rate.config is not None]
    ch2 = tensor_power(channel, 2)
    # match the embedded configs' shapes: |X| = |X1||X2|, G = G1 (x) G1
    dims2 = SearchDims(
        len(embedded[0].p_x) if embedded else ch2.dim_in * ch2.dim_in,
        embedded[0].dim_g1 if embedded else ch2.dim_in,
        embedded[0].dim_g2 if embedded else ch2.dim_in,
    )
    return optimize_region(
        ch2,
        weights,
        max(budget - budget // 2, 1),
        seed,
        dims=dims2,
        extra_start_configs=embedded,
        n_label=2,
    )
