import numpy as np
import pytest

from qwiretap import (
    CapacityError,
    Codebook,
    HWParams,
    ParameterError,
    StructureError,
    block_unitary,
    classical_signaling_config,
    dense_coding_config,
    encode,
    evaluate_code,
    generate_codebook,
    heisenberg_weyl,
    make_channel,
    pgm,
    sample_gamma,
    schmidt_blocks,
)
from qwiretap.spcsim import zero_gamma

IDC = make_channel("identity_dilation", [2])


def test_heisenberg_weyl_qubit():
    assert np.allclose(heisenberg_weyl(0, 0, 2), np.eye(2))
    assert np.allclose(heisenberg_weyl(1, 0, 2), [[0, 1], [1, 0]])
    assert np.allclose(heisenberg_weyl(0, 1, 2), np.diag([1, -1]))
    assert np.allclose(heisenberg_weyl(1, 1, 2), [[0, -1], [1, 0]])
    with pytest.raises(ParameterError):
        heisenberg_weyl(2, 0, 2)


def test_heisenberg_weyl_qutrit():
    w = np.exp(2j * np.pi / 3)
    sig = heisenberg_weyl(1, 1, 3)
    # shift then phase: column k carries w^k and lands on row k+1 mod 3
    expected = np.zeros((3, 3), dtype=complex)
    for k in range(3):
        expected[(k + 1) % 3, k] = w ** k
    assert np.abs(sig - expected).max() < 1e-12
    # unitarity and the d-fold cycle
    assert np.abs(sig @ sig.conj().T - np.eye(3)).max() < 1e-12
    cube = sig @ sig @ sig
    assert np.abs(np.abs(np.trace(cube)) - 3.0) < 1e-12  # proportional to identity


def test_schmidt_blocks_dense_coding():
    cfg = dense_coding_config(2)
    blocks = schmidt_blocks(cfg, (0, 0))
    # conditional types of y^2: (2,0), (1,1), (0,2) -> dims 1, 2, 1
    assert sorted(blocks.block_dims) == [1, 1, 2]
    assert abs(sum(blocks.weights) - 1.0) < 1e-12
    custom = schmidt_blocks(cfg, (0,), partition=(((0,), (1,)),))
    assert custom.block_dims == (2,)
    with pytest.raises(StructureError):
        schmidt_blocks(cfg, (0,), partition=(((0,), (0,)),))
    with pytest.raises(StructureError):
        schmidt_blocks(cfg, (0,), partition=(((2,),),))


def test_block_unitary_basics():
    cfg = dense_coding_config(2)
    blocks = schmidt_blocks(cfg, (0, 0))
    u0 = block_unitary(blocks, zero_gamma(blocks))
    assert np.abs(u0 - np.eye(4)).max() < 1e-12
    rng = np.random.default_rng(0)
    for _ in range(20):
        g = sample_gamma(blocks, rng)
        for side in ("A", "G2"):
            u = block_unitary(blocks, g, side=side)
            assert np.abs(u @ u.conj().T - np.eye(u.shape[0])).max() < 1e-10
    with pytest.raises(StructureError):
        block_unitary(blocks, HWParams((0, 1), ((0, 0, 0),) * 3))
    with pytest.raises(ParameterError):
        block_unitary(blocks, zero_gamma(blocks), side="E")


def test_ricochet_identity():
    # (U (x) 1)|psi> = (1 (x) U_G2)|psi> on the encoded state, exactly
    cfg = dense_coding_config(2)
    rng = np.random.default_rng(1)
    for xseq in [(0,), (1, 2), (0, 3)]:
        blocks = schmidt_blocks(cfg, xseq)
        phi_mat = cfg.phi.amplitudes.reshape(2, 2)
        mat = np.array([[1.0]], dtype=complex)
        for x in xseq:
            mat = np.kron(mat, cfg.encoders[x] @ phi_mat)
        psi = mat.reshape(-1)
        d = 2 ** len(xseq)
        for _ in range(10):
            g = sample_gamma(blocks, rng)
            ua = block_unitary(blocks, g, side="A")
            ug = block_unitary(blocks, g, side="G2")
            lhs = (ua @ psi.reshape(d, d)).reshape(-1)
            rhs = (psi.reshape(d, d) @ ug.T).reshape(-1)
            assert np.abs(lhs - rhs).max() < 1e-12


def test_generate_codebook():
    cfg = classical_signaling_config(2)
    cb1 = generate_codebook(cfg, (1.0, 0.0, 0.5, 0.0), n=2, seed=5)
    cb2 = generate_codebook(cfg, (1.0, 0.0, 0.5, 0.0), n=2, seed=5)
    assert cb1.x_sequences == cb2.x_sequences
    assert cb1.gammas == cb2.gammas
    assert cb1.counts == (4, 1, 2, 1)
    assert cb1.rates_realized == (1.0, 0.0, 0.5, 0.0)
    for row in cb1.x_sequences:
        for xseq in row:
            assert all(0 <= x < 4 for x in xseq)
    with pytest.raises(CapacityError):
        generate_codebook(cfg, (4.0, 4.0, 0.0, 0.0), n=2, seed=0)


def test_codeword_type_lln():
    # empirical letter frequencies across a large codebook approach p_X
    cfg = classical_signaling_config(2)
    cb = generate_codebook(cfg, (3.0, 0.0, 0.0, 0.0), n=3, seed=7)
    flat = [x for row in cb.x_sequences for xseq in row for x in xseq]
    num_x = len(cfg.p_x)
    freq = np.bincount(flat, minlength=num_x) / len(flat)
    assert np.abs(freq - 1.0 / num_x).max() < 0.1


def test_encode_norm_and_registers():
    cfg = dense_coding_config(2)
    cb = generate_codebook(cfg, (0.5, 0.5, 0.0, 0.0), n=2, seed=0)
    psi = encode(cb, cfg, 0, 0, 0, 0)
    assert abs(np.linalg.norm(psi.amplitudes) - 1.0) < 1e-12
    assert psi.names == ("A1", "A2", "G21", "G22")
    cb1 = generate_codebook(cfg, (0.0, 0.0, 0.0, 0.0), n=1, seed=0)
    psi1 = encode(cb1, cfg, 0, 0, 0, 0, channel=IDC)
    assert psi1.names == ("A", "G2")


def test_pgm_benchmarks():
    zero = np.diag([1.0, 0.0]).astype(complex)
    one = np.diag([0.0, 1.0]).astype(complex)
    plus = np.full((2, 2), 0.5, dtype=complex)
    povm = pgm([(0.5, zero), (0.5, one)])
    assert len(povm) == 3
    assert np.abs(povm[0] - zero).max() < 1e-12
    assert np.abs(povm[2]).max() < 1e-12  # abort never fires for a full-rank mix
    # two identical states: PGM cannot distinguish, success = max prior
    povm = pgm([(0.5, zero), (0.5, zero)])
    succ = 0.5 * np.trace(povm[0] @ zero).real + 0.5 * np.trace(povm[1] @ zero).real
    assert abs(succ - 0.5) < 1e-12
    # |0> vs |+>: PGM success (1 + 1/sqrt(2))/2
    povm = pgm([(0.5, zero), (0.5, plus)])
    succ = 0.5 * np.trace(povm[0] @ zero).real + 0.5 * np.trace(povm[1] @ plus).real
    assert abs(succ - (1 + 1 / np.sqrt(2)) / 2) < 1e-4
    with pytest.raises(ParameterError):
        pgm([(0.7, zero), (0.7, one)])


def test_pgm_completeness():
    rng = np.random.default_rng(2)
    for _ in range(20):
        states = []
        p = rng.dirichlet(np.ones(3))
        for i in range(3):
            g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
            m = g @ g.conj().T
            states.append((p[i], m / np.trace(m).real))
        povm = pgm(states)
        total = sum(povm)
        assert np.abs(total - np.eye(3)).max() < 1e-9
        for e in povm:
            assert np.linalg.eigvalsh(e).min() > -1e-9


def test_evaluate_dense_coding_noiseless():
    # superdense coding: 2 bits of m' through one noiseless qubit, no errors
    cfg = dense_coding_config(2)
    cb = Codebook(
        rates=(0.0, 2.0, 0.0, 0.0),
        n=1,
        x_sequences=(((0,),),),
        gammas=(((
            (HWParams((0,), ((0, 0, 0),)),),
            (HWParams((0,), ((0, 1, 0),)),),
            (HWParams((0,), ((1, 0, 0),)),),
            (HWParams((0,), ((1, 1, 0),)),),
        ),),),
        seed=0,
        partition=(((0,), (1,)),),
    )
    ev = evaluate_code(cb, cfg, IDC)
    assert ev.p_e < 1e-9
    assert ev.leakage_bits < 1e-9  # Eve register is trivial for this channel
    assert ev.p_e_star < 1e-9  # a single primary message decodes trivially


def test_evaluate_share_interception_breach():
    # over a full-interception channel the naive split leaks everything through
    # the entangled share, but nothing through Eve's own output
    cfg = dense_coding_config(2)
    cb = Codebook(
        rates=(0.0, 2.0, 0.0, 0.0),
        n=1,
        x_sequences=(((0,),),),
        gammas=(((
            (HWParams((0,), ((0, 0, 0),)),),
            (HWParams((0,), ((0, 1, 0),)),),
            (HWParams((0,), ((1, 0, 0),)),),
            (HWParams((0,), ((1, 1, 0),)),),
        ),),),
        seed=0,
        partition=(((0,), (1,)),),
    )
    ch = make_channel("erasure_wiretap", [1.0])
    ev = evaluate_code(cb, cfg, ch)
    assert ev.leakage_no_share_bits < 1e-9
    assert abs(ev.leakage_split[1] - 2.0) < 1e-9
    assert abs(ev.leakage_bits - 2.0) < 1e-9


def test_bob_state_gamma_independent():
    # averaged over nothing: Bob's reduced state does not depend on gamma
    from qwiretap import apply_pure, partial_trace

    cfg = dense_coding_config(2)
    cb = generate_codebook(cfg, (0.0, 0.0, 0.0, 0.0), n=2, seed=3)
    xseq = cb.x_sequences[0][0]
    blocks = schmidt_blocks(cfg, xseq)
    rng = np.random.default_rng(4)
    ch2 = make_channel("erasure_wiretap", [0.3])
    from qwiretap import tensor_power

    chn = tensor_power(ch2, 2)
    ref = None
    for _ in range(5):
        gamma = sample_gamma(blocks, rng)
        cb_g = Codebook(cb.rates, cb.n, cb.x_sequences, ((((gamma,),),),), 3)
        psi = encode(cb_g, cfg, 0, 0, 0, 0, channel=chn)
        out = apply_pure(chn, psi).to_density()
        bob = partial_trace(out, set(chn.bob_names)).matrix
        if ref is None:
            ref = bob
        assert np.abs(bob - ref).max() < 1e-12
