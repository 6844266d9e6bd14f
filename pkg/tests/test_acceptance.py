"""Acceptance gate: ten end-to-end criteria, one printed verdict line each."""

import itertools

import numpy as np

from qwiretap import (
    Codebook,
    HWParams,
    apply_pure,
    dense_coding_config,
    classical_signaling_config,
    degrading_distance,
    encode,
    evaluate_code,
    eve_trivial,
    generate_codebook,
    holevo_chi,
    make_channel,
    optimize_region,
    partial_trace,
    random_config,
    rate_pair_no_interception,
    rate_pair_nonsecure,
    rate_pair_secure,
    regularized_points,
    sample_gamma,
    schmidt_blocks,
    block_unitary,
    typical_projector,
    typical_set,
    covering_experiment,
    verify_projector_properties,
)
from qwiretap.labeled import LabeledOperator, Register
from qwiretap.regions import baseline
from qwiretap.cli import run as cli_run

IDC = make_channel("identity_dilation", [2])


def _report(num: int, name: str, ok: bool, detail: str = "") -> None:
    verdict = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {num:02d} {name}: {verdict}{suffix}")
    assert ok, f"criterion {num} ({name}) failed{suffix}"


def _dense_codebook_n1():
    """Four sign-free Heisenberg-Weyl unitaries on the single 2-dim block."""
    return Codebook(
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


def test_acceptance_01_eve_trivial_collapse():
    rng = np.random.default_rng(11)
    worst = 0.0
    for ch in (eve_trivial(IDC), eve_trivial(make_channel("erasure_wiretap", [0.3]))):
        for _ in range(50):
            cfg = random_config(ch, rng)
            sec = rate_pair_secure(cfg, ch)
            non = rate_pair_nonsecure(cfg, ch)
            worst = max(worst, abs(sec.r - non.r), abs(sec.rp - non.rp))
    _report(1, "eve-trivial collapse", worst < 1e-9, f"max gap {worst:.2e}")


def test_acceptance_02_dense_coding_benchmark():
    ch = eve_trivial(IDC)
    sample = optimize_region(ch, [0.0, 1.0], budget=20000, seed=0)
    rp_at_0 = sample.points[0].rate.rp
    r_at_1 = sample.points[1].rate.r
    ea = baseline("ea", ch, 20000, 0)
    hol = baseline("holevo", ch, 20000, 0)
    ok = rp_at_0 >= 1.95 and r_at_1 >= 0.95 and abs(ea - 2.0) < 5e-3 and abs(hol - 1.0) < 5e-3
    _report(
        2,
        "dense-coding benchmark",
        ok,
        f"Rp(0)={rp_at_0:.4f} R(1)={r_at_1:.4f} ea={ea:.4f} holevo={hol:.4f}",
    )


def test_acceptance_03_share_interception_breach():
    ch = make_channel("erasure_wiretap", [1.0])
    ev = evaluate_code(_dense_codebook_n1(), dense_coding_config(2), ch)
    ok = ev.leakage_no_share_bits <= 1e-9 and abs(ev.leakage_split[1] - 2.0) <= 1e-9
    _report(
        3,
        "dense decoder on the intercepted share",
        ok,
        f"I(M';E)={ev.leakage_no_share_bits:.2e} I(M';EG2)={ev.leakage_split[1]:.10f}",
    )


def test_acceptance_04_clipping_and_dominance():
    zoo = [
        IDC,
        make_channel("erasure_wiretap", [0.3]),
        make_channel("dephasing_wiretap", [0.4]),
        make_channel("depolarizing_wiretap", [0.2]),
        make_channel("amplitude_damping_wiretap", [0.35]),
        make_channel("cq_classical_wiretap", [[[0.8, 0.2], [0.3, 0.7]], [[0.6, 0.4], [0.5, 0.5]]]),
    ]
    rng = np.random.default_rng(13)
    ok = True
    for i in range(500):
        ch = zoo[i % len(zoo)]
        cfg = random_config(ch, rng)
        sec = rate_pair_secure(cfg, ch)
        non = rate_pair_nonsecure(cfg, ch)
        ni = rate_pair_no_interception(cfg, ch)
        ok &= sec.r >= 0.0 and sec.rp >= 0.0
        ok &= sec.r <= non.r + 1e-9 and sec.rp <= non.rp + 1e-9
        ok &= ni.r >= sec.r - 1e-9 and ni.rp >= sec.rp - 1e-9
        if not ok:
            break
    _report(4, "clipping and dominance on 500 random pairs", ok)


def test_acceptance_05_degradedness():
    rep_lo = degrading_distance(make_channel("erasure_wiretap", [0.25]), 100000, 0)
    probe = np.zeros((3, 3), dtype=complex)
    probe[0, 0] = 1.0
    witness_param = float(rep_lo.witness.apply(probe)[2, 2].real)
    rep_hi = degrading_distance(make_channel("erasure_wiretap", [0.75]), 100000, 0)
    ok = (
        rep_lo.distance <= 1e-6
        and abs(witness_param - 2.0 / 3.0) <= 1e-3
        and rep_hi.distance >= 1e-2
        and rep_hi.verdict == "likely non-degraded"
    )
    _report(
        5,
        "degradedness check",
        ok,
        f"d(0.25)={rep_lo.distance:.2e} witness={witness_param:.5f} d(0.75)={rep_hi.distance:.3f}",
    )


def test_acceptance_06_typical_projector_suite():
    skew = LabeledOperator((Register("q", 2),), np.diag([0.9, 0.1]).astype(complex), "state")
    mixed = LabeledOperator((Register("q", 2),), np.eye(2, dtype=complex) / 2, "state")
    ok = True
    for rho, p in ((skew, [0.9, 0.1]), (mixed, [0.5, 0.5])):
        for n, delta in itertools.product((4, 6, 8), (0.2, 0.5)):
            rep = verify_projector_properties(rho, n, delta)
            ok &= rep.all_passed
            tp = typical_projector(rho, n, delta)
            ok &= tp.rank == len(typical_set(p, n, delta))
    _report(6, "typical projector property suite", ok)


def test_acceptance_07_covering_trend():
    c = 0.78
    v = np.array([c, np.sqrt(1 - c * c)])
    ensemble = [
        (0.5, np.diag([1.0, 0.0]).astype(complex)),
        (0.5, np.outer(v, v).astype(complex)),
    ]
    medians = [
        covering_experiment(ensemble, 8, r0, 100, 7).median
        for r0 in (0.25, 0.5, 0.75, 1.0)
    ]
    monotone = all(a >= b - 1e-12 for a, b in zip(medians, medians[1:]))
    ok = monotone and medians[-1] <= 0.5 * medians[0]
    _report(7, "covering lemma trend", ok, "medians " + " ".join(f"{m:.3f}" for m in medians))


def test_acceptance_08_spc_invariants():
    cfg = dense_coding_config(2)
    rng = np.random.default_rng(17)
    # ricochet identity on 200 sampled (gamma, x^n), n <= 2
    worst_ric = 0.0
    phi_mat = cfg.phi.amplitudes.reshape(2, 2)
    for _ in range(200):
        n = int(rng.integers(1, 3))
        xseq = tuple(int(v) for v in rng.integers(0, 4, size=n))
        blocks = schmidt_blocks(cfg, xseq)
        gamma = sample_gamma(blocks, rng)
        mat = np.array([[1.0]], dtype=complex)
        for x in xseq:
            mat = np.kron(mat, cfg.encoders[x] @ phi_mat)
        ua = block_unitary(blocks, gamma, side="A")
        ug = block_unitary(blocks, gamma, side="G2")
        diff = np.abs((ua @ mat) - (mat @ ug.T)).max()
        worst_ric = max(worst_ric, float(diff))
    ok = worst_ric <= 1e-10

    # unassisted Bob state is gamma-independent
    from qwiretap import tensor_power

    ch2 = tensor_power(make_channel("erasure_wiretap", [0.3]), 2)
    base = generate_codebook(cfg, (0.0, 0.0, 0.0, 0.0), n=2, seed=5)
    blocks = schmidt_blocks(cfg, base.x_sequences[0][0])
    ref, worst_bob = None, 0.0
    for _ in range(10):
        gamma = sample_gamma(blocks, rng)
        cb = Codebook(base.rates, 2, base.x_sequences, ((((gamma,),),),), 5)
        out = apply_pure(ch2, encode(cb, cfg, 0, 0, 0, 0, channel=ch2)).to_density()
        bob = partial_trace(out, set(ch2.bob_names)).matrix
        ref = bob if ref is None else ref
        worst_bob = max(worst_bob, float(np.abs(bob - ref).max()))
    ok &= worst_bob <= 1e-12

    # leakage chain rule checked against an independent recomputation
    ch = make_channel("erasure_wiretap", [0.5])
    cb = generate_codebook(cfg, (1.0, 1.0, 0.0, 0.0), n=1, seed=3)
    ev = evaluate_code(cb, cfg, ch)
    states = {}
    for m in range(2):
        for mp in range(2):
            psi = encode(cb, cfg, m, mp, 0, 0, channel=ch)
            out = apply_pure(ch, psi).to_density()
            states[m, mp] = partial_trace(out, set(ch.eve_names) | {"G2"}).matrix
    flat = [(0.25, states[m, mp]) for m in range(2) for mp in range(2)]
    leak = holevo_chi(flat)
    i_m = holevo_chi([(0.5, (states[m, 0] + states[m, 1]) / 2) for m in range(2)])
    i_mp = 0.5 * sum(
        holevo_chi([(0.5, states[m, 0]), (0.5, states[m, 1])]) for m in range(2)
    )
    chain_gap = max(
        abs(leak - ev.leakage_bits),
        abs(i_m - ev.leakage_split[0]),
        abs(i_mp - ev.leakage_split[1]),
        abs(i_m + i_mp - leak),
    )
    ok &= chain_gap <= 1e-9

    # exact leakage non-increasing in the randomization rate R0
    copy = make_channel("cq_classical_wiretap", [[[1, 0], [0, 1]], [[1, 0], [0, 1]]])
    ccfg = classical_signaling_config(2)
    means = []
    for r0 in (0.0, 0.5, 1.0):
        vals = []
        for seed in range(20):
            cbk = generate_codebook(ccfg, (0.5, 0.0, r0, 0.0), n=2, seed=seed)
            vals.append(evaluate_code(cbk, ccfg, copy).leakage_bits)
        means.append(float(np.mean(vals)))
    ok &= all(a >= b - 1e-9 for a, b in zip(means, means[1:]))
    _report(
        8,
        "superposition-code invariants",
        ok,
        f"ricochet={worst_ric:.1e} bob={worst_bob:.1e} chain={chain_gap:.1e} "
        + "leak(R0) " + " ".join(f"{m:.3f}" for m in means),
    )


def test_acceptance_09_regularization_consistency():
    weights = [0.0, 0.5, 1.0]
    s1 = regularized_points(IDC, 1, weights, budget=1200, seed=0)
    s2 = regularized_points(IDC, 2, weights, budget=1200, seed=0)
    worst = 0.0
    for w, p1, p2 in zip(weights, s1.points, s2.points):
        v1 = w * p1.rate.r + (1 - w) * p1.rate.rp
        v2 = w * p2.rate.r + (1 - w) * p2.rate.rp
        worst = max(worst, v1 - v2)
    _report(9, "two-letter frontier dominates one-letter", worst <= 5e-2, f"max deficit {worst:.3f}")


def test_acceptance_10_cli_determinism(tmp_path):
    jobs = [
        ["region", "--channel", "identity_dilation:2", "--weights", "2", "--budget", "150", "--seed", "2"],
        ["covering", "--channel", "erasure_wiretap:0.5", "--n", "2", "--r0", "0.5", "--trials", "3", "--seed", "3"],
        ["simulate", "--channel", "identity_dilation:2", "--preset", "dense", "--n", "1", "--rates", "0,1,0,0", "--seed", "4"],
    ]
    ok = True
    for i, argv in enumerate(jobs):
        a, b = tmp_path / f"{i}a.out", tmp_path / f"{i}b.out"
        ok &= cli_run(argv + ["--out", str(a)]) == 0
        ok &= cli_run(argv + ["--out", str(b)]) == 0
        ok &= a.read_bytes() == b.read_bytes()
    _report(10, "byte-identical CLI reruns", ok)
