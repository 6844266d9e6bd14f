import numpy as np
import pytest

from qwiretap import (
    CodingConfig,
    ParameterError,
    PureState,
    Register,
    build_omega,
    classical_signaling_config,
    dense_coding_config,
    eve_trivial,
    make_channel,
    mutual_information,
    optimize_region,
    partial_trace,
    random_config,
    rate_pair_no_interception,
    rate_pair_nonsecure,
    rate_pair_secure,
)
from qwiretap.regions import baseline, product_embedding

IDC = make_channel("identity_dilation", [2])
COPY = make_channel("cq_classical_wiretap", [[[1, 0], [0, 1]], [[1, 0], [0, 1]]])


def test_config_validation():
    phi = PureState((Register("G1", 2), Register("G2", 2)), np.array([1, 0, 0, 0.0]))
    with pytest.raises(Exception):
        CodingConfig((0.7, 0.7), phi, (np.eye(2), np.eye(2)))
    with pytest.raises(Exception):
        CodingConfig((0.5, 0.5), phi, (np.eye(2), np.array([[1, 1], [0, 1]])))


def test_config_json_round_trip():
    cfg = dense_coding_config(2)
    back = CodingConfig.from_json_dict(cfg.to_json_dict())
    assert np.allclose(back.p_x, cfg.p_x)
    assert np.abs(back.phi.amplitudes - cfg.phi.amplitudes).max() < 1e-12
    for a, b in zip(back.encoders, cfg.encoders):
        assert np.abs(a - b).max() < 1e-12


def test_build_omega_trivial():
    phi = PureState((Register("G1", 2), Register("G2", 2)), np.array([1, 0, 0, 1]) / np.sqrt(2))
    cfg = CodingConfig((1.0,), phi, (np.eye(2),))
    omega = build_omega(cfg, IDC)
    assert abs(np.trace(omega.matrix).real - 1.0) < 1e-10
    # X marginal matches p_X
    px = partial_trace(omega, {"X"})
    assert np.abs(px.matrix - np.array([[1.0]])).max() < 1e-10
    # phi survives on (G2, B)
    gb = partial_trace(omega, {"G2", "B"})
    assert abs(mutual_information(gb, {"G2"}) - 2.0) < 1e-9


def test_dense_coding_rates():
    cfg = dense_coding_config(2)
    omega = build_omega(cfg, IDC)
    xgb = partial_trace(omega, {"X", "G2", "B"})
    # I(XG2;B) = 2 bits for superdense coding
    assert abs(mutual_information(xgb, {"B"}) - 2.0) < 1e-9
    pt = rate_pair_secure(cfg, IDC)
    assert pt.r < 1e-9 and abs(pt.rp - 2.0) < 1e-9
    # over the full-erasure channel Bob sees nothing
    er1 = make_channel("erasure_wiretap", [1.0])
    pt = rate_pair_nonsecure(cfg, er1)
    assert pt.r < 1e-9 and pt.rp < 1e-9


def test_classical_signaling_rates():
    cfg = classical_signaling_config(2)
    pt = rate_pair_nonsecure(cfg, IDC)
    assert abs(pt.r - 1.0) < 1e-9
    # copy-to-Eve clips the secure rate to zero
    pt = rate_pair_secure(cfg, COPY)
    assert pt.r == 0.0 and pt.rp == 0.0
    pt = rate_pair_no_interception(cfg, COPY)
    assert pt.r == 0.0 and abs(pt.rp) < 1e-9


def test_no_interception_vs_secure():
    er = make_channel("erasure_wiretap", [0.5])
    cfg = dense_coding_config(2)
    sec = rate_pair_secure(cfg, er)
    ni = rate_pair_no_interception(cfg, er)
    assert ni.rp >= sec.rp - 1e-9
    assert ni.rp > sec.rp + 1e-6  # strictly larger: no I(G2;E|X) subtraction
    assert ni.r >= sec.r - 1e-9


def test_eve_trivial_collapse_sampled():
    rng = np.random.default_rng(0)
    ch = eve_trivial(make_channel("erasure_wiretap", [0.3]))
    for _ in range(10):
        cfg = random_config(ch, rng)
        sec = rate_pair_secure(cfg, ch)
        non = rate_pair_nonsecure(cfg, ch)
        assert abs(sec.r - non.r) < 1e-9
        assert abs(sec.rp - non.rp) < 1e-9


def test_baseline_benchmarks():
    assert abs(baseline("ea", IDC, 2000, 0) - 2.0) < 5e-3
    assert abs(baseline("holevo", IDC, 2000, 0) - 1.0) < 5e-3
    assert abs(baseline("sea", COPY, 2000, 0)) < 5e-3
    with pytest.raises(ParameterError):
        baseline("ea", IDC, 0, 0)
    with pytest.raises(ParameterError):
        baseline("nope", IDC, 100, 0)


def test_optimize_region_determinism():
    s1 = optimize_region(IDC, [0.0, 1.0], budget=400, seed=3)
    s2 = optimize_region(IDC, [0.0, 1.0], budget=400, seed=3)
    for a, b in zip(s1.points, s2.points):
        assert a.rate.r == b.rate.r and a.rate.rp == b.rate.rp
        assert a.objective == b.objective and a.evals == b.evals


def test_optimize_region_full_erasure():
    er1 = make_channel("erasure_wiretap", [1.0])
    sample = optimize_region(er1, [0.0, 1.0], budget=300, seed=0)
    for p in sample.points:
        assert p.rate.r < 1e-6 and p.rate.rp < 1e-6


def test_product_embedding_doubles_rates():
    from qwiretap import tensor_power

    cfg = dense_coding_config(2)
    pt1 = rate_pair_secure(cfg, IDC)
    cfg2 = product_embedding(cfg)
    pt2 = rate_pair_secure(cfg2, tensor_power(IDC, 2))
    assert abs(pt2.r - 2 * pt1.r) < 1e-8
    assert abs(pt2.rp - 2 * pt1.rp) < 1e-8
