import json

from qwiretap.cli import run


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def _meta(path):
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    assert first.startswith("# meta: ")
    return json.loads(first[len("# meta: "):])


def test_region_csv_and_rerun(tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    argv = [
        "region",
        "--channel", "identity_dilation:2",
        "--weights", "2",
        "--budget", "200",
        "--seed", "1",
    ]
    assert run(argv + ["--out", str(out1)]) == 0
    assert run(argv + ["--out", str(out2)]) == 0
    assert _read(out1) == _read(out2)
    lines = _read(out1).decode().splitlines()
    assert lines[1] == "lambda,R_bits,Rprime_bits,n,objective,evals,seed"
    assert len(lines) == 4  # meta + header + 2 weights
    meta = _meta(out1)
    assert meta["tool"] == "qwiretap" and meta["command"] == "region"
    assert meta["channel"] == {"name": "identity_dilation", "params": [2.0]}
    assert _read(out1).decode().endswith("\n") and b"\r" not in _read(out1)


def test_baseline_output(tmp_path):
    out = tmp_path / "b.txt"
    code = run([
        "baseline",
        "--channel", "identity_dilation:2",
        "--kind", "ea",
        "--budget", "2000",
        "--out", str(out),
    ])
    assert code == 0
    lines = _read(out).decode().splitlines()
    assert abs(float(lines[1]) - 2.0) < 5e-3


def test_degraded_check_json(tmp_path):
    out = tmp_path / "d.json"
    assert run(["degraded-check", "--channel", "erasure_wiretap:0.25", "--out", str(out)]) == 0
    lines = _read(out).decode().splitlines()
    body = json.loads(lines[1])
    assert body["distance"] <= 1e-6
    assert body["verdict"] == "degraded (numerical)"


def test_covering_csv_and_rerun(tmp_path):
    out1 = tmp_path / "c1.csv"
    out2 = tmp_path / "c2.csv"
    argv = [
        "covering",
        "--channel", "erasure_wiretap:0.5",
        "--n", "2",
        "--r0", "0.0,1.0",
        "--trials", "4",
        "--seed", "9",
    ]
    assert run(argv + ["--out", str(out1)]) == 0
    assert run(argv + ["--out", str(out2)]) == 0
    assert _read(out1) == _read(out2)
    lines = _read(out1).decode().splitlines()
    assert lines[1] == "trial,R0,n,distance,seed"
    assert len(lines) == 2 + 2 * 4


def test_simulate_json_and_rerun(tmp_path):
    out1 = tmp_path / "s1.json"
    out2 = tmp_path / "s2.json"
    argv = [
        "simulate",
        "--channel", "identity_dilation:2",
        "--preset", "dense",
        "--n", "1",
        "--rates", "0,1,0,0",
        "--seed", "4",
    ]
    assert run(argv + ["--out", str(out1)]) == 0
    assert run(argv + ["--out", str(out2)]) == 0
    assert _read(out1) == _read(out2)
    body = json.loads(_read(out1).decode().splitlines()[1])
    for key in ("P_e", "P_e_star", "leakage_bits", "leakage_split", "leakage_no_share_bits"):
        assert key in body
    assert body["n"] == 1


def test_typicality_json(tmp_path):
    out = tmp_path / "t.json"
    assert run(["typicality", "--p", "0.9,0.1", "--n", "8", "--delta", "0.5", "--out", str(out)]) == 0
    body = json.loads(_read(out).decode().splitlines()[1])
    assert body["all_passed"] is True
    assert body["small_n"] is False
    assert len(body["checks"]) == 4


def test_exit_codes(capsys):
    assert run(["baseline", "--channel", "nonexistent:0.5", "--kind", "ea"]) == 2
    assert run(["region", "--channel", '{"name": "identity_dilation", "bogus": 1}', "--weights", "2", "--budget", "100"]) == 2
    assert run(["covering", "--channel", "erasure_wiretap:0.3", "--n", "9", "--r0", "0.5", "--trials", "1"]) == 3
    capsys.readouterr()


def test_stdout_emission(capsys):
    assert run(["typicality", "--p", "0.5,0.5", "--n", "4", "--delta", "0.9"]) == 0
    captured = capsys.readouterr().out
    assert captured.startswith("# meta: ")
