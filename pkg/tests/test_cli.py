import json
import subprocess
import sys

import numpy as np
import pytest

from symtoep.cli import RunConfig, UsageError, dumps, main, run
from symtoep.operators import OperatorMatrix, T_p, T_s, build_X
from symtoep.symbols import S_SYMBOL, conjugate, symbol_to_json


@pytest.fixture
def s_plus_sbar(tmp_path):
    path = tmp_path / "s_plus_sbar.json"
    path.write_text(json.dumps(symbol_to_json(S_SYMBOL + conjugate(S_SYMBOL))))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_check_bh(capsys, s_plus_sbar):
    code, doc = run_cli(capsys, "check-bh", "--symbol", s_plus_sbar, "--D", "12", "--margin", "2")
    assert code == 0 and doc["passed"]
    assert doc["window"] == {"b_min": 0, "b_max": 9, "a_max": 10}
    assert doc["info"]["margin"] == 2


def test_default_margin_from_bandwidth(capsys, s_plus_sbar):
    code, doc = run_cli(capsys, "check-bh", "--symbol", s_plus_sbar)
    assert code == 0 and doc["info"] == {"D": 16, "margin": 2}


def test_check_bh_failure_exit_code(capsys, tmp_path):
    path = tmp_path / "x.json"
    path.write_text(json.dumps(build_X(12).to_json()))
    code, doc = run_cli(capsys, "check-bh", "--matrix", str(path), "--margin", "2")
    assert code == 1 and not doc["passed"]


@pytest.mark.parametrize("name", ["coburn", "example29", "remark36"])
def test_demos(capsys, name):
    code, doc = run_cli(capsys, "demo", name, "--D", "12")
    assert code == 0 and doc["passed"]
    assert doc["info"]["example"]


def test_coburn_demo_content(capsys):
    _, doc = run_cli(capsys, "demo", "coburn", "--D", "12")
    assert dict(doc["details"]) == {"|T e(1,0)|": 0, "|T* e(1,0)|": 0, "T is the zero matrix": 0}


def test_classify_point(capsys):
    code, doc = run_cli(capsys, "classify-point", "--s", "2", "--p", "1")
    assert code == 0 and doc["class"] == "IN_B_GAMMA"


@pytest.mark.parametrize("argv", [
    ["check-bh", "--D", "12"],
    ["check-bh", "--symbol", "missing.json"],
    ["classify-point", "--s", "2"],
    ["fundamental-check", "--D", "2"],
    ["szego", "eval", "--w1", "2", "1", "--w2", "0", "0"],
    ["no-such-command"],
    ["check-bh", "--D", "0"],
])
def test_usage_errors(capsys, argv):
    assert main(argv) == 2
    assert capsys.readouterr().err


def test_bad_symbol_file(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"format": "fourier", "coefficients": [{"m": 1, "n": 0, "re": 1}]}))
    assert main(["build-toeplitz", "--symbol", str(path)]) == 2
    assert "asymmetric" in capsys.readouterr().err


def test_build_round_trip(capsys, s_plus_sbar, tmp_path):
    out = tmp_path / "T.json"
    assert main(["build-toeplitz", "--symbol", s_plus_sbar, "--D", "5", "-o", str(out)]) == 0
    doc = json.loads(out.read_text())
    T = OperatorMatrix.from_json(doc)
    assert np.array_equal(T.entries, (T_s(5) + T_s(5).H).entries)
    assert doc["symbol_sup_norm_estimate"] == pytest.approx(4.0)
    for cmd in ("build-laurent", "build-hankel", "build-dual"):
        assert main([cmd, "--symbol", s_plus_sbar, "--D", "4", "-o", str(out)]) == 0


def test_recover_symbol(capsys, tmp_path, s_plus_sbar):
    mat = tmp_path / "T.json"
    main(["build-toeplitz", "--symbol", s_plus_sbar, "--D", "8", "-o", str(mat)])
    code, doc = run_cli(capsys, "recover-symbol", "--matrix", str(mat), "--beta", "1")
    assert code == 0 and doc["round_trip_residual"] == 0
    assert len(doc["coefficients"]) == 4


def test_certify_gamma(capsys, tmp_path):
    r, u, r3 = (tmp_path / n for n in ("r.json", "u.json", "r3.json"))
    r.write_text(json.dumps([[2, 0], [0, 0]]))
    u.write_text(json.dumps([[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]))
    r3.write_text(json.dumps([[3, 0], [0, 0]]))
    assert run_cli(capsys, "certify-gamma", "--T", str(r), "--V", str(u))[0] == 0
    assert run_cli(capsys, "certify-gamma", "--T", str(r3), "--V", str(u))[0] == 1


def test_certify_gamma_isometry_windowed(capsys, tmp_path):
    t, v = tmp_path / "t.json", tmp_path / "v.json"
    t.write_text(json.dumps(T_s(10).to_json()))
    v.write_text(json.dumps(T_p(10).to_json()))
    code, doc = run_cli(capsys, "certify-gamma", "--T", str(t), "--V", str(v),
                        "--mode", "isometry", "--margin", "1")
    assert code == 0 and doc["window"] == {"b_min": 0, "b_max": 8, "a_max": 9}


def test_profiles_and_checks(capsys, s_plus_sbar):
    code, doc = run_cli(capsys, "compact-profile", "--symbol", s_plus_sbar, "--D", "12")
    assert code == 0 and [e["n"] for e in doc["profile"]] == list(range(1, 7))
    code, doc = run_cli(capsys, "asymptotic-check", "--symbol", s_plus_sbar, "--D", "20",
                        "--add-fn", "1")
    assert code == 0
    assert run_cli(capsys, "check-analytic", "--symbol", s_plus_sbar, "--D", "12")[0] == 0
    assert run_cli(capsys, "check-dual-bh", "--symbol", s_plus_sbar, "--D", "12")[0] == 0
    assert run_cli(capsys, "fundamental-check", "--D", "10")[0] == 0


def test_szego_modes(capsys):
    code, doc = run_cli(capsys, "szego", "eval", "--w1", "0", "0", "--w2", "0", "0")
    assert code == 0 and doc["value"] == {"re": 1, "im": 0}
    code, doc = run_cli(capsys, "szego", "partial", "--w1", "0.5", "0.2", "--w2", "0.3", "0.1",
                        "--D", "40", "--tol", "1e-8")
    assert code == 0 and doc["error"] < 1e-8
    code, doc = run_cli(capsys, "szego", "eigen", "--w1", "0.4", "0.1", "--D", "40")
    assert code == 0 and doc["residual"] < 1e-6


def test_deterministic_output(tmp_path, s_plus_sbar):
    outs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        main(["asymptotic-check", "--symbol", s_plus_sbar, "--D", "16", "-o", str(path)])
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_dumps_format():
    text = dumps({"b": 0.1, "a": [1, 2.5, True, None], "c": 1 + 2j, "d": float("nan")})
    assert text == '{"b": 0.10000000000000001, "a": [1, 2.5, true, null], ' \
                   '"c": {"re": 1, "im": 2}, "d": null}'
    assert json.loads(text)["b"] == 0.1


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(command="check-bh", tolerance=0)
    with pytest.raises(UsageError):
        RunConfig(command="check-bh", margin=-1)
    assert run(RunConfig(command="fundamental-check", D=6)) == 0


def test_window_cap_from_environment(s_plus_sbar):
    proc = subprocess.run([sys.executable, "-m", "symtoep", "build-toeplitz", "--symbol",
                           s_plus_sbar, "--D", "12"], capture_output=True, text=True,
                          env={"SYMTOEP_MAX_D": "10", "PATH": ""})
    assert proc.returncode == 2 and "SYMTOEP_MAX_D" in proc.stderr
