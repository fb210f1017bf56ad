import json

import numpy as np
import pytest

from hubbard_renyi import renyi
from hubbard_renyi.adiabatic import TrotterSchedule
from hubbard_renyi.cli import main
from hubbard_renyi.noise import SpamModel
from hubbard_renyi.simcore import ShotRecord


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(csv_text):
    lines = [l for l in csv_text.splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, l.split(","))) for l in lines[1:]]


def test_evolve_method_i(capsys):
    code, out, _ = run(["evolve", "--method", "I", "--U", "0:6:1"], capsys)
    assert code == 0
    assert out.startswith("# config: ")
    r = rows(out)
    assert len(r) == 7
    assert float(r[0]["h_sim"]) == pytest.approx(-2.0, abs=1e-10)
    assert list(r[0]) == ["U", "method", "delta", "tau", "n_steps", "h_exact", "h_sim", "h_corrected"]


def test_method_ii_at_zero_rejected(capsys):
    code, _, err = run(["evolve", "--method", "II", "--U", "0,1"], capsys)
    assert code == 2
    assert "U > 0" in err


def test_missing_config_is_usage_error(capsys, tmp_path):
    code, _, err = run(["evolve", "--config", str(tmp_path / "nope.json")], capsys)
    assert code == 1
    assert "usage" in err


def test_bad_flag_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["evolve", "--method", "III"])
    assert exc.value.code == 1
    assert main([]) == 1


def test_config_file_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"method": "I", "U": "0,1", "noise": {"p1": 0.0}}))
    _, out, _ = run(["evolve", "--config", str(cfg)], capsys)
    header = json.loads(out.splitlines()[0][len("# config: "):])
    assert header["method"] == "I" and header["p1"] == 0.0
    assert len(rows(out)) == 2
    _, out, _ = run(["evolve", "--config", str(cfg), "--U", "2"], capsys)
    assert [r["U"] for r in rows(out)] == ["2.0"]


def test_output_reproducible_from_header(tmp_path, capsys):
    first = tmp_path / "a.csv"
    assert main(["renyi", "--method", "II", "--U", "1,3", "--p1", "0.009", "--p2", "0.015",
                 "--shots", "300", "--seed", "7", "--out", str(first)]) == 0
    header = json.loads(first.read_text().splitlines()[0][len("# config: "):])
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(header))
    second = tmp_path / "b.csv"
    assert main(["renyi", "--config", str(cfg), "--out", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_renyi_noiseless_matches_theory(capsys):
    code, out, _ = run(["renyi", "--method", "I", "--U", "0:6:1"], capsys)
    assert code == 0
    for r in rows(out):
        probs = renyi.exact_swap_test_probabilities(TrotterSchedule.method_i(float(r["U"])))
        expected = renyi.estimate_r2_from_distribution(probs).r2
        assert float(r["r2_raw"]) == pytest.approx(expected, abs=1e-10)


def test_renyi_json(capsys):
    code, out, _ = run(["renyi", "--U", "2", "--format", "json"], capsys)
    obj = json.loads(out)
    assert code == 0 and obj["config"]["method"] == "II"
    assert obj["rows"][0]["yield"] == pytest.approx(1.0)


def test_compile_cswap(capsys):
    code, out, _ = run(["compile", "cswap"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    summary = json.loads(lines[-1])["summary"]
    assert summary["entangling_count"] == 7 and summary["single_qubit_count"] == 14
    assert summary["residual"] < 1e-10
    assert len(lines) - 1 == 21


def test_compile_h_and_full_circuit(capsys):
    _, out, _ = run(["compile", "h"], capsys)
    assert json.loads(out.strip().splitlines()[-1])["summary"]["residual"] < 1e-12
    _, out, _ = run(["compile", "--method", "II", "--U", "5"], capsys)
    assert json.loads(out.strip().splitlines()[-1])["summary"]["entangling_count"] == 27


def test_compile_circuit_file_and_errors(capsys, tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"kind": "CNOT", "qubits": [0, 1]}\n{"kind": "H", "qubits": [1]}\n')
    code, out, _ = run(["compile", "--circuit", str(path)], capsys)
    assert code == 0
    assert json.loads(out.strip().splitlines()[-1])["summary"]["entangling_count"] == 1
    assert run(["compile", "toffoli"], capsys)[0] == 1
    assert run(["compile"], capsys)[0] == 1


def test_compile_reports_failed_verification(capsys, monkeypatch):
    import hubbard_renyi.cli as cli

    monkeypatch.setattr(cli.compiler, "phase_aligned_deviation", lambda u, v: 1e-3)
    code, _, err = run(["compile", "cswap"], capsys)
    assert code == 2 and "verification failed" in err


def test_truthtable(capsys):
    code, out, _ = run(["truthtable", "--format", "json"], capsys)
    obj = json.loads(out)
    assert code == 0
    assert obj["metrics"]["average_success"] == pytest.approx(1.0)


def test_scan_writes_fit(tmp_path, capsys):
    out = tmp_path / "scan.csv"
    code = main(["scan", "--param", "delta", "--metric", "depth", "--fixed", "10", "--out", str(out)])
    assert code == 0
    fit = json.loads((tmp_path / "scan.csv.fit.json").read_text())
    assert fit["slope"] == pytest.approx(-1.0, abs=0.05)
    assert rows(out.read_text())[0]["metric_name"] == "depth"


def test_analyze_discarded_record(tmp_path, capsys):
    path = tmp_path / "r.csv"
    path.write_text(ShotRecord(5, {"10000": 50}).to_csv())
    code, out, _ = run(["analyze", str(path)], capsys)
    rep = json.loads(out)["records"][0]
    assert code == 0
    assert rep["yield"] == 0.0 and rep["r2_defined"] is False and rep["r2_post"] is None


def test_analyze_with_identity_spam(tmp_path, capsys):
    rec = renyi.run_swap_test(TrotterSchedule.method_ii(2.0), shots=1000, seed=3)
    rpath = tmp_path / "r.json"
    rpath.write_text(rec.to_json())
    spath = tmp_path / "spam.json"
    spath.write_text(SpamModel.identity(5).to_json())
    _, out, _ = run(["analyze", str(rpath), "--spam", str(spath)], capsys)
    rep = json.loads(out)["records"][0]
    assert rep["r2_raw"] == pytest.approx(renyi.estimate_r2(rec).r2, abs=1e-12)
    bad = tmp_path / "spam3.json"
    bad.write_text(SpamModel.identity(3).to_json())
    assert run(["analyze", str(rpath), "--spam", str(bad)], capsys)[0] == 2


def test_analyze_energy(tmp_path, capsys):
    z = tmp_path / "z.csv"
    x = tmp_path / "x.csv"
    z.write_text(ShotRecord(2, {"00": 50, "11": 50}).to_csv())
    x.write_text(ShotRecord(2, {"00": 100}).to_csv())
    code, out, _ = run(["analyze", "--energy", str(z), str(x), "--U", "2"], capsys)
    assert code == 0
    assert json.loads(out)["energy"]["h"] == pytest.approx(-2.0 + 1.0)


def test_analyze_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("outcome,count\n10x01,4\n")
    assert run(["analyze", str(path)], capsys)[0] == 2
