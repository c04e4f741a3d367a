import json

import pytest

from defectus.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_bounds_subcommand(capsys):
    code, out, err = _run(capsys, "bounds", "--r", "3", "--s", "2",
                          "--d", "2,2", "--q", "101")
    assert code == 0 and not err
    blob = json.loads(out)
    assert blob["prob_B1"] == {"num": 32768, "den": 1030301,
                               "decimal": "3.18043e-02"}
    assert blob["C1"] == [12, 12]


def test_bounds_out_file(tmp_path, capsys):
    target = tmp_path / "bounds.json"
    code, out, _ = _run(capsys, "bounds", "--r", "3", "--s", "2",
                        "--d", "2,2", "--q", "7", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["delta"] == 4


def test_classify_subcommand(tmp_path, capsys):
    system = {
        "polys": [
            {"nvars": 3, "terms": [{"exp": [1, 0, 0], "c": 1}]},
            {"nvars": 3, "terms": [{"exp": [0, 1, 0], "c": 1}]},
        ],
    }
    path = tmp_path / "sys.json"
    path.write_text(json.dumps(system))
    code, out, _ = _run(capsys, "classify", "--q", "7", "--r", "3",
                        "--s", "2", "--d", "1,1", "--system", str(path))
    assert code == 0
    blob = json.loads(out)
    assert blob["ideal_theoretic_ci"] is True
    assert blob["irreducibility"] == "CertifiedIrreducible"


def test_classify_flag_mismatch(tmp_path, capsys):
    path = tmp_path / "sys.json"
    path.write_text(json.dumps({
        "r": 4,
        "polys": [
            {"nvars": 3, "terms": []},
            {"nvars": 3, "terms": []},
        ],
    }))
    code, _, err = _run(capsys, "classify", "--q", "7", "--r", "3",
                        "--s", "2", "--d", "1,1", "--system", str(path))
    assert code == 2
    assert err.startswith("error:") and err.count("\n") == 1


def test_classify_malformed_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    code, _, err = _run(capsys, "classify", "--q", "7", "--r", "3",
                        "--s", "2", "--d", "1,1", "--system", str(path))
    assert code == 2 and err.startswith("error:")


def test_unknown_flag_is_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["bounds", "--r", "3", "--s", "2", "--d", "2,2", "--q", "7",
              "--frobnicate"])
    assert exc.value.code == 2
    err = capsys.readouterr().err
    assert err.startswith("error:") and err.count("\n") == 1


def test_bad_q_diagnostic(capsys):
    code, _, err = _run(capsys, "bounds", "--r", "3", "--s", "2",
                        "--d", "2,2", "--q", "6")
    assert code == 2 and err.startswith("error:")


def test_k_flag_validation(capsys):
    code, _, err = _run(capsys, "census", "--q", "4", "--r", "3", "--s", "2",
                        "--d", "1,1", "--k", "3", "--threads", "1")
    assert code == 2 and "inconsistent" in err


def test_census_subcommand(tmp_path, capsys):
    csv_path = tmp_path / "dump.csv"
    code, out, _ = _run(capsys, "census", "--q", "2", "--r", "3", "--s", "2",
                        "--d", "1,1", "--threads", "2", "--no-meta",
                        "--dump-csv", str(csv_path))
    assert code == 0
    blob = json.loads(out)
    assert blob["counts"]["in_B1"] == 88
    assert "meta" not in blob
    lines = csv_path.read_text().strip().splitlines()
    assert len(lines) == 257  # header plus one row per system
    assert lines[0].startswith("index,")


def test_census_budget_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("DEFECTUS_BUDGET", "100")
    code, _, err = _run(capsys, "census", "--q", "2", "--r", "3", "--s", "2",
                        "--d", "1,1", "--threads", "1")
    assert code == 3
    assert err.startswith("budget:") and err.count("\n") == 1


def test_sample_threads_byte_stability(capsys):
    args = ["sample", "--q", "7", "--r", "3", "--s", "2", "--d", "2,2",
            "--n", "40", "--seed", "9", "--no-meta"]
    code1, out1, _ = _run(capsys, *args, "--threads", "1")
    code2, out2, _ = _run(capsys, *args, "--threads", "2")
    assert code1 == code2 == 0
    assert out1 == out2


def test_sample_vacuous_run(capsys):
    code, out, _ = _run(capsys, "sample", "--q", "2", "--r", "3", "--s", "2",
                        "--d", "2,2", "--n", "25", "--seed", "0",
                        "--threads", "2", "--no-meta")
    assert code == 0
    blob = json.loads(out)
    assert blob["verdict_B1"] == "VACUOUS_PASS"
    assert blob["verdict_B2"] == "VACUOUS_PASS"
    assert blob["bounds"]["vacuous_B1"] is True


def test_selftest(capsys):
    code, out, _ = _run(capsys, "selftest", "--threads", "2")
    assert code == 0
    assert all(line.startswith("ok - ")
               for line in out.strip().splitlines())
