import json
import subprocess
import sys

import pytest

from smdagg.cli import main


@pytest.fixture
def config(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"replicates": 4, "t_grid": [5, 25], "seed": 2}))
    return p


def test_run_to_stdout(config, capsys):
    assert main(["run", "--config", str(config)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "algorithm,t,mean_excess,stderr,bound,misclass"
    assert len(lines) == 3


def test_run_flags_override(config, tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert main(["run", "--config", str(config), "--algorithm", "eg", "--schedule", "fixed",
                 "--seed", "5", "--replicates", "3", "--out", str(out)]) == 0
    rows = out.read_text().splitlines()
    assert [r.split(",")[0] for r in rows[1:]] == ["eg-avg", "eg-avg", "eg-last", "eg-last"]


def test_run_byte_identical(config, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    main(["run", "--config", str(config), "--out", str(a)])
    main(["run", "--config", str(config), "--out", str(b), "--workers", "3"])
    assert a.read_bytes() == b.read_bytes()


def test_validation_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"replicates": -1}))
    assert main(["run", "--config", str(bad)]) == 2
    bad.write_text("[")
    assert main(["run", "--config", str(bad)]) == 2
    bad.write_text(json.dumps({"proxy": "l1"}))
    assert main(["run", "--config", str(bad)]) == 2
    assert "invalid input" in capsys.readouterr().err


def test_bad_flag_exits_two():
    with pytest.raises(SystemExit) as info:
        main(["run", "--algorithm", "adam"])
    assert info.value.code == 2


def test_missing_file_is_io_error(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.json")]) == 1


def test_numerical_exit_code(config, monkeypatch):
    from smdagg import NumericalError, harness

    def boom(*a, **k):
        raise NumericalError("synthetic")

    monkeypatch.setattr(harness, "run", boom)
    assert main(["run", "--config", str(config)]) == 3


def test_bound(capsys):
    assert main(["bound", "--t", "99", "--M", "16"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "t,bound"
    assert float(out[1].split(",")[1]) == pytest.approx(0.336385, abs=1e-6)
    assert main(["bound", "--t", "1000", "--schedule", "fixed"]) == 0
    assert float(capsys.readouterr().out.splitlines()[1].split(",")[1]) == \
        pytest.approx(0.0745, abs=1e-4)
    assert main(["bound", "--t", "10", "--proxy", "power"]) == 0
    assert main(["bound", "--t", "10", "--M", "1"]) == 2


def test_bound_from_config(tmp_path, capsys):
    p = tmp_path / "r.json"
    p.write_text(json.dumps({"distribution": {"type": "benchmark-regression"},
                             "response_bound": 1.0}))
    assert main(["bound", "--config", str(p), "--t", "1000"]) == 0
    assert float(capsys.readouterr().out.splitlines()[1].split(",")[1]) == \
        pytest.approx(0.421454, abs=1e-6)


def test_check(capsys):
    assert main(["check", "--seed", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines and all(l.startswith("PASS") for l in lines)


def test_minimize_dataset(tmp_path, capsys):
    data = tmp_path / "d.csv"
    data.write_text("1,0.9,0.1\n-1,0.1,0.9\n1,0.7,0.3\n-1,0.3,0.5\n")
    assert main(["minimize", "--data", str(data)]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["value"] == pytest.approx(0.0, abs=1e-9)
    assert len(res["theta"]) == 16
    data.write_text("1,0.9\n2,0.1\n")
    assert main(["minimize", "--data", str(data)]) == 2
    data.write_text("1,0.9\n1,x\n")
    assert main(["minimize", "--data", str(data)]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "smdagg", "bound", "--t", "10"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("t,bound")
