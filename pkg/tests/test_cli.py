import json

import pytest

from qudstab.cli import main

CIRCUIT = "dim 4\nqudits 2\nF 0\nCX 0 1\nCX 0 1\nmeasure z 1 -> m\n"


@pytest.fixture
def circuit_file(tmp_path):
    path = tmp_path / "c.qst"
    path.write_text(CIRCUIT)
    return str(path)


def test_run_enumerate(circuit_file, capsys):
    assert main(["run", circuit_file]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["dim"] == 4
    assert [t["outcomes"]["m"] for t in out["trajectories"]] == [0, 2]


def test_run_json_output(circuit_file, tmp_path, capsys):
    dest = tmp_path / "out.json"
    assert main(["run", circuit_file, "--json", str(dest)]) == 0
    printed = json.loads(capsys.readouterr().out)
    assert json.loads(dest.read_text()) == printed


def test_run_sample_seeded(circuit_file, capsys):
    assert main(["run", circuit_file, "--mode", "sample", "--shots", "5",
                 "--seed", "9"]) == 0
    a = capsys.readouterr().out
    assert main(["run", circuit_file, "--mode", "sample", "--shots", "5",
                 "--seed", "9"]) == 0
    assert capsys.readouterr().out == a


def test_run_oracle_flag(circuit_file, capsys):
    assert main(["run", circuit_file, "--oracle"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert all(t["oracle_overlap"] > 1 - 1e-9 for t in out["trajectories"])


def test_exit_code_diagnostics(tmp_path, capsys):
    bad = tmp_path / "bad.qst"
    bad.write_text("dim 4\nqudits 1\nNOPE\n")
    assert main(["run", str(bad)]) == 1
    assert "syntax" in capsys.readouterr().err


def test_exit_code_missing_file(capsys):
    assert main(["run", "/nonexistent/file.qst"]) == 1


def test_exit_code_unsupported_outcome(circuit_file, capsys):
    assert main(["run", circuit_file, "--mode", "fixed", "--fix", "m=1"]) == 2


def test_exit_code_resource_cap(tmp_path, capsys):
    src = "dim 2\nqudits 1\n" + "".join(
        f"F 0\nmeasure z 0 -> m{i}\n" for i in range(8)
    )
    path = tmp_path / "big.qst"
    path.write_text(src)
    assert main(["run", str(path), "--branch-cap", "8"]) == 3


def test_bad_fix_string(circuit_file, capsys):
    assert main(["run", circuit_file, "--fix", "garbage"]) == 1
