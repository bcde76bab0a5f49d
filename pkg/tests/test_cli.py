import json

import pytest

from multilevel_lp import example_path
from multilevel_lp.cli import main

EXAMPLE = str(example_path())


def write(tmp_path, document):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(document))
    return str(path)


def test_solve_table(capsys):
    assert main(["solve", EXAMPLE]) == 0
    out = capsys.readouterr().out
    assert "l(3) = (0.250000, 0.000000, 0.250000, 0.000000)" in out


def test_solve_json_exact(capsys):
    assert main(["solve", EXAMPLE, "--format", "json", "--exact"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["iterations"][1]["lower"] == ["1/4", 0, "1/4", 0]
    assert doc["compromise"]["objectives"][2] == 6


def test_solve_level(capsys):
    assert main(["solve-level", EXAMPLE, "--p", "2", "--format", "json", "--exact"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["x"] == [2, 0, 0, 0] and doc["value"] == 12


def test_oracle(capsys):
    assert main(["oracle", EXAMPLE, "--p", "3", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["levels"][0]["vertices"]) == 2


def test_verify_file(capsys):
    assert main(["verify", EXAMPLE]) == 0
    assert "MISMATCH" not in capsys.readouterr().out


def test_verify_random(capsys):
    assert main(["verify", "--random", "20", "--seed", "4", "--epsilon", "0.1"]) == 0
    assert "20/20" in capsys.readouterr().out


def test_epsilon_and_alpha_overrides(capsys):
    assert main(["solve", EXAMPLE, "--alpha", "1,1,0.5", "--epsilon", "0.5"]) == 0
    assert "l(2) = (0.500000" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["solve", EXAMPLE, "--alpha", "1,1,2"],
    ["solve", EXAMPLE, "--alpha", "4,1,0.1"],
    ["solve", EXAMPLE, "--epsilon", "-1"],
    ["solve-level", EXAMPLE, "--p", "7"],
    ["solve", "/nonexistent.json"],
    ["verify"],
])
def test_input_errors(argv, capsys):
    assert main(argv) == 2
    assert "error: E10" in capsys.readouterr().err


def test_infeasible_exit_code(tmp_path, capsys):
    path = write(tmp_path, {"levels": [1, 1], "objectives": [[1, 0], [0, 1]], "A": [[1, 1]], "b": [-1]})
    assert main(["solve", path]) == 1
    assert main(["solve-level", path, "--p", "1"]) == 1
    assert main(["oracle", path]) == 1


def test_unbounded_exit_code(tmp_path):
    path = write(tmp_path, {"levels": [1, 1], "objectives": [[1, 0], [0, 1]], "A": [[1, -1]], "b": [1]})
    assert main(["solve", path]) == 1


def test_argparse_rejects_bad_alpha():
    with pytest.raises(SystemExit) as info:
        main(["solve", EXAMPLE, "--alpha", "1,1"])
    assert info.value.code == 2


def test_mismatch_exit_code(monkeypatch, capsys):
    from multilevel_lp import cli
    from multilevel_lp.oracle import oracle_solve

    def wrong(std):
        res = oracle_solve(std)
        res.value = res.value + 1
        return res

    monkeypatch.setattr(cli, "oracle_solve", wrong)
    assert main(["verify", EXAMPLE]) == 3
    assert "MISMATCH" in capsys.readouterr().out


def test_module_entry_point():
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "multilevel_lp", "solve-level", EXAMPLE, "--p", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "f1 = 6.000000" in proc.stdout
