import json
import math

import pytest

from chsh_games import witnesses
from chsh_games.cli import EXIT_OK, EXIT_USAGE, main, read_angles
from chsh_games.circuits import parse_qasm

BUDGET = ["--restarts", "3", "--max-evals", "400", "--screen-samples", "20"]


def test_classical(capsys):
    assert main(["classical", "x*y = a^b"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "3/4" in out
    assert "8 optimal strategies" in out


def test_bad_expression_is_a_usage_error(capsys):
    assert main(["classical", "x*q = a^b"]) == EXIT_USAGE
    assert "error:" in capsys.readouterr().err


def test_verify(capsys):
    assert main(["verify", "counts", "bell", "t1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "== counts" in out
    assert "all checks passed" in out


def test_verify_unknown_table():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "table9"])
    assert exc.value.code == 2


def test_optimize_writes_json(tmp_path, capsys):
    out = tmp_path / "chsh.json"
    argv = ["optimize", "x*y = a^b", "--resource", "epr", "--out", str(out)] + BUDGET
    assert main(argv) == EXIT_OK
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["resource"] == "epr"
    assert len(payload["angles"]) == 12
    assert abs(payload["value"] - math.cos(math.pi / 8) ** 2) < 1e-9
    assert "best quantum value: 0.853553" in capsys.readouterr().out


def test_optimize_needs_one_resource(capsys):
    argv = ["optimize", "x*y*z = a^b^c", "--resource", "ghz,w"] + BUDGET
    assert main(argv) == EXIT_USAGE


def test_histogram_classical(tmp_path):
    out = tmp_path / "hist.csv"
    assert main(["histogram", witnesses.SECOND_TYPE_EXAMPLE, "--classical", "--out", str(out)]) == EXIT_OK
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "question,win_rate"
    assert lines[-1] == "average,0.75"


def test_histogram_with_angles(tmp_path, capsys):
    angles = tmp_path / "angles.json"
    angles.write_text(json.dumps({"angles": witnesses.TABLE2[1][1]}), encoding="utf-8")
    argv = ["histogram", witnesses.SECOND_TYPE_EXAMPLE, "--resource", "ghz", "--angles", str(angles)]
    assert main(argv) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "question,win_rate"
    assert out[-1].startswith("average,0.85355")


def test_export_qasm(tmp_path):
    angles = tmp_path / "angles.txt"
    angles.write_text(" ".join(repr(a) for a in witnesses.TABLE5_ANGLES), encoding="utf-8")
    out = tmp_path / "w_111.qasm"
    argv = [
        "export-qasm", witnesses.W_GAME, "--arity", "3", "--resource", "w",
        "--question", "111", "--angles", str(angles), "--out", str(out),
    ]  # fmt: skip
    assert main(argv) == EXIT_OK
    n, gates = parse_qasm(out.read_text(encoding="utf-8"))
    assert n == 3
    assert sum(1 for g in gates if g.name == "u3") == 3


@pytest.mark.parametrize("question", ["1", "111", "1a"])
def test_export_qasm_rejects_bad_questions(question):
    argv = ["export-qasm", witnesses.CHSH, "--resource", "epr", "--question", question] + BUDGET
    assert main(argv) == EXIT_USAGE


def test_bell_operators(capsys):
    assert main(["bell", "m3"]) == EXIT_OK
    assert "expectation: 4.0000000000" in capsys.readouterr().out
    assert main(["bell", "t1"]) == EXIT_OK
    assert f"expectation: {4 * math.sqrt(2):.10f}" in capsys.readouterr().out


def test_search_small_campaign(tmp_path, capsys):
    sink = tmp_path / "n2.jsonl"
    argv = ["search", "--arity", "2", "--resource", "epr", "--out", str(sink), "-q"] + BUDGET
    assert main(argv) == EXIT_OK
    assert len(sink.read_text(encoding="utf-8").splitlines()) == 100
    out = capsys.readouterr().out
    assert "100 new record(s)" in out
    assert "max-gap: 16" in out


def test_invalid_config_file(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("restarts=0\n", encoding="utf-8")
    assert main(["classical", "x*y = a^b", "--config", str(cfg)]) == EXIT_USAGE


def test_read_angles_formats(tmp_path):
    plain = tmp_path / "plain.txt"
    plain.write_text("0.1, 0.2\n0.3", encoding="utf-8")
    assert read_angles(str(plain)) == [0.1, 0.2, 0.3]
    listed = tmp_path / "list.json"
    listed.write_text("[1, 2]", encoding="utf-8")
    assert read_angles(str(listed)) == [1.0, 2.0]


def test_optimize_with_flag_spelled_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "resource=epr\nno-polish=true\nrestarts=3\nmax-evals=400\nscreen-samples=20\n",
        encoding="utf-8",
    )
    assert main(["optimize", "x*y = a^b", "--config", str(cfg)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "resource: epr" in out
    assert "best quantum value: 0.8535" in out
