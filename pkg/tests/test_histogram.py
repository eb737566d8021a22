import pytest

from chsh_games import witnesses
from chsh_games.classical import DeterministicStrategy
from chsh_games.errors import ArityError
from chsh_games.game import parse_game
from chsh_games.histogram import classical_histogram, quantum_histogram, write_histogram
from chsh_games.quantum import QuantumStrategy, make_ghz, make_w


def test_classical_histogram():
    game = parse_game(witnesses.SECOND_TYPE_EXAMPLE)
    frame = classical_histogram(game)
    assert list(frame.columns) == ["question", "win_rate"]
    assert len(frame) == 9
    assert list(frame["question"][:8]) == ["000", "001", "010", "011", "100", "101", "110", "111"]
    assert set(frame["win_rate"][:8]) <= {0.0, 1.0}
    assert frame["question"].iloc[-1] == "average"
    assert frame["win_rate"].iloc[-1] == 0.75


def test_classical_histogram_arity_check(chsh):
    with pytest.raises(ArityError):
        classical_histogram(chsh, DeterministicStrategy.from_code(3, 0))


def test_quantum_histogram_ghz():
    game = parse_game(witnesses.SECOND_TYPE_EXAMPLE)
    strat = QuantumStrategy.from_angles(make_ghz(3), witnesses.TABLE2[1][1])
    frame = quantum_histogram(game, strat)
    rates = frame["win_rate"][:8]
    assert (rates > 0.75).all()
    assert abs(frame["win_rate"].iloc[-1] - witnesses.CHSH_VALUE) < 1e-9


def test_quantum_histogram_w():
    game = parse_game(witnesses.W_GAME, 3)
    strat = QuantumStrategy.from_angles(make_w(), witnesses.TABLE5_ANGLES)
    frame = quantum_histogram(game, strat)
    assert frame["win_rate"].iloc[-1] >= witnesses.W_VALUE - 1e-4


def test_write_histogram(tmp_path):
    game = parse_game(witnesses.SECOND_TYPE_EXAMPLE)
    out = write_histogram(classical_histogram(game), str(tmp_path / "hist" / "classical.csv"))
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "question,win_rate"
    assert lines[1].startswith("000,")
    assert lines[-1] == "average,0.75"
