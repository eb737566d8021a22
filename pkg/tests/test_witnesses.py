from fractions import Fraction

import numpy as np

from chsh_games import boolfn, witnesses
from chsh_games.classical import best_classical
from chsh_games.game import negation_orbit, parse_game
from chsh_games.quantum import QuantumStrategy, make_ghz, make_w, win_probability


def test_table1_members():
    games = witnesses.table1_games()
    assert len(set(games)) == 16
    for game in games:
        assert game.search_eligible
        assert best_classical(game)[0] == Fraction(3, 4)


def test_family_sizes_and_overlap():
    first, second = witnesses.first_type_games(), witnesses.second_type_games()
    assert len(first) == 16
    assert len(second) == 64
    assert not set(first) & set(second)
    assert len(witnesses.max_gap_games()) == 80


def test_families_are_negation_closed():
    games = set(witnesses.max_gap_games())
    for game in games:
        assert negation_orbit(game) <= games


def test_families_are_max_gap_classically():
    for game in witnesses.max_gap_games():
        assert game.search_eligible
        assert best_classical(game)[0] == Fraction(3, 4)


def test_examples_belong_to_their_family():
    assert parse_game(witnesses.FIRST_TYPE_EXAMPLE) in witnesses.first_type_games()
    assert parse_game(witnesses.SECOND_TYPE_EXAMPLE) in witnesses.second_type_games()


def test_table5_witness_on_w_game():
    game = parse_game(witnesses.W_GAME, 3)
    value = win_probability(game, QuantumStrategy.from_angles(make_w(), witnesses.TABLE5_ANGLES))
    assert value >= witnesses.W_VALUE - 1e-4
    assert best_classical(game)[0] == Fraction(3, 4)


def test_table5_angles_do_not_fit_the_table4_row():
    row = witnesses.TABLE4[4]
    value = win_probability(row.game, QuantumStrategy.from_angles(make_w(), witnesses.TABLE5_ANGLES))
    assert abs(value - 0.5) < 1e-6


def test_grid_witness_first_type():
    ghz = make_ghz(3)
    for game in witnesses.first_type_games():
        angles = witnesses.xy_plane_witness(game)
        assert len(angles) == 18
        value = win_probability(game, QuantumStrategy.from_angles(ghz, angles))
        assert abs(value - witnesses.CHSH_VALUE) < 1e-9


def test_grid_witness_table1(epr):
    for game in witnesses.table1_games():
        angles = witnesses.xy_plane_witness(game)
        value = win_probability(game, QuantumStrategy.from_angles(epr, angles))
        assert abs(value - witnesses.CHSH_VALUE) < 1e-9


def test_grid_witness_needs_parity():
    assert witnesses.xy_plane_witness(parse_game("x*y*z = a*b*c")) is None


def test_witness_lookup(chsh):
    assert witnesses.witness_for(chsh, "epr") == witnesses.CHSH_ANGLES
    w_game = parse_game(witnesses.W_GAME, 3)
    assert witnesses.witness_for(w_game, "w") == witnesses.TABLE5_ANGLES
    assert witnesses.witness_for(w_game, "ghz") is None
    second = parse_game(witnesses.SECOND_TYPE_EXAMPLE)
    assert np.allclose(witnesses.witness_for(second, "ghz"), witnesses.TABLE2[1][1])
    assert witnesses.witness_for(second, "w") is None


def test_published_rows_parse():
    for row in witnesses.TABLE4:
        game = row.game
        assert game.n == 3
        assert boolfn.all_essential(game.f)
