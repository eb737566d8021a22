from itertools import product

import pytest

from chsh_games import boolfn, witnesses
from chsh_games.errors import ArityError, ExpressionSyntaxError
from chsh_games.game import (
    GameSpec,
    count_games,
    enumerate_games,
    is_parity_type,
    negation_orbit,
    orbit_representative,
    parse_game,
    win,
    win_matrix,
)


def test_chsh_win_examples(chsh):
    assert win(chsh, (1, 1), (0, 1))
    assert not win(chsh, (1, 1), (0, 0))
    assert win(chsh, (0, 1), (1, 1))


def test_ghz_game_win_example():
    game = parse_game(witnesses.FIRST_TYPE_EXAMPLE)
    assert game.n == 3
    # f(0,0,0) = 1 needs odd answer parity
    assert win(game, (0, 0, 0), (1, 0, 0))
    assert not win(game, (0, 0, 0), (1, 1, 0))


def test_win_rejects_wrong_lengths(chsh):
    with pytest.raises(ArityError):
        win(chsh, (1, 1, 0), (0, 1))


def test_win_matrix_matches_win(chsh):
    matrix = win_matrix(chsh)
    for x, a in product(range(4), range(4)):
        assert matrix[x][a] == win(chsh, boolfn.index_bits(x, 2), boolfn.index_bits(a, 2))


def test_mismatched_arity():
    with pytest.raises(ArityError):
        GameSpec(boolfn.parity(2), boolfn.parity(3))


def test_parse_game_requires_one_equals():
    with pytest.raises(ExpressionSyntaxError):
        parse_game("x*y")
    with pytest.raises(ExpressionSyntaxError):
        parse_game("x = y = a")


def test_parse_game_uses_larger_side():
    game = parse_game("x*y*z = a^b")
    assert game.n == 3
    assert not game.search_eligible


def test_game_counts():
    games = list(enumerate_games(2))
    assert len(games) == 100
    assert len(set(games)) == 100
    assert count_games(2) == 100
    assert count_games(3) == 47524


def test_enumeration_order():
    games = list(enumerate_games(2))
    keys = [(g.f.bits, g.g.bits) for g in games]
    assert keys == sorted(keys)
    first = next(enumerate_games(3))
    smallest = boolfn.enumerate_essential(3)[0]
    assert first.f == smallest and first.g == smallest


@pytest.mark.parametrize("n", [1, 5])
def test_enumeration_rejects_player_counts(n):
    with pytest.raises(ArityError):
        list(enumerate_games(n))


def test_negation_orbit(chsh):
    orbit = negation_orbit(chsh)
    assert len(orbit) == 4
    assert parse_game("x*y = !a^b") in orbit
    for member in orbit:
        assert negation_orbit(member) == orbit


def test_table1_is_four_orbits():
    games = witnesses.table1_games()
    orbits = {negation_orbit(g) for g in games}
    assert len(orbits) == 4
    assert set().union(*orbits) == set(games)


def test_double_negation_keeps_every_outcome():
    for game in list(enumerate_games(2))[::7]:
        flipped = GameSpec(boolfn.negate(game.f), boolfn.negate(game.g))
        for x, a in product(product((0, 1), repeat=2), repeat=2):
            assert win(game, x, a) == win(flipped, x, a)


def test_dict_round_trip():
    game = parse_game(witnesses.SECOND_TYPE_EXAMPLE)
    assert GameSpec.from_dict(game.to_dict()) == game
    assert game.game_id == f"3:{game.f.bits}:{game.g.bits}"


def test_str_is_parseable():
    game = parse_game(witnesses.W_GAME)
    assert parse_game(str(game), 3) == game


def test_parity_type(chsh):
    assert is_parity_type(chsh)
    assert is_parity_type(parse_game("x*y = !a^b"))
    assert not is_parity_type(parse_game("x*y = a*b"))


def test_orbit_representative_on_parity_games():
    game = parse_game("(x^y)*z + x*!z = a^b^c")
    orbit = negation_orbit(game)
    reps = {member: orbit_representative(member) for member in orbit}
    assert {rep for rep, _ in reps.values()} == {min(orbit)}
    flips = [flip for _, flip in reps.values()]
    assert flips.count(True) == 2
    rep = min(orbit)
    assert reps[rep] == (rep, False)
    assert reps[GameSpec(boolfn.negate(rep.f), boolfn.negate(rep.g))][1] is False


def test_orbit_representative_without_parity():
    game = parse_game("x*y = a*b")
    twin = GameSpec(boolfn.negate(game.f), boolfn.negate(game.g))
    assert orbit_representative(game) == orbit_representative(twin)
    assert orbit_representative(game)[1] is False
    other = GameSpec(game.f, boolfn.negate(game.g))
    assert orbit_representative(other)[0] not in (game, twin)
