"""Game specification f(x_1..x_n) = g(a_1..a_n) and game enumeration."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, FrozenSet, Iterator, Sequence, Tuple

from . import boolfn
from .boolfn import ANSWER_VARS, QUESTION_VARS, TruthTable
from .errors import ArityError, ExpressionSyntaxError

MIN_PLAYERS = 2


@dataclass(frozen=True, order=True)
class GameSpec:
    f: TruthTable
    g: TruthTable

    def __post_init__(self):
        if self.f.arity != self.g.arity:
            raise ArityError(
                f"question side has arity {self.f.arity}, answer side {self.g.arity}"
            )

    @property
    def n(self) -> int:
        return self.f.arity

    @property
    def search_eligible(self) -> bool:
        return boolfn.all_essential(self.f) and boolfn.all_essential(self.g)

    @property
    def game_id(self) -> str:
        return f"{self.n}:{self.f.bits}:{self.g.bits}"

    @property
    def f_expr(self) -> str:
        return boolfn.format_expr(self.f, QUESTION_VARS[: self.n])

    @property
    def g_expr(self) -> str:
        return boolfn.format_expr(self.g, ANSWER_VARS[: self.n])

    def __str__(self) -> str:
        return f"{self.f_expr} = {self.g_expr}"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "f_bits": self.f.bits,
            "g_bits": self.g.bits,
            "f_expr": self.f_expr,
            "g_expr": self.g_expr,
        }

    @classmethod
    def from_bits(cls, n: int, f_bits: int, g_bits: int) -> "GameSpec":
        return cls(TruthTable(n, f_bits), TruthTable(n, g_bits))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GameSpec":
        return cls.from_bits(int(data["n"]), int(data["f_bits"]), int(data["g_bits"]))


def parse_game(text: str, n: int | None = None) -> GameSpec:
    """Parse ``"<f over x,y,z,w> = <g over a,b,c,d>"``.

    Without ``n`` the player count is the larger of the two sides' inferred
    arities.
    """
    if text.count("=") != 1:
        raise ExpressionSyntaxError("a game needs exactly one '='", text.find("=") + 1)
    lhs, rhs = text.split("=")
    if n is None:
        n = max(
            len(boolfn.infer_variables(lhs, None)),
            len(boolfn.infer_variables(rhs, None)),
        )
    f = boolfn.parse_expr(lhs, variables=QUESTION_VARS[:n])
    g = boolfn.parse_expr(rhs, variables=ANSWER_VARS[:n])
    return GameSpec(f, g)


def win(game: GameSpec, questions: Sequence[int], answers: Sequence[int]) -> bool:
    if len(questions) != game.n or len(answers) != game.n:
        raise ArityError(
            f"{game.n}-player game needs {game.n} questions and answers, "
            f"got {len(questions)} and {len(answers)}"
        )
    return boolfn.evaluate(game.f, questions) == boolfn.evaluate(game.g, answers)


def win_matrix(game: GameSpec) -> list[list[bool]]:
    """``W[x][a]`` is True iff answer index ``a`` wins on question index ``x``."""
    size = 1 << game.n
    return [
        [game.f.value_at(x) == game.g.value_at(a) for a in range(size)]
        for x in range(size)
    ]


def _check_players(n: int) -> None:
    if not MIN_PLAYERS <= n <= boolfn.MAX_ARITY:
        raise ArityError(
            f"player count must be in [{MIN_PLAYERS}, {boolfn.MAX_ARITY}], got {n}"
        )


def count_games(n: int) -> int:
    _check_players(n)
    return len(boolfn.enumerate_essential(n)) ** 2


def enumerate_games(n: int) -> Iterator[GameSpec]:
    """All (f, g) pairs of essential functions, ascending (f.bits, g.bits)."""
    _check_players(n)
    funcs = boolfn.enumerate_essential(n)
    for f, g in product(funcs, funcs):
        yield GameSpec(f, g)


def negation_orbit(game: GameSpec) -> FrozenSet[GameSpec]:
    nf, ng = boolfn.negate(game.f), boolfn.negate(game.g)
    return frozenset(
        {GameSpec(game.f, game.g), GameSpec(nf, game.g), GameSpec(game.f, ng), GameSpec(nf, ng)}
    )


def is_parity_type(game: GameSpec) -> bool:
    """True when g is the n-bit XOR or its negation."""
    xor = boolfn.parity(game.n)
    return game.g in (xor, boolfn.negate(xor))


def orbit_representative(game: GameSpec) -> Tuple[GameSpec, bool]:
    """Smallest orbit member with the same quantum value, plus a flip flag.

    (f, g) and (!f, !g) share a win table. When g is parity-type the other
    pair is the same game with the first player's answer bit inverted; the
    flag is set when ``game`` belongs to that pair.
    """
    nf, ng = boolfn.negate(game.f), boolfn.negate(game.g)
    if is_parity_type(game):
        rep = min(negation_orbit(game))
        flip = (game.f != rep.f) != (game.g != rep.g)
        return rep, flip
    return min(game, GameSpec(nf, ng)), False
