"""Deterministic classical strategies: exhaustive search and exact values.

A strategy is the list of per-player answer maps (h_i(0), h_i(1)). Its
integer code packs the 2n bits player by player, player 1 first, h_i(0)
before h_i(1), most significant bit first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

import numpy as np

from .boolfn import assignment_index, index_bits
from .errors import ArityError
from .game import GameSpec


@dataclass(frozen=True)
class DeterministicStrategy:
    n: int
    answers: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        if len(self.answers) != self.n:
            raise ArityError(f"{self.n} players need {self.n} answer maps")
        for pair in self.answers:
            if len(pair) != 2 or any(bit not in (0, 1) for bit in pair):
                raise ValueError(f"answer map must be two bits, got {pair!r}")

    @property
    def code(self) -> int:
        code = 0
        for h0, h1 in self.answers:
            code = (code << 2) | (h0 << 1) | h1
        return code

    @classmethod
    def from_code(cls, n: int, code: int) -> "DeterministicStrategy":
        if not 0 <= code < 1 << (2 * n):
            raise ArityError(f"strategy code {code} out of range for {n} players")
        answers = []
        for i in range(n):
            pair = (code >> (2 * (n - 1 - i))) & 0b11
            answers.append((pair >> 1, pair & 1))
        return cls(n, tuple(answers))

    def respond(self, questions: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(self.answers[i][q] for i, q in enumerate(questions))

    def __str__(self) -> str:
        return " ".join(f"h{i + 1}=({h0},{h1})" for i, (h0, h1) in enumerate(self.answers))


@lru_cache(maxsize=None)
def _answer_table(n: int) -> np.ndarray:
    """``T[s, x]`` = answer index produced by strategy code ``s`` on question ``x``."""
    table = np.zeros((1 << (2 * n), 1 << n), dtype=np.int64)
    for code in range(1 << (2 * n)):
        strategy = DeterministicStrategy.from_code(n, code)
        for x in range(1 << n):
            table[code, x] = assignment_index(strategy.respond(index_bits(x, n)))
    table.setflags(write=False)
    return table


def _win_counts(game: GameSpec) -> np.ndarray:
    n = game.n
    f_vals = np.array([game.f.value_at(x) for x in range(1 << n)])
    g_vals = np.array([game.g.value_at(a) for a in range(1 << n)])
    return (g_vals[_answer_table(n)] == f_vals[None, :]).sum(axis=1)


def evaluate_classical(game: GameSpec, s: DeterministicStrategy) -> Fraction:
    """Exact fraction of the 2^n questions the strategy wins."""
    if s.n != game.n:
        raise ArityError(f"strategy for {s.n} players used on a {game.n}-player game")
    wins = 0
    for x in range(1 << game.n):
        questions = index_bits(x, game.n)
        answers = s.respond(questions)
        if game.f.value_at(x) == game.g.value_at(assignment_index(answers)):
            wins += 1
    return Fraction(wins, 1 << game.n)


def best_classical(game: GameSpec) -> Tuple[Fraction, List[DeterministicStrategy]]:
    """Maximum over all 2^(2n) strategies, with every strategy attaining it."""
    counts = _win_counts(game)
    best = int(counts.max())
    witnesses = [
        DeterministicStrategy.from_code(game.n, int(code))
        for code in np.flatnonzero(counts == best)
    ]
    return Fraction(best, 1 << game.n), witnesses


def worst_classical(game: GameSpec) -> Fraction:
    return Fraction(int(_win_counts(game).min()), 1 << game.n)
