"""Exact per-question win rates, tabulated for CSV export."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import pandas as pd

from . import boolfn
from .classical import DeterministicStrategy, best_classical
from .errors import ArityError
from .game import GameSpec
from .quantum import QuantumStrategy, per_question_win

COLUMNS = ["question", "win_rate"]


def _frame(game: GameSpec, rates) -> pd.DataFrame:
    rows = [
        {"question": "".join(map(str, boolfn.index_bits(x, game.n))), "win_rate": float(r)}
        for x, r in enumerate(rates)
    ]
    rows.append({"question": "average", "win_rate": float(sum(rates)) / len(rates)})
    return pd.DataFrame(rows, columns=COLUMNS)


def quantum_histogram(game: GameSpec, strat: QuantumStrategy) -> pd.DataFrame:
    return _frame(game, list(per_question_win(game, strat)))


def classical_histogram(
    game: GameSpec, strategy: Optional[DeterministicStrategy] = None
) -> pd.DataFrame:
    """Win rates (0 or 1) of a deterministic strategy; the first optimal one by default."""
    if strategy is None:
        _, witnesses = best_classical(game)
        strategy = witnesses[0]
    if strategy.n != game.n:
        raise ArityError(f"strategy for {strategy.n} players used on a {game.n}-player game")
    rates = []
    for x in range(1 << game.n):
        answers = strategy.respond(boolfn.index_bits(x, game.n))
        rates.append(1.0 if game.g.value_at(boolfn.assignment_index(answers)) == game.f.value_at(x) else 0.0)
    return _frame(game, rates)


def write_histogram(frame: pd.DataFrame, path: str) -> Path:
    out = Path(path)
    if out.parent and not out.parent.exists():
        out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False)
    return out
