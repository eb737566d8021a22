"""CHSH-like n-player games: classical brute force, quantum optimization, Bell operators."""

from .boolfn import TruthTable, format_expr, parse_expr
from .classical import DeterministicStrategy, best_classical, evaluate_classical
from .config import OptimizeConfig, RunConfig
from .errors import ChshGamesError
from .game import GameSpec, enumerate_games, parse_game
from .optimize import optimize_strategy
from .quantum import QuantumStrategy, StateVector, UnitaryParams, resource_state, win_probability

__version__ = "0.1.0"

__all__ = [
    "ChshGamesError",
    "DeterministicStrategy",
    "GameSpec",
    "OptimizeConfig",
    "QuantumStrategy",
    "RunConfig",
    "StateVector",
    "TruthTable",
    "UnitaryParams",
    "best_classical",
    "enumerate_games",
    "evaluate_classical",
    "format_expr",
    "optimize_strategy",
    "parse_expr",
    "parse_game",
    "resource_state",
    "win_probability",
]
