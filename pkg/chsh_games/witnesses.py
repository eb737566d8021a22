"""Published games and strategy angles, and witness lookup for the search.

Angle lists use the optimizer's ordering (player by player, question 0
first). Expressions use the project grammar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import boolfn
from .game import GameSpec, negation_orbit, parse_game

PI = math.pi


def _repeat(triples: List[Tuple[float, float, float]], players: int) -> List[float]:
    return [v for _ in range(players) for t in triples for v in t]


# ──────────────────────────────────────────────────────────────────────────────
# Two players
# ──────────────────────────────────────────────────────────────────────────────

CHSH = "x*y = a^b"

# Alice measures Z / X, Bob (Z+X)/sqrt2 / (Z-X)/sqrt2.
CHSH_ANGLES = [0.0, 0.0, 0.0, PI / 2, 0.0, PI, -PI / 4, 0.0, 0.0, PI / 4, 0.0, 0.0]

TABLE1 = [
    "x*y = a^b",
    "x*y = !a^b",
    "x*!y = a^b",
    "x*!y = !a^b",
    "!x*y = a^b",
    "!x*y = !a^b",
    "!x*!y = a^b",
    "!x*!y = !a^b",
    "x + y = a^b",
    "x + y = !a^b",
    "x + !y = a^b",
    "x + !y = !a^b",
    "!x + y = a^b",
    "!x + y = !a^b",
    "!x + !y = a^b",
    "!x + !y = !a^b",
]

# ──────────────────────────────────────────────────────────────────────────────
# Three players, GHZ
# ──────────────────────────────────────────────────────────────────────────────

FIRST_TYPE_EXAMPLE = "x*y*z + !x*!y*!z = a^b^c"
SECOND_TYPE_EXAMPLE = "x*y + (x^y)*z = a^b^c"

TABLE2 = [
    (FIRST_TYPE_EXAMPLE, _repeat([(PI / 2, 0.0, PI / 12), (PI / 2, 0.0, 7 * PI / 12)], 3)),
    (SECOND_TYPE_EXAMPLE, _repeat([(PI / 2, 0.0, -PI / 4), (PI / 2, 0.0, -3 * PI / 4)], 3)),
]

TABLE3_SEEDS = [
    "x*y + (x^y)*z",
    "x*y + (x^y)*!z",
    "x*!y + (x^z)*y",
    "x*!y + (!x^z)*y",
    "!x*y + (y^z)*x",
    "!x*y + (!y^z)*x",
    "x*y + (x^z)*!y",
    "x*!y + (!x^y)*z",
    "!x*z + (y^z)*x",
    "!x*z + (!y^z)*x",
    "x*y + (y^z)*!x",
    "x*z + (y^z)*!x",
    "x*!z + (y^z)*!x",
    "x*!y + (y^z)*!x",
    "!x*y + (!x^y)*z",
    "!x*y + (x^z)*!y",
]

# X on question 0, Y on question 1, for the restricted-question GHZ game.
GHZ_GAME = "x*y*z = a^b^c"
GHZ_GAME_XY_ANGLES = _repeat([(PI / 2, 0.0, PI), (PI / 2, 0.0, PI / 2)], 3)

# ──────────────────────────────────────────────────────────────────────────────
# Three players, W
# ──────────────────────────────────────────────────────────────────────────────

W_GAME = "x*y*z + !x*!y*!z = !a*!b*c + !a*b*c + a*!b*!c + a*b*c"
W_VALUE = 0.78726
_W_LAM = (PI - 2) / 6
TABLE5_ANGLES = [
    2.3177324, 0.0, (-5 * PI - 2) / 6,
    2.3177324, 0.0, _W_LAM,
    0.8238602, 0.0, _W_LAM,
    -0.8238602, 0.0, _W_LAM,
    0.79655904, 0.0, _W_LAM,
    -0.79655904, 0.0, _W_LAM,
]  # fmt: skip


@dataclass(frozen=True)
class PublishedRow:
    equation: str
    classical: Fraction
    w_value: float
    ghz_value: float

    @property
    def game(self) -> GameSpec:
        return parse_game(self.equation, 3)


TABLE4 = [
    PublishedRow("y*z + x*!z = !a*b*c + a*!b*c + a*b*!c", Fraction(3, 4), 0.75442, 0.69887),
    PublishedRow("(x^y)*z + x*y = !a^b^c", Fraction(3, 4), 0.77216, 0.85355),
    PublishedRow("x*(y^z) = (a^b)*c", Fraction(3, 4), 0.77523, 0.80177),
    PublishedRow(
        "!x*y*z + x*!y*!z = !a*!b*!c + !a*b*c + a*!b*c + a*b*!c + a*b*c",
        Fraction(3, 4),
        0.77674,
        0.70266,
    ),
    PublishedRow("(x^y)*z + x*y = (a^b)*!c + a*c", Fraction(3, 4), 0.78726, 0.75),
    PublishedRow("!x*y*z + x*!y*!z = a*(b^c)", Fraction(3, 4), 0.79219, 0.80177),
    PublishedRow("!x*y*z + x*!y*!z = !a*b*c + a*!b*c + a*b*!c", Fraction(3, 4), 0.79665, 0.82766),
    PublishedRow("(x^y)*z + x*!z = a^b^c", Fraction(3, 4), 0.80046, 0.85355),
]

CHSH_VALUE = math.cos(PI / 8) ** 2

# ──────────────────────────────────────────────────────────────────────────────
# Generated families
# ──────────────────────────────────────────────────────────────────────────────


def table1_games() -> List[GameSpec]:
    return [parse_game(eq, 2) for eq in TABLE1]


def first_type_games() -> List[GameSpec]:
    """Monomial + complement monomial = parity, with either side negated (16)."""
    xor = boolfn.parity(3)
    games = set()
    for k in range(4):
        f = boolfn.TruthTable(3, (1 << k) | (1 << (7 - k)))
        games |= negation_orbit(GameSpec(f, xor))
    return sorted(games)


def second_type_games() -> List[GameSpec]:
    """Negation-orbit closure of the sixteen seed equations (64)."""
    xor = boolfn.parity(3)
    games = set()
    for seed in TABLE3_SEEDS:
        f = boolfn.parse_expr(seed, variables=boolfn.QUESTION_VARS[:3])
        games |= negation_orbit(GameSpec(f, xor))
    return sorted(games)


def max_gap_games() -> List[GameSpec]:
    return sorted(set(first_type_games()) | set(second_type_games()))


# ──────────────────────────────────────────────────────────────────────────────
# Witness lookup
# ──────────────────────────────────────────────────────────────────────────────

# lambda grid of the theta = pi/2, phi = 0 family, |lambda_0 - lambda_1| = pi/2
_LAMBDA_GRID = np.arange(24) * PI / 12


@lru_cache(maxsize=None)
def _grid_choices(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """All per-player (lambda_0, lambda_1) choices and their joint index grid."""
    pairs = np.array([(lam, lam + off) for lam in _LAMBDA_GRID for off in (PI / 2, -PI / 2)])
    combos = np.array(list(product(range(len(pairs)), repeat=n)))
    return pairs, combos


def xy_plane_witness(game: GameSpec) -> Optional[List[float]]:
    """Best grid strategy in the theta = pi/2, phi = 0 family on GHZ/EPR.

    Measuring u3(pi/2, 0, lam) reads the observable cos(a) X + sin(a) Y with
    a = pi - lam, and on the GHZ state the product of such observables has
    expectation cos(a_1 + ... + a_n). For a parity answer side this gives
    every per-question win probability in closed form, so the grid is
    scanned exactly without simulation. Returns None for non-parity g and
    for more than three players.
    """
    if game.n > 3:
        return None
    xor = boolfn.parity(game.n)
    if game.g == xor:
        flip = 0
    elif game.g == boolfn.negate(xor):
        flip = 1
    else:
        return None
    pairs, combos = _grid_choices(game.n)
    size = 1 << game.n
    alphas = PI - pairs  # (choices, 2)
    total = np.zeros((combos.shape[0], size))
    signs = np.empty(size)
    for x in range(size):
        bits = boolfn.index_bits(x, game.n)
        signs[x] = -1.0 if (game.f.value_at(x) ^ flip) else 1.0
        total[:, x] = sum(alphas[combos[:, i], b] for i, b in enumerate(bits))
    values = (0.5 + 0.5 * signs[None, :] * np.cos(total)).mean(axis=1)
    best = int(np.argmax(values))
    angles: List[float] = []
    for i in range(game.n):
        lam0, lam1 = pairs[combos[best, i]]
        angles += [PI / 2, 0.0, float(lam0), PI / 2, 0.0, float(lam1)]
    return angles


@lru_cache(maxsize=None)
def _published() -> Dict[Tuple[str, str], List[float]]:
    table: Dict[Tuple[str, str], List[float]] = {
        (parse_game(CHSH, 2).game_id, "epr"): CHSH_ANGLES,
        (parse_game(W_GAME, 3).game_id, "w"): TABLE5_ANGLES,
    }
    for eq, angles in TABLE2:
        table[(parse_game(eq, 3).game_id, "ghz")] = angles
    return table


def witness_for(game: GameSpec, resource: str) -> Optional[List[float]]:
    """Angles to inject as the first optimizer start, or None.

    Published angles win; otherwise GHZ/EPR games with a parity answer side
    get the best grid point of the xy-plane family.
    """
    published = _published().get((game.game_id, resource))
    if published is not None:
        return list(published)
    if resource in ("ghz", "epr"):
        return xy_plane_witness(game)
    return None
