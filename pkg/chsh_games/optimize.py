"""Multistart maximization of the quantum win probability over 6n angles.

Angle vectors are ordered player by player, question 0 before question 1,
and (theta, phi, lambda) inside each triple, matching
``QuantumStrategy.from_angles``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy import optimize as sopt

from .config import OptimizeConfig
from .errors import ArityError
from .game import GameSpec
from .quantum import StateVector, WinEvaluator

logger = logging.getLogger(__name__)

# Structured starts: theta = pi/2, phi = 0 for every unitary, lambda_{i,1} = lambda_{i,0} + offset.
STRUCTURED_LAMBDAS = ((-math.pi / 4, -math.pi / 2), (math.pi / 12, math.pi / 2))
DEFAULT_FD_STEP = 1e-5


def check_angles(n: int, angles: Sequence[float]) -> np.ndarray:
    """Validate an angle vector for ``n`` players and return it as a float array."""
    vec = np.asarray(angles, dtype=float).reshape(-1)
    if vec.size != 6 * n:
        raise ArityError(f"{n} players need {6 * n} angles, got {vec.size}")
    if not np.all(np.isfinite(vec)):
        raise ValueError("angle vector contains non-finite values")
    return vec


def wrap_angles(angles: np.ndarray) -> np.ndarray:
    """Map every angle into [-pi, pi); probabilities are 2pi-periodic in each."""
    return np.mod(np.asarray(angles, dtype=float) + math.pi, 2 * math.pi) - math.pi


def invert_first_player(angles: Sequence[float]) -> np.ndarray:
    """Angles whose first player reports the opposite bit on both questions.

    theta + pi swaps the two measurement outcomes up to phases.
    """
    out = np.array(angles, dtype=float).reshape(-1, 3)
    out[:2, 0] += math.pi
    return wrap_angles(out.reshape(-1))


def structured_start(n: int, lam0: float, offset: float) -> np.ndarray:
    triples = []
    for _ in range(n):
        triples.append((math.pi / 2, 0.0, lam0))
        triples.append((math.pi / 2, 0.0, lam0 + offset))
    return np.array(triples, dtype=float).reshape(-1)


def objective(game: GameSpec, resource: StateVector, angles: Sequence[float]) -> float:
    """1 - win probability of the strategy given by ``angles`` on ``resource``."""
    vec = check_angles(game.n, angles)
    return 1.0 - WinEvaluator(game, resource)(vec)


def _central_diff(fun: Callable[[np.ndarray], float], x: np.ndarray, step: float) -> np.ndarray:
    grad = np.empty_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = step
        grad[k] = (fun(x + e) - fun(x - e)) / (2 * step)
    return grad


def finite_diff_gradient(
    game: GameSpec,
    resource: StateVector,
    angles: Sequence[float],
    step: float = DEFAULT_FD_STEP,
) -> np.ndarray:
    """Central-difference gradient of ``objective``."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    vec = check_angles(game.n, angles)
    evaluator = WinEvaluator(game, resource)
    return _central_diff(lambda x: 1.0 - evaluator(x), vec, step)


@dataclass
class RestartResult:
    index: int
    source: str
    start_value: float
    value: float
    evals: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "source": self.source,
            "start_value": self.start_value,
            "value": self.value,
            "evals": self.evals,
            "converged": self.converged,
        }


@dataclass
class OptimizeResult:
    best_value: float
    best_angles: np.ndarray
    trace: List[RestartResult] = field(default_factory=list)

    @property
    def best_restart(self) -> Optional[RestartResult]:
        for r in self.trace:
            if r.value == self.best_value:
                return r
        return None


def screening_pool(seed: int, size: int, dim: int) -> np.ndarray:
    """Uniform angle samples in [-pi, pi) screened for random starts."""
    rng = np.random.default_rng([seed, 0x5C])
    return rng.uniform(-math.pi, math.pi, size=(size, dim))


def _random_starts(
    evaluator: WinEvaluator, dim: int, count: int, config: OptimizeConfig
) -> List[np.ndarray]:
    """Best ``count`` of the uniform screening draws, best first.

    Without screening, restart ``k`` draws from its own (seed, k) stream.
    """
    if count <= 0:
        return []
    if config.screen_samples == 0:
        return [
            np.random.default_rng([config.seed, k]).uniform(-math.pi, math.pi, dim)
            for k in range(count)
        ]
    pool = screening_pool(config.seed, max(config.screen_samples, count), dim)
    values = np.array([evaluator(x) for x in pool])
    order = np.argsort(-values, kind="stable")[:count]
    return [pool[k] for k in order]


def _local_search(
    fun: Callable[[np.ndarray], float],
    jac: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    config: OptimizeConfig,
):
    dim = x0.size
    if config.method == "bfgs":
        return sopt.minimize(
            fun,
            x0,
            method="BFGS",
            jac=jac,
            options={"maxiter": max(1, config.max_evals // (2 * dim + 1)), "gtol": 1e-9},
        )
    if config.method == "cobyla":
        return sopt.minimize(
            fun, x0, method="COBYLA", tol=config.tolerance, options={"maxiter": config.max_evals}
        )
    return sopt.minimize(
        fun,
        x0,
        method="Nelder-Mead",
        options={
            "maxfev": config.max_evals,
            "xatol": 1e-8,
            "fatol": config.tolerance,
            "adaptive": True,
        },
    )


def optimize_strategy(
    game: GameSpec,
    resource: StateVector,
    config: Optional[OptimizeConfig] = None,
    witnesses: Optional[Sequence[Sequence[float]]] = None,
) -> OptimizeResult:
    """Maximize the win probability of ``game`` on the fixed ``resource``.

    Starts are, in order: injected witnesses, up to two structured starts
    (theta = pi/2, phi = 0, lambda grid) and the best screened uniform
    draws, ``config.restarts`` starts in total plus any witnesses. Each start
    gets a local search and, with ``config.polish``, a BFGS polish using the
    finite-difference gradient. A restart never reports a value below its
    start point.

    Returns:
        OptimizeResult: best value, its angles (wrapped into [-pi, pi)) and
        one RestartResult per start. Non-convergence is recorded in the
        trace, never raised.
    """
    config = config or OptimizeConfig()
    evaluator = WinEvaluator(game, resource)
    dim = 6 * game.n

    def fun(x: np.ndarray) -> float:
        return 1.0 - evaluator(x)

    def jac(x: np.ndarray) -> np.ndarray:
        return _central_diff(fun, x, DEFAULT_FD_STEP)

    starts: List[tuple] = [("witness", check_angles(game.n, w)) for w in (witnesses or [])]
    n_structured = min(len(STRUCTURED_LAMBDAS), config.restarts)
    for lam0, offset in STRUCTURED_LAMBDAS[:n_structured]:
        starts.append(("structured", structured_start(game.n, lam0, offset)))
    for x in _random_starts(evaluator, dim, config.restarts - n_structured, config):
        starts.append(("random", x))

    best_value = -1.0
    best_angles = starts[0][1]
    trace: List[RestartResult] = []
    for index, (source, x0) in enumerate(starts):
        candidates = [(fun(x0), x0)]
        res = _local_search(fun, jac, x0, config)
        evals = int(getattr(res, "nfev", 0))
        converged = bool(res.success)
        candidates.append((float(res.fun), np.asarray(res.x, dtype=float)))
        if config.polish and config.method != "bfgs":
            pol = sopt.minimize(
                fun,
                res.x,
                method="BFGS",
                jac=jac,
                options={"maxiter": max(1, config.max_evals // (2 * dim + 1)), "gtol": 1e-9},
            )
            evals += int(pol.nfev) + int(getattr(pol, "njev", 0)) * 2 * dim
            candidates.append((float(pol.fun), np.asarray(pol.x, dtype=float)))

        # first minimum wins, so equal values keep the earlier stage
        _, x = min(candidates, key=lambda c: c[0])
        angles = wrap_angles(x)
        value = evaluator(angles)
        start_value = 1.0 - candidates[0][0]
        trace.append(RestartResult(index, source, start_value, value, evals, converged))
        logger.debug(
            "[optimize] %s restart %d (%s): %.9f -> %.9f", game.game_id, index, source,
            start_value, value,
        )
        if value > best_value:
            best_value, best_angles = value, angles

    logger.info("[optimize] %s best %.9f over %d starts", game.game_id, best_value, len(starts))
    return OptimizeResult(best_value=min(best_value, 1.0), best_angles=best_angles, trace=trace)
