"""Dense state-vector simulation for the shared resource states (n <= 4).

Qubit 0 (player 1) is the most significant bit of the amplitude index, the
same convention as the question/answer bits in ``boolfn``, so a measured
outcome index is directly the answer vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import ArityError, ChshGamesError, NormError, NotUnitaryError, ResourceError
from .game import GameSpec

MAX_QUBITS = 4
NORM_TOL = 1e-12
UNITARY_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PHASE_S = np.array([[1, 0], [0, 1j]], dtype=complex)


@dataclass(frozen=True, eq=False)
class StateVector:
    n: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise ArityError(f"qubit count must be in [1, {MAX_QUBITS}], got {self.n}")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (1 << self.n,):
            raise ArityError(f"{self.n} qubits need {1 << self.n} amplitudes, got {amps.size}")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise NormError(f"state norm is {norm!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def _evolved(cls, n: int, amps: np.ndarray) -> "StateVector":
        """Result of unitary evolution, checked against the looser bound."""
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > UNITARY_TOL:
            raise NormError(f"norm drifted to {norm!r} during evolution")
        return cls(n, amps / norm)

    def __len__(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class UnitaryParams:
    theta: float
    phi: float
    lam: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.theta, self.phi, self.lam)):
            raise ChshGamesError(f"non-finite angle in {self!r}")

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.theta, self.phi, self.lam)


@dataclass(frozen=True, eq=False)
class QuantumStrategy:
    """Resource state plus U_{i,q} for every player i and question bit q.

    ``params[2 * i + q]`` is the triple player ``i`` uses on question ``q``.
    """

    resource: StateVector
    params: Tuple[UnitaryParams, ...]

    def __post_init__(self):
        if len(self.params) != 2 * self.resource.n:
            raise ArityError(
                f"{self.resource.n} players need {2 * self.resource.n} unitaries, "
                f"got {len(self.params)}"
            )

    @property
    def n(self) -> int:
        return self.resource.n

    def unitary(self, player: int, question: int) -> UnitaryParams:
        return self.params[2 * player + question]

    def angles(self) -> np.ndarray:
        return np.array([v for p in self.params for v in p.as_tuple()], dtype=float)

    @classmethod
    def from_angles(cls, resource: StateVector, angles: Sequence[float]) -> "QuantumStrategy":
        angles = np.asarray(angles, dtype=float).reshape(-1)
        if angles.size != 6 * resource.n:
            raise ArityError(
                f"{resource.n} players need {6 * resource.n} angles, got {angles.size}"
            )
        triples = angles.reshape(-1, 3)
        return cls(resource, tuple(UnitaryParams(*map(float, t)) for t in triples))


# ──────────────────────────────────────────────────────────────────────────────
# Gates
# ──────────────────────────────────────────────────────────────────────────────


def u3(p: UnitaryParams) -> np.ndarray:
    """[[cos(t/2), -e^{il} sin(t/2)], [e^{ip} sin(t/2), e^{i(p+l)} cos(t/2)]]."""
    c, s = math.cos(p.theta / 2), math.sin(p.theta / 2)
    return np.array(
        [
            [c, -np.exp(1j * p.lam) * s],
            [np.exp(1j * p.phi) * s, np.exp(1j * (p.phi + p.lam)) * c],
        ],
        dtype=complex,
    )


def _u3_stack(angles: np.ndarray) -> np.ndarray:
    """Vectorised u3 over an (..., 3) angle array -> (..., 2, 2)."""
    theta, phi, lam = angles[..., 0], angles[..., 1], angles[..., 2]
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    out = np.empty(angles.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = -np.exp(1j * lam) * s
    out[..., 1, 0] = np.exp(1j * phi) * s
    out[..., 1, 1] = np.exp(1j * (phi + lam)) * c
    return out


def is_unitary(matrix: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (2, 2):
        return False
    return bool(np.max(np.abs(matrix.conj().T @ matrix - I2)) < tol)


# ──────────────────────────────────────────────────────────────────────────────
# Resource states
# ──────────────────────────────────────────────────────────────────────────────


def make_ghz(n: int = 3) -> StateVector:
    if not 2 <= n <= MAX_QUBITS:
        raise ArityError(f"GHZ state needs 2..{MAX_QUBITS} qubits, got {n}")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = amps[-1] = 1 / math.sqrt(2)
    return StateVector(n, amps)


def make_epr() -> StateVector:
    return make_ghz(2)


def make_w(n: int = 3) -> StateVector:
    """Uniform superposition of the weight-one basis states (|001> + |010> + |100>)."""
    if not 2 <= n <= MAX_QUBITS:
        raise ArityError(f"W state needs 2..{MAX_QUBITS} qubits, got {n}")
    amps = np.zeros(1 << n, dtype=complex)
    for q in range(n):
        amps[1 << q] = 1 / math.sqrt(n)
    return StateVector(n, amps)


def make_ghz_phase(n: int = 3) -> StateVector:
    """(|0..0> + i|1..1>)/sqrt(2)."""
    if not 2 <= n <= MAX_QUBITS:
        raise ArityError(f"GHZ_j state needs 2..{MAX_QUBITS} qubits, got {n}")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1 / math.sqrt(2)
    amps[-1] = 1j / math.sqrt(2)
    return StateVector(n, amps)


def product_state(bits: Sequence[int]) -> StateVector:
    amps = np.zeros(1 << len(bits), dtype=complex)
    index = 0
    for b in bits:
        index = (index << 1) | (1 if b else 0)
    amps[index] = 1.0
    return StateVector(len(bits), amps)


RESOURCE_BUILDERS = {
    "epr": lambda n: make_epr() if n == 2 else None,
    "ghz": make_ghz,
    "w": lambda n: make_w(n) if n == 3 else None,
    "ghz-j": lambda n: make_ghz_phase(n) if n == 3 else None,
}


def resource_state(name: str, n: int) -> StateVector:
    """Look up a named resource for ``n`` players.

    EPR is the two-qubit resource; W and GHZ_j are used with three players.
    """
    builder = RESOURCE_BUILDERS.get(name)
    if builder is None:
        raise ResourceError(f"unknown resource {name!r}; expected one of {sorted(RESOURCE_BUILDERS)}")
    try:
        state = builder(n)
    except ArityError as e:
        raise ResourceError(str(e)) from e
    if state is None:
        raise ResourceError(f"resource {name!r} is not defined for {n} players")
    return state


# ──────────────────────────────────────────────────────────────────────────────
# Evolution and measurement
# ──────────────────────────────────────────────────────────────────────────────


def _check_qubit(state: StateVector, qubit: int) -> None:
    if not 0 <= qubit < state.n:
        raise ArityError(f"qubit {qubit} out of range for {state.n} qubits")


def apply_local(state: StateVector, qubit: int, U: np.ndarray) -> StateVector:
    """Apply a single-qubit unitary to one tensor factor."""
    _check_qubit(state, qubit)
    U = np.asarray(U, dtype=complex)
    if not is_unitary(U):
        raise NotUnitaryError(f"matrix is not unitary within {UNITARY_TOL}:\n{U}")
    n = state.n
    psi = state.amplitudes.reshape(1 << qubit, 2, 1 << (n - qubit - 1))
    out = np.einsum("ab,lbr->lar", U, psi)
    return StateVector._evolved(n, out.reshape(-1))


def apply_controlled(
    state: StateVector, control: int, target: int, U: np.ndarray
) -> StateVector:
    """Apply ``U`` to ``target`` on the branch where ``control`` is |1>."""
    _check_qubit(state, control)
    _check_qubit(state, target)
    if control == target:
        raise ArityError("control and target must differ")
    U = np.asarray(U, dtype=complex)
    if not is_unitary(U):
        raise NotUnitaryError(f"matrix is not unitary within {UNITARY_TOL}:\n{U}")
    psi = np.array(state.amplitudes).reshape([2] * state.n)
    branch = [slice(None)] * state.n
    branch[control] = 1
    sub = psi[tuple(branch)]
    # the target axis shifts left once the control axis is sliced away
    axis = target if target < control else target - 1
    sub = np.moveaxis(np.tensordot(U, sub, axes=([1], [axis])), 0, axis)
    psi[tuple(branch)] = sub
    return StateVector._evolved(state.n, psi.reshape(-1))


def outcome_probs(state: StateVector) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def _final_amplitudes(resource: np.ndarray, n: int, unitaries: np.ndarray) -> np.ndarray:
    """Post-strategy amplitudes for every question at once.

    ``unitaries[i, q]`` is player i's 2x2 matrix for question bit q. Row x of
    the result is (U_{1,x_1} (x) ... (x) U_{n,x_n}) |resource>.
    """
    states = resource.reshape(1, -1)
    for i in range(n):
        batch = states.shape[0]
        psi = states.reshape(batch, 1 << i, 2, 1 << (n - i - 1))
        psi = np.einsum("kac,blcr->bklar", unitaries[i], psi)
        states = psi.reshape(batch * 2, -1)
    return states


def _win_weights(game: GameSpec) -> np.ndarray:
    size = 1 << game.n
    f_vals = np.array([game.f.value_at(x) for x in range(size)])
    g_vals = np.array([game.g.value_at(a) for a in range(size)])
    return (f_vals[:, None] == g_vals[None, :]).astype(float)


def _check_game(game: GameSpec, strat: QuantumStrategy) -> None:
    if strat.n != game.n:
        raise ArityError(f"{strat.n}-qubit strategy used on a {game.n}-player game")


def per_question_win(game: GameSpec, strat: QuantumStrategy) -> np.ndarray:
    """Exact win probability for each question index (length 2^n)."""
    _check_game(game, strat)
    unitaries = _u3_stack(strat.angles().reshape(game.n, 2, 3))
    final = _final_amplitudes(strat.resource.amplitudes, game.n, unitaries)
    return (np.abs(final) ** 2 * _win_weights(game)).sum(axis=1)


def win_probability(game: GameSpec, strat: QuantumStrategy) -> float:
    return float(per_question_win(game, strat).mean())


class WinEvaluator:
    """Repeated win-probability evaluation for one (game, resource) pair.

    Keeps the win-weight matrix and the resource amplitudes so the optimizer
    only pays for the unitary layer on each call.
    """

    def __init__(self, game: GameSpec, resource: StateVector):
        if resource.n != game.n:
            raise ArityError(f"{resource.n}-qubit resource used on a {game.n}-player game")
        self.game = game
        self.resource = resource
        self.n = game.n
        self._weights = _win_weights(game)
        self._amps = resource.amplitudes

    def __call__(self, angles: np.ndarray) -> float:
        unitaries = _u3_stack(np.asarray(angles, dtype=float).reshape(self.n, 2, 3))
        final = _final_amplitudes(self._amps, self.n, unitaries)
        return float((np.abs(final) ** 2 * self._weights).sum() / final.shape[0])


def dump_amplitudes(state: StateVector) -> str:
    """Plain-text ``index real imag`` lines, for debugging."""
    lines: List[str] = [
        f"{k} {amp.real:.17g} {amp.imag:.17g}" for k, amp in enumerate(state.amplitudes)
    ]
    return "\n".join(lines) + "\n"


def named_resources(n: int) -> Dict[str, StateVector]:
    out: Dict[str, StateVector] = {}
    for name in RESOURCE_BUILDERS:
        try:
            out[name] = resource_state(name, n)
        except ResourceError:
            continue
    return out
