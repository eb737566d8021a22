"""Bell and Mermin operators, their expectations, and the link to game values.

For a game whose answer side is the parity of the answers, the per-question
win probability p and the expectation of the tensor product of the measured
observables O_{i,x_i} = U_{i,x_i}^dagger Z U_{i,x_i} satisfy

    2p - 1 = <O_{1,x_1} (x) ... (x) O_{n,x_n}>     when f(x) = 0
    1 - 2p = <O_{1,x_1} (x) ... (x) O_{n,x_n}>     when f(x) = 1

with the sign flipped again when g is the negated parity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import boolfn
from .errors import ArityError, ChshGamesError, ParityFormError
from .game import GameSpec
from .quantum import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    QuantumStrategy,
    StateVector,
    UnitaryParams,
    make_epr,
    make_ghz_phase,
    per_question_win,
    resource_state,
    u3,
)

HERMITIAN_TOL = 1e-12
INVOLUTION_TOL = 1e-10
REAL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SingleQubitObservable:
    name: str
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ArityError(f"observable {self.name!r} must be 2x2, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ChshGamesError(f"observable {self.name!r} is not Hermitian")
        if np.max(np.abs(m @ m - np.eye(2))) > INVOLUTION_TOL:
            raise ChshGamesError(f"observable {self.name!r} does not square to identity")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def key(self) -> Tuple[float, ...]:
        """Hashable identity of the matrix, used to share ±1 values."""
        flat = np.round(self.matrix.reshape(-1), 9)
        return tuple(float(v) for z in flat for v in (z.real, z.imag))


OBS_Z = SingleQubitObservable("Z", PAULI_Z)
OBS_X = SingleQubitObservable("X", PAULI_X)
OBS_Y = SingleQubitObservable("Y", PAULI_Y)
OBS_Z_PLUS_X = SingleQubitObservable("(Z+X)/√2", (PAULI_Z + PAULI_X) / math.sqrt(2))
OBS_Z_MINUS_X = SingleQubitObservable("(Z−X)/√2", (PAULI_Z - PAULI_X) / math.sqrt(2))


def observable_from_params(p: UnitaryParams, name: Optional[str] = None) -> SingleQubitObservable:
    """The observable measured by applying u3(p) then reading Z: U^dagger Z U."""
    U = u3(p)
    matrix = U.conj().T @ PAULI_Z @ U
    # exact Hermitian form; removes rounding asymmetry before validation
    matrix = (matrix + matrix.conj().T) / 2
    label = name or f"O({p.theta:.6g},{p.phi:.6g},{p.lam:.6g})"
    return SingleQubitObservable(label, matrix)


@dataclass(frozen=True)
class MerminOperator:
    terms: Tuple[Tuple[float, Tuple[SingleQubitObservable, ...]], ...]

    def __post_init__(self):
        if not self.terms:
            raise ChshGamesError("operator needs at least one term")
        sizes = {len(factors) for _, factors in self.terms}
        if len(sizes) != 1:
            raise ArityError(f"terms act on different qubit counts: {sorted(sizes)}")

    @property
    def n(self) -> int:
        return len(self.terms[0][1])

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: "MerminOperator") -> "MerminOperator":
        return MerminOperator(self.terms + other.terms)

    def __sub__(self, other: "MerminOperator") -> "MerminOperator":
        return MerminOperator(self.terms + tuple((-c, f) for c, f in other.terms))

    def __str__(self) -> str:
        return format_operator(self)


def _operator(spec: Sequence[Tuple[float, Sequence[SingleQubitObservable]]]) -> MerminOperator:
    return MerminOperator(tuple((float(c), tuple(f)) for c, f in spec))


# ──────────────────────────────────────────────────────────────────────────────
# Builders
# ──────────────────────────────────────────────────────────────────────────────


def build_bell() -> MerminOperator:
    return _operator(
        [
            (+1, (OBS_Z, OBS_Z_PLUS_X)),
            (+1, (OBS_X, OBS_Z_PLUS_X)),
            (+1, (OBS_Z, OBS_Z_MINUS_X)),
            (-1, (OBS_X, OBS_Z_MINUS_X)),
        ]
    )


def _check_three(obs: Sequence[SingleQubitObservable], label: str) -> None:
    if len(obs) != 3:
        raise ArityError(f"{label} needs one observable per player (3), got {len(obs)}")


def build_m3(
    O0: Sequence[SingleQubitObservable], O1: Sequence[SingleQubitObservable]
) -> MerminOperator:
    """M3 = O10 O20 O31 + O10 O21 O30 + O11 O20 O30 - O11 O21 O31."""
    _check_three(O0, "O0")
    _check_three(O1, "O1")
    return _operator(
        [
            (+1, (O0[0], O0[1], O1[2])),
            (+1, (O0[0], O1[1], O0[2])),
            (+1, (O1[0], O0[1], O0[2])),
            (-1, (O1[0], O1[1], O1[2])),
        ]
    )


def build_m3_prime(
    O0: Sequence[SingleQubitObservable], O1: Sequence[SingleQubitObservable]
) -> MerminOperator:
    """M3 with the roles of question 0 and question 1 exchanged."""
    return build_m3(O1, O0)


def strategy_observables(
    params: Sequence[UnitaryParams],
) -> Tuple[List[SingleQubitObservable], List[SingleQubitObservable]]:
    """(O_{i,0} for each player, O_{i,1} for each player) from strategy order params."""
    if len(params) % 2:
        raise ArityError(f"need two unitaries per player, got {len(params)}")
    n = len(params) // 2
    O0 = [observable_from_params(params[2 * i], f"O{i + 1}0") for i in range(n)]
    O1 = [observable_from_params(params[2 * i + 1], f"O{i + 1}1") for i in range(n)]
    return O0, O1


def build_t1(params: Sequence[UnitaryParams]) -> MerminOperator:
    O0, O1 = strategy_observables(params)
    return build_m3(O0, O1) - build_m3_prime(O0, O1)


def build_t2(params: Sequence[UnitaryParams]) -> MerminOperator:
    O0, O1 = strategy_observables(params)
    return build_m3(O0, O1) + build_m3_prime(O0, O1)


# ──────────────────────────────────────────────────────────────────────────────
# Evaluation
# ──────────────────────────────────────────────────────────────────────────────


def _apply_factors(state: StateVector, factors: Sequence[np.ndarray]) -> np.ndarray:
    psi = state.amplitudes.reshape([2] * state.n)
    for q, m in enumerate(factors):
        psi = np.moveaxis(np.tensordot(m, psi, axes=([1], [q])), 0, q)
    return psi.reshape(-1)


def monomial_expectation(
    factors: Sequence[SingleQubitObservable], state: StateVector
) -> float:
    if len(factors) != state.n:
        raise ArityError(f"{len(factors)}-qubit monomial on a {state.n}-qubit state")
    value = np.vdot(state.amplitudes, _apply_factors(state, [f.matrix for f in factors]))
    if abs(value.imag) > REAL_TOL:
        raise ChshGamesError(f"expectation has imaginary part {value.imag!r}")
    return float(value.real)


def expectation(op: MerminOperator, state: StateVector) -> float:
    if op.n != state.n:
        raise ArityError(f"{op.n}-qubit operator on a {state.n}-qubit state")
    return float(sum(c * monomial_expectation(f, state) for c, f in op.terms))


def to_matrix(op: MerminOperator) -> np.ndarray:
    """Full 2^n x 2^n matrix, qubit 0 as the leftmost Kronecker factor."""
    size = 1 << op.n
    total = np.zeros((size, size), dtype=complex)
    for c, factors in op.terms:
        total += c * reduce(np.kron, [f.matrix for f in factors])
    return total


def classical_bound(op: MerminOperator) -> float:
    """Max of the operator over ±1 assignments to its distinct local observables.

    Each (qubit, observable) pair gets one value shared by every term that
    uses it, which is the local-realistic bound.
    """
    slots: Dict[Tuple[int, Tuple[float, ...]], int] = {}
    for _, factors in op.terms:
        for q, f in enumerate(factors):
            slots.setdefault((q, f.key()), len(slots))
    term_slots = [
        [slots[(q, f.key())] for q, f in enumerate(factors)] for _, factors in op.terms
    ]
    best = -math.inf
    for signs in product((1, -1), repeat=len(slots)):
        total = sum(
            c * math.prod(signs[s] for s in idx)
            for (c, _), idx in zip(op.terms, term_slots)
        )
        best = max(best, total)
    return float(best)


def format_operator(op: MerminOperator, names: Optional[Sequence[str]] = None) -> str:
    """Signed monomial string such as ``+ X⊗X⊗Y − Y⊗Y⊗Y``.

    ``names`` optionally overrides observable names, keyed by position in
    first-appearance order.
    """
    rename: Dict[int, str] = {}
    if names is not None:
        seen: List[int] = []
        for _, factors in op.terms:
            for f in factors:
                if id(f) not in seen:
                    seen.append(id(f))
        rename = {ident: name for ident, name in zip(seen, names)}

    parts = []
    for c, factors in op.terms:
        sign = "+" if c >= 0 else "−"
        scale = "" if abs(abs(c) - 1) < 1e-12 else f"{abs(c):g}·"
        mono = "⊗".join(rename.get(id(f), f.name) for f in factors)
        parts.append(f"{sign} {scale}{mono}")
    return " ".join(parts)


# ──────────────────────────────────────────────────────────────────────────────
# Game <-> operator correspondence
# ──────────────────────────────────────────────────────────────────────────────


@dataclass
class QuestionCheck:
    question: Tuple[int, ...]
    f_value: int
    win_probability: float
    lhs: float
    monomial: float

    @property
    def holds(self) -> bool:
        return abs(self.lhs - self.monomial) < REAL_TOL


def game_monomial_consistency(
    game: GameSpec, strat: QuantumStrategy
) -> List[QuestionCheck]:
    """Check 2p - 1 = <monomial> (signed by f and g) for every question.

    ``lhs`` is the signed 2p - 1; ``monomial`` the expectation of the
    measured observables on the resource.

    Raises:
        ParityFormError: if g is neither the n-bit XOR nor its negation.
    """
    xor = boolfn.parity(game.n)
    if game.g == xor:
        flip = 0
    elif game.g == boolfn.negate(xor):
        flip = 1
    else:
        raise ParityFormError(f"answer side {game.g_expr!r} is not the parity of the answers")
    if strat.n != game.n:
        raise ArityError(f"{strat.n}-qubit strategy used on a {game.n}-player game")

    O0, O1 = strategy_observables(strat.params)
    probs = per_question_win(game, strat)
    checks = []
    for x in range(1 << game.n):
        bits = boolfn.index_bits(x, game.n)
        factors = [O1[i] if b else O0[i] for i, b in enumerate(bits)]
        fx = game.f.value_at(x)
        sign = -1 if (fx ^ flip) else 1
        p = float(probs[x])
        checks.append(
            QuestionCheck(
                question=bits,
                f_value=fx,
                win_probability=p,
                lhs=sign * (2 * p - 1),
                monomial=monomial_expectation(factors, strat.resource),
            )
        )
    return checks


# ──────────────────────────────────────────────────────────────────────────────
# Named operators
# ──────────────────────────────────────────────────────────────────────────────

OPERATOR_NAMES = ("bell", "m3", "t1", "t2")


def named_operator(
    name: str, angles: Optional[Sequence[float]] = None, resource: Optional[str] = None
) -> Tuple[MerminOperator, StateVector]:
    """An operator with the state it is usually evaluated on.

    ``bell`` pairs with EPR and ``m3`` (X / Y observables) with GHZ_j; ``t1``
    and ``t2`` are built from strategy angles, by default the published GHZ
    and W strategies, on GHZ and W respectively. ``resource`` overrides the
    state.
    """
    from . import witnesses

    if name == "bell":
        op, state = build_bell(), make_epr()
    elif name == "m3":
        op, state = build_m3([OBS_X] * 3, [OBS_Y] * 3), make_ghz_phase(3)
    elif name in ("t1", "t2"):
        default = witnesses.TABLE2[1][1] if name == "t1" else witnesses.TABLE5_ANGLES
        state = resource_state("ghz" if name == "t1" else "w", 3)
        params = QuantumStrategy.from_angles(state, angles if angles is not None else default).params
        op = build_t1(params) if name == "t1" else build_t2(params)
    else:
        raise ChshGamesError(f"unknown operator {name!r}; expected one of {OPERATOR_NAMES}")
    if resource is not None:
        state = resource_state(resource, op.n)
    return op, state
