"""Gate lists for resource preparation and strategy layers, OpenQASM 2.0 export.

A circuit is a plain list of ``Gate`` values. ``replay`` runs a list through
the state-vector simulator, which is how exported circuits are checked
against the reference resource states.
"""

from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from jinja2 import Environment, FileSystemLoader

from .errors import ArityError, ChshGamesError, ResourceError
from .game import GameSpec
from .quantum import (
    HADAMARD,
    PAULI_X,
    PHASE_S,
    QuantumStrategy,
    StateVector,
    UnitaryParams,
    apply_controlled,
    apply_local,
    product_state,
    u3,
)

TEMPLATE_DIR = os.path.join(os.path.dirname(__file__), "templates")
TEMPLATE_NAME = "strategy.qasm.jinja"

W_PREP_ANGLE = 2 * math.acos(1 / math.sqrt(3))


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: Tuple[int, ...]
    params: Tuple[float, ...] = ()

    def to_qasm(self) -> str:
        args = ",".join(f"q[{q}]" for q in self.qubits)
        if self.params:
            return f"{self.name}({','.join(repr(float(p)) for p in self.params)}) {args};"
        return f"{self.name} {args};"


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


# ──────────────────────────────────────────────────────────────────────────────
# Preparation circuits
# ──────────────────────────────────────────────────────────────────────────────


def ghz_prep(n: int) -> List[Gate]:
    """H on qubit 0, then a CNOT cascade down the register."""
    return [Gate("h", (0,))] + [Gate("cx", (q, q + 1)) for q in range(n - 1)]


def ghz_phase_prep(n: int) -> List[Gate]:
    return ghz_prep(n) + [Gate("s", (0,))]


def w_prep() -> List[Gate]:
    return [
        Gate("ry", (0,), (W_PREP_ANGLE,)),
        Gate("ch", (0, 1)),
        Gate("cx", (1, 2)),
        Gate("cx", (0, 1)),
        Gate("x", (0,)),
    ]


def prep_circuit(resource: str, n: int) -> List[Gate]:
    if resource == "epr" and n == 2:
        return ghz_prep(2)
    if resource == "ghz" and 2 <= n <= 4:
        return ghz_prep(n)
    if resource == "ghz-j" and n == 3:
        return ghz_phase_prep(3)
    if resource == "w" and n == 3:
        return w_prep()
    raise ResourceError(f"no preparation circuit for resource {resource!r} with {n} qubits")


def decompose(gates: Sequence[Gate]) -> List[Gate]:
    """Rewrite controlled-H as ry(pi/4) t; cx c,t; ry(-pi/4) t."""
    out: List[Gate] = []
    for g in gates:
        if g.name == "ch":
            c, t = g.qubits
            out += [
                Gate("ry", (t,), (math.pi / 4,)),
                Gate("cx", (c, t)),
                Gate("ry", (t,), (-math.pi / 4,)),
            ]
        else:
            out.append(g)
    return out


def strategy_layer(strat: QuantumStrategy, question: Sequence[int]) -> List[Gate]:
    if len(question) != strat.n:
        raise ArityError(f"question of length {len(question)} for {strat.n} players")
    return [
        Gate("u3", (i,), strat.unitary(i, 1 if q else 0).as_tuple())
        for i, q in enumerate(question)
    ]


# ──────────────────────────────────────────────────────────────────────────────
# Simulation replay
# ──────────────────────────────────────────────────────────────────────────────


def replay(gates: Sequence[Gate], n: int, state: StateVector | None = None) -> StateVector:
    """Run ``gates`` on ``state`` (default |0...0>)."""
    if state is None:
        state = product_state([0] * n)
    for g in gates:
        if g.name == "h":
            state = apply_local(state, g.qubits[0], HADAMARD)
        elif g.name == "x":
            state = apply_local(state, g.qubits[0], PAULI_X)
        elif g.name == "s":
            state = apply_local(state, g.qubits[0], PHASE_S)
        elif g.name == "ry":
            state = apply_local(state, g.qubits[0], ry_matrix(g.params[0]))
        elif g.name == "u3":
            state = apply_local(state, g.qubits[0], u3(UnitaryParams(*g.params)))
        elif g.name == "cx":
            state = apply_controlled(state, g.qubits[0], g.qubits[1], PAULI_X)
        elif g.name == "ch":
            state = apply_controlled(state, g.qubits[0], g.qubits[1], HADAMARD)
        else:
            raise ChshGamesError(f"unsupported gate {g.name!r}")
    return state


def question_win_from_circuit(
    game: GameSpec, resource: str, strat: QuantumStrategy, question: Sequence[int]
) -> float:
    """Win probability on one question by replaying prep + strategy gates."""
    n = game.n
    gates = decompose(prep_circuit(resource, n)) + strategy_layer(strat, question)
    probs = np.abs(replay(gates, n).amplitudes) ** 2
    fx = game.f.value_at(int("".join(str(b) for b in question), 2))
    return float(sum(p for a, p in enumerate(probs) if game.g.value_at(a) == fx))


# ──────────────────────────────────────────────────────────────────────────────
# QASM
# ──────────────────────────────────────────────────────────────────────────────

_jinja_env = Environment(
    loader=FileSystemLoader(TEMPLATE_DIR),
    keep_trailing_newline=True,
    lstrip_blocks=True,
    trim_blocks=True,
)


def render_qasm(
    game: GameSpec, resource: str, strat: QuantumStrategy, question: Sequence[int]
) -> str:
    prep = decompose(prep_circuit(resource, game.n))
    layer = strategy_layer(strat, question)
    template = _jinja_env.get_template(TEMPLATE_NAME)
    return template.render(
        game=str(game),
        resource=resource,
        question="".join(str(int(b)) for b in question),
        n=game.n,
        prep=[g.to_qasm() for g in prep],
        strategy=[g.to_qasm() for g in layer],
    )


_GATE_RE = re.compile(r"^(\w+)(?:\(([^)]*)\))?\s+(q\[\d+\](?:\s*,\s*q\[\d+\])*)\s*;$")
_SKIP = ("OPENQASM", "include", "qreg", "creg", "barrier", "measure", "//")


def parse_qasm(text: str) -> Tuple[int, List[Gate]]:
    """Read back the gate subset this module writes; returns (qubits, gates)."""
    n = 0
    gates: List[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("qreg"):
            n = int(re.search(r"\[(\d+)\]", line).group(1))
        if line.startswith(_SKIP):
            continue
        m = _GATE_RE.match(line)
        if not m:
            raise ChshGamesError(f"line {lineno}: cannot parse {raw!r}")
        params = tuple(float(p) for p in m.group(2).split(",")) if m.group(2) else ()
        qubits = tuple(int(q) for q in re.findall(r"q\[(\d+)\]", m.group(3)))
        gates.append(Gate(m.group(1), qubits, params))
    return n, gates
