"""Flask API over the game library.

Key endpoints
==============
* **GET  /resources**  → named resource states and the player counts they support.
* **POST /classical**  → best classical value and every optimal deterministic strategy.
* **POST /quantum**    → win probability and per-question rates for given angles.
* **POST /optimize**   → multistart optimization for one game and resource.
* **POST /operators**  → Bell / Mermin operator expectation and local-realistic bound.

Games are posted as ``{"arity": 3, "f": "x*y + (x^y)*z", "g": "a^b^c"}``.
User-level problems (bad expressions, unknown resources, invalid budgets)
return HTTP 200 with ``{"status": "error"}``; malformed requests abort with
400.
"""

from __future__ import annotations

from typing import Any, Dict, Optional

from flask import Flask, abort, jsonify, request
from flask_cors import CORS
from pydantic import ValidationError

from . import bell, boolfn, witnesses
from .classical import best_classical
from .config import RESOURCE_NAMES, OptimizeConfig
from .errors import ArityError, ChshGamesError
from .game import GameSpec
from .optimize import optimize_strategy
from .quantum import (
    QuantumStrategy,
    named_resources,
    per_question_win,
    resource_state,
)

app = Flask(__name__)
CORS(app)

OPTIMIZE_KEYS = ("restarts", "max_evals", "tolerance", "seed", "screen_samples", "method", "polish")

# ──────────────────────────────────────────────────────────────────────────────
# Helpers
# ──────────────────────────────────────────────────────────────────────────────


def _payload() -> Dict[str, Any]:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        abort(400, description="Request body must be a JSON object.")
    return data


def _game(data: Dict[str, Any]) -> GameSpec:
    if not isinstance(data.get("f"), str) or not isinstance(data.get("g"), str):
        abort(400, description="JSON must include 'f' and 'g' expressions as strings.")
    n = data.get("arity")
    if n is None:
        n = max(
            len(boolfn.infer_variables(data["f"], None)),
            len(boolfn.infer_variables(data["g"], None)),
        )
    elif isinstance(n, bool) or not isinstance(n, int):
        abort(400, description="'arity' must be an integer.")
    if not 1 <= n <= len(boolfn.QUESTION_VARS):
        raise ArityError(f"arity must be between 1 and {len(boolfn.QUESTION_VARS)}, got {n}")
    f = boolfn.parse_expr(data["f"], variables=boolfn.QUESTION_VARS[:n])
    g = boolfn.parse_expr(data["g"], variables=boolfn.ANSWER_VARS[:n])
    return GameSpec(f, g)


def _resource(data: Dict[str, Any], default: Optional[str] = "ghz") -> Optional[str]:
    resource = data.get("resource", default)
    if resource is not None and not isinstance(resource, str):
        abort(400, description="'resource' must be a string.")
    return resource


def _error(message: str):
    return jsonify({"status": "error", "message": message}), 200


def _angles(data: Dict[str, Any]) -> Optional[list]:
    angles = data.get("angles")
    if angles is None:
        return None
    if not isinstance(angles, list) or not all(
        isinstance(a, (int, float)) and not isinstance(a, bool) for a in angles
    ):
        abort(400, description="'angles' must be a list of numbers.")
    return [float(a) for a in angles]


# ──────────────────────────────────────────────────────────────────────────────
# API routes
# ──────────────────────────────────────────────────────────────────────────────


@app.route("/resources", methods=["GET"])
def resources():
    available = {n: named_resources(n) for n in range(2, 5)}
    listing = [
        {"name": name, "players": [n for n, states in available.items() if name in states]}
        for name in RESOURCE_NAMES
    ]
    return jsonify({"status": "success", "resources": listing}), 200


@app.route("/classical", methods=["POST"])
def classical():
    data = _payload()
    try:
        game = _game(data)
        value, strategies = best_classical(game)
    except ChshGamesError as e:
        return _error(str(e))
    return (
        jsonify(
            {
                "status": "success",
                "game": game.to_dict(),
                "value": float(value),
                "value_num": value.numerator,
                "value_den": value.denominator,
                "strategies": [s.code for s in strategies],
            }
        ),
        200,
    )


@app.route("/quantum", methods=["POST"])
def quantum():
    data = _payload()
    angles = _angles(data)
    if angles is None:
        abort(400, description="JSON must include 'angles'.")
    try:
        game = _game(data)
        state = resource_state(_resource(data), game.n)
        rates = per_question_win(game, QuantumStrategy.from_angles(state, angles))
    except ChshGamesError as e:
        return _error(str(e))
    return (
        jsonify(
            {
                "status": "success",
                "game": game.to_dict(),
                "value": float(rates.mean()),
                "per_question": [float(r) for r in rates],
            }
        ),
        200,
    )


@app.route("/optimize", methods=["POST"])
def optimize():
    data = _payload()
    try:
        game = _game(data)
        resource = _resource(data)
        state = resource_state(resource, game.n)
        config = OptimizeConfig(**{k: data[k] for k in OPTIMIZE_KEYS if k in data})
        witness = witnesses.witness_for(game, resource)
        res = optimize_strategy(game, state, config, [witness] if witness else None)
    except ValidationError as e:
        return _error(f"invalid optimizer settings: {e}")
    except ChshGamesError as e:
        return _error(str(e))
    return (
        jsonify(
            {
                "status": "success",
                "game": game.to_dict(),
                "resource": resource,
                "value": res.best_value,
                "angles": [float(a) for a in res.best_angles],
                "trace": [r.to_dict() for r in res.trace],
            }
        ),
        200,
    )


@app.route("/operators", methods=["POST"])
def operators():
    data = _payload()
    name = data.get("operator")
    if name not in bell.OPERATOR_NAMES:
        abort(400, description=f"'operator' must be one of {', '.join(bell.OPERATOR_NAMES)}.")
    try:
        op, state = bell.named_operator(name, _angles(data), _resource(data, None))
        value = bell.expectation(op, state)
    except ChshGamesError as e:
        return _error(str(e))
    return (
        jsonify(
            {
                "status": "success",
                "operator": bell.format_operator(op),
                "expectation": value,
                "classical_bound": bell.classical_bound(op),
            }
        ),
        200,
    )


# ──────────────────────────────────────────────────────────────────────────────
# Entrypoint
# ──────────────────────────────────────────────────────────────────────────────

if __name__ == "__main__":
    # To run: python -m chsh_games.app_flask
    app.run(host="0.0.0.0", port=8001, debug=False)
