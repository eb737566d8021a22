"""Command-line front end.

Exit status: 0 when everything passed, 1 when a check failed, 2 on usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections import Counter
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from . import bell, histogram, verify, witnesses
from .circuits import render_qasm
from .classical import best_classical
from .config import OUTPUT_DIR, RESOURCE_NAMES, RunConfig, build_run_config
from .errors import ChshGamesError
from .game import GameSpec, parse_game
from .optimize import optimize_strategy
from .quantum import QuantumStrategy, resource_state
from .search import (
    classify_types,
    filter_max_gap,
    load_records,
    resource_comparison,
    run_campaign,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

OPERATORS = bell.OPERATOR_NAMES


class UsageError(ChshGamesError):
    pass


# ──────────────────────────────────────────────────────────────────────────────
# Helpers
# ──────────────────────────────────────────────────────────────────────────────


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    keys = (
        "arity", "resources", "seed", "restarts", "max_evals", "tol",
        "screen_samples", "method", "threads", "out",
    )  # fmt: skip
    values = {k: getattr(args, k, None) for k in keys}
    if getattr(args, "no_polish", False):
        values["polish"] = False
    return values


def _game(args: argparse.Namespace) -> GameSpec:
    return parse_game(args.game, args.arity)


def _single_resource(cfg: RunConfig) -> str:
    if len(cfg.resources) != 1:
        raise UsageError(f"this command takes one resource, got {', '.join(cfg.resources)}")
    return cfg.resources[0]


def read_angles(path: str) -> List[float]:
    """Angles from a JSON list, a JSON object with ``angles`` or plain numbers."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read angles file {path!r}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        try:
            return [float(tok) for tok in text.replace(",", " ").split()]
        except ValueError as e:
            raise UsageError(f"angles file {path!r} is neither JSON nor numbers") from e
    if isinstance(data, dict):
        data = data.get("angles")
    if not isinstance(data, list):
        raise UsageError(f"angles file {path!r} has no angle list")
    return [float(v) for v in data]


def _strategy(args, cfg: RunConfig, game: GameSpec, resource: str) -> QuantumStrategy:
    """From --angles, else a published witness, else a fresh optimization."""
    state = resource_state(resource, game.n)
    if getattr(args, "angles", None):
        return QuantumStrategy.from_angles(state, read_angles(args.angles))
    witness = witnesses.witness_for(game, resource)
    res = optimize_strategy(game, state, cfg.optimize_config(), [witness] if witness else None)
    return QuantumStrategy.from_angles(state, res.best_angles)


def _write(path: str, text: str) -> None:
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")


# ──────────────────────────────────────────────────────────────────────────────
# Subcommands
# ──────────────────────────────────────────────────────────────────────────────


def cmd_verify(args, cfg: RunConfig) -> int:
    table_ids = list(verify.CHECKS) if "all" in args.table_ids else args.table_ids
    failed = 0
    for table_id in table_ids:
        print(f"== {table_id}")
        for result in verify.run_checks(table_id, cfg.optimize_config()):
            print(result)
            failed += not result.passed
    print(f"{failed} check(s) failed" if failed else "all checks passed")
    return EXIT_FAILED if failed else EXIT_OK


def cmd_search(args, cfg: RunConfig) -> int:
    n = cfg.arity
    sink = cfg.out or os.path.join(OUTPUT_DIR, f"search_n{n}.jsonl")
    classes: Counter = Counter()
    for record in run_campaign(
        n,
        cfg.resources,
        cfg.optimize_config(),
        sink=sink,
        threads=cfg.threads,
        progress=not args.quiet,
        inject_witnesses=not args.no_witnesses,
    ):
        classes[record.classification] += 1
    print(f"{sum(classes.values())} new record(s) written to {sink}")
    for name, count in sorted(classes.items()):
        print(f"  {name}: {count}")

    # summary over the whole sink, resumed runs included
    records = load_records(sink)
    if n == 3:
        groups = classify_types(filter_max_gap(records))
        print("max-gap types: " + ", ".join(f"{k}={len(v)}" for k, v in groups.items()))
    if {"w", "ghz"} <= set(cfg.resources):
        frame = resource_comparison(records)
        print(f"{len(frame)} game(s) where W beats the classical optimum:")
        if len(frame):
            print(frame.to_string(index=False))
    return EXIT_OK


def cmd_classical(args, cfg: RunConfig) -> int:
    game = _game(args)
    value, strategies = best_classical(game)
    print(f"game: {game}")
    print(f"best classical value: {value} ({float(value):.6f})")
    print(f"{len(strategies)} optimal strategies:")
    for s in strategies:
        print(f"  {s.code:>4}  {s}")
    return EXIT_OK


def cmd_optimize(args, cfg: RunConfig) -> int:
    game = _game(args)
    resource = _single_resource(cfg)
    state = resource_state(resource, game.n)
    witness = witnesses.witness_for(game, resource) if not args.no_witnesses else None
    res = optimize_strategy(game, state, cfg.optimize_config(), [witness] if witness else None)
    print(f"game: {game}")
    print(f"resource: {resource}")
    print(f"best quantum value: {res.best_value:.9f}")
    print("angles: " + " ".join(f"{a:.9f}" for a in res.best_angles))
    if cfg.out:
        payload = {
            "game": game.to_dict(),
            "resource": resource,
            "value": res.best_value,
            "angles": [float(a) for a in res.best_angles],
            "trace": [r.to_dict() for r in res.trace],
        }
        _write(cfg.out, json.dumps(payload, sort_keys=True, indent=2) + "\n")
        print(f"written to {cfg.out}")
    return EXIT_OK


def cmd_histogram(args, cfg: RunConfig) -> int:
    game = _game(args)
    if args.classical:
        frame = histogram.classical_histogram(game)
    else:
        resource = _single_resource(cfg)
        frame = histogram.quantum_histogram(game, _strategy(args, cfg, game, resource))
    if cfg.out:
        try:
            histogram.write_histogram(frame, cfg.out)
        except OSError as e:
            raise UsageError(f"cannot write {cfg.out!r}: {e}") from e
        print(f"written to {cfg.out}")
    else:
        sys.stdout.write(frame.to_csv(index=False))
    return EXIT_OK


def cmd_export_qasm(args, cfg: RunConfig) -> int:
    game = _game(args)
    resource = _single_resource(cfg)
    if len(args.question) != game.n or set(args.question) - {"0", "1"}:
        raise UsageError(f"--question must be {game.n} bits, got {args.question!r}")
    question = [int(c) for c in args.question]
    text = render_qasm(game, resource, _strategy(args, cfg, game, resource), question)
    if cfg.out:
        _write(cfg.out, text)
        print(f"written to {cfg.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_bell(args, cfg: RunConfig) -> int:
    """Operator expectation; t1/t2 take strategy angles (default: published)."""
    angles = read_angles(args.angles) if args.angles else None
    resource = _single_resource(cfg) if args.resources else None
    op, state = bell.named_operator(args.operator, angles, resource)
    print(f"operator: {bell.format_operator(op)}")
    print(f"expectation: {bell.expectation(op, state):.10f}")
    print(f"local-realistic bound: {bell.classical_bound(op):g}")
    return EXIT_OK


# ──────────────────────────────────────────────────────────────────────────────
# Parser
# ──────────────────────────────────────────────────────────────────────────────


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--arity", type=int, help="player count")
    p.add_argument("--resource", dest="resources", help=f"one of {', '.join(RESOURCE_NAMES)}")
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--max-evals", dest="max_evals", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--screen-samples", dest="screen_samples", type=int)
    p.add_argument("--method", choices=("nelder-mead", "bfgs", "cobyla"))
    p.add_argument("--no-polish", action="store_true")
    p.add_argument("--threads", type=int)
    p.add_argument("--out", help="output path")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("-q", "--quiet", action="store_true", help="no progress bars")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chsh-games",
        description="Search n-player CHSH-like games for quantum advantage.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="reproduce a published table or value")
    p.add_argument("table_ids", nargs="+", choices=list(verify.CHECKS) + ["all"])
    _common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="run a campaign over every game of an arity")
    p.add_argument("--no-witnesses", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("classical", help="best deterministic strategies of a game")
    p.add_argument("game", help='e.g. "x*y = a^b"')
    _common(p)
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("optimize", help="optimize a quantum strategy")
    p.add_argument("game")
    p.add_argument("--no-witnesses", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("histogram", help="per-question win rates as CSV")
    p.add_argument("game")
    p.add_argument("--angles", help="angles file (JSON or plain numbers)")
    p.add_argument("--classical", action="store_true", help="best classical strategy instead")
    _common(p)
    p.set_defaults(func=cmd_histogram)

    p = sub.add_parser("export-qasm", help="OpenQASM 2.0 circuit for one question")
    p.add_argument("game")
    p.add_argument("--question", required=True, help="question bits, e.g. 101")
    p.add_argument("--angles", help="angles file (JSON or plain numbers)")
    _common(p)
    p.set_defaults(func=cmd_export_qasm)

    p = sub.add_parser("bell", help="Bell / Mermin operator expectations")
    p.add_argument("operator", choices=OPERATORS)
    p.add_argument("--angles", help="strategy angles for t1 / t2")
    _common(p)
    p.set_defaults(func=cmd_bell)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
    )
    try:
        cfg = build_run_config(args.config, _overrides(args))
        return args.func(args, cfg)
    except ChshGamesError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
