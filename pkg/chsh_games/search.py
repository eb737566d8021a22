"""Search campaign: every game of an arity, classical optimum plus quantum optima.

Records go to a line-delimited JSON sink in enumeration order, so an
interrupted campaign leaves a valid prefix and a rerun picks up where it
stopped.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Set

import pandas as pd
from tqdm import tqdm

from . import witnesses
from .classical import best_classical
from .config import OptimizeConfig
from .errors import ArityError
from .game import GameSpec, enumerate_games, orbit_representative
from .optimize import invert_first_player, optimize_strategy, wrap_angles
from .quantum import QuantumStrategy, resource_state, win_probability

logger = logging.getLogger(__name__)

ADVANTAGE_MARGIN = 1e-3
MAX_GAP_TARGET = Fraction(3, 4)
MAX_GAP_FLOOR = 0.8530
CAMPAIGN_ARITIES = (2, 3)


@dataclass
class ResourceResult:
    name: str
    value: float
    angles: List[float]
    trace: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "value": self.value, "angles": self.angles, "trace": self.trace}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ResourceResult":
        return cls(
            name=data["name"],
            value=float(data["value"]),
            angles=[float(a) for a in data["angles"]],
            trace=dict(data.get("trace", {})),
        )


@dataclass
class SearchRecord:
    game: GameSpec
    classical_value: Fraction
    resources: List[ResourceResult]
    classification: str

    @property
    def game_id(self) -> str:
        return self.game.game_id

    def value(self, resource: Optional[str] = None) -> float:
        """Quantum value for one resource, or the best over all of them."""
        if resource is None:
            return max(r.value for r in self.resources)
        for r in self.resources:
            if r.name == resource:
                return r.value
        raise KeyError(f"record {self.game_id} has no result for resource {resource!r}")

    def to_dict(self) -> Dict[str, Any]:
        data = self.game.to_dict()
        data.update(
            {
                "classical_num": self.classical_value.numerator,
                "classical_den": self.classical_value.denominator,
                "resources": [r.to_dict() for r in self.resources],
                "class": self.classification,
            }
        )
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SearchRecord":
        return cls(
            game=GameSpec.from_dict(data),
            classical_value=Fraction(int(data["classical_num"]), int(data["classical_den"])),
            resources=[ResourceResult.from_dict(r) for r in data["resources"]],
            classification=data["class"],
        )


def classify_record(classical: Fraction, values: Sequence[float]) -> str:
    """``perfect`` / ``max-gap`` / ``advantage`` / ``none``."""
    best = max(values) if values else 0.0
    if classical == 1:
        return "perfect"
    if classical == MAX_GAP_TARGET and best >= MAX_GAP_FLOOR:
        return "max-gap"
    if best > float(classical) + ADVANTAGE_MARGIN:
        return "advantage"
    return "none"


def game_seed(seed: int, game: GameSpec) -> int:
    """Per-game optimizer seed, independent of scheduling."""
    digest = hashlib.sha256(f"{seed}:{game.f.bits}:{game.g.bits}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def evaluate_game(
    game: GameSpec,
    resources: Sequence[str],
    config: OptimizeConfig,
    inject_witnesses: bool = True,
) -> SearchRecord:
    """Classical optimum and one optimized quantum value per resource.

    The optimizer runs on the orbit representative with its own seed, so
    every member of a negation orbit gets the same quantum value.
    """
    classical, _ = best_classical(game)
    rep, flip = orbit_representative(game)
    game_config = config.model_copy(update={"seed": game_seed(config.seed, rep)})
    results = []
    for name in resources:
        state = resource_state(name, game.n)
        witness = witnesses.witness_for(rep, name) if inject_witnesses else None
        res = optimize_strategy(rep, state, game_config, [witness] if witness else None)
        best = res.best_restart
        angles = invert_first_player(res.best_angles) if flip else wrap_angles(res.best_angles)
        results.append(
            ResourceResult(
                name=name,
                value=win_probability(game, QuantumStrategy.from_angles(state, angles)),
                angles=[float(a) for a in angles],
                trace={
                    "restarts": len(res.trace),
                    "converged": sum(1 for r in res.trace if r.converged),
                    "evals": sum(r.evals for r in res.trace),
                    "best_restart": best.index if best else -1,
                    "best_source": best.source if best else "",
                },
            )
        )
    return SearchRecord(
        game=game,
        classical_value=classical,
        resources=results,
        classification=classify_record(classical, [r.value for r in results]),
    )


def _evaluate_task(
    n: int, f_bits: int, g_bits: int, resources: List[str], config: Dict[str, Any], inject: bool
) -> str:
    game = GameSpec.from_bits(n, f_bits, g_bits)
    return evaluate_game(game, resources, OptimizeConfig(**config), inject).to_json()


# ──────────────────────────────────────────────────────────────────────────────
# Sink handling
# ──────────────────────────────────────────────────────────────────────────────


def _repair_sink(path: Path) -> None:
    """Drop a trailing partial line left by an interrupted write."""
    if not path.exists():
        return
    data = path.read_bytes()
    if data and not data.endswith(b"\n"):
        cut = data.rfind(b"\n") + 1
        logger.warning("[search] dropping partial last line of %s", path)
        with open(path, "r+b") as fh:
            fh.truncate(cut)


def _read_lines(path: Path) -> Iterator[Dict[str, Any]]:
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if not line.endswith("\n"):
                break
            line = line.strip()
            if line:
                yield json.loads(line)


def load_records(path: str) -> List[SearchRecord]:
    p = Path(path)
    if not p.exists():
        return []
    return [SearchRecord.from_dict(d) for d in _read_lines(p)]


def _done_ids(path: Path) -> Set[str]:
    if not path.exists():
        return set()
    return {f"{d['n']}:{d['f_bits']}:{d['g_bits']}" for d in _read_lines(path)}


def run_campaign(
    n: int,
    resources: Sequence[str],
    config: Optional[OptimizeConfig] = None,
    sink: Optional[str] = None,
    threads: int = 1,
    progress: bool = True,
    inject_witnesses: bool = True,
    games: Optional[Iterable[GameSpec]] = None,
) -> Iterator[SearchRecord]:
    """Evaluate every game of arity ``n`` and stream the records.

    Args:
        n: player count (2 or 3).
        resources: resource names, each valid for ``n`` players.
        config: optimizer budget; the per-game seed is derived from its seed.
        sink: JSONL path. Games already present are skipped and new records
            are appended in enumeration order.
        threads: worker processes; results do not depend on it.
        progress: show a tqdm bar.
        inject_witnesses: seed the optimizer with published or grid witnesses.
        games: restrict the campaign to these games (enumeration order kept).

    Yields:
        SearchRecord: one per newly evaluated game, in order.
    """
    if n not in CAMPAIGN_ARITIES:
        raise ArityError(f"campaigns run for {CAMPAIGN_ARITIES} players, got {n}")
    config = config or OptimizeConfig()
    resources = list(resources)
    for name in resources:
        resource_state(name, n)

    todo = list(games) if games is not None else list(enumerate_games(n))
    done: Set[str] = set()
    sink_path = Path(sink) if sink else None
    if sink_path is not None:
        sink_path.parent.mkdir(parents=True, exist_ok=True)
        _repair_sink(sink_path)
        done = _done_ids(sink_path)
        if done:
            logger.info("[search] resuming: %d records already in %s", len(done), sink_path)
    todo = [g for g in todo if g.game_id not in done]
    logger.info("[search] %d games to evaluate with %s", len(todo), ", ".join(resources))

    out = open(sink_path, "a", encoding="utf-8") if sink_path is not None else None
    bar = tqdm(total=len(todo), desc=f"n={n} games", disable=not progress)
    try:
        for line in _ordered_results(todo, resources, config, threads, inject_witnesses):
            if out is not None:
                out.write(line + "\n")
                out.flush()
            bar.update(1)
            yield SearchRecord.from_dict(json.loads(line))
    finally:
        bar.close()
        if out is not None:
            out.close()


def _ordered_results(
    todo: List[GameSpec],
    resources: List[str],
    config: OptimizeConfig,
    threads: int,
    inject: bool,
) -> Iterator[str]:
    if threads <= 1:
        for game in todo:
            yield evaluate_game(game, resources, config, inject).to_json()
        return

    cfg = config.model_dump()
    with ProcessPoolExecutor(max_workers=min(threads, os.cpu_count() or threads)) as pool:
        futures = {
            pool.submit(_evaluate_task, g.n, g.f.bits, g.g.bits, resources, cfg, inject): k
            for k, g in enumerate(todo)
        }
        buffered: Dict[int, str] = {}
        next_k = 0
        for fut in as_completed(futures):
            buffered[futures[fut]] = fut.result()
            while next_k in buffered:
                yield buffered.pop(next_k)
                next_k += 1


# ──────────────────────────────────────────────────────────────────────────────
# Reporting
# ──────────────────────────────────────────────────────────────────────────────


def filter_max_gap(
    records: Iterable[SearchRecord],
    classical_target: Fraction = MAX_GAP_TARGET,
    quantum_floor: float = MAX_GAP_FLOOR,
    resource: Optional[str] = None,
) -> List[SearchRecord]:
    return [
        r
        for r in records
        if r.classical_value == classical_target and r.value(resource) >= quantum_floor
    ]


def classify_types(records: Iterable[SearchRecord]) -> Dict[str, List[SearchRecord]]:
    """Split three-player max-gap records into first / second type.

    Anything matching neither family lands in ``unclassified``.
    """
    first = set(witnesses.first_type_games())
    second = set(witnesses.second_type_games())
    groups: Dict[str, List[SearchRecord]] = {"first": [], "second": [], "unclassified": []}
    for r in records:
        if r.game in first:
            groups["first"].append(r)
        elif r.game in second:
            groups["second"].append(r)
        else:
            groups["unclassified"].append(r)
    return groups


def resource_comparison(
    records: Iterable[SearchRecord], margin: float = ADVANTAGE_MARGIN
) -> pd.DataFrame:
    """Games where W beats the classical optimum, with the GHZ value alongside.

    Sorted by W value ascending.
    """
    rows = []
    for r in records:
        w, ghz = r.value("w"), r.value("ghz")
        if w > float(r.classical_value) + margin:
            rows.append(
                {
                    "equation": str(r.game),
                    "classical": float(r.classical_value),
                    "w": w,
                    "ghz": ghz,
                }
            )
    frame = pd.DataFrame(rows, columns=["equation", "classical", "w", "ghz"])
    return frame.sort_values("w", kind="mergesort").reset_index(drop=True)
