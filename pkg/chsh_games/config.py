"""Configuration for campaigns, optimizer runs and the CLI.

Defaults come from the environment (a `.env` file is honoured), a flat
`key=value` config file can override them, and explicit CLI flags override
both. Everything ends up in a validated pydantic model before any work
starts.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ConfigError

# ──────────────────────────────────────────────────────────────────────────────
# Configuration
# ──────────────────────────────────────────────────────────────────────────────

load_dotenv()
DEFAULT_SEED = int(os.getenv("CHSH_SEED", "20230221"))
DEFAULT_RESTARTS = int(os.getenv("CHSH_RESTARTS", "40"))
DEFAULT_MAX_EVALS = int(os.getenv("CHSH_MAX_EVALS", "2000"))
DEFAULT_TOL = float(os.getenv("CHSH_TOL", "1e-10"))
DEFAULT_SCREEN_SAMPLES = int(os.getenv("CHSH_SCREEN_SAMPLES", "1000"))
DEFAULT_METHOD = os.getenv("CHSH_METHOD", "nelder-mead")
DEFAULT_THREADS = int(os.getenv("CHSH_THREADS", "1"))
OUTPUT_DIR = os.getenv("CHSH_OUTPUT_DIR", "./results")

RESOURCE_NAMES = ("epr", "ghz", "w", "ghz-j")

# config-file spellings of CLI flags whose model field differs
FLAG_ALIASES = {"resource": "resources"}
TRUE_WORDS = ("1", "true", "yes", "on")
FALSE_WORDS = ("0", "false", "no", "off")

Method = Literal["nelder-mead", "bfgs", "cobyla"]


class OptimizeConfig(BaseModel):
    """Budget and seeding of one multistart optimization."""

    model_config = ConfigDict(frozen=True)

    restarts: int = Field(DEFAULT_RESTARTS, ge=1)
    max_evals: int = Field(DEFAULT_MAX_EVALS, ge=1)
    tolerance: float = Field(DEFAULT_TOL, gt=0)
    seed: int = Field(DEFAULT_SEED, ge=0, lt=2**64)
    screen_samples: int = Field(DEFAULT_SCREEN_SAMPLES, ge=0)
    method: Method = DEFAULT_METHOD
    polish: bool = True


class RunConfig(BaseModel):
    """Parameters shared by the CLI subcommands."""

    model_config = ConfigDict(frozen=True)

    arity: int = Field(3, ge=1, le=4)
    resources: List[str] = Field(default_factory=lambda: ["ghz"])
    seed: int = Field(DEFAULT_SEED, ge=0, lt=2**64)
    restarts: int = Field(DEFAULT_RESTARTS, ge=1)
    max_evals: int = Field(DEFAULT_MAX_EVALS, ge=1)
    tol: float = Field(DEFAULT_TOL, gt=0)
    screen_samples: int = Field(DEFAULT_SCREEN_SAMPLES, ge=0)
    method: Method = DEFAULT_METHOD
    polish: bool = True
    threads: int = Field(DEFAULT_THREADS, ge=1)
    out: Optional[str] = None

    @field_validator("resources", mode="before")
    @classmethod
    def _split_resources(cls, value: Any) -> Any:
        if isinstance(value, str):
            value = [part.strip() for part in value.split(",") if part.strip()]
        return value

    @field_validator("resources")
    @classmethod
    def _known_resources(cls, value: List[str]) -> List[str]:
        unknown = [name for name in value if name not in RESOURCE_NAMES]
        if unknown:
            raise ValueError(
                f"unknown resource(s) {unknown}; expected one of {RESOURCE_NAMES}"
            )
        if not value:
            raise ValueError("at least one resource is required")
        return value

    def optimize_config(self) -> OptimizeConfig:
        return OptimizeConfig(
            restarts=self.restarts,
            max_evals=self.max_evals,
            tolerance=self.tol,
            seed=self.seed,
            screen_samples=self.screen_samples,
            method=self.method,
            polish=self.polish,
        )


# ──────────────────────────────────────────────────────────────────────────────
# Config file handling
# ──────────────────────────────────────────────────────────────────────────────


def read_config_file(path: str) -> Dict[str, str]:
    """Parse a flat ``key=value`` file.

    Keys are normalised to snake_case and may use the CLI flag spellings
    (``resource``, ``no-polish``).
    """
    values: Dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file {path!r}: {e}") from e

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip().lstrip("-").replace("-", "_")
        value = value.strip()
        if key == "no_polish":
            flag = value.lower()
            if flag not in TRUE_WORDS + FALSE_WORDS:
                raise ConfigError(
                    f"{path}:{lineno}: no-polish expects true or false, got {value!r}"
                )
            key, value = "polish", "false" if flag in TRUE_WORDS else "true"
        values[FLAG_ALIASES.get(key, key)] = value
    return values


def build_run_config(
    config_path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None
) -> RunConfig:
    """Merge environment defaults, the optional config file and CLI overrides.

    Args:
        config_path: flat ``key=value`` file, or None.
        overrides: values given explicitly on the command line; ``None``
            entries mean "not given" and do not override anything.

    Returns:
        RunConfig: the validated configuration.

    Raises:
        ConfigError: if the file is unreadable or any value is invalid.
    """
    merged: Dict[str, Any] = {}
    if config_path:
        merged.update(read_config_file(config_path))
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    known = set(RunConfig.model_fields)
    stray = sorted(set(merged) - known)
    if stray:
        raise ConfigError(f"unknown config key(s): {', '.join(stray)}")

    try:
        return RunConfig(**merged)
    except ValidationError as e:
        raise ConfigError(str(e)) from e
