"""Define the configurable parameters for the verification library."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

from dotenv import dotenv_values

logger = logging.getLogger(__name__)

ENV_PREFIX = "GRASSVOL_"
CONFIG_ENV_VAR = "GRASSVOL_CONFIG"

_TRUE_STRINGS = ("true", "1", "yes", "on")
_FALSE_STRINGS = ("false", "0", "no", "off")

MC_LAWS = ("haar", "entrywise")


class ConfigError(ValueError):
    """Raised when a configuration source cannot be parsed."""


@dataclass(kw_only=True)
class Context:
    """Tolerances, seeds and sizes shared by every verification routine."""

    seed: int = field(
        default=42,
        metadata={
            "description": "Base seed for every random stream. "
            "Monte-Carlo chunks and random trials derive their own streams from it.",
        },
    )

    linalg_tol: float = field(
        default=1e-10,
        metadata={
            "description": "Tolerance for dense algebra results such as eigen "
            "reconstruction and unitarity of matrix exponentials.",
        },
    )

    predicate_tol: float = field(
        default=1e-9,
        metadata={
            "description": "Tolerance used by the projection, unitarity and "
            "Hermiticity predicates.",
        },
    )

    kernel_tol: float = field(
        default=1e-7,
        metadata={
            "description": "Integer-rounding tolerance for eigenvalues of kernel "
            "elements of the exponential map.",
        },
    )

    workers: int = field(
        default=1,
        metadata={
            "description": "Number of worker threads for Monte-Carlo chunks and suite checks.",
        },
    )

    mc_samples: int = field(
        default=1_000_000,
        metadata={
            "description": "Number of importance samples per Monte-Carlo volume estimate.",
        },
    )

    mc_chunk: int = field(
        default=65_536,
        metadata={
            "description": "Samples per Monte-Carlo chunk. Each chunk owns one RNG stream.",
        },
    )

    mc_law: str = field(
        default="haar",
        metadata={
            "description": "Sampling law for Monte-Carlo volumes: \"haar\" draws exact "
            "Haar chart coordinates and inverts a bounded ratio; \"entrywise\" draws each "
            "coordinate from 1/(pi (1+|z|^2)^2) and averages the raw weights.",
        },
    )

    trials: int = field(
        default=50,
        metadata={
            "description": "Number of random trials for randomized identity checks.",
        },
    )

    holonomy_steps: int = field(
        default=4096,
        metadata={
            "description": "Number of segments of a discretized parameter loop.",
        },
    )

    fd_step: float = field(
        default=1e-5,
        metadata={
            "description": "Central finite-difference step for connection components.",
        },
    )

    max_qubits: int = field(
        default=10,
        metadata={
            "description": "Upper bound on the wire count of dense gate matrices.",
        },
    )

    suite_qubits: int = field(
        default=4,
        metadata={
            "description": "Largest wire count exercised by the gate identity suite.",
        },
    )

    max_pauli_dim: int = field(
        default=12,
        metadata={
            "description": "Largest dimension exercised by the clock/shift identity suite.",
        },
    )

    record_timings: bool = field(
        default=False,
        metadata={
            "description": "Whether verification records carry wall-clock runtimes. "
            "When off, runtime_ms is 0.0 and reports are byte-reproducible.",
        },
    )

    log_level: str = field(
        default="WARNING",
        metadata={
            "description": "Logging level name used by the command-line entry point.",
        },
    )

    def __post_init__(self) -> None:
        """Fetch env vars for attributes that were not passed as args."""
        for f in fields(self):
            if not f.init:
                continue

            current_value = getattr(self, f.name)
            default_value = f.default
            env_value = os.environ.get(f"{ENV_PREFIX}{f.name.upper()}")

            # Only override with environment variable if current value equals default
            # so explicit keyword arguments keep precedence
            if current_value == default_value and env_value is not None:
                setattr(self, f.name, _coerce(f.name, env_value, default_value))

        self._validate()

    def _validate(self) -> None:
        for name in ("linalg_tol", "predicate_tol", "kernel_tol", "fd_step"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        for name in ("workers", "mc_samples", "mc_chunk", "trials", "holonomy_steps"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be at least 1, got {getattr(self, name)}")
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")
        if self.mc_law not in MC_LAWS:
            raise ConfigError(f"mc_law must be one of {MC_LAWS}, got {self.mc_law!r}")
        if logging.getLevelName(self.log_level.upper()) == f"Level {self.log_level.upper()}":
            raise ConfigError(f"Unknown log level {self.log_level!r}")

    def with_overrides(self, **overrides: Any) -> Context:
        """Return a copy with the non-None overrides applied."""
        applied = {key: value for key, value in overrides.items() if value is not None}
        unknown = set(applied) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {sorted(unknown)}")
        updated = replace(self, **applied)
        # replace() re-runs __post_init__, which would let env shadow a flag equal to its default
        for key, value in applied.items():
            setattr(updated, key, value)
        updated._validate()
        return updated

    @classmethod
    def from_file(cls, path: str | Path) -> Context:
        """Load a flat ``key=value`` config file on top of env and defaults.

        Args:
            path: Location of the config file.

        Raises:
            ConfigError: When the file is missing, names an unknown key or holds
                a value that does not parse as the field's type.
        """
        path = Path(path)
        if not path.is_file():
            raise ConfigError(f"Config file not found: {path}")

        known = {f.name: f.default for f in fields(cls)}
        values: dict[str, Any] = {}
        for raw_key, raw_value in dotenv_values(path).items():
            key = raw_key.lower().removeprefix(ENV_PREFIX.lower())
            if key not in known:
                raise ConfigError(f"Unknown configuration key {raw_key!r} in {path}")
            if raw_value is None:
                raise ConfigError(f"Missing value for {raw_key!r} in {path}")
            values[key] = _coerce(key, raw_value, known[key])

        logger.info(f"Loaded {len(values)} settings from {path}")
        context = cls()
        # set after construction so env cannot shadow a file value equal to the default
        for key, value in values.items():
            setattr(context, key, value)
        context._validate()
        return context

    @classmethod
    def from_sources(
        cls, config_path: str | Path | None = None, **overrides: Any
    ) -> Context:
        """Resolve the effective configuration.

        Precedence is flags > config file > environment > defaults. When no
        ``config_path`` is given, ``GRASSVOL_CONFIG`` names the file.
        """
        config_path = config_path or os.environ.get(CONFIG_ENV_VAR)
        base = cls.from_file(config_path) if config_path else cls()
        return base.with_overrides(**overrides)


def _coerce(name: str, raw: str, default: Any) -> Any:
    """Parse a string setting into the type of its default."""
    text = raw.strip()
    try:
        if isinstance(default, bool):
            lowered = text.lower()
            if lowered in _TRUE_STRINGS:
                return True
            if lowered in _FALSE_STRINGS:
                return False
            raise ValueError(text)
        if isinstance(default, int):
            return int(text.replace("_", ""))
        if isinstance(default, float):
            return float(text)
    except ValueError as exc:
        raise ConfigError(f"Cannot parse {name}={raw!r}") from exc
    return text
