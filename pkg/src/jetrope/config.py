"""
Suite configuration files
=========================

Plain-text key/value files with sections (INI syntax).  An empty file is
a valid configuration: every key has a default.  Unknown sections or
keys are rejected, malformed lines report their line number, and
semantic validation errors name the offending field.  ``config_dumps``
writes the canonical form (fixed section and key order, repr floats), so
serialize(parse(file)) round-trips exactly.

Recognized layout::

    [suite]     name, seed, out, figures
    [grids]     train_len, eval_len
    [params]    L, theta, omega, lambda, n_frequencies
    [methods]   list            (comma separated; omit for suite default)
    [laws]      trials
    [taskgen]   count, lengths, kernels
    [norms]     max_position, order, variant, c, gamma, eta
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, fields
from pathlib import Path

from .synthetic import KERNEL_KINDS
from .transforms import LAYOUT_VARIANTS

SUITE_NAMES = ("laws", "basis_mixed", "structured", "high_jet", "matched_jet",
               "norms", "taskgen")


class ConfigError(ValueError):
    """Raised for unparsable or invalid configuration input."""


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "laws"
    seed: int = 0
    out: str = "runs"
    figures: bool = True
    train_len: int = 1024
    eval_len: int = 8192
    L: float = 1024.0
    theta: float = 10000.0
    omega: float = 0.05
    ridge_lambda: float = 1e-8
    n_frequencies: int = 8
    methods: tuple[str, ...] | None = None
    laws_trials: int = 300
    taskgen_count: int = 200
    taskgen_lengths: tuple[int, ...] = (256, 1024)
    taskgen_kernels: tuple[str, ...] = KERNEL_KINDS
    norms_max_position: int = 2048
    norms_order: int = 3
    norms_variant: str = "scaled"
    norms_c: float = 0.5
    norms_gamma: float = 0.0024
    norms_eta: float = 0.104


# (section, key) -> (field name, parser); parsers raise ValueError on bad input.
def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_str_tuple(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _parse_int_tuple(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


_SCHEMA = {
    ("suite", "name"): ("suite", str),
    ("suite", "seed"): ("seed", int),
    ("suite", "out"): ("out", str),
    ("suite", "figures"): ("figures", _parse_bool),
    ("grids", "train_len"): ("train_len", int),
    ("grids", "eval_len"): ("eval_len", int),
    ("params", "L"): ("L", float),
    ("params", "theta"): ("theta", float),
    ("params", "omega"): ("omega", float),
    ("params", "lambda"): ("ridge_lambda", float),
    ("params", "n_frequencies"): ("n_frequencies", int),
    ("methods", "list"): ("methods", _parse_str_tuple),
    ("laws", "trials"): ("laws_trials", int),
    ("taskgen", "count"): ("taskgen_count", int),
    ("taskgen", "lengths"): ("taskgen_lengths", _parse_int_tuple),
    ("taskgen", "kernels"): ("taskgen_kernels", _parse_str_tuple),
    ("norms", "max_position"): ("norms_max_position", int),
    ("norms", "order"): ("norms_order", int),
    ("norms", "variant"): ("norms_variant", str),
    ("norms", "c"): ("norms_c", float),
    ("norms", "gamma"): ("norms_gamma", float),
    ("norms", "eta"): ("norms_eta", float),
}

# Keys in canonical emission order, grouped by section.
_CANONICAL_ORDER = [
    ("suite", ("name", "seed", "out", "figures")),
    ("grids", ("train_len", "eval_len")),
    ("params", ("L", "theta", "omega", "lambda", "n_frequencies")),
    ("methods", ("list",)),
    ("laws", ("trials",)),
    ("taskgen", ("count", "lengths", "kernels")),
    ("norms", ("max_position", "order", "variant", "c", "gamma", "eta")),
]


def validate(config: SuiteConfig) -> SuiteConfig:
    """Semantic checks; every error message names the failing field."""
    from .features import parse_method  # local import to avoid a cycle

    def fail(name, message):
        raise ConfigError(f"invalid {name}: {message}")

    if config.suite not in SUITE_NAMES:
        fail("suite", f"must be one of {', '.join(SUITE_NAMES)}")
    if config.seed < 0:
        fail("seed", "must be nonnegative")
    if config.train_len < 2:
        fail("train_len", "must be at least 2")
    if config.eval_len < config.train_len:
        fail("eval_len", "must be at least train_len")
    if config.L <= 0:
        fail("L", "must be positive")
    if config.theta <= 1:
        fail("theta", "must exceed 1")
    if config.ridge_lambda < 0:
        fail("lambda", "must be nonnegative")
    if config.n_frequencies < 1:
        fail("n_frequencies", "must be at least 1")
    if config.methods is not None:
        for method in config.methods:
            try:
                parse_method(method)
            except ValueError as exc:
                fail("methods", str(exc))
    if config.laws_trials < 1:
        fail("laws.trials", "must be at least 1")
    if config.taskgen_count < 1:
        fail("taskgen.count", "must be at least 1")
    if any(t < 2 for t in config.taskgen_lengths):
        fail("taskgen.lengths", "every length must be at least 2")
    for kind in config.taskgen_kernels:
        if kind not in KERNEL_KINDS:
            fail("taskgen.kernels", f"unknown kernel {kind!r}")
    if config.norms_max_position < 2:
        fail("norms.max_position", "must be at least 2")
    if config.norms_order < 1:
        fail("norms.order", "must be at least 1")
    if config.norms_variant not in LAYOUT_VARIANTS:
        fail("norms.variant", f"must be one of {', '.join(LAYOUT_VARIANTS)}")
    if config.norms_c < 0:
        fail("norms.c", "must be nonnegative")
    if config.norms_gamma < 0:
        fail("norms.gamma", "must be nonnegative")
    return config


def config_loads(text: str, suite: str | None = None) -> SuiteConfig:
    """Parse configuration text; ``suite`` (from the CLI) overrides [suite] name."""
    parser = configparser.ConfigParser(interpolation=None, strict=True)
    parser.optionxform = str  # keep key case ("L" is a key)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config parse error: {exc}") from exc

    values: dict[str, object] = {}
    for section in parser.sections():
        for key in parser[section]:
            lookup = (section, key)
            if lookup not in _SCHEMA:
                raise ConfigError(f"unknown config key [{section}] {key}")
            field_name, parse = _SCHEMA[lookup]
            raw = parser[section][key]
            try:
                values[field_name] = parse(raw)
            except ValueError as exc:
                raise ConfigError(f"invalid {lookup[1]}: {exc}") from exc
    if suite is not None:
        values["suite"] = suite
    return validate(SuiteConfig(**values))


def config_load(path: Path, suite: str | None = None) -> SuiteConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    return config_loads(path.read_text(), suite=suite)


def _format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ",".join(_format_value(v) for v in value)
    return str(value)


def config_dumps(config: SuiteConfig) -> str:
    """Canonical serialization (round-trips through config_loads exactly)."""
    by_field = {field_name: (section, key)
                for (section, key), (field_name, _) in _SCHEMA.items()}
    field_values = {f.name: getattr(config, f.name) for f in fields(config)}
    out = io.StringIO()
    for section, keys in _CANONICAL_ORDER:
        lines = []
        for key in keys:
            field_name = next(name for name, loc in by_field.items()
                              if loc == (section, key))
            value = field_values[field_name]
            if value is None:
                continue
            lines.append(f"{key} = {_format_value(value)}")
        if lines:
            out.write(f"[{section}]\n")
            out.write("\n".join(lines) + "\n\n")
    return out.getvalue()
