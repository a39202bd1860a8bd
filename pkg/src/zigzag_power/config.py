"""Study configuration files.

A config is a YAML mapping; every key is optional::

    replicates: 10000
    alpha: 0.01
    sample_sizes: [10, 20, 30, 50, 100, 200]
    seed: 8675309
    statistics: [pearson-chi-square, discrete-ks]
    null: zigzag-null                 # catalog token, "uniform:<k>", or {label, probs}
    alternatives:
      - decreasing
      - {label: skewed, probs: [0.3, 0.1, 0.1, 0.1, 0.1, 0.1, 0.05, 0.05, 0.05, 0.05]}
    output: results
    formats: [csv, json]
    workers: 1

An empty file gives the full default study: zig-zag null, the seven catalog
alternatives, 10,000 replicates, alpha = 0.01.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import yaml

from .distributions import (
    ALTERNATIVE_NAMES,
    CATALOG_NAMES,
    CellProbabilities,
    catalog,
    make_cell_probabilities,
    uniform,
)
from .errors import (
    ConfigSyntaxError,
    DimensionMismatch,
    GofError,
    InvalidParameter,
    UnknownDistributionName,
)
from .power import SimulationPlan

OUTPUT_ENV = "ZIGZAG_POWER_OUT"
DEFAULT_OUTPUT = "results"
FORMATS = ("csv", "json")

_PLAN_KEYS = ("replicates", "alpha", "sample_sizes", "seed", "statistics")
_KEYS = _PLAN_KEYS + ("null", "alternatives", "output", "formats", "workers")


@dataclass(frozen=True)
class DistributionRef:
    """A distribution named by catalog token (``probs`` is None) or given explicitly."""

    label: str
    probs: tuple[float, ...] | None = None

    def resolve(self) -> CellProbabilities:
        if self.probs is not None:
            return make_cell_probabilities(self.probs, self.label)
        return resolve_name(self.label)

    def to_data(self):
        if self.probs is None:
            return self.label
        return {"label": self.label, "probs": list(self.probs)}


def resolve_name(token: str) -> CellProbabilities:
    """Catalog token or ``uniform:<k>``."""
    if token in CATALOG_NAMES:
        return catalog(token).resolved
    if token.startswith("uniform:"):
        try:
            k = int(token.split(":", 1)[1])
        except ValueError:
            raise UnknownDistributionName(f"bad uniform token {token!r}; use uniform:<k>") from None
        return uniform(k, token)
    raise UnknownDistributionName(
        f"unknown distribution {token!r}; expected uniform:<k> or one of {', '.join(CATALOG_NAMES)}"
    )


def parse_distribution_arg(text: str, label: str) -> DistributionRef:
    """Command-line form: a name, or comma-separated probabilities."""
    text = text.strip()
    if "," in text:
        try:
            probs = tuple(float(v) for v in text.split(","))
        except ValueError:
            raise InvalidParameter(f"cannot parse probabilities {text!r}") from None
        ref = DistributionRef(label, probs)
    else:
        ref = DistributionRef(text)
    ref.resolve()
    return ref


def _default_output() -> str:
    return os.environ.get(OUTPUT_ENV, DEFAULT_OUTPUT)


@dataclass(frozen=True)
class StudyConfig:
    plan: SimulationPlan = field(default_factory=SimulationPlan)
    null: DistributionRef = DistributionRef("zigzag-null")
    alternatives: tuple[DistributionRef, ...] = tuple(DistributionRef(n) for n in ALTERNATIVE_NAMES)
    output: str = field(default_factory=_default_output)
    formats: tuple[str, ...] = ("csv",)
    workers: int = 1

    def resolve(self) -> tuple[CellProbabilities, list[CellProbabilities]]:
        null = self.null.resolve()
        alternatives = [ref.resolve() for ref in self.alternatives]
        for alt in alternatives:
            if alt.k != null.k:
                raise DimensionMismatch(f"alternative {alt.label!r} has {alt.k} cells, null {null.label!r} has {null.k}")
        return null, alternatives


def _distribution_from_data(value, what: str, default_label: str | None = None) -> DistributionRef:
    if isinstance(value, str):
        return DistributionRef(value)
    if isinstance(value, list):
        if default_label is None:
            raise InvalidParameter(f"{what}: explicit probabilities need a label; use {{label: ..., probs: [...]}}")
        value = {"label": default_label, "probs": value}
    if isinstance(value, dict):
        unknown = set(value) - {"label", "probs"}
        if unknown or "probs" not in value:
            raise InvalidParameter(f"{what}: expected keys label and probs, got {sorted(value)}")
        label = value.get("label", default_label)
        if not isinstance(label, str) or not label:
            raise InvalidParameter(f"{what}: label must be a non-empty string")
        probs = value["probs"]
        if not isinstance(probs, list) or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in probs
        ):
            raise InvalidParameter(f"{what}: probs must be a list of numbers")
        return DistributionRef(label, tuple(float(v) for v in probs))
    raise InvalidParameter(f"{what}: expected a name or a {{label, probs}} mapping, got {value!r}")


def parse_config(source: str) -> StudyConfig:
    """Parse and validate config text, filling defaults.

    Raises
    ------
    ConfigSyntaxError
        Malformed YAML (with line and column) or a non-mapping document.
    UnknownDistributionName, DimensionMismatch, InvalidParameter
        Semantic problems.
    """
    try:
        data = yaml.safe_load(source)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line, col = (mark.line + 1, mark.column + 1) if mark is not None else (None, None)
        raise ConfigSyntaxError(exc.problem or str(exc), line, col) from None
    except yaml.YAMLError as exc:
        raise ConfigSyntaxError(str(exc)) from None
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigSyntaxError("top level of a config must be a mapping", 1, 1)
    # an unquoted `null:` key loads as None
    if None in data:
        if "null" in data:
            raise InvalidParameter("null given twice")
        data["null"] = data.pop(None)
    unknown = sorted(set(map(str, data)) - set(_KEYS))
    if unknown:
        raise InvalidParameter(f"unknown config keys: {', '.join(unknown)}")

    plan_kwargs = {}
    for key in _PLAN_KEYS:
        if key in data:
            value = data[key]
            if key in ("sample_sizes", "statistics") and not isinstance(value, list):
                raise InvalidParameter(f"{key} must be a list")
            plan_kwargs[key] = tuple(value) if isinstance(value, list) else value
    try:
        plan = SimulationPlan(**plan_kwargs)
    except TypeError as exc:
        raise InvalidParameter(str(exc)) from None

    kwargs = {"plan": plan}
    if "null" in data:
        kwargs["null"] = _distribution_from_data(data["null"], "null", default_label="null")
    if "alternatives" in data:
        alts = data["alternatives"]
        if not isinstance(alts, list) or not alts:
            raise InvalidParameter("alternatives must be a non-empty list")
        refs = tuple(_distribution_from_data(a, f"alternatives[{i}]") for i, a in enumerate(alts))
        labels = [r.label for r in refs]
        if len(set(labels)) != len(labels):
            raise InvalidParameter(f"alternative labels must be distinct: {labels}")
        kwargs["alternatives"] = refs
    if "output" in data:
        if not isinstance(data["output"], str) or not data["output"]:
            raise InvalidParameter("output must be a non-empty path string")
        kwargs["output"] = data["output"]
    if "formats" in data:
        formats = data["formats"]
        if not isinstance(formats, list) or not formats or not set(formats) <= set(FORMATS):
            raise InvalidParameter(f"formats must be a non-empty subset of {list(FORMATS)}")
        kwargs["formats"] = tuple(f for f in FORMATS if f in formats)
    if "workers" in data:
        workers = data["workers"]
        if isinstance(workers, bool) or not isinstance(workers, int) or workers < 1:
            raise InvalidParameter(f"workers must be a positive integer, got {workers!r}")
        kwargs["workers"] = workers

    config = StudyConfig(**kwargs)
    try:
        config.resolve()
    except (UnknownDistributionName, DimensionMismatch):
        raise
    except GofError as exc:
        raise InvalidParameter(f"invalid distribution: {exc}") from exc
    return config


def load_config(path) -> StudyConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def dump_config(config: StudyConfig) -> str:
    """Canonical YAML form; ``parse_config(dump_config(c)) == c``."""
    plan = config.plan
    data = {
        "replicates": plan.replicates,
        "alpha": plan.alpha,
        "sample_sizes": list(plan.sample_sizes),
        "seed": plan.seed,
        "statistics": [k.value for k in plan.statistics],
        "null": config.null.to_data(),
        "alternatives": [ref.to_data() for ref in config.alternatives],
        "output": config.output,
        "formats": list(config.formats),
        "workers": config.workers,
    }
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)
