"""Scenario configuration: strict JSON schema with unknown-key rejection.

A scenario either sweeps one mode phase over a grid (``sweep`` block)
or runs grouped maximum-likelihood estimation at requested estimand
values (``theta_true`` list).  Silent typos are a classic failure mode
in physics configs, so every unknown key is an error and every message
names the offending field.  See docs/config_schema.md for the full
schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .probes import ModeLayout, Strategy, standard_layout

_TOP_KEYS = {
    "label",
    "strategy",
    "num_modes",
    "photons_per_mode",
    "passes_per_mode",
    "assignments",
    "grouping",
    "visibility",
    "theta_fixed",
    "sweep",
    "shots_per_point",
    "subset",
    "groups",
    "shots_per_group",
    "theta_true",
    "source",
    "reference_fi",
    "out_dir",
    "seed",
}
_SWEEP_KEYS = {"parameter", "start", "stop", "steps"}
_SOURCE_KEYS = {"pair_probability", "num_sources", "channel_efficiency", "pulses"}


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _reject_unknown(mapping: dict, allowed: set, where: str) -> None:
    unknown = sorted(set(mapping) - allowed)
    _require(not unknown, f"{where}: unknown key(s) {unknown}")


@dataclass(frozen=True)
class SweepSpec:
    """Grid over one mode phase: theta[parameter] from start to stop."""

    parameter: int
    start: float
    stop: float
    steps: int

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepSpec":
        _require(isinstance(raw, dict), "sweep: must be an object")
        _reject_unknown(raw, _SWEEP_KEYS, "sweep")
        for key in _SWEEP_KEYS:
            _require(key in raw, f"sweep.{key}: required")
        spec = cls(
            parameter=int(raw["parameter"]),
            start=float(raw["start"]),
            stop=float(raw["stop"]),
            steps=int(raw["steps"]),
        )
        _require(spec.parameter >= 1, "sweep.parameter: 1-based mode index")
        _require(spec.steps >= 2, "sweep.steps: need at least 2 grid points")
        _require(spec.stop != spec.start, "sweep: degenerate range (start == stop)")
        return spec

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "start": self.start,
            "stop": self.stop,
            "steps": self.steps,
        }


@dataclass(frozen=True)
class SourceSpec:
    """Optional pulsed-source block for acquisition scenarios."""

    pair_probability: float
    pulses: int
    num_sources: int = 3
    channel_efficiency: float | tuple[float, ...] = 1.0

    @classmethod
    def from_dict(cls, raw: dict) -> "SourceSpec":
        _require(isinstance(raw, dict), "source: must be an object")
        _reject_unknown(raw, _SOURCE_KEYS, "source")
        for key in ("pair_probability", "pulses"):
            _require(key in raw, f"source.{key}: required")
        eta = raw.get("channel_efficiency", 1.0)
        if isinstance(eta, list):
            eta = tuple(float(e) for e in eta)
        else:
            eta = float(eta)
        return cls(
            pair_probability=float(raw["pair_probability"]),
            pulses=int(raw["pulses"]),
            num_sources=int(raw.get("num_sources", 3)),
            channel_efficiency=eta,
        )

    def to_dict(self) -> dict:
        eta = self.channel_efficiency
        return {
            "pair_probability": self.pair_probability,
            "pulses": self.pulses,
            "num_sources": self.num_sources,
            "channel_efficiency": list(eta) if isinstance(eta, tuple) else eta,
        }


@dataclass(frozen=True)
class ScenarioConfig:
    label: str
    strategy: Strategy
    num_modes: int
    seed: int
    photons_per_mode: int | None = None
    passes_per_mode: tuple[int, ...] | None = None
    assignments: tuple[tuple[int, int], ...] | None = None
    grouping: tuple[tuple[int, ...], ...] | None = None
    visibility: float | tuple[float, ...] = 1.0
    theta_fixed: dict[int, float] = field(default_factory=dict)
    sweep: SweepSpec | None = None
    shots_per_point: int = 7000
    subset: tuple[int, ...] | None = None
    groups: int | None = None
    shots_per_group: int | None = None
    theta_true: tuple[float, ...] | None = None
    source: SourceSpec | None = None
    reference_fi: dict[str, float] = field(default_factory=dict)
    out_dir: str | None = None

    @property
    def kind(self) -> str:
        return "sweep" if self.sweep is not None else "estimation"

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioConfig":
        _require(isinstance(raw, dict), "config: must be a JSON object")
        _reject_unknown(raw, _TOP_KEYS, "config")
        for key in ("strategy", "num_modes", "seed"):
            _require(key in raw, f"{key}: required")
        try:
            strategy = Strategy(str(raw["strategy"]).lower())
        except ValueError:
            choices = sorted(s.value for s in Strategy)
            raise ConfigError(f"strategy: {raw['strategy']!r} not one of {choices}")

        theta_fixed = {}
        for key, value in (raw.get("theta_fixed") or {}).items():
            try:
                mode = int(key)
            except (TypeError, ValueError):
                raise ConfigError(f"theta_fixed: mode key {key!r} is not an integer")
            theta_fixed[mode] = float(value)

        visibility = raw.get("visibility", 1.0)
        if isinstance(visibility, list):
            visibility = tuple(float(v) for v in visibility)
        else:
            visibility = float(visibility)

        sweep = SweepSpec.from_dict(raw["sweep"]) if raw.get("sweep") else None
        theta_true = raw.get("theta_true")
        if theta_true is not None:
            _require(
                isinstance(theta_true, list) and len(theta_true) >= 1,
                "theta_true: non-empty list of estimand values",
            )
            theta_true = tuple(float(t) for t in theta_true)
        _require(
            (sweep is None) != (theta_true is None),
            "config: provide exactly one of 'sweep' or 'theta_true'",
        )

        assignments = raw.get("assignments")
        if assignments is not None:
            assignments = tuple((int(m), int(j)) for m, j in assignments)
        grouping = raw.get("grouping")
        if grouping is not None:
            grouping = tuple(tuple(int(p) for p in g) for g in grouping)
        _require(
            (assignments is None) == (grouping is None),
            "config: 'assignments' and 'grouping' must be given together",
        )
        if strategy is Strategy.GENERIC:
            _require(assignments is not None, "generic strategy: explicit layout required")

        passes = raw.get("passes_per_mode")
        if passes is not None:
            passes = tuple(int(j) for j in passes)

        subset = raw.get("subset")
        if subset is not None:
            subset = tuple(int(p) for p in subset)

        reference_fi = {
            str(k): float(v) for k, v in (raw.get("reference_fi") or {}).items()
        }

        config = cls(
            label=str(raw.get("label", "scenario")),
            strategy=strategy,
            num_modes=int(raw["num_modes"]),
            seed=int(raw["seed"]),
            photons_per_mode=(
                int(raw["photons_per_mode"]) if "photons_per_mode" in raw else None
            ),
            passes_per_mode=passes,
            assignments=assignments,
            grouping=grouping,
            visibility=visibility,
            theta_fixed=theta_fixed,
            sweep=sweep,
            shots_per_point=int(raw.get("shots_per_point", 7000)),
            subset=subset,
            groups=int(raw["groups"]) if "groups" in raw else None,
            shots_per_group=(
                int(raw["shots_per_group"]) if "shots_per_group" in raw else None
            ),
            theta_true=theta_true,
            source=SourceSpec.from_dict(raw["source"]) if raw.get("source") else None,
            reference_fi=reference_fi,
            out_dir=str(raw["out_dir"]) if "out_dir" in raw else None,
        )
        config.validate()
        return config

    def validate(self) -> None:
        _require(self.num_modes >= 1, "num_modes: must be >= 1")
        _require(self.shots_per_point >= 0, "shots_per_point: must be >= 0")
        if self.sweep is not None:
            _require(
                1 <= self.sweep.parameter <= self.num_modes,
                f"sweep.parameter: mode {self.sweep.parameter} outside 1..{self.num_modes}",
            )
            for mode in self.theta_fixed:
                _require(
                    1 <= mode <= self.num_modes,
                    f"theta_fixed: mode {mode} outside 1..{self.num_modes}",
                )
                _require(
                    mode != self.sweep.parameter,
                    f"theta_fixed: mode {mode} is also the swept parameter",
                )
        if self.theta_true is not None:
            _require(self.groups is not None, "groups: required for estimation runs")
            _require(
                self.shots_per_group is not None,
                "shots_per_group: required for estimation runs",
            )
            _require(self.groups >= 2, "groups: need at least 2 groups")
            _require(self.shots_per_group >= 2, "shots_per_group: need at least 2")

    def build_layout(self) -> ModeLayout:
        if self.assignments is not None:
            return ModeLayout(self.num_modes, self.assignments, self.grouping)
        if self.strategy in (Strategy.MEPC, Strategy.MSPC):
            return standard_layout(
                self.strategy, self.num_modes, passes=self.passes_per_mode
            )
        _require(
            self.passes_per_mode is None,
            "passes_per_mode: only valid for the coherent strategies",
        )
        return standard_layout(
            self.strategy,
            self.num_modes,
            photons_per_mode=(
                self.photons_per_mode if self.photons_per_mode is not None else 2
            ),
        )

    def to_dict(self) -> dict:
        out: dict = {
            "label": self.label,
            "strategy": self.strategy.value,
            "num_modes": self.num_modes,
            "seed": self.seed,
        }
        if self.photons_per_mode is not None:
            out["photons_per_mode"] = self.photons_per_mode
        if self.passes_per_mode is not None:
            out["passes_per_mode"] = list(self.passes_per_mode)
        if self.assignments is not None:
            out["assignments"] = [list(a) for a in self.assignments]
            out["grouping"] = [list(g) for g in self.grouping]
        out["visibility"] = (
            list(self.visibility)
            if isinstance(self.visibility, tuple)
            else self.visibility
        )
        if self.theta_fixed:
            out["theta_fixed"] = {str(k): v for k, v in self.theta_fixed.items()}
        if self.sweep is not None:
            out["sweep"] = self.sweep.to_dict()
            out["shots_per_point"] = self.shots_per_point
        if self.subset is not None:
            out["subset"] = list(self.subset)
        if self.groups is not None:
            out["groups"] = self.groups
        if self.shots_per_group is not None:
            out["shots_per_group"] = self.shots_per_group
        if self.theta_true is not None:
            out["theta_true"] = list(self.theta_true)
        if self.source is not None:
            out["source"] = self.source.to_dict()
        if self.reference_fi:
            out["reference_fi"] = dict(self.reference_fi)
        if self.out_dir is not None:
            out["out_dir"] = self.out_dir
        return out


def load_config(path) -> ScenarioConfig:
    """Read and validate a scenario config from a JSON file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}")
    return ScenarioConfig.from_dict(raw)
