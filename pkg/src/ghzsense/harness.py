"""Config-driven scenario runner: sweeps, estimation runs, reproductions.

Every run is deterministic given the config's seed: per-point sampling
seeds derive from one seed sequence, outputs are written with fixed
float formatting, and the report echoes the full config so it can be
re-run bit-identically.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .config import ScenarioConfig
from .errors import ConfigError, UnknownFigureError, UnsupportedLayoutError
from .estimation import (
    FringeModel,
    crb,
    db_reduction,
    effective_fi,
    fisher_matrix,
    fit_fringe,
    infer_multiplier,
    repeat_estimation,
    theoretical_limits,
)
from .evolution import apply_phases
from .measurement import (
    outcome_distribution,
    parity_counts,
    sample_counts,
    subset_parity_marginal,
)
from .probes import make_probe, weights
from . import svgplot

SWEEP_COLUMNS = (
    "theta_hat",
    "p_plus_exact",
    "p_minus_exact",
    "p_plus_sampled",
    "p_minus_sampled",
    "fi_model",
    "fi_fit_lo90",
    "fi_fit_hi90",
)

ESTIMATION_COLUMNS = (
    "theta_true",
    "theta_hat_mean",
    "std_dev",
    "std_dev_error",
    "crb_model",
    "crb_ideal",
    "snl_rmse",
)

FIGURES = ("fig3", "fig4", "fig5", "ext1")

def _ref_style(name: str) -> tuple[str, str]:
    """Caption-convention styling: separable refs dotted black, block
    limits red dash-dot, per-mode limits blue dashed."""
    lowered = name.lower()
    if "snl" in lowered:
        return "#000000", "dot"
    if "meps" in lowered or "mspc" in lowered:
        return "#d62728", "dashdot"
    return "#1f77b4", "dash"


@dataclass(frozen=True)
class RunReport:
    """Self-contained result of one scenario run."""

    kind: str
    config: dict
    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]
    fit: dict | None
    metrics: dict
    seed: int
    versions: dict

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "config": self.config,
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
            "fit": self.fit,
            "metrics": self.metrics,
            "seed": self.seed,
            "versions": self.versions,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow(format(v, ".12g") for v in row)
        return buf.getvalue()


def _versions() -> dict:
    return {"ghzsense": __version__, "numpy": np.__version__}


def _point_seeds(seed: int, count: int) -> list[int]:
    """Per-point integer seeds derived from the scenario seed."""
    state = np.random.SeedSequence(seed).generate_state(count, dtype=np.uint64)
    return [int(s) for s in state]


def _theta_at(config: ScenarioConfig, value: float) -> np.ndarray:
    theta = np.zeros(config.num_modes)
    for mode, fixed in config.theta_fixed.items():
        theta[mode - 1] = fixed
    theta[config.sweep.parameter - 1] = value
    return theta


def _resolve_subset(config: ScenarioConfig, probe, layout):
    """The fringe subset must be the photon set of exactly one group."""
    group_sets = [tuple(sorted(g.photon_ids)) for g in probe.groups]
    if config.subset is None:
        if len(group_sets) == 1:
            return group_sets[0], 0
        raise ConfigError(
            "subset: required when the probe has several groups; "
            f"choose one of {group_sets}"
        )
    chosen = tuple(sorted(config.subset))
    if chosen not in group_sets:
        raise ConfigError(
            f"subset: {list(chosen)} is not a whole entanglement group "
            f"(groups are {group_sets})"
        )
    return chosen, group_sets.index(chosen)


def run_sweep(config: ScenarioConfig) -> RunReport:
    """Sweep one mode phase: exact and sampled fringes, fit, FI curve."""
    if config.sweep is None:
        raise ConfigError("sweep: required for run_sweep")
    layout = config.build_layout()
    probe = make_probe(config.strategy, layout, config.visibility)
    alpha = weights(layout)
    subset, group_index = _resolve_subset(config, probe, layout)

    param = config.sweep.parameter
    alpha_p = float(alpha[param - 1])
    if alpha_p == 0.0:
        raise ConfigError(f"sweep.parameter: mode {param} carries zero weight")
    coeff = probe.groups[group_index].phase_coefficients(config.num_modes)
    if coeff[param - 1] == 0.0:
        raise ConfigError(
            f"subset: group {list(subset)} is insensitive to swept mode {param}"
        )
    multiplier = float(coeff[param - 1] / alpha_p)

    grid = np.linspace(config.sweep.start, config.sweep.stop, config.sweep.steps)
    seeds = _point_seeds(config.seed, config.sweep.steps)
    theta_hat = np.empty(config.sweep.steps)
    exact = np.empty((config.sweep.steps, 2))
    sampled = np.empty((config.sweep.steps, 2))
    for i, value in enumerate(grid):
        theta = _theta_at(config, value)
        theta_hat[i] = float(alpha @ theta)
        dist = outcome_distribution(apply_phases(probe, theta))
        exact[i] = subset_parity_marginal(dist, subset)
        counts = parity_counts(
            sample_counts(dist, config.shots_per_point, seeds[i]), subset
        )
        sampled[i] = counts.counts / max(config.shots_per_point, 1)

    fit = fit_fringe(theta_hat, sampled[:, 0], sampled[:, 1], multiplier)
    fitted_multiplier = infer_multiplier(theta_hat, sampled[:, 0], sampled[:, 1])

    v_bar = np.sqrt((fit.v_plus**2 + fit.v_minus**2) / 2.0)
    dv = (
        np.sqrt((fit.v_plus * fit.conf90[0]) ** 2 + (fit.v_minus * fit.conf90[1]) ** 2)
        / (2.0 * v_bar)
        if v_bar > 0
        else 0.0
    )
    ceiling = 1.0 - 1e-12
    v_mid = min(max(v_bar, 0.0), ceiling)
    v_lo = min(max(v_bar - dv, 0.0), ceiling)
    v_hi = min(v_bar + dv, ceiling)

    fi_bands = np.empty((config.sweep.steps, 3))
    for j, v in enumerate((v_mid, v_lo, v_hi)):
        model_probe = probe.with_coherence(v)
        for i, value in enumerate(grid):
            theta = _theta_at(config, value)
            fisher = fisher_matrix(model_probe, layout, theta)
            fi_bands[i, j] = effective_fi(fisher, alpha)

    rows = tuple(
        (
            theta_hat[i],
            exact[i, 0],
            exact[i, 1],
            sampled[i, 0],
            sampled[i, 1],
            fi_bands[i, 0],
            fi_bands[i, 1],
            fi_bands[i, 2],
        )
        for i in range(config.sweep.steps)
    )

    metrics: dict = {
        "multiplier": multiplier,
        "fitted_multiplier": fitted_multiplier,
        "visibility_fit": float(v_mid),
        "fi_peak_model": float(np.max(fi_bands[:, 0])),
    }
    try:
        limits = theoretical_limits(config.strategy, layout)
    except UnsupportedLayoutError:
        limits = None
    if limits is not None:
        metrics["theoretical"] = limits
        metrics["db_vs_snl"] = db_reduction(
            metrics["fi_peak_model"], limits["snl_fi"]
        )

    fit_dict = {
        "v_plus": fit.v_plus,
        "v_minus": fit.v_minus,
        "offset": fit.offset,
        "conf90": list(fit.conf90),
        "residual": fit.residual,
    }
    return RunReport(
        kind="sweep",
        config=config.to_dict(),
        columns=SWEEP_COLUMNS,
        rows=rows,
        fit=fit_dict,
        metrics=metrics,
        seed=config.seed,
        versions=_versions(),
    )


def run_estimation(config: ScenarioConfig) -> RunReport:
    """Grouped MLE at each requested estimand value, with bound curves."""
    if config.theta_true is None:
        raise ConfigError("theta_true: required for run_estimation")
    layout = config.build_layout()
    probe = make_probe(config.strategy, layout, config.visibility)
    if len(probe.groups) != 1:
        raise ConfigError(
            "estimation runs need a single-group probe whose parity fringe "
            "depends only on theta_hat"
        )
    visibility = float(probe.groups[0].coherence)
    multiplier = float(layout.total_passes)
    model = FringeModel(visibility, multiplier)
    shots = config.shots_per_group
    seeds = _point_seeds(config.seed, len(config.theta_true))

    rows = []
    for theta_true, seed in zip(config.theta_true, seeds):
        result = repeat_estimation(model, theta_true, config.groups, shots, seed)
        rows.append(
            (
                theta_true,
                result.theta_hat,
                result.std_dev,
                result.std_dev_error,
                result.crb,
                crb(multiplier**2, shots),
                crb(multiplier, shots),
            )
        )

    metrics = {
        "multiplier": multiplier,
        "visibility": visibility,
        "snl_fi": multiplier,
        "heisenberg_fi": multiplier**2,
    }
    return RunReport(
        kind="estimation",
        config=config.to_dict(),
        columns=ESTIMATION_COLUMNS,
        rows=tuple(rows),
        fit=None,
        metrics=metrics,
        seed=config.seed,
        versions=_versions(),
    )


def run_scenario(config: ScenarioConfig) -> RunReport:
    return run_sweep(config) if config.kind == "sweep" else run_estimation(config)


def _preset_text(figure_id: str) -> str:
    try:
        return (
            resources.files("ghzsense.presets").joinpath(f"{figure_id}.json").read_text()
        )
    except FileNotFoundError:
        raise UnknownFigureError(
            f"no preset named {figure_id!r}; choose one of {list(FIGURES)}"
        )


def load_preset(figure_id: str) -> list[ScenarioConfig]:
    """Bundled scenario configs for one reproduction figure."""
    if figure_id not in FIGURES:
        raise UnknownFigureError(
            f"unknown figure {figure_id!r}; choose one of {list(FIGURES)}"
        )
    raw = json.loads(_preset_text(figure_id))
    return [ScenarioConfig.from_dict(entry) for entry in raw["runs"]]


def _write_svg(report: RunReport, out_dir: Path, label: str) -> list[Path]:
    rows = np.asarray(report.rows, dtype=float)
    paths = []
    if report.kind == "sweep":
        x = rows[:, 0]
        fringe = [
            svgplot.Series(rows[:, 1], "P+ exact", "#1f77b4"),
            svgplot.Series(rows[:, 2], "P- exact", "#ff7f0e"),
            svgplot.Series(rows[:, 3], "P+ sampled", "#1f77b4", "dot"),
            svgplot.Series(rows[:, 4], "P- sampled", "#ff7f0e", "dot"),
        ]
        path = svgplot.line_plot(
            out_dir / f"{label}_fringe.svg",
            x,
            fringe,
            title=label,
            xlabel="theta_hat",
            ylabel="outcome probability",
        )
        paths.append(path)
        refs = []
        for i, (name, value) in enumerate(sorted(report.config.get("reference_fi", {}).items())):
            color, dash = _REF_STYLES[i % len(_REF_STYLES)]
            refs.append(svgplot.RefLine(value, name, color, dash))
        fi_series = [
            svgplot.Series(rows[:, 5], "FI (fit)", "#2ca02c"),
            svgplot.Series(rows[:, 6], "FI lo90", "#2ca02c", "dot"),
            svgplot.Series(rows[:, 7], "FI hi90", "#2ca02c", "dot"),
        ]
        path = svgplot.line_plot(
            out_dir / f"{label}_fi.svg",
            x,
            fi_series,
            ref_lines=refs,
            title=label,
            xlabel="theta_hat",
            ylabel="Fisher information per trial",
        )
        paths.append(path)
    else:
        x = rows[:, 0]
        series = [
            svgplot.Series(rows[:, 2], "observed std dev", "#000000"),
            svgplot.Series(rows[:, 4], "model bound", "#2ca02c", "dash"),
            svgplot.Series(rows[:, 6], "shot-noise", "#9467bd", "dot"),
        ]
        path = svgplot.line_plot(
            out_dir / f"{label}_estimation.svg",
            x,
            series,
            title=label,
            xlabel="theta_hat",
            ylabel="standard deviation",
        )
        paths.append(path)
    return paths


def write_report(
    report: RunReport,
    out_dir,
    fmt: str = "csv",
    svg: bool = False,
) -> list[Path]:
    """Write a report to ``out_dir``; returns the created paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    label = report.config.get("label", "scenario")
    paths = []
    if fmt == "csv":
        path = out_dir / f"{label}.csv"
        path.write_text(report.to_csv(), encoding="utf-8")
        paths.append(path)
    elif fmt == "json":
        path = out_dir / f"{label}.json"
        path.write_text(report.to_json(), encoding="utf-8")
        paths.append(path)
    else:
        raise ConfigError(f"format: unknown output format {fmt!r}")
    if svg:
        paths.extend(_write_svg(report, out_dir, label))
    return paths


def reproduce(
    figure_id: str,
    out_dir,
    seed: int | None = None,
    fmt: str = "csv",
    svg: bool = False,
) -> tuple[list[RunReport], list[Path]]:
    """Run a bundled figure preset; writes one output file per run."""
    configs = load_preset(figure_id)
    reports = []
    paths = []
    for config in configs:
        if seed is not None:
            config = ScenarioConfig.from_dict({**config.to_dict(), "seed": seed})
        report = run_scenario(config)
        reports.append(report)
        paths.extend(write_report(report, out_dir, fmt=fmt, svg=svg))
    return reports, paths
