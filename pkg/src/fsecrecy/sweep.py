"""Parameter sweeps over the SNR ratio lambda = gamma_bar_D / gamma_bar_E.

A :class:`SweepConfig` is a flat description of one experiment. It can be
built from a figure preset, read from a ``key=value`` file (``scenario=``
may repeat) and written back in the same format, so a printed configuration
reproduces the run exactly.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import montecarlo
from .errors import NumericalError
from .fading import db_to_linear, linear_to_db
from .montecarlo import SimConfig
from .secrecy import METRICS, Method, MetricResult, WiretapScenario, evaluate
from .svg import write_svg

CSV_COLUMNS = ("lambda_db", "m_D", "m_sD", "m_E", "m_sE", "r_s", "method", "value",
               "err_estimate", "flags")
METHOD_NAMES = {"closed": Method.CLOSED_FORM, "quad": Method.QUADRATURE, "mc": Method.MONTE_CARLO}
LAMBDA_UNITS = ("dB", "linear")

Scenario = tuple[float, float, float, float]


class ConfigError(ValueError):
    """The sweep description is malformed or inconsistent."""


class CellError(RuntimeError):
    """A numerical failure at one (lambda, scenario, method) cell."""

    def __init__(self, cell: str, cause: Exception):
        super().__init__(f"numerical failure at {cell}: {cause}")
        self.cell = cell


@dataclass(frozen=True)
class SweepConfig:
    metric: str
    lambda_grid: tuple[float, ...]
    scenarios: tuple[Scenario, ...]
    lambda_unit: str = "dB"
    eve_snr_db: float = 5.0
    r_s: float = 0.0
    methods: tuple[str, ...] = ("closed",)
    mc: SimConfig = field(default_factory=SimConfig)
    output_path: str = "sweep.csv"
    svg_path: str | None = None
    bits: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ConfigError(f"metric must be one of {METRICS}, got {self.metric!r}")
        grid = tuple(float(v) for v in self.lambda_grid)
        if not grid or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("lambda grid must be non-empty and strictly increasing")
        if any(not math.isfinite(v) for v in grid):
            raise ConfigError("lambda values must be finite")
        if self.lambda_unit not in LAMBDA_UNITS:
            raise ConfigError(f"lambda unit must be one of {LAMBDA_UNITS}")
        if self.lambda_unit == "linear" and grid[0] <= 0:
            raise ConfigError("linear lambda values must be positive")
        scenarios = tuple(tuple(float(v) for v in sc) for sc in self.scenarios)
        if not scenarios:
            raise ConfigError("at least one scenario is required")
        for sc in scenarios:
            if len(sc) != 4 or any(not (v > 0 and math.isfinite(v)) for v in sc):
                raise ConfigError(f"scenario needs four positive values m_D,m_sD,m_E,m_sE: {sc}")
        if not self.methods or any(m not in METHOD_NAMES for m in self.methods):
            raise ConfigError(f"methods must be a non-empty subset of {tuple(METHOD_NAMES)}")
        if not (self.r_s >= 0 and math.isfinite(self.r_s)):
            raise ConfigError("r_s must be non-negative")
        if self.jobs < 1:
            raise ConfigError("jobs must be positive")
        object.__setattr__(self, "lambda_grid", grid)
        object.__setattr__(self, "scenarios", scenarios)
        object.__setattr__(self, "methods", tuple(self.methods))

    def lambda_linear(self, value: float) -> float:
        return db_to_linear(value) if self.lambda_unit == "dB" else value

    def lambda_db(self, value: float) -> float:
        return value if self.lambda_unit == "dB" else float(linear_to_db(value))


# ------------------------------------------------------------------ presets

PRESET_SCENARIOS = tuple((2.5, 5.0, m_e, m_se) for m_e in (0.5, 2.5) for m_se in (0.5, 50.0))
PRESET_LAMBDA_DB = tuple(float(v) for v in range(-5, 31))
PRESETS = {
    "fig1": ("asc", 0.0),
    "fig2": ("sop", 1.0),
    "fig3": ("sop", 2.0),
    "fig4": ("sop_lower", 1.0),
    "fig5": ("spsc", 0.0),
}


def preset(name: str, lambda_unit: str = "dB") -> SweepConfig:
    """Sweep behind one of the figures: fixed main channel, four eavesdropper cases."""
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; expected one of {tuple(PRESETS)}")
    metric, r_s = PRESETS[name]
    grid = PRESET_LAMBDA_DB
    if lambda_unit == "linear":
        # same numbers read as linear ratios; non-positive values are dropped
        grid = tuple(v for v in grid if v > 0)
    return SweepConfig(metric=metric, lambda_grid=grid, scenarios=PRESET_SCENARIOS,
                       lambda_unit=lambda_unit, r_s=r_s, output_path=f"{name}.csv")


# ------------------------------------------------------------- config files


def parse_grid(text: str) -> tuple[float, ...]:
    """``a:step:b`` (inclusive) or a comma-separated list."""
    text = text.strip()
    try:
        if ":" in text:
            start, step, stop = (float(v) for v in text.split(":"))
            if step <= 0 or stop < start:
                raise ConfigError(f"bad lambda range {text!r}")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return tuple(start + k * step for k in range(count))
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot parse lambda grid {text!r}") from exc


def parse_scenario(text: str) -> Scenario:
    try:
        values = tuple(float(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"cannot parse scenario {text!r}") from exc
    if len(values) != 4:
        raise ConfigError(f"scenario needs m_D,m_sD,m_E,m_sE, got {text!r}")
    return values


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def read_config_text(text: str) -> dict:
    """Parse ``key=value`` lines into keyword values for :func:`build_config`."""
    values: dict = {}
    scenarios = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {number}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "scenario":
            scenarios.append(parse_scenario(value))
        else:
            values[key] = value
    if scenarios:
        values["scenario"] = scenarios
    return values


_CONFIG_KEYS = {"preset", "metric", "lambda", "lambda_unit", "eve_snr_db", "r_s", "methods",
                "n", "seed", "batch", "workers", "out", "svg", "bits", "jobs", "scenario"}


def build_config(values: dict) -> SweepConfig:
    """Assemble a configuration from parsed keys; a ``preset`` supplies defaults."""
    unknown = set(values) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
    try:
        unit = values.get("lambda_unit", "dB")
        if unit not in LAMBDA_UNITS:
            raise ConfigError(f"lambda unit must be one of {LAMBDA_UNITS}")
        if "preset" in values:
            cfg = preset(values["preset"], unit)
        else:
            missing = [k for k in ("metric", "lambda", "scenario") if k not in values]
            if missing:
                raise ConfigError(f"missing {missing} (or give a preset)")
            cfg = SweepConfig(metric=values["metric"], lambda_grid=parse_grid(values["lambda"]),
                              scenarios=tuple(values["scenario"]), lambda_unit=unit)
        changes = {}
        if "metric" in values:
            changes["metric"] = values["metric"]
        if "lambda" in values:
            changes["lambda_grid"] = parse_grid(values["lambda"])
        if "scenario" in values:
            changes["scenarios"] = tuple(values["scenario"])
        if "eve_snr_db" in values:
            changes["eve_snr_db"] = float(values["eve_snr_db"])
        if "r_s" in values:
            changes["r_s"] = float(values["r_s"])
        if "methods" in values:
            changes["methods"] = tuple(m.strip() for m in values["methods"].split(",") if m.strip())
        if "out" in values:
            changes["output_path"] = values["out"]
        if "svg" in values:
            changes["svg_path"] = values["svg"] or None
        if "bits" in values:
            changes["bits"] = _parse_bool(values["bits"])
        if "jobs" in values:
            changes["jobs"] = int(values["jobs"])
        mc_changes = {key: int(values[name]) for name, key in
                      (("n", "n_samples"), ("seed", "seed"), ("batch", "batch"), ("workers", "workers"))
                      if name in values}
        if mc_changes:
            changes["mc"] = replace(cfg.mc, **mc_changes)
        return replace(cfg, **changes)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def format_config(cfg: SweepConfig) -> str:
    """``key=value`` text that :func:`read_config_text` maps back to ``cfg``."""
    lines = [
        f"metric={cfg.metric}",
        "lambda=" + ",".join(repr(v) for v in cfg.lambda_grid),
        f"lambda_unit={cfg.lambda_unit}",
        f"eve_snr_db={cfg.eve_snr_db!r}",
        f"r_s={cfg.r_s!r}",
        "methods=" + ",".join(cfg.methods),
        f"n={cfg.mc.n_samples}",
        f"seed={cfg.mc.seed}",
        f"batch={cfg.mc.batch}",
        f"workers={cfg.mc.workers}",
        f"jobs={cfg.jobs}",
        f"bits={str(cfg.bits).lower()}",
        f"out={cfg.output_path}",
        f"svg={cfg.svg_path or ''}",
    ]
    lines += ["scenario=" + ",".join(repr(v) for v in sc) for sc in cfg.scenarios]
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ running


@dataclass(frozen=True)
class Row:
    lambda_db: float
    scenario: Scenario
    r_s: float
    result: MetricResult


def scenario_at(cfg: SweepConfig, lam: float, sc: Scenario) -> WiretapScenario:
    eve_snr = db_to_linear(cfg.eve_snr_db)
    return WiretapScenario.from_ratio(*sc, ratio=cfg.lambda_linear(lam), eve_snr=eve_snr, r_s=cfg.r_s)


def _scale_bits(cfg: SweepConfig, result: MetricResult) -> MetricResult:
    if cfg.bits and cfg.metric == "asc":
        return replace(result, value=result.value / math.log(2),
                       abs_error_estimate=result.abs_error_estimate / math.log(2))
    return result


def evaluate_cell(cfg: SweepConfig, lam: float, sc: Scenario, method: str) -> MetricResult:
    s = scenario_at(cfg, lam, sc)
    if method == "mc":
        result = montecarlo.simulate(s, cfg.mc, (cfg.metric,))[cfg.metric].to_result()
    else:
        result = evaluate(cfg.metric, s, METHOD_NAMES[method])
    return _scale_bits(cfg, result)


def _cell_task(args) -> MetricResult:
    cfg, lam, sc, method = args
    try:
        return evaluate_cell(cfg, lam, sc, method)
    except (NumericalError, ArithmeticError, ValueError) as exc:
        cell = f"lambda={lam} {cfg.lambda_unit}, scenario={','.join(f'{v:g}' for v in sc)}, method={method}"
        raise CellError(cell, exc) from exc


def cells(cfg: SweepConfig) -> list[tuple[float, Scenario, str]]:
    """Cells in output order: lambda outer, scenario inner, method innermost."""
    return [(lam, sc, method) for lam in cfg.lambda_grid for sc in cfg.scenarios
            for method in cfg.methods]


def compute(cfg: SweepConfig) -> list[Row]:
    tasks = [(cfg, lam, sc, method) for lam, sc, method in cells(cfg)]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_cell_task, tasks))
    else:
        results = [_cell_task(t) for t in tasks]
    return [Row(cfg.lambda_db(lam), sc, cfg.r_s, res)
            for (_, lam, sc, _), res in zip(tasks, results)]


def _fmt(value: float) -> str:
    return f"{value:.12g}"


def write_csv(rows: list[Row], path: str | os.PathLike) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            r = row.result
            writer.writerow([_fmt(row.lambda_db), *(_fmt(v) for v in row.scenario), _fmt(row.r_s),
                             r.method.value, _fmt(r.value), _fmt(r.abs_error_estimate),
                             ";".join(sorted(r.flags))])


def run_sweep(cfg: SweepConfig) -> list[Row]:
    """Compute every cell, then write the CSV (and the SVG when requested).

    Nothing is left on disk when a cell fails.
    """
    rows = compute(cfg)
    written = []
    try:
        write_csv(rows, cfg.output_path)
        written.append(Path(cfg.output_path))
        if cfg.svg_path:
            write_svg(cfg, rows, cfg.svg_path)
            written.append(Path(cfg.svg_path))
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        Path(cfg.output_path).unlink(missing_ok=True)
        raise
    return rows
