"""Batch runs across seeds, aggregation, and CSV/SVG export of experiment presets."""
from __future__ import annotations

import csv
import dataclasses
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from .world import MetricsRecord, WorldConfig, run

CSV_HEADER = (
    "iteration",
    "mean_fitness",
    "fitness_stddev",
    "diversity",
    "diversity_stddev",
    "mean_chain_length",
    "fraction_optimal_base",
)

METRICS = ("mean_fitness", "diversity", "mean_chain_length", "fraction_optimal_base")


class UsageError(ValueError):
    pass


class OutputError(OSError):
    pass


@dataclass(frozen=True)
class Condition:
    label: str
    chaining_enabled: bool
    learning_enabled: bool


# name -> (conditions, charted metric)
PRESETS: dict[str, tuple[tuple[Condition, ...], str]] = {
    "fig3_fitness": (
        (Condition("chaining", True, True), Condition("no_chaining", False, True)),
        "mean_fitness",
    ),
    "fig4_diversity": (
        (Condition("chaining", True, True), Condition("no_chaining", False, True)),
        "diversity",
    ),
    "fig5_learning_matrix": (
        (
            Condition("chaining_learning", True, True),
            Condition("chaining_only", True, False),
            Condition("learning_only", False, True),
            Condition("neither", False, False),
        ),
        "mean_fitness",
    ),
}

SHORT_NAMES = {"fig3": "fig3_fitness", "fig4": "fig4_diversity", "fig5": "fig5_learning_matrix"}


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    runs: int = 10
    base_config: WorldConfig = field(default_factory=WorldConfig)
    conditions: tuple[Condition, ...] = ()

    def __post_init__(self) -> None:
        if self.name not in PRESETS:
            raise UsageError(f"unknown experiment {self.name!r}; valid: {', '.join(PRESETS)}")
        if self.runs < 1:
            raise UsageError(f"runs must be >= 1, got {self.runs}")
        if not self.conditions:
            object.__setattr__(self, "conditions", PRESETS[self.name][0])
        expected = len(PRESETS[self.name][0])
        if len(self.conditions) != expected:
            raise UsageError(f"{self.name} needs exactly {expected} conditions, got {len(self.conditions)}")

    @classmethod
    def preset(cls, name: str, runs: int = 10, base_config: WorldConfig | None = None) -> "ExperimentSpec":
        name = SHORT_NAMES.get(name, name)
        return cls(name=name, runs=runs, base_config=base_config or WorldConfig())

    @property
    def metric(self) -> str:
        return PRESETS[self.name][1]

    def config_for(self, condition: Condition) -> WorldConfig:
        params = dataclasses.replace(
            self.base_config.invention_params,
            chaining_enabled=condition.chaining_enabled,
            learning_enabled=condition.learning_enabled,
        )
        return dataclasses.replace(self.base_config, invention_params=params)


@dataclass(frozen=True)
class AggregateSeries:
    condition_label: str
    per_iteration_mean: tuple[MetricsRecord, ...]
    per_iteration_stddev: tuple[MetricsRecord, ...]

    def series(self, metric: str) -> list[float]:
        return [getattr(r, metric) for r in self.per_iteration_mean]

    def __len__(self) -> int:
        return len(self.per_iteration_mean)


def aggregate(runs: Sequence[Sequence[MetricsRecord]], label: str = "") -> AggregateSeries:
    """Per-iteration mean and population standard deviation across runs."""
    if not runs:
        raise UsageError("nothing to aggregate")
    length = len(runs[0])
    if any(len(r) != length for r in runs):
        raise UsageError("runs differ in length")
    means, stds = [], []
    for i in range(length):
        rows = [r[i] for r in runs]
        m = {k: statistics.fmean(float(getattr(row, k)) for row in rows) for k in METRICS}
        s = {k: statistics.pstdev([float(getattr(row, k)) for row in rows]) for k in METRICS}
        means.append(MetricsRecord(iteration=rows[0].iteration, **m))
        stds.append(MetricsRecord(iteration=rows[0].iteration, **s))
    return AggregateSeries(label, tuple(means), tuple(stds))


def _seeded(config: WorldConfig, seed: int) -> WorldConfig:
    return dataclasses.replace(config, seed=seed)


def run_seeds(config: WorldConfig, runs: int, base_seed: int, workers: int = 1) -> list[list[MetricsRecord]]:
    configs = [_seeded(config, base_seed + k) for k in range(runs)]
    if workers <= 1 or runs == 1:
        return [run(c) for c in configs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, configs))


def run_batch(
    config: WorldConfig, runs: int, base_seed: int, workers: int = 1, label: str = ""
) -> AggregateSeries:
    if runs < 1:
        raise UsageError(f"runs must be >= 1, got {runs}")
    return aggregate(run_seeds(config, runs, base_seed, workers), label)


def _fmt(value: float) -> str:
    return repr(float(value))


def _fmt_count(value: float) -> str:
    # counts that are whole numbers print without a decimal point
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def write_csv(series: AggregateSeries, path: str | Path) -> Path:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            for mean, std in zip(series.per_iteration_mean, series.per_iteration_stddev):
                writer.writerow(
                    [
                        mean.iteration,
                        _fmt(mean.mean_fitness),
                        _fmt(std.mean_fitness),
                        _fmt_count(mean.diversity),
                        _fmt(std.diversity),
                        _fmt(mean.mean_chain_length),
                        _fmt(mean.fraction_optimal_base),
                    ]
                )
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def read_csv(path: str | Path) -> list[dict[str, float]]:
    with Path(path).open(newline="") as fh:
        return [{k: float(v) for k, v in row.items()} for row in csv.DictReader(fh)]


PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = (hi - lo) / count
    return [lo + k * step for k in range(count + 1)]


def render_chart(aggregates: Sequence[AggregateSeries], metric_name: str, path: str | Path) -> Path:
    """Write an SVG line chart with one polyline per aggregate."""
    if not aggregates:
        raise UsageError("render_chart needs at least one series")
    if metric_name not in METRICS:
        raise UsageError(f"unknown metric {metric_name!r}; valid: {', '.join(METRICS)}")
    length = len(aggregates[0])
    if any(len(a) != length for a in aggregates):
        raise UsageError("all series must have the same number of iterations")

    width, height = 720, 440
    left, right, top, bottom = 70, 170, 30, 60
    plot_w, plot_h = width - left - right, height - top - bottom
    xs = [r.iteration for r in aggregates[0].per_iteration_mean]
    ys = [v for a in aggregates for v in a.series(metric_name)]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(0.0, min(ys)), max(ys)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    def px(x: float) -> float:
        return left + (0.0 if x_hi == x_lo else (x - x_lo) / (x_hi - x_lo) * plot_w)

    def py(y: float) -> float:
        return top + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="{left}" y="{top}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#444"/>',
    ]
    for t in _nice_ticks(y_lo, y_hi):
        y = py(t)
        out.append(f'<line x1="{left - 4}" y1="{y:.2f}" x2="{left}" y2="{y:.2f}" stroke="#444"/>')
        out.append(f'<text x="{left - 8}" y="{y + 4:.2f}" text-anchor="end">{t:.3g}</text>')
    for t in _nice_ticks(x_lo, x_hi):
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{top + plot_h}" x2="{x:.2f}" y2="{top + plot_h + 4}" stroke="#444"/>')
        out.append(f'<text x="{x:.2f}" y="{top + plot_h + 18}" text-anchor="middle">{t:.3g}</text>')
    out.append(f'<text x="{left + plot_w / 2:.2f}" y="{height - 15}" text-anchor="middle">iteration</text>')
    out.append(
        f'<text x="18" y="{top + plot_h / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {top + plot_h / 2:.2f})">{escape(metric_name)}</text>'
    )
    for k, agg in enumerate(aggregates):
        colour = PALETTE[k % len(PALETTE)]
        points = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, agg.series(metric_name)))
        out.append(f'<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{points}"/>')
        ly = top + 14 + 20 * k
        lx = left + plot_w + 12
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text class="legend" x="{lx + 26}" y="{ly}">{escape(agg.condition_label)}</text>')
    out.append("</svg>")

    path = Path(path)
    try:
        path.write_text("\n".join(out) + "\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


def run_condition_batches(spec: ExperimentSpec, base_seed: int = 1, workers: int = 1) -> list[AggregateSeries]:
    # every condition shares the same seed range
    return [
        run_batch(spec.config_for(c), spec.runs, base_seed, workers=workers, label=c.label)
        for c in spec.conditions
    ]


def run_experiment(
    spec: ExperimentSpec, output_dir: str | Path, base_seed: int = 1, workers: int = 1
) -> list[Path]:
    """Run every condition of ``spec`` and write ``<output_dir>/<name>/{<label>.csv, chart.svg}``.

    Returns the written files, CSVs first in condition order, then the chart.
    """
    target = Path(output_dir) / spec.name
    try:
        target.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {target}: {exc.strerror or exc}") from exc
    aggregates = run_condition_batches(spec, base_seed, workers)
    files = [write_csv(agg, target / f"{agg.condition_label}.csv") for agg in aggregates]
    files.append(render_chart(aggregates, spec.metric, target / "chart.svg"))
    return files
