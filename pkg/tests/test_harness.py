import re

import pytest

from evoc.harness import (
    CSV_HEADER,
    AggregateSeries,
    Condition,
    ExperimentSpec,
    OutputError,
    UsageError,
    aggregate,
    read_csv,
    render_chart,
    run_batch,
    run_experiment,
    run_seeds,
    write_csv,
)
from evoc.world import MetricsRecord, WorldConfig, run

SMALL = WorldConfig(width=5, height=5, iterations=20)


def rec(i, f, d, c=1.0, o=0.0):
    return MetricsRecord(i, f, d, c, o)


def test_single_run_aggregate_is_identity():
    records = run(WorldConfig(iterations=15, seed=4))
    agg = run_batch(WorldConfig(iterations=15), runs=1, base_seed=4)
    assert list(agg.per_iteration_mean) == [
        MetricsRecord(r.iteration, float(r.mean_fitness), float(r.diversity), r.mean_chain_length, r.fraction_optimal_base)
        for r in records
    ]
    for s in agg.per_iteration_stddev:
        assert (s.mean_fitness, s.diversity, s.mean_chain_length, s.fraction_optimal_base) == (0.0, 0.0, 0.0, 0.0)


def test_initial_row_identical_across_seeds():
    agg = run_batch(WorldConfig(iterations=5), runs=10, base_seed=1)
    first_mean, first_std = agg.per_iteration_mean[0], agg.per_iteration_stddev[0]
    assert first_mean.mean_fitness == 2.0 and first_std.mean_fitness == 0.0
    assert first_mean.diversity == 1.0 and first_std.diversity == 0.0


def test_aggregate_is_arithmetic_mean():
    a = [rec(0, 2.0, 1), rec(1, 3.0, 4, 1.5, 0.25)]
    b = [rec(0, 2.0, 1), rec(1, 5.0, 8, 2.5, 0.75)]
    agg = aggregate([a, b], "x")
    assert agg.per_iteration_mean[1] == rec(1, 4.0, 6.0, 2.0, 0.5)
    assert agg.per_iteration_stddev[1] == rec(1, 1.0, 2.0, 0.5, 0.25)


def test_aggregate_rejects_ragged_runs():
    with pytest.raises(UsageError):
        aggregate([[rec(0, 2.0, 1)], [rec(0, 2.0, 1), rec(1, 2.0, 1)]])
    with pytest.raises(UsageError):
        run_batch(SMALL, runs=0, base_seed=1)


def test_batch_uses_sequential_seeds():
    runs = run_seeds(SMALL, runs=3, base_seed=7)
    assert runs == [run(WorldConfig(width=5, height=5, iterations=20, seed=s)) for s in (7, 8, 9)]


def test_parallel_batch_matches_serial():
    assert run_seeds(SMALL, 4, 1, workers=1) == run_seeds(SMALL, 4, 1, workers=3)


def test_write_csv_layout(tmp_path):
    agg = run_batch(WorldConfig(), runs=2, base_seed=1)
    path = write_csv(agg, tmp_path / "a.csv")
    text = path.read_text()
    lines = text.split("\n")
    assert text.endswith("\n")
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(text.splitlines()) == 102
    assert lines[1] == "0,2.0,0.0,1,0.0,1.0,0.0"
    again = write_csv(agg, tmp_path / "b.csv")
    assert again.read_bytes() == path.read_bytes()
    rows = read_csv(path)
    assert rows[-1]["mean_fitness"] == agg.per_iteration_mean[-1].mean_fitness


def test_write_csv_unwritable(tmp_path):
    agg = run_batch(SMALL, runs=1, base_seed=1)
    with pytest.raises(OutputError, match="missing"):
        write_csv(agg, tmp_path / "missing" / "a.csv")


def _series(label, n, scale=1.0):
    recs = tuple(rec(i, 2.0 + scale * i, 1 + i) for i in range(n))
    return AggregateSeries(label, recs, recs)


def test_chart_structure(tmp_path):
    path = render_chart([_series("chaining", 5), _series("no_chaining", 5, 0.5)], "mean_fitness", tmp_path / "c.svg")
    svg = path.read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<polyline") == 2
    assert re.findall(r'class="legend"[^>]*>([^<]+)<', svg) == ["chaining", "no_chaining"]
    assert ">iteration<" in svg and ">mean_fitness<" in svg


def test_chart_four_series(tmp_path):
    series = [_series(f"s{k}", 4, k) for k in range(4)]
    assert render_chart(series, "diversity", tmp_path / "c.svg").read_text().count("<polyline") == 4


def test_chart_usage_errors(tmp_path):
    with pytest.raises(UsageError):
        render_chart([], "mean_fitness", tmp_path / "c.svg")
    with pytest.raises(UsageError):
        render_chart([_series("a", 3), _series("b", 4)], "mean_fitness", tmp_path / "c.svg")
    with pytest.raises(UsageError):
        render_chart([_series("a", 3)], "nonsense", tmp_path / "c.svg")


def test_flat_series_chart(tmp_path):
    flat = AggregateSeries("flat", tuple(rec(i, 2.0, 1) for i in range(3)), tuple(rec(i, 0.0, 0) for i in range(3)))
    assert "<polyline" in render_chart([flat], "mean_fitness", tmp_path / "c.svg").read_text()


def test_experiment_spec_condition_counts():
    assert len(ExperimentSpec.preset("fig3").conditions) == 2
    assert len(ExperimentSpec.preset("fig4_diversity").conditions) == 2
    assert len(ExperimentSpec.preset("fig5").conditions) == 4
    with pytest.raises(UsageError):
        ExperimentSpec.preset("fig9")
    with pytest.raises(UsageError):
        ExperimentSpec("fig3_fitness", conditions=(Condition("x", True, True),))


def test_fig3_files_and_ordering(tmp_path):
    spec = ExperimentSpec.preset("fig3", runs=2, base_config=WorldConfig(iterations=60))
    files = run_experiment(spec, tmp_path)
    assert [f.relative_to(tmp_path).as_posix() for f in files] == [
        "fig3_fitness/chaining.csv",
        "fig3_fitness/no_chaining.csv",
        "fig3_fitness/chart.svg",
    ]
    on, off = (read_csv(f)[-1]["mean_fitness"] for f in files[:2])
    assert on > off


def test_fig4_and_fig5_manifests(tmp_path):
    base = WorldConfig(width=4, height=4, iterations=10)
    f4 = run_experiment(ExperimentSpec.preset("fig4", runs=1, base_config=base), tmp_path)
    assert len(f4) == 3 and ">diversity<" in f4[-1].read_text()
    f5 = run_experiment(ExperimentSpec.preset("fig5", runs=2, base_config=base), tmp_path)
    assert [f.name for f in f5] == [
        "chaining_learning.csv",
        "chaining_only.csv",
        "learning_only.csv",
        "neither.csv",
        "chart.svg",
    ]
    assert f5[-1].read_text().count("<polyline") == 4


def test_experiment_unwritable_dir(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    spec = ExperimentSpec.preset("fig3", runs=1, base_config=SMALL)
    with pytest.raises(OutputError, match="file"):
        run_experiment(spec, blocker)
