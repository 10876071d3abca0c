"""Command-line entry point: ``evoc run | experiment | oracle``.

Exit codes: 0 success, 1 usage or validation error, 2 I/O error.
"""
from __future__ import annotations

import argparse
import collections
import dataclasses
import json
import sys
from pathlib import Path
from typing import Any, Optional, Sequence

from .actions import enumerate_steps, fitness_step, optimal_steps
from .agent import ConfigError, InventionParams
from .harness import SHORT_NAMES, ExperimentSpec, OutputError, UsageError, aggregate, run_experiment, write_csv
from .world import WorldConfig, run

EXIT_OK, EXIT_USAGE, EXIT_IO = 0, 1, 2

_WORLD_KEYS = {
    "width": int,
    "height": int,
    "toroidal": bool,
    "invention_probability": float,
    "iterations": int,
    "seed": int,
}
_INVENTION_KEYS = {
    "rate_of_change": float,
    "chaining_enabled": bool,
    "learning_enabled": bool,
    "max_chain_len": int,
    "p_ext_max": float,
}


def _coerce(key: str, value: Any, kind: type) -> Any:
    if kind is bool:
        if not isinstance(value, bool):
            raise ConfigError(key, f"expected true/false, got {value!r}")
        return value
    # bool is an int subclass; reject it for numeric fields
    if isinstance(value, bool):
        raise ConfigError(key, f"expected a number, got {value!r}")
    if kind is int:
        if not isinstance(value, int):
            raise ConfigError(key, f"expected an integer, got {value!r}")
        return value
    if not isinstance(value, (int, float)):
        raise ConfigError(key, f"expected a number, got {value!r}")
    return float(value)


def config_from_dict(data: dict) -> WorldConfig:
    """Build a WorldConfig from a flat mapping; absent keys take their defaults."""
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    unknown = sorted(set(data) - set(_WORLD_KEYS) - set(_INVENTION_KEYS))
    if unknown:
        raise ConfigError(unknown[0], "unknown config key")
    world = {k: _coerce(k, data[k], t) for k, t in _WORLD_KEYS.items() if k in data}
    invention = {k: _coerce(k, data[k], t) for k, t in _INVENTION_KEYS.items() if k in data}
    return WorldConfig(invention_params=InventionParams(**invention), **world)


def load_config(path: Optional[str]) -> WorldConfig:
    if path is None:
        return WorldConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OutputError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"{path} is not valid JSON ({exc.msg} at line {exc.lineno})") from exc
    return config_from_dict(data)


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse's default exit code 2 is reserved for I/O
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="evoc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="one seeded run; writes a metrics CSV")
    p_run.add_argument("--config", help="JSON config file")
    p_run.add_argument("--seed", type=int, help="run seed (default: config seed, else 1)")
    p_run.add_argument("--out", default="./out", help="output directory (default ./out)")

    p_exp = sub.add_parser("experiment", help="figure presets averaged over seeds")
    p_exp.add_argument("name", choices=sorted(SHORT_NAMES), help="experiment preset")
    p_exp.add_argument("--config", help="JSON config file for the base world")
    p_exp.add_argument("--runs", type=int, default=10)
    p_exp.add_argument("--seed", type=int, default=1, help="base seed; runs use seed, seed+1, ...")
    p_exp.add_argument("--out", default="./out")
    p_exp.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    sub.add_parser("oracle", help="enumerate all single steps and report the optima")
    return parser


def cmd_run(config_path: Optional[str], seed: Optional[int], output_dir: str) -> int:
    config = load_config(config_path)
    if seed is not None:
        config = dataclasses.replace(config, seed=seed)
    records = run(config)
    out = Path(output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {out}: {exc.strerror or exc}") from exc
    path = write_csv(aggregate([records], label="run"), out / f"run_seed{config.seed}.csv")
    final = records[-1]
    print(f"wrote {path}")
    print(f"final mean_fitness={final.mean_fitness!r} diversity={final.diversity}")
    return EXIT_OK


def cmd_experiment(
    name: str, runs: int, base_seed: int, output_dir: str, config_path: Optional[str] = None, workers: int = 1
) -> int:
    spec = ExperimentSpec.preset(name, runs=runs, base_config=load_config(config_path))
    files = run_experiment(spec, output_dir, base_seed=base_seed, workers=workers)
    for f in files:
        print(f)
    return EXIT_OK


def cmd_oracle(out=None) -> int:
    out = out or sys.stdout
    steps = enumerate_steps()
    histogram = collections.Counter(fitness_step(s) for s in steps)
    optima = optimal_steps()
    print(f"total steps: {len(steps)}", file=out)
    print(f"max fitness: {max(histogram)!r}", file=out)
    print(f"min fitness: {min(histogram)!r}", file=out)
    print(f"optimal steps: {len(optima)}", file=out)
    print("fitness histogram:", file=out)
    for value in sorted(histogram):
        print(f"  {value:5.1f}  {histogram[value]}", file=out)
    print("optima (LA RA LL RL HEAD HIPS; ^ up, v down, . still):", file=out)
    for s in optima:
        print(f"  {s}", file=out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args.config, args.seed, args.out)
        if args.command == "experiment":
            return cmd_experiment(args.name, args.runs, args.seed, args.out, args.config, args.workers)
        return cmd_oracle()
    except (ConfigError, UsageError) as exc:
        print(f"evoc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"evoc: error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
