"""Run the fitness, diversity and learning-matrix presets and print final values.

    python scripts/reproduce_figures.py --out out --runs 10
"""
import argparse
import time

from evoc.harness import PRESETS, ExperimentSpec, read_csv, run_experiment


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="out")
    parser.add_argument("--runs", type=int, default=10)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    for name in PRESETS:
        t0 = time.perf_counter()
        spec = ExperimentSpec.preset(name, runs=args.runs)
        files = run_experiment(spec, args.out, base_seed=args.seed, workers=args.workers)
        print(f"{name} ({time.perf_counter() - t0:.1f}s) -> {files[-1]}")
        for f in files[:-1]:
            last = read_csv(f)[-1]
            print(
                f"  {f.stem:<18} fitness {last['mean_fitness']:7.2f}  diversity {last['diversity']:6.2f}"
                f"  chain length {last['mean_chain_length']:6.2f}"
            )


if __name__ == "__main__":
    main()
