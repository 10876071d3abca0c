"""Sweep the chain-extension cap and report the quantities it trades off.

For each cap: 10-run mean fitness at iteration 100 (chaining + learning) and
the fraction of runs whose implemented-chain set still changes during
iterations 51-100. Use a seed range disjoint from the test seeds (1-10).

    python scripts/sweep_extension_cap.py --caps 0.6 0.7 0.8 --seeds 101 300
"""
import argparse
import statistics

from evoc.agent import InventionParams
from evoc.world import WorldConfig, iter_run, metrics_snapshot


def one_run(cap, seed, iterations):
    config = WorldConfig(seed=seed, iterations=iterations, invention_params=InventionParams(p_ext_max=cap))
    fitness, sets, longest = [], [], 0
    for world in iter_run(config):
        fitness.append(metrics_snapshot(world).mean_fitness)
        sets.append(frozenset(world.actions()))
        longest = max(longest, max(len(a) for a in world.actions()))
    late_change = any(sets[i] != sets[i - 1] for i in range(51, min(101, len(sets))))
    return fitness, late_change, longest


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--caps", type=float, nargs="+", default=[0.5, 0.6, 0.7, 0.8, 0.85])
    parser.add_argument("--seeds", type=int, nargs=2, default=[101, 200], metavar=("FIRST", "LAST"))
    parser.add_argument("--iterations", type=int, default=100)
    args = parser.parse_args()

    seeds = range(args.seeds[0], args.seeds[1] + 1)
    print("cap   fitness@100  late-change  longest")
    for cap in args.caps:
        results = [one_run(cap, s, args.iterations) for s in seeds]
        fit = statistics.fmean(r[0][min(100, args.iterations)] for r in results)
        change = sum(r[1] for r in results) / len(results)
        print(f"{cap:<5} {fit:11.2f}  {change:11.3f}  {max(r[2] for r in results):7d}")


if __name__ == "__main__":
    main()
