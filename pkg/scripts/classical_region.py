"""Sample losing (A, B) pairs and report which schedules turn them winning.

    python scripts/classical_region.py --budget 20000 --seed 1 --validate 200000
"""
import argparse
from collections import Counter

from qparrondo.classical import ParrondoSearch, find_parrondo_samples, simulate_sequence


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--budget", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--min-payoff", type=float, default=0.0)
    ap.add_argument("--validate", type=int, default=0, help="Monte Carlo steps for the top instances")
    ap.add_argument("--top", type=int, default=5)
    args = ap.parse_args()

    found = find_parrondo_samples(ParrondoSearch(budget=args.budget, min_payoff=args.min_payoff), args.seed)
    print(f"{len(found)} / {args.budget} samples show the effect")
    for pattern, count in Counter(i.schedule for i in found).most_common():
        print(f"  best schedule {pattern:>6}: {count}")

    found.sort(key=lambda i: i.schedule_pwin, reverse=True)
    for k, inst in enumerate(found[: args.top]):
        line = (f"pA={inst.a.p_win:.4f} B=({', '.join(f'{p:.3f}' for p in inst.b.coins)}) "
                f"{inst.schedule}: payoff {inst.schedule_payoff:+.4f}")
        if args.validate:
            res = simulate_sequence(inst.build_schedule(), args.validate, seed=args.seed + 1 + k)
            line += f"  simulated {res.mean_payoff:+.4f} +- {res.stderr:.4f}"
        print(line)


if __name__ == "__main__":
    main()
