"""How far the summed-angle sequence formula drifts from the composed
multiplexer when every coin carries the same nonzero phase (phi = eta).

    python scripts/phase_deviation.py --draws 500 --seed 0
"""
import argparse
import math

import numpy as np

from qparrondo.quantumgame import InitialStateSpec, games_from_table, play_sequence, pwin_sequence_formula


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--draws", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    eq = InitialStateSpec.equal_superposition()
    print(f"{'phase/pi':>8} {'n':>2} {'max dev':>10} {'mean dev':>10}")
    for phase in np.linspace(0, 2 * math.pi, 9):
        for n in (1, 2, 3, 4):
            devs = []
            for _ in range(args.draws):
                table = rng.uniform(0, math.pi, (n, 4))
                sim = play_sequence(games_from_table(table, phase, phase), eq).p_win
                devs.append(abs(sim - pwin_sequence_formula(table)))
            print(f"{phase / math.pi:>8.3f} {n:>2} {max(devs):>10.3e} {np.mean(devs):>10.3e}")


if __name__ == "__main__":
    main()
