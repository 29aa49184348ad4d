"""Single-game vs composed-sequence win probability for zero-phase coins on the
equal-superposition input, with every coin set to the same angle.

    python scripts/quantum_sequence_effect.py --n 2 3 4 --points 13
"""
import argparse
import math

import numpy as np

from qparrondo.quantumgame import detect_quantum_parrondo


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--points", type=int, default=9)
    args = ap.parse_args()

    print(f"{'n':>2} {'theta/pi':>9} {'single':>10} {'sequence':>10} effect")
    for n in args.n:
        for theta in np.linspace(0, math.pi, args.points):
            rep = detect_quantum_parrondo([[theta] * 4] * n)
            print(f"{n:>2} {theta / math.pi:>9.4f} {rep.single_pwins[0]:>10.6f} "
                  f"{rep.sequence_pwin_sim:>10.6f} {rep.effect}")


if __name__ == "__main__":
    main()
