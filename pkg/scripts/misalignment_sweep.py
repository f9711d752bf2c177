"""Residual fringe visibility versus quarter-wave-plate alignment error.

    python scripts/misalignment_sweep.py [--max-deg 15] [--steps 16]

Prints, for an error on the slit-1 plate, the exact engine visibility,
the distinguishability D, and the closed form cos^2(theta1 - theta2).
Also shows that rotating both plates together leaves V at zero.
"""

import argparse
import math

import numpy as np

from eraserlab.analysis import distinguishability, singles_visibility
from eraserlab.engine import prepare
from eraserlab.optics import PairSourceSpec


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-deg", type=float, default=15.0)
    ap.add_argument("--steps", type=int, default=16)
    args = ap.parse_args()

    t2 = -math.pi / 4
    print(f"{'error_deg':>9} {'V':>10} {'D':>10} {'cos^2':>10} {'V_common':>10}")
    for err in np.linspace(0, args.max_deg, args.steps):
        t1 = math.pi / 4 + math.radians(err)
        s = prepare(PairSourceSpec(0.0), t1, t2)
        common = prepare(PairSourceSpec(0.0), t1, t2 + math.radians(err))
        print(
            f"{err:9.2f} {singles_visibility(s):10.6f} {distinguishability(s):10.6f} "
            f"{math.cos(t1 - t2) ** 2:10.6f} {singles_visibility(common):10.2e}"
        )


if __name__ == "__main__":
    main()
