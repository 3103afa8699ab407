"""|phi(1/2 + it)| on the critical line for every primitive even character mod N."""

import argparse

import numpy as np

from regl4 import characters as ch
from regl4 import eisenstein as es


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("N", type=int)
    ap.add_argument("--tmax", type=float, default=20.0)
    args = ap.parse_args()
    ts = np.linspace(0, args.tmax, 81)
    for chi in ch.primitive_characters(args.N, "even"):
        d = ch.decompose(chi, 1)
        dev = max(abs(abs(es.scattering_phi(0.5 + 1j * t, d)) - 1) for t in ts)
        print(f"{chi}  max ||phi| - 1| = {dev:.2e}")


if __name__ == "__main__":
    main()
