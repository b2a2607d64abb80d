#!/usr/bin/env python3
"""Scan the q -> 1 saddle residual along a q-sequence.

Prints, for each q, the per-variable residual of the degeneration of the
q-difference data onto the Bethe equations, together with the ratio
residual / |ln q| (which should stabilize as q -> 1).
"""

import argparse

import mpmath as mp

from bethekit.bethe import tangent_class
from bethekit.qseries import saddle_residual
from bethekit.quiver import a1_quiver, jordan_quiver


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=["hilb", "a1"], default="hilb")
    ap.add_argument("--w", type=int, default=2)
    ap.add_argument("--digits", type=int, default=30)
    ap.add_argument("--qs", default="0.9,0.95,0.99,0.999,0.9999")
    args = ap.parse_args()

    if args.family == "hilb":
        Q = jordan_quiver(1)
        params = {"hbar": mp.mpf("0.3"), "t1": mp.mpf("0.45"),
                  "a0_0": mp.mpf(1)}
    else:
        Q = a1_quiver(1, args.w)
        params = {"hbar": mp.mpf("0.3")}
        for l in range(args.w):
            params[f"a0_{l}"] = mp.mpf(1) + mp.mpf(l) / 3

    tc = tangent_class(Q)
    xv = {"x0_0": mp.mpf("0.6") * mp.exp(0.2j)}
    zs = {0: mp.mpf("0.7") * mp.exp(0.4j)}
    qs = [mp.mpf(q) for q in args.qs.split(",")]
    rows = saddle_residual(tc, xv, zs, params, qs, digits=args.digits)
    for row in rows:
        ratio = row["max"] / abs(mp.log(row["q"]))
        print(f"q={mp.nstr(row['q'], 6):10s} max-residual="
              f"{mp.nstr(row['max'], 4):12s} residual/|ln q|="
              f"{mp.nstr(ratio, 4)}")


if __name__ == "__main__":
    main()
