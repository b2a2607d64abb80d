#!/usr/bin/env python3
"""Trace Bethe roots along a twist ray and tabulate the portrait.

For a framed A1 or Hilbert-scheme instance, solves the Bethe system at a
sequence of twist magnitudes along a fixed ray and prints each root's
trajectory, starting from its fixed-component seed at z -> 0.
"""

import argparse

import mpmath as mp

from bethekit.bethe import bethe_equations, solve, tangent_class
from bethekit.fixedpoints import enumerate_fixed
from bethekit.quiver import a1_quiver, jordan_quiver


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=["hilb", "a1"], default="a1")
    ap.add_argument("--v", type=int, default=2)
    ap.add_argument("--w", type=int, default=3)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--angle", type=float, default=0.4)
    ap.add_argument("--digits", type=int, default=30)
    args = ap.parse_args()

    if args.family == "hilb":
        Q = jordan_quiver(args.n)
        params = {"hbar": mp.mpf("0.3"), "t1": mp.mpf("0.45"),
                  "a0_0": mp.mpf(1)}
    else:
        Q = a1_quiver(args.v, args.w)
        params = {"hbar": mp.mpf("0.3")}
        for l in range(args.w):
            params[f"a0_{l}"] = mp.mpf(1) + mp.mpf(l) / 3

    system = bethe_equations(tangent_class(Q))
    seeds = enumerate_fixed(Q)
    for mag in ("0.001", "0.01", "0.1", "0.3", "0.5"):
        z = [mp.mpf(mag) * mp.exp(mp.mpf(args.angle) * 1j)]
        recs = solve(system, z, params, seeds, digits=args.digits)
        print(f"|z| = {mag}")
        for rec in recs:
            roots = "  ".join(mp.nstr(val, 8)
                              for val in rec.roots.values())
            print(f"  {rec.component:12s} residual={mp.nstr(rec.residual, 3)}"
                  f"  {roots}")


if __name__ == "__main__":
    main()
