#!/usr/bin/env python3
"""Cross-check the symbolic pipeline against the dense spin-chain oracle.

For a framed A1 instance: solves the Bethe equations, feeds the roots to
the algebraic-Bethe-ansatz construction, and prints the transfer-matrix
eigenvector residual per fixed component, plus the weight-function gauge
match and the z -> 0 eigenvalue identity.
"""

import argparse

import mpmath as mp

from bethekit import xxz
from bethekit.bethe import bethe_equations, solve, sqrt_map, tangent_class
from bethekit.envelope import build_weight_function
from bethekit.fixedpoints import enumerate_fixed
from bethekit.quiver import a1_quiver


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--v", type=int, default=2)
    ap.add_argument("--w", type=int, default=3)
    ap.add_argument("--digits", type=int, default=50)
    args = ap.parse_args()
    mp.mp.dps = args.digits + 10

    Q = a1_quiver(args.v, args.w)
    params = {"hbar": mp.mpf("0.3")}
    for l in range(args.w):
        params[f"a0_{l}"] = mp.mpf(1) + mp.mpf(l) / 3
    z = [mp.mpf("0.001") * mp.exp(mp.mpf("0.4") * 1j)]

    s = xxz.chain_for(Q, params, digits=args.digits)
    print("calibrated convention:", s.convention_id())

    seeds = enumerate_fixed(Q)
    recs = solve(bethe_equations(tangent_class(Q)), z, params, seeds,
                 digits=args.digits)
    us = [mp.mpf("0.77") * mp.exp(0.9j), mp.mpf("2.3") * mp.exp(-0.5j)]
    for rec in recs:
        roots = [rec.roots[f"x0_{k}"] for k in range(args.v)]
        res = xxz.eigen_check(s, roots, z[0], us)
        print(f"  {rec.component:12s} eigenvector residual "
              f"{mp.nstr(res, 3)}")

    wfs = [build_weight_function(Q, F) for F in seeds]
    pts = [[mp.mpf("0.6") * mp.exp(1j * mp.mpf(k + 3 * p) / 5)
            for k in range(args.v)] for p in range(3)]
    ok, gauge, dev = xxz.compare_weight_functions(s, wfs, pts)
    print(f"weight-function gauge match: {'ok' if ok else 'FAIL'} "
          f"(worst deviation {mp.nstr(dev, 3)})")

    target = Q.baxter_eigenvalue()
    xs = [mp.mpf("0.9") * mp.exp(1j * mp.mpf(k + 1) / 3)
          for k in range(args.v)]
    sqrts = sqrt_map(params)
    for k, x in enumerate(xs):
        sqrts[f"x0_{k}"] = mp.sqrt(x)
    lam = xxz.baxter_limit_eigenvalue(s, xs)
    want = target.evaluate(sqrts)
    print(f"z -> 0 eigenvalue identity: relative error "
          f"{mp.nstr(abs(lam - want) / abs(want), 3)}")


if __name__ == "__main__":
    main()
