#!/usr/bin/env python3
"""Build every weight function in the desk-scale corpus and certify it.

Prints one line per fixed component: polynomiality, weight bound, and the
number of symmetrization terms.  Useful as a smoke test and as a timing
survey (the n = 4 Hilbert-scheme components dominate).
"""

import argparse
import time
from fractions import Fraction

from bethekit.envelope import (build_weight_function, check_polynomial,
                               check_weight_bound)
from bethekit.fixedpoints import enumerate_fixed
from bethekit.quiver import a1_quiver, cyclic_quiver, jordan_quiver


def corpus(max_n):
    for n in range(1, max_n + 1):
        yield f"Hilb n={n}", jordan_quiver(n)
    for w in (1, 2, 3, 4):
        for v in (1, 2):
            if v <= w:
                yield f"A1 v={v} w={w}", a1_quiver(v, w)
    for v in ((1, 0), (1, 1), (2, 1), (1, 2)):
        yield f"cyclic v={v}", cyclic_quiver(v, (1, 0))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=3,
                    help="largest Hilbert-scheme instance (default 3)")
    ap.add_argument("--epsilon", default="1/10")
    args = ap.parse_args()
    eps = Fraction(args.epsilon)
    for label, Q in corpus(args.max_n):
        for F in enumerate_fixed(Q):
            t0 = time.time()
            wf = build_weight_function(Q, F)
            poly = check_polynomial(wf)
            bound = check_weight_bound(wf, eps)
            print(f"{label:16s} {F.label:12s} poly={'ok' if poly.passed else 'FAIL'} "
                  f"bound={'ok' if bound.passed else 'FAIL'} "
                  f"terms={len(wf.symmetrized())} {time.time() - t0:7.2f}s",
                  flush=True)


if __name__ == "__main__":
    main()
