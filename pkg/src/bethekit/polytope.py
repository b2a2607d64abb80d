"""Exact rational linear programming and zonotope membership.

Used for the Newton-polytope containment checks: every exponent vector of
a symmetrized numerator must lie in a slightly shrunk zonotope spanned by
the exponent vectors of the defining weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


def _simplex_phase1(A: list[list[Fraction]], b: list[Fraction]) -> bool:
    """Feasibility of {A t = b, t >= 0} via phase-1 simplex with Bland's rule.

    Rows are normalized so b >= 0; artificial variables start basic.
    Returns True iff the artificial objective reaches zero.
    """
    m = len(A)
    if m == 0:
        return True
    n = len(A[0])
    zero = Fraction(0)
    one = Fraction(1)
    T = []
    for i in range(m):
        row = list(A[i])
        rhs = b[i]
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        art = [one if k == i else zero for k in range(m)]
        T.append(row + art + [rhs])
    basis = [n + i for i in range(m)]
    total = n + m
    cost = [zero] * n + [one] * m

    while True:
        # reduced costs
        enter = -1
        for j in range(total):
            z = zero
            for i in range(m):
                if cost[basis[i]] != 0:
                    z += cost[basis[i]] * T[i][j]
            if cost[j] - z < 0:
                enter = j
                break  # Bland: smallest index
        if enter < 0:
            break
        # ratio test, Bland tie-break on basis index
        leave = -1
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return False  # unbounded phase-1: cannot happen, treat as infeasible
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(m):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [T[i][k] - f * T[leave][k] for k in range(total + 1)]
        basis[leave] = enter

    objective = sum(T[i][-1] for i in range(m) if basis[i] >= n)
    return objective == 0


def feasible_box_combination(
    generators: Sequence[Sequence[Fraction]], target: Sequence[Fraction]
) -> bool:
    """Is target = sum_i t_i * g_i with 0 <= t_i <= 1 solvable?

    Encoded as equalities with slack variables s_i = 1 - t_i.
    """
    gens = [list(map(Fraction, g)) for g in generators]
    tgt = list(map(Fraction, target))
    d = len(tgt)
    n = len(gens)
    # variables: t_0..t_{n-1}, s_0..s_{n-1}
    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    for r in range(d):
        A.append([gens[i][r] for i in range(n)] + [Fraction(0)] * n)
        b.append(tgt[r])
    for i in range(n):
        row = [Fraction(0)] * (2 * n)
        row[i] = Fraction(1)
        row[n + i] = Fraction(1)
        A.append(row)
        b.append(Fraction(1))
    return _simplex_phase1(A, b)


@dataclass(frozen=True)
class Zonotope:
    """Translate + sum of segments [0, g_i]."""

    translate: tuple[Fraction, ...]
    generators: tuple[tuple[Fraction, ...], ...]

    def contains(self, point: Sequence[Fraction]) -> bool:
        tgt = [Fraction(p) - t for p, t in zip(point, self.translate)]
        return feasible_box_combination(self.generators, tgt)
