"""Symmetrization over cosets of block permutation groups.

Chern-root slots at each vertex are partitioned into blocks (slots that
share a fixed-point character).  Summation runs over coset representatives
of the full slot permutation group modulo within-block permutations; each
representative acts by renaming slot variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Mapping

from .laurent import LaurentPoly, divide_exact, product
from .monomial import TorusWeight, is_chern_var
from .rational import FactoredRational


def _distinct_permutations(labels: list[int]) -> Iterator[tuple[int, ...]]:
    """All distinct permutations of a multiset of labels, lexicographic."""
    labels = sorted(labels)
    n = len(labels)
    seq = list(labels)
    while True:
        yield tuple(seq)
        # next lexicographic permutation
        i = n - 2
        while i >= 0 and seq[i] >= seq[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while seq[j] <= seq[i]:
            j -= 1
        seq[i], seq[j] = seq[j], seq[i]
        seq[i + 1:] = reversed(seq[i + 1:])


@dataclass(frozen=True)
class CosetFamily:
    """Per-vertex slot variables with a block structure.

    groups: vertex -> ordered slot variable names
    blocks: vertex -> partition of slot positions into blocks
    """

    groups: dict[int, tuple[str, ...]]
    blocks: dict[int, tuple[tuple[int, ...], ...]]

    def __post_init__(self):
        for i, grp in self.groups.items():
            flat = sorted(p for blk in self.blocks[i] for p in blk)
            if flat != list(range(len(grp))):
                raise ValueError(f"blocks at vertex {i} do not partition the slots")

    def coset_count(self) -> int:
        total = 1
        for i, grp in self.groups.items():
            n = factorial(len(grp))
            for blk in self.blocks[i]:
                n //= factorial(len(blk))
            total *= n
        return total

    def all_variables(self) -> set[str]:
        return {v for grp in self.groups.values() for v in grp}

    def _vertex_substitutions(self, i: int) -> list[dict[str, str]]:
        grp = self.groups[i]
        blks = self.blocks[i]
        labels = []
        for j, blk in enumerate(blks):
            labels.extend([j] * len(blk))
        subs = []
        for seq in _distinct_permutations(labels):
            mapping = {}
            taken = {j: [p for p, lab in enumerate(seq) if lab == j] for j in range(len(blks))}
            for j, blk in enumerate(blks):
                for src, dst in zip(sorted(blk), taken[j]):
                    if src != dst:
                        mapping[grp[src]] = grp[dst]
            subs.append(mapping)
        return subs

    def substitutions(self) -> list[dict[str, str]]:
        """Variable renamings for every coset representative."""
        out = [{}]
        for i in sorted(self.groups):
            new = []
            for base in out:
                for sub in self._vertex_substitutions(i):
                    m = dict(base)
                    m.update(sub)
                    new.append(m)
            out = new
        return out

    def generator_transpositions(self) -> list[dict[str, str]]:
        """Adjacent-slot transpositions of each group (full symmetric group)."""
        out = []
        for grp in self.groups.values():
            for k in range(len(grp) - 1):
                out.append({grp[k]: grp[k + 1], grp[k + 1]: grp[k]})
        return out


class SymmetrizedSum:
    """Sum of a factored rational over coset representatives."""

    def __init__(self, terms: list[FactoredRational]):
        self.terms = terms

    def expand_pair(self) -> tuple[LaurentPoly, LaurentPoly]:
        """(numerator, denominator) over the least common factored denominator."""
        D = _common_denominator(self.terms)
        num = LaurentPoly.zero()
        for t in self.terms:
            num = num + _term_numerator(t, D)
        den = product(_binomial_poly(f) ** e for f, e in D.items())
        return num, den

    def evaluate(self, sqrt_values: Mapping[str, object]):
        total = 0
        for t in self.terms:
            total = total + t.evaluate(sqrt_values)
        return total

    def __len__(self):
        return len(self.terms)


def _binomial_poly(factor: tuple) -> LaurentPoly:
    a, b = factor
    return LaurentPoly.from_terms({a: 1, b: -1})


def _common_denominator(terms: Iterable[FactoredRational]) -> dict[tuple, int]:
    D: dict[tuple, int] = {}
    for t in terms:
        for f, e in t.denom_factors().items():
            if e > D.get(f, 0):
                D[f] = e
    return D


def _term_numerator(t: FactoredRational, D: dict[tuple, int]) -> LaurentPoly:
    """coeff * prefactor * prod(numer factors) * prod(D / denom_t), expanded."""
    out = LaurentPoly.from_weight(t.prefactor, t.coeff)
    den_t = t.denom_factors()
    for f, e in t.numer_factors().items():
        out = out * _binomial_poly(f) ** e
    for f, e in D.items():
        extra = e - den_t.get(f, 0)
        if extra:
            out = out * _binomial_poly(f) ** extra
    return out


def symmetrize(f: FactoredRational, family: CosetFamily) -> SymmetrizedSum:
    """Sum of coset-permuted copies of f."""
    xs = {v for v in f.variables() if is_chern_var(v)}
    declared = family.all_variables()
    if not xs <= declared:
        raise ValueError(f"variables {sorted(xs - declared)} outside the coset family")
    return SymmetrizedSum([f.rename(sub) for sub in family.substitutions()])


def symmetrize_poly(p: LaurentPoly, family: CosetFamily) -> LaurentPoly:
    out = LaurentPoly.zero()
    for sub in family.substitutions():
        out = out + p.rename(sub)
    return out


def clear_denominator(summed: SymmetrizedSum, clearing: FactoredRational):
    """Multiply a symmetrized sum by a factored Laurent class and divide out
    the common denominator exactly.

    Returns (True, polynomial, None) if clearing * sum is a Laurent
    polynomial, else (False, None, witness) with a surviving denominator
    factor as witness.  This is the engine behind the polynomiality
    certificates: `clearing` is the Koszul factor.
    """
    if not clearing.is_laurent():
        raise ValueError("clearing class must have no denominator factors")
    D = _common_denominator(summed.terms)
    avail = dict(clearing.numer_factors())
    D_res: dict[tuple, int] = {}
    cleared: dict[tuple, int] = {}
    for f, e in D.items():
        c = min(e, avail.get(f, 0))
        if c:
            cleared[f] = c
            avail[f] -= c
        if e - c:
            D_res[f] = e - c
    S = LaurentPoly.zero()
    for t in summed.terms:
        S = S + _term_numerator(t, D)
    dividend = LaurentPoly.from_weight(clearing.prefactor, clearing.coeff)
    for f, e in avail.items():
        if e:
            dividend = dividend * _binomial_poly(f) ** e
    dividend = dividend * S
    if not D_res:
        return True, dividend, None
    divisor = product(_binomial_poly(f) ** e for f, e in D_res.items())
    ok, q = divide_exact(dividend, divisor)
    if ok:
        return True, q, None
    # name a surviving factor for the certificate
    for f, e in D_res.items():
        ok_f, _ = divide_exact(dividend, _binomial_poly(f))
        if not ok_f:
            a, b = f
            return False, None, f"({a} - {b})"
    return False, None, "denominator does not divide (no single-factor witness)"
