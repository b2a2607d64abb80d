"""Factored rational functions: monomial * prod (A - B)^{±1}.

This is the shape every class in the toolkit lives in before expansion:
Koszul factors, framing products, transfer-matrix eigenvalues, weight
function kernels.  Factors are kept in a canonical form (coprime monomial
pair, fixed orientation) so that multiplication cancels common factors by
plain multiset arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from . import laurent
from .laurent import LaurentPoly, divide_exact
from .monomial import KClass, TorusWeight, one


class PoleOnLocus(ZeroDivisionError):
    """A denominator factor vanishes identically after substitution."""


def _canonical_factor(a: TorusWeight, b: TorusWeight):
    """Normalize the binomial (a - b).

    Returns (factor, monomial, sign) with factor = (A, B) canonical such
    that (a - b) = sign * monomial * (A - B), or (None, monomial, 0) when
    a == b (the zero binomial).
    """
    if a == b:
        return None, a, 0
    # clear the common monomial content
    ea, eb = dict(a.doubled), dict(b.doubled)
    g = {}
    for v in set(ea) | set(eb):
        m = min(ea.get(v, 0), eb.get(v, 0))
        if m:
            g[v] = m
    mon = TorusWeight.from_doubled(g)
    aa, bb = a / mon, b / mon
    if bb < aa:
        return (bb, aa), mon, -1
    return (aa, bb), mon, 1


class FactoredRational:
    """coeff * prefactor * prod over factors (A - B)^e, e in Z."""

    __slots__ = ("coeff", "prefactor", "factors")

    def __init__(self, coeff=1, prefactor: TorusWeight = one,
                 factors: Mapping[tuple, int] | None = None):
        self.coeff = Fraction(coeff)
        self.prefactor = prefactor if self.coeff else one
        self.factors = dict(factors or {}) if self.coeff else {}

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_monomial(w: TorusWeight, coeff=1) -> "FactoredRational":
        return FactoredRational(coeff, w)

    @staticmethod
    def binomial(a: TorusWeight, b: TorusWeight, power: int = 1) -> "FactoredRational":
        """The factor (a - b)**power."""
        fac, mon, sign = _canonical_factor(a, b)
        if sign == 0:
            if power < 0:
                raise PoleOnLocus(f"zero binomial ({a} - {b}) in a denominator")
            return FactoredRational(0) if power > 0 else FactoredRational(1)
        return FactoredRational(Fraction(sign) ** power, mon ** power,
                                {fac: power})

    @staticmethod
    def one() -> "FactoredRational":
        return FactoredRational(1)

    # -- predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return self.coeff == 0

    def numer_factors(self) -> dict[tuple, int]:
        return {f: e for f, e in self.factors.items() if e > 0}

    def denom_factors(self) -> dict[tuple, int]:
        return {f: -e for f, e in self.factors.items() if e < 0}

    def is_laurent(self) -> bool:
        return all(e > 0 for e in self.factors.values())

    # -- arithmetic -----------------------------------------------------

    def __mul__(self, other) -> "FactoredRational":
        if not isinstance(other, FactoredRational):
            return FactoredRational(self.coeff * Fraction(other),
                                    self.prefactor, self.factors)
        if self.is_zero() or other.is_zero():
            return FactoredRational(0)
        d = dict(self.factors)
        for f, e in other.factors.items():
            n = d.get(f, 0) + e
            if n:
                d[f] = n
            else:
                del d[f]
        return FactoredRational(self.coeff * other.coeff,
                                self.prefactor * other.prefactor, d)

    __rmul__ = __mul__

    def inverse(self) -> "FactoredRational":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return FactoredRational(1 / self.coeff, self.prefactor.inverse(),
                                {f: -e for f, e in self.factors.items()})

    def __truediv__(self, other: "FactoredRational") -> "FactoredRational":
        return self * other.inverse()

    def __pow__(self, n: int) -> "FactoredRational":
        if self.is_zero():
            if n <= 0:
                raise ZeroDivisionError("0**nonpositive")
            return FactoredRational(0)
        return FactoredRational(self.coeff ** n, self.prefactor ** n,
                                {f: e * n for f, e in self.factors.items()})

    # -- expansion and equality ------------------------------------------

    def expand_pair(self) -> tuple[LaurentPoly, LaurentPoly]:
        """(numerator, denominator) as Laurent polynomials."""
        num = LaurentPoly.from_weight(self.prefactor, self.coeff)
        den = LaurentPoly.const(1)
        for (a, b), e in self.factors.items():
            p = LaurentPoly.from_terms({a: 1, b: -1})
            if e > 0:
                num = num * p ** e
            else:
                den = den * p ** (-e)
        return num, den

    def as_laurent(self) -> LaurentPoly:
        if not self.is_laurent():
            raise ValueError("has denominator factors; not a Laurent polynomial")
        num, _ = self.expand_pair()
        return num

    def __eq__(self, other) -> bool:
        if not isinstance(other, FactoredRational):
            other = FactoredRational(other)
        n1, d1 = self.expand_pair()
        n2, d2 = other.expand_pair()
        return n1 * d2 == n2 * d1

    def __hash__(self):
        raise TypeError("FactoredRational is unhashable")

    def __repr__(self) -> str:
        parts = []
        if self.coeff != 1 or (not self.factors and self.prefactor.is_one()):
            parts.append(str(self.coeff))
        if not self.prefactor.is_one():
            parts.append(str(self.prefactor))
        for (a, b), e in sorted(self.factors.items()):
            s = f"({a} - {b})"
            parts.append(s if e == 1 else f"{s}^{e}")
        return " * ".join(parts)

    # -- structure --------------------------------------------------------

    def rename(self, mapping: Mapping[str, str]) -> "FactoredRational":
        out = FactoredRational(self.coeff, self.prefactor.rename(mapping))
        for (a, b), e in self.factors.items():
            out = out * FactoredRational.binomial(
                a.rename(mapping), b.rename(mapping), e)
        return out

    def substitute_monomials(self, values: Mapping[str, TorusWeight]) -> "FactoredRational":
        """Substitute monomials for variables, re-canonicalizing factors.

        Raises PoleOnLocus if a denominator factor vanishes identically
        (numerator zeros make the result zero).
        """
        zero_net = 0
        zero_seen = False
        witness = None
        pending: list[tuple[TorusWeight, TorusWeight, int]] = []
        for (a, b), e in self.factors.items():
            a2, b2 = a.substitute(values), b.substitute(values)
            if a2 == b2:
                zero_seen = True
                zero_net += e
                if e < 0:
                    witness = f"({a} - {b})"
            else:
                pending.append((a2, b2, e))
        if zero_net > 0:
            return FactoredRational(0)
        if zero_net < 0:
            raise PoleOnLocus(f"denominator factor {witness} vanishes on the locus")
        if zero_seen:
            # equal numbers of vanishing factors up and down: the factored
            # form cannot resolve the 0/0 limit
            raise PoleOnLocus("indeterminate 0/0 on the locus")
        out = FactoredRational(self.coeff, self.prefactor.substitute(values))
        for a2, b2, e in pending:
            out = out * FactoredRational.binomial(a2, b2, e)
        return out

    def evaluate(self, sqrt_values: Mapping[str, object]):
        """Numeric / exact evaluation given square roots of all variables."""
        val = self.coeff * self.prefactor.evaluate(sqrt_values)
        for (a, b), e in self.factors.items():
            base = a.evaluate(sqrt_values) - b.evaluate(sqrt_values)
            if e < 0 and base == 0:
                raise ZeroDivisionError(f"factor ({a} - {b}) vanishes at the point")
            val = val * base ** e
        return val

    def variables(self) -> set[str]:
        vs = set(self.prefactor.variables())
        for (a, b) in self.factors:
            vs.update(a.variables())
            vs.update(b.variables())
        return vs


# -- the three transforms ----------------------------------------------


def lambda_minus(c: KClass) -> FactoredRational:
    """Alternating sum of exterior powers: prod over weights (1 - w)."""
    if not c.is_effective():
        raise ValueError("lambda_minus requires an effective class "
                         "(negative multiplicities must be handled by the caller)")
    out = FactoredRational.one()
    for w, n in c.items():
        out = out * FactoredRational.binomial(one, w, n)
    return out


def lambda_hat(oriented: Iterable[tuple[TorusWeight, TorusWeight, int]]) -> FactoredRational:
    """prod (source - target)^mult over oriented weights."""
    out = FactoredRational.one()
    for src, tgt, n in oriented:
        out = out * FactoredRational.binomial(src, tgt, n)
    return out


def ahat(c: KClass) -> FactoredRational:
    """Multiplicative transform w -> w^{1/2} - w^{-1/2} on a virtual class."""
    out = FactoredRational.one()
    for w, n in c.items():
        r = w.sqrt()
        out = out * FactoredRational.binomial(r, r.inverse(), n)
    return out


# -- helpers -------------------------------------------------------------


def monomial_quotient(p: LaurentPoly, q: LaurentPoly):
    """If p == coeff * monomial * q, return (coeff, monomial); else None."""
    if p.is_zero() or q.is_zero():
        return (0, one) if p.is_zero() and q.is_zero() else None
    a, b = p._aligned(q)
    if len(a.terms) != len(b.terms):
        return None
    # packed keys order-compatibly with monomial multiplication, so the
    # maximal terms must correspond
    ka, kb = max(a.terms), max(b.terms)
    off = ka - kb
    coeff = Fraction(a.terms[ka]) / Fraction(b.terms[kb])
    for k, c in b.terms.items():
        if a.terms.get(k + off) != coeff * c:
            return None
    mon_e2 = laurent._unpack(a.vars, off + laurent._zero_key(len(a.vars)))
    return coeff, TorusWeight.from_doubled(mon_e2)


def equal_up_to_monomial(f: FactoredRational, g: FactoredRational):
    """Test f == coeff*monomial*g as rational functions.

    Returns (coeff, monomial) or None.  Used for all identities the
    construction only pins down up to a global monomial and sign.
    """
    n1, d1 = f.expand_pair()
    n2, d2 = g.expand_pair()
    return monomial_quotient(n1 * d2, n2 * d1)
