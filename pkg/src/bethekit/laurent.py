"""Sparse exact Laurent polynomials over the rationals.

Exponents live on the same doubled (half-integer) lattice as TorusWeight.
Internally a polynomial carries a variable tuple and packs each exponent
vector into a single Python int (24 bits per variable, biased), so that
monomial multiplication is integer addition.  All arithmetic is exact;
coefficients are ints or Fractions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .monomial import TorusWeight, is_chern_var

_BITS = 24
_BIAS = 1 << 23
_MASK = (1 << _BITS) - 1


def _zero_key(nvars: int) -> int:
    z = 0
    for i in range(nvars):
        z |= _BIAS << (_BITS * i)
    return z


def _pack(vars: tuple[str, ...], e2: Mapping[str, int]) -> int:
    key = 0
    for i, v in enumerate(vars):
        e = e2.get(v, 0)
        if not -(1 << 22) < e < (1 << 22):
            raise OverflowError(f"exponent {e} for {v} out of packing range")
        key |= (e + _BIAS) << (_BITS * i)
    return key

def _unpack(vars: tuple[str, ...], key: int) -> dict[str, int]:
    out = {}
    for i, v in enumerate(vars):
        e = ((key >> (_BITS * i)) & _MASK) - _BIAS
        if e:
            out[v] = e
    return out


class LaurentPoly:
    """Sparse Laurent polynomial; immutable by convention."""

    __slots__ = ("vars", "terms", "_zero")

    def __init__(self, vars: tuple[str, ...], terms: dict[int, object]):
        self.vars = vars
        self.terms = terms
        self._zero = _zero_key(len(vars))

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly((), {})

    @staticmethod
    def const(c) -> "LaurentPoly":
        if c == 0:
            return LaurentPoly.zero()
        return LaurentPoly((), {0: c})

    @staticmethod
    def from_weight(w: TorusWeight, coeff=1) -> "LaurentPoly":
        return LaurentPoly.from_terms({w: coeff})

    @staticmethod
    def from_terms(terms: Mapping[TorusWeight, object]) -> "LaurentPoly":
        vs: set[str] = set()
        for w in terms:
            vs.update(w.variables())
        vars = tuple(sorted(vs))
        d: dict[int, object] = {}
        for w, c in terms.items():
            if c == 0:
                continue
            k = _pack(vars, dict(w.doubled))
            d[k] = d.get(k, 0) + c
            if d[k] == 0:
                del d[k]
        return LaurentPoly(vars, d)

    # -- views --------------------------------------------------------

    def monomial_terms(self) -> dict[TorusWeight, object]:
        return {TorusWeight.from_doubled(_unpack(self.vars, k)): c
                for k, c in self.terms.items()}

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def is_constant(self) -> bool:
        return all(k == self._zero for k in self.terms)

    def constant_value(self):
        if self.is_zero():
            return 0
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    # -- context alignment --------------------------------------------

    def in_vars(self, vars: tuple[str, ...]) -> "LaurentPoly":
        if vars == self.vars:
            return self
        if not set(self.vars) <= set(vars):
            raise ValueError("cannot drop variables")
        idx = [vars.index(v) for v in self.vars]
        zb = _zero_key(len(vars))
        d = {}
        for k, c in self.terms.items():
            kk = zb
            for i in range(len(self.vars)):
                e = ((k >> (_BITS * i)) & _MASK) - _BIAS
                kk += e << (_BITS * idx[i])
            d[kk] = c
        return LaurentPoly(vars, d)

    def _aligned(self, other: "LaurentPoly"):
        if self.vars == other.vars:
            return self, other
        vars = tuple(sorted(set(self.vars) | set(other.vars)))
        return self.in_vars(vars), other.in_vars(vars)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        a, b = self._aligned(other)
        d = dict(a.terms)
        for k, c in b.terms.items():
            n = d.get(k, 0) + c
            if n == 0:
                d.pop(k, None)
            else:
                d[k] = n
        return LaurentPoly(a.vars, d)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.vars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "LaurentPoly":
        return LaurentPoly.const(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            if other == 0:
                return LaurentPoly.zero()
            return LaurentPoly(self.vars,
                               {k: c * other for k, c in self.terms.items()})
        a, b = self._aligned(other)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        z = a._zero
        d: dict[int, object] = {}
        for k2, c2 in b.terms.items():
            off = k2 - z
            for k1, c1 in a.terms.items():
                k = k1 + off
                n = d.get(k, 0) + c1 * c2
                if n == 0:
                    d.pop(k, None)
                else:
                    d[k] = n
        return LaurentPoly(a.vars, d)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        raise TypeError("LaurentPoly is unhashable")

    def __repr__(self) -> str:
        ts = self.monomial_terms()
        if not ts:
            return "0"
        return " + ".join(f"{c}*{w}" if not w.is_one() else f"{c}"
                          for w, c in sorted(ts.items(), key=lambda t: t[0]))

    # -- structure -----------------------------------------------------

    def rename(self, mapping: Mapping[str, str]) -> "LaurentPoly":
        return LaurentPoly.from_terms(
            {w.rename(mapping): c for w, c in self.monomial_terms().items()})

    def substitute_monomials(self, values: Mapping[str, TorusWeight]) -> "LaurentPoly":
        return LaurentPoly.from_terms_accum(
            (w.substitute(values), c) for w, c in self.monomial_terms().items())

    @staticmethod
    def from_terms_accum(pairs: Iterable[tuple[TorusWeight, object]]) -> "LaurentPoly":
        d: dict[TorusWeight, object] = {}
        for w, c in pairs:
            d[w] = d.get(w, 0) + c
        return LaurentPoly.from_terms(d)

    def evaluate(self, sqrt_values: Mapping[str, object]):
        """Exact or numeric evaluation; see TorusWeight.evaluate."""
        total = 0
        for w, c in self.monomial_terms().items():
            total = total + c * w.evaluate(sqrt_values)
        return total

    def x_support(self, xvars: tuple[str, ...]) -> set[tuple[Fraction, ...]]:
        """Exponent vectors of the Chern-root variables over the support."""
        out = set()
        for w in self.monomial_terms():
            out.add(tuple(w.exponent(v) for v in xvars))
        return out

    def x_variables(self) -> tuple[str, ...]:
        return tuple(v for v in self.vars if is_chern_var(v))

    def min_exponents(self) -> dict[str, int]:
        """Per-variable minimum doubled exponent over the support."""
        if not self.terms:
            return {}
        mins = [None] * len(self.vars)
        for k in self.terms:
            for i in range(len(self.vars)):
                e = ((k >> (_BITS * i)) & _MASK) - _BIAS
                if mins[i] is None or e < mins[i]:
                    mins[i] = e
        return {v: m for v, m in zip(self.vars, mins) if m}

    def shift(self, e2: Mapping[str, int]) -> "LaurentPoly":
        """Multiply by the monomial with doubled exponents e2."""
        if not e2:
            return self
        vars = tuple(sorted(set(self.vars) | set(e2)))
        p = self.in_vars(vars)
        off = _pack(vars, dict(e2)) - _zero_key(len(vars))
        return LaurentPoly(vars, {k + off: c for k, c in p.terms.items()})


def divide_exact(num: LaurentPoly, den: LaurentPoly):
    """Exact Laurent-polynomial division.

    Returns (True, quotient) when den divides num exactly, else
    (False, None).  Works by clearing per-variable valuations and running
    single-divisor reduction in a lex monomial order; for an exact multiple
    the leading term is divisible at every step, so the first failure
    certifies non-divisibility.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if num.is_zero():
        return True, LaurentPoly.zero()
    f, g = num._aligned(den)
    fshift = f.min_exponents()
    gshift = g.min_exponents()
    f = f.shift({v: -e for v, e in fshift.items()})
    g = g.shift({v: -e for v, e in gshift.items()})
    f, g = f._aligned(g)
    vars = f.vars
    nv = len(vars)
    zero = _zero_key(nv)

    fterms = dict(f.terms)
    gterms = g.terms
    glead = max(gterms)
    gc = gterms[glead]
    goff = [(k - glead, c) for k, c in gterms.items() if k != glead]
    quotient: dict[int, object] = {}

    def divisible(ka: int, kb: int) -> bool:
        for i in range(nv):
            if ((ka >> (_BITS * i)) & _MASK) < ((kb >> (_BITS * i)) & _MASK):
                return False
        return True

    while fterms:
        flead = max(fterms)
        if not divisible(flead, glead):
            return False, None
        qk = flead - glead + zero
        c = fterms[flead]
        qc = Fraction(c) / Fraction(gc)
        if qc.denominator == 1:
            qc = int(qc)
        quotient[qk] = qc
        del fterms[flead]
        off = qk - zero
        for dk, dc in goff:
            k = flead + dk
            n = fterms.get(k, 0) - qc * dc
            if n == 0:
                fterms.pop(k, None)
            else:
                fterms[k] = n
    q = LaurentPoly(vars, quotient)
    # undo the valuation shifts: quotient of originals is q shifted back
    back = {v: fshift.get(v, 0) - gshift.get(v, 0) for v in set(fshift) | set(gshift)}
    back = {v: e for v, e in back.items() if e}
    return True, q.shift(back)


def product(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    out = LaurentPoly.const(1)
    for p in polys:
        out = out * p
    return out
