"""Laurent monomials in torus parameters and Chern roots.

A `TorusWeight` is a monomial q^a hbar^b a_{i,l}^c x_{i,k}^d ... with
exponents in (1/2)Z.  Internally every exponent is stored doubled, as an
integer, so that formal square roots (hbar^{1/2} and friends) live on the
same lattice as everything else.

Chern-root variables follow the naming convention ``x{i}_{k}`` (vertex i,
slot k); framing parameters are ``a{i}_{l}``.  All other names (``hbar``,
``t1``, edge multiplicities, ...) are torus parameters.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Union

Exponent = Union[int, Fraction]

_X_RE = re.compile(r"^x(\d+)_(\d+)$")
_A_RE = re.compile(r"^a(\d+)_(\d+)$")


def x_var(vertex: int, slot: int) -> str:
    return f"x{vertex}_{slot}"


def a_var(vertex: int, col: int) -> str:
    return f"a{vertex}_{col}"


def is_chern_var(name: str) -> bool:
    return _X_RE.match(name) is not None


def chern_indices(name: str) -> tuple[int, int]:
    m = _X_RE.match(name)
    if m is None:
        raise ValueError(f"{name!r} is not a Chern-root variable")
    return int(m.group(1)), int(m.group(2))


def _to_doubled(e: Exponent) -> int:
    d = 2 * Fraction(e)
    if d.denominator != 1:
        raise ValueError(f"exponent {e} not in (1/2)Z")
    return int(d)


class TorusWeight:
    """Immutable Laurent monomial with exponents in (1/2)Z."""

    __slots__ = ("_e2", "_hash")

    def __init__(self, exps: Mapping[str, Exponent] | None = None, *, _e2=None):
        if _e2 is not None:
            self._e2 = _e2
        else:
            d = {}
            for v, e in (exps or {}).items():
                k = _to_doubled(e)
                if k:
                    d[v] = k
            self._e2 = tuple(sorted(d.items()))
        self._hash = hash(self._e2)

    @staticmethod
    def from_doubled(e2: Mapping[str, int]) -> "TorusWeight":
        return TorusWeight(_e2=tuple(sorted((v, k) for v, k in e2.items() if k)))

    @property
    def doubled(self) -> tuple[tuple[str, int], ...]:
        return self._e2

    def exponent(self, var: str) -> Fraction:
        for v, k in self._e2:
            if v == var:
                return Fraction(k, 2)
        return Fraction(0)

    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self._e2)

    def is_one(self) -> bool:
        return not self._e2

    def is_g_trivial(self) -> bool:
        """True iff no Chern-root variable appears."""
        return all(not is_chern_var(v) for v, _ in self._e2)

    def x_part(self) -> "TorusWeight":
        return TorusWeight.from_doubled(
            {v: k for v, k in self._e2 if is_chern_var(v)})

    def param_part(self) -> "TorusWeight":
        return TorusWeight.from_doubled(
            {v: k for v, k in self._e2 if not is_chern_var(v)})

    def __mul__(self, other: "TorusWeight") -> "TorusWeight":
        d = dict(self._e2)
        for v, k in other._e2:
            n = d.get(v, 0) + k
            if n:
                d[v] = n
            else:
                d.pop(v, None)
        return TorusWeight.from_doubled(d)

    def __truediv__(self, other: "TorusWeight") -> "TorusWeight":
        return self * other.inverse()

    def inverse(self) -> "TorusWeight":
        return TorusWeight.from_doubled({v: -k for v, k in self._e2})

    def __pow__(self, n: Exponent) -> "TorusWeight":
        f = Fraction(n)
        d = {}
        for v, k in self._e2:
            kk = k * f
            if kk.denominator != 1:
                raise ValueError(f"{self}**{n} leaves the half-integer lattice")
            d[v] = int(kk)
        return TorusWeight.from_doubled(d)

    def sqrt(self) -> "TorusWeight":
        return self ** Fraction(1, 2)

    def rename(self, mapping: Mapping[str, str]) -> "TorusWeight":
        return TorusWeight.from_doubled(
            {mapping.get(v, v): k for v, k in self._e2})

    def substitute(self, values: Mapping[str, "TorusWeight"]) -> "TorusWeight":
        """Substitute monomial values for variables (others untouched)."""
        out = one
        for v, k in self._e2:
            if v in values:
                out = out * values[v] ** Fraction(k, 2)
            else:
                out = out * TorusWeight.from_doubled({v: k})
        return out

    def evaluate(self, sqrt_values: Mapping[str, object]):
        """Numeric value, given a value for the square root of each variable.

        The value of variable v is sqrt_values[v]**2; a monomial with doubled
        exponent k contributes sqrt_values[v]**k.  This keeps half powers
        single-valued.
        """
        out = 1
        for v, k in self._e2:
            out = out * sqrt_values[v] ** k
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusWeight) and self._e2 == other._e2

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "TorusWeight") -> bool:
        return self._e2 < other._e2

    def __repr__(self) -> str:
        if not self._e2:
            return "1"
        parts = []
        for v, k in self._e2:
            e = Fraction(k, 2)
            parts.append(v if e == 1 else f"{v}^{e}")
        return "*".join(parts)


one = TorusWeight()


def weight(**exps: Exponent) -> TorusWeight:
    """Convenience constructor: ``weight(hbar=-1, x0_1=2)``."""
    return TorusWeight(exps)


class KClass:
    """Virtual torus character: integer-multiplicity multiset of weights."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[TorusWeight, int] | Iterable[TorusWeight] | None = None):
        d: dict[TorusWeight, int] = {}
        if terms is not None:
            if isinstance(terms, Mapping):
                items = terms.items()
            else:
                items = ((w, 1) for w in terms)
            for w, n in items:
                if n:
                    d[w] = d.get(w, 0) + n
                    if not d[w]:
                        del d[w]
        self._terms = d

    @property
    def terms(self) -> dict[TorusWeight, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def rank(self) -> int:
        return sum(self._terms.values())

    def is_zero(self) -> bool:
        return not self._terms

    def is_effective(self) -> bool:
        return all(n >= 0 for n in self._terms.values())

    def __add__(self, other: "KClass") -> "KClass":
        d = dict(self._terms)
        for w, n in other._terms.items():
            d[w] = d.get(w, 0) + n
        return KClass(d)

    def __sub__(self, other: "KClass") -> "KClass":
        d = dict(self._terms)
        for w, n in other._terms.items():
            d[w] = d.get(w, 0) - n
        return KClass(d)

    def __neg__(self) -> "KClass":
        return KClass({w: -n for w, n in self._terms.items()})

    def __rmul__(self, n: int) -> "KClass":
        return KClass({w: n * m for w, m in self._terms.items()})

    def twist(self, m: TorusWeight) -> "KClass":
        """Multiply every weight by the monomial m."""
        return KClass({w * m: n for w, n in self._terms.items()})

    def dual(self) -> "KClass":
        return KClass({w.inverse(): n for w, n in self._terms.items()})

    def substitute(self, values: Mapping[str, TorusWeight]) -> "KClass":
        return KClass_from_pairs(
            (w.substitute(values), n) for w, n in self._terms.items())

    def x_derivative(self, var: str) -> "KClass":
        """The class whose multiplicity at w is mult(w) * (exponent of var in w)."""
        d = {}
        for w, n in self._terms.items():
            e = w.exponent(var)
            if e.denominator != 1:
                raise ValueError(f"half-integer {var}-exponent in {w}")
            m = n * int(e)
            if m:
                d[w] = d.get(w, 0) + m
        return KClass(d)

    def det(self) -> TorusWeight:
        """Product of all weights with multiplicity."""
        out = one
        for w, n in self._terms.items():
            out = out * w ** n
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, KClass) and self._terms == other._terms

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(
            (f"{n}*{w}" if n != 1 else f"{w}")
            for w, n in sorted(self._terms.items()))


def KClass_from_pairs(pairs: Iterable[tuple[TorusWeight, int]]) -> KClass:
    d: dict[TorusWeight, int] = {}
    for w, n in pairs:
        if n:
            d[w] = d.get(w, 0) + n
            if not d[w]:
                del d[w]
    return KClass(d)
