"""Torus-fixed data: partitions, fixed components, and restriction.

For cyclic quivers the fixed components are tuples of partitions, one per
framing column; each box of content c sits at vertex (column_vertex + c)
mod ell and its Chern-root slot carries the character a * t1^{-c} *
hbar^{row-1}.  For edgeless one-vertex quivers the fixed components are
the v-element subsets of framing columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .monomial import KClass, TorusWeight, a_var, one, weight, x_var
from .quiver import QuiverModel
from .rational import FactoredRational, PoleOnLocus


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        p = self.parts
        if any(p[i] < p[i + 1] for i in range(len(p) - 1)) or any(x <= 0 for x in p):
            raise ValueError("parts must be weakly decreasing positive integers")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def boxes(self) -> list[tuple[int, int]]:
        """(row, column), both 1-based, row-major order."""
        return [(r, c) for r, part in enumerate(self.parts, 1) for c in range(1, part + 1)]

    def contents(self) -> list[int]:
        return [c - r for r, c in self.boxes()]

    def dominates(self, other: "Partition") -> bool:
        """Dominance: partial sums of self bound those of other (same size)."""
        if self.size != other.size:
            return False
        s = t = 0
        for k in range(max(len(self.parts), len(other.parts))):
            s += self.parts[k] if k < len(self.parts) else 0
            t += other.parts[k] if k < len(other.parts) else 0
            if s < t:
                return False
        return True

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions_of(n: int) -> Iterator[Partition]:
    def gen(rem: int, cap: int, acc: list[int]):
        if rem == 0:
            yield Partition(tuple(acc))
            return
        for part in range(min(rem, cap), 0, -1):
            yield from gen(rem - part, part, acc + [part])

    yield from gen(n, n, [])


@dataclass(frozen=True)
class FixedComponent:
    """Assignment of every Chern-root slot to a torus character.

    chars[i][k] is the character of slot x_{i,k}.  label identifies the
    component (partition tuple or column subset).  a_weights[i][k] is the
    framing-torus part used for grading (the character with hbar removed).
    """

    label: str
    chars: tuple[tuple[TorusWeight, ...], ...]
    partitions: tuple[tuple[int, int, Partition], ...] = ()  # (vertex, column, shape)
    columns: tuple[int, ...] = ()  # for edgeless quivers

    def substitution(self, Q: QuiverModel) -> dict[str, TorusWeight]:
        sub = {}
        for i in range(Q.num_vertices):
            for k, ch in enumerate(self.chars[i]):
                sub[x_var(i, k)] = ch
        return sub

    def a_character(self, i: int, k: int) -> TorusWeight:
        """Slot character with the hbar part removed (the grading character)."""
        e2 = {v: e for v, e in self.chars[i][k].doubled if v != "hbar"}
        return TorusWeight.from_doubled(e2)


def _box_slots(vertex: int, column: int, lam: Partition, ell: int, framing: bool):
    """(target vertex, character, content) for each box, sorted by (content, row)."""
    out = []
    for r, c in lam.boxes():
        content = c - r
        ch = weight(t1=-content, hbar=r - 1)
        if framing:
            ch = ch * weight(**{a_var(vertex, column): 1})
        out.append(((vertex + content) % ell, ch, content, r))
    out.sort(key=lambda t: (t[2], t[3]))
    return out


def cyclic_fixed_components(Q: QuiverModel) -> list[FixedComponent]:
    """All partition tuples whose folded content counts give v."""
    if not Q.is_cyclic():
        raise ValueError("fixed-component enumeration by partitions needs a cyclic quiver")
    ell = Q.num_vertices
    columns = [(i, l) for i in range(ell) for l in range(Q.w[i])]
    n = sum(Q.v)
    out = []

    def split(rem: int, cols: list, acc: list[Partition | None]):
        if not cols:
            if rem == 0:
                yield tuple(acc)
            return
        for m in range(rem, -1, -1):
            shapes = list(partitions_of(m)) if m else [Partition(())]
            for lam in shapes:
                yield from split(rem - m, cols[1:], acc + [lam])

    for tup in split(n, columns, []):
        slots: list[list[TorusWeight]] = [[] for _ in range(ell)]
        counts = [0] * ell
        for (i, l), lam in zip(columns, tup):
            for tgt, ch, _c, _r in _box_slots(i, l, lam, ell, True):
                slots[tgt].append(ch)
                counts[tgt] += 1
        if tuple(counts) != Q.v:
            continue
        label = ";".join(
            f"a{i}_{l}:{lam}" for (i, l), lam in zip(columns, tup) if lam.parts
        ) or "empty"
        if len(columns) == 1:
            label = str(tup[0])
        out.append(
            FixedComponent(
                label,
                tuple(tuple(s) for s in slots),
                partitions=tuple((i, l, lam) for (i, l), lam in zip(columns, tup)),
            )
        )
    return out


def subset_fixed_components(Q: QuiverModel) -> list[FixedComponent]:
    """Edgeless one-vertex quiver: components are v-subsets of framing columns."""
    if Q.edges or Q.num_vertices != 1:
        raise ValueError("subset enumeration needs an edgeless one-vertex quiver")
    v, w = Q.v[0], Q.w[0]
    out = []
    for cols in combinations(range(w), v):
        chars = tuple(weight(**{a_var(0, l): 1}) for l in cols)
        out.append(FixedComponent("{" + ",".join(map(str, cols)) + "}", (chars,), columns=cols))
    return out


def enumerate_fixed(Q: QuiverModel) -> list[FixedComponent]:
    if Q.is_cyclic():
        return cyclic_fixed_components(Q)
    if not Q.edges and Q.num_vertices == 1:
        return subset_fixed_components(Q)
    raise ValueError("fixed-component enumeration implemented for cyclic and edgeless quivers only")


def v_character(F: FixedComponent) -> KClass:
    """Character of the tautological space at a one-vertex fixed component.

    The single framing parameter is normalized away (it only rescales the
    whole space), leaving the loop-parameter content grading.
    """
    terms: dict[TorusWeight, int] = {}
    for ch in F.chars[0]:
        e2 = {v: e for v, e in ch.doubled if not v.startswith("a")}
        ch = TorusWeight.from_doubled(e2)
        terms[ch] = terms.get(ch, 0) + 1
    return KClass(terms)


def restrict(expr, F: FixedComponent, Q: QuiverModel):
    """Substitute every Chern root by its character at F.

    Works on KClass and FactoredRational; a denominator factor vanishing
    identically after substitution raises PoleOnLocus (removable
    cancellations are attempted first in factored form).
    """
    sub = F.substitution(Q)
    if isinstance(expr, KClass):
        return expr.substitute(sub)
    if isinstance(expr, FactoredRational):
        return expr.substitute_monomials(sub)
    if isinstance(expr, TorusWeight):
        return expr.substitute(sub)
    raise TypeError(f"cannot restrict {type(expr).__name__}")


# ----- attracting orders on components -----------------------------------


def dominance_leq(a: FixedComponent, b: FixedComponent) -> bool:
    """a <= b iff, column by column, b's partition dominates a's."""
    if len(a.partitions) != len(b.partitions):
        raise ValueError("components of different shape")
    for (ia, ca, pa), (ib, cb, pb) in zip(a.partitions, b.partitions):
        if (ia, ca) != (ib, cb):
            raise ValueError("components of different shape")
        if not pb.dominates(pa):
            return False
    return True


def column_leq(a: FixedComponent, b: FixedComponent) -> bool:
    """a <= b iff a's sorted columns dominate b's elementwise.

    Attracting components sit at larger framing-column indices, so the
    triangular support of a restriction runs toward larger subsets.
    """
    if len(a.columns) != len(b.columns):
        raise ValueError("components of different magnon number")
    return all(x >= y for x, y in zip(sorted(a.columns), sorted(b.columns)))


def component_order(Q: QuiverModel):
    """The attracting order used by the triangularity certificate.

    Partition dominance for one-vertex cyclic data, elementwise column
    order for edgeless one-vertex data; None when no order is wired up.
    """
    if Q.is_cyclic() and Q.num_vertices == 1 and Q.w == (1,):
        return dominance_leq
    if not Q.edges and Q.num_vertices == 1:
        return column_leq
    return None
