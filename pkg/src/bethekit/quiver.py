"""Framed-quiver data model.

A quiver carries a vertex set, directed edges (loops allowed, each with an
optional multiplicity parameter), framing and gauge dimension vectors, and
a naming scheme for torus parameters.  From this we derive the weights of
the doubled representation space, the Koszul factor, the Baxter-eigenvalue
products, and the canonical orientation-induced polarization.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .monomial import KClass, TorusWeight, a_var, one, weight, x_var
from .rational import FactoredRational, lambda_minus


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    param: str | None = None  # multiplicity parameter; None means 1

    def multiplier(self) -> TorusWeight:
        return weight(**{self.param: 1}) if self.param else one


@dataclass(frozen=True)
class QuiverModel:
    num_vertices: int
    edges: tuple[Edge, ...]
    v: tuple[int, ...]
    w: tuple[int, ...]

    def __post_init__(self):
        if len(self.v) != self.num_vertices or len(self.w) != self.num_vertices:
            raise ValueError("dimension vectors must be indexed by the vertex set")
        if any(d < 0 for d in self.v + self.w):
            raise ValueError("dimension vectors must be nonnegative")
        for e in self.edges:
            if not (0 <= e.tail < self.num_vertices and 0 <= e.head < self.num_vertices):
                raise ValueError(
                    f"edge {e.tail}->{e.head} references a vertex outside the quiver"
                )

    # ----- bookkeeping -----

    def chern_roots(self, i: int) -> list[str]:
        return [x_var(i, k) for k in range(self.v[i])]

    def all_chern_roots(self) -> list[str]:
        return [x for i in range(self.num_vertices) for x in self.chern_roots(i)]

    def framing_params(self, i: int) -> list[str]:
        return [a_var(i, l) for l in range(self.w[i])]

    def is_cyclic(self) -> bool:
        """One vertex with a loop, or an oriented cycle 0->1->...->0."""
        ell = self.num_vertices
        wanted = {(i, (i + 1) % ell) for i in range(ell)}
        return {(e.tail, e.head) for e in self.edges} == wanted and len(self.edges) == ell

    # ----- numerics of the shape -----

    def cartan_form(self, u: Iterable[int], u2: Iterable[int]) -> int:
        u, u2 = list(u), list(u2)
        return sum(u[e.tail] * u2[e.head] for e in self.edges)

    def half_dim(self, v=None, w=None) -> int:
        v = list(self.v if v is None else v)
        w = list(self.w if w is None else w)
        dot = sum(vi * (wi - vi) for vi, wi in zip(v, w))
        return self.cartan_form(v, v) + dot

    # ----- weight classes -----

    def framing_weights(self) -> list[tuple[TorusWeight, TorusWeight]]:
        """Oriented (source, target) pairs for Hom(W_i, V_i)."""
        out = []
        for i in range(self.num_vertices):
            for k in range(self.v[i]):
                for l in range(self.w[i]):
                    out.append((weight(**{a_var(i, l): 1}), weight(**{x_var(i, k): 1})))
        return out

    def edge_weights(self) -> list[tuple[TorusWeight, TorusWeight]]:
        """Oriented (source, target) pairs for m_e . Hom(V_tail, V_head)."""
        out = []
        for e in self.edges:
            m = e.multiplier()
            for k in range(self.v[e.tail]):
                for l in range(self.v[e.head]):
                    out.append(
                        (weight(**{x_var(e.tail, k): 1}), m * weight(**{x_var(e.head, l): 1}))
                    )
        return out

    def end_weights(self, i: int) -> list[tuple[TorusWeight, TorusWeight]]:
        """Oriented (source, target) pairs for End(V_i), all (k, l) pairs."""
        out = []
        for k in range(self.v[i]):
            for l in range(self.v[i]):
                out.append((weight(**{x_var(i, k): 1}), weight(**{x_var(i, l): 1})))
        return out

    def rep_weights(self) -> KClass:
        """Weights of the doubled representation space T*Rep(v, w).

        Each oriented piece chi contributes chi and its symplectic partner
        hbar^{-1} chi^{-1}.
        """
        hinv = weight(hbar=-1)
        terms: dict[TorusWeight, int] = {}
        for src, tgt in self.framing_weights() + self.edge_weights():
            chi = tgt / src
            terms[chi] = terms.get(chi, 0) + 1
            dual = hinv * chi.inverse()
            terms[dual] = terms.get(dual, 0) + 1
        return KClass(terms)

    def end_class(self) -> KClass:
        terms: dict[TorusWeight, int] = {}
        for i in range(self.num_vertices):
            for src, tgt in self.end_weights(i):
                chi = tgt / src
                terms[chi] = terms.get(chi, 0) + 1
        return KClass(terms)

    # ----- canonical factors -----

    def delta_hbar(self) -> FactoredRational:
        """prod_i prod_{k,l} (1 - hbar x_{i,k}/x_{i,l}), diagonal included."""
        h = weight(hbar=1)
        out = FactoredRational.one()
        for i in range(self.num_vertices):
            for k in range(self.v[i]):
                for l in range(self.v[i]):
                    chi = h * weight(**{x_var(i, k): 1}) / weight(**{x_var(i, l): 1})
                    out = out * FactoredRational.binomial(one, chi, 1)
        return out

    def pi_factor(self) -> FactoredRational:
        """prod (1 - hbar x_{i,k}/a_{i,l})."""
        h = weight(hbar=1)
        out = FactoredRational.one()
        for i in range(self.num_vertices):
            for k in range(self.v[i]):
                for l in range(self.w[i]):
                    chi = h * weight(**{x_var(i, k): 1, a_var(i, l): -1})
                    out = out * FactoredRational.binomial(one, chi, 1)
        return out

    def pi_prime(self) -> FactoredRational:
        """prod hbar^{1/2} (1 - x_{i,k}/a_{i,l})."""
        hroot = weight(hbar=Fraction(1, 2))
        out = FactoredRational.one()
        for i in range(self.num_vertices):
            for k in range(self.v[i]):
                for l in range(self.w[i]):
                    chi = weight(**{x_var(i, k): 1, a_var(i, l): -1})
                    out = out * FactoredRational.from_monomial(hroot)
                    out = out * FactoredRational.binomial(one, chi, 1)
        return out

    def baxter_eigenvalue(self) -> FactoredRational:
        return self.pi_prime() / self.pi_factor()


@dataclass(frozen=True)
class PolarizationSpec:
    """Half-tangent class induced by the quiver orientation.

    weights: the virtual character T^{1/2}; oriented: (source, target,
    multiplicity) presentation of every weight, used by the hat-Koszul
    transform.
    """

    weights: KClass
    oriented: tuple[tuple[TorusWeight, TorusWeight, int], ...]


def polarization(Q: QuiverModel) -> PolarizationSpec:
    """T^{1/2} = framing Hom(W_i,V_i) + oriented edge terms - End(V_i)."""
    terms: dict[TorusWeight, int] = {}
    oriented: list[tuple[TorusWeight, TorusWeight, int]] = []
    for src, tgt in Q.framing_weights() + Q.edge_weights():
        chi = tgt / src
        terms[chi] = terms.get(chi, 0) + 1
        oriented.append((src, tgt, 1))
    for i in range(Q.num_vertices):
        for src, tgt in Q.end_weights(i):
            chi = tgt / src
            terms[chi] = terms.get(chi, 0) - 1
            oriented.append((src, tgt, -1))
    return PolarizationSpec(KClass(terms), tuple(oriented))


def tangent_weights(Q: QuiverModel) -> KClass:
    """TX = T*Rep weights minus (1 + hbar^{-1}) End(V_i)."""
    ends = Q.end_class()
    return Q.rep_weights() - ends - ends.twist(weight(hbar=-1))


def check_polarization_identity(Q: QuiverModel) -> bool:
    """T^{1/2} + hbar^{-1} (T^{1/2})^dual == TX, exactly."""
    half = polarization(Q).weights
    return half + half.dual().twist(weight(hbar=-1)) == tangent_weights(Q)


# ----- named examples -----

def jordan_quiver(n: int, w: int = 1) -> QuiverModel:
    """One vertex, one loop with parameter t1; the rank-w framed instanton data."""
    return QuiverModel(1, (Edge(0, 0, "t1"),), (n,), (w,))


def a1_quiver(v: int, w: int) -> QuiverModel:
    return QuiverModel(1, (), (v,), (w,))


def cyclic_quiver(v: tuple[int, ...], w: tuple[int, ...]) -> QuiverModel:
    ell = len(v)
    edges = tuple(Edge(i, (i + 1) % ell, "t1") for i in range(ell))
    return QuiverModel(ell, edges, tuple(v), tuple(w))


# ----- structured-text round trip -----

def quiver_to_text(Q: QuiverModel) -> str:
    doc = {
        "vertices": Q.num_vertices,
        "edges": [
            {"tail": e.tail, "head": e.head, "param": e.param} for e in Q.edges
        ],
        "v": list(Q.v),
        "w": list(Q.w),
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def quiver_from_text(text: str) -> QuiverModel:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"quiver spec parse error: {exc}") from exc
    for key in ("vertices", "edges", "v", "w"):
        if key not in doc:
            raise ValueError(f"quiver spec missing field '{key}'")
    edges = tuple(
        Edge(int(e["tail"]), int(e["head"]), e.get("param")) for e in doc["edges"]
    )
    return QuiverModel(int(doc["vertices"]), edges, tuple(doc["v"]), tuple(doc["w"]))


def save_quiver(Q: QuiverModel, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(quiver_to_text(Q))


def load_quiver(path: str) -> QuiverModel:
    with open(path) as fh:
        return quiver_from_text(fh.read())
