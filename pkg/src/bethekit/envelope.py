"""Off-shell Bethe eigenfunctions attached to fixed components.

For each fixed component F the kernel is the hat-Koszul factor of the
repelling part of the polarization plus hbar times its attracting part,
classified by a generic one-parameter grading; the eigenfunction is the
sum of the kernel over permutation cosets.  Certificates verify, exactly,
that the Koszul-cleared sum is a polynomial, that its exponents obey the
shifted zonotope bound, and that the restriction matrix is triangular.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from random import Random
from typing import Callable, Mapping, Sequence

from .fixedpoints import FixedComponent, Partition
from .laurent import LaurentPoly
from .monomial import TorusWeight, one, weight, x_var
from .polytope import Zonotope
from .quiver import PolarizationSpec, QuiverModel, polarization
from .rational import FactoredRational
from .symmetrize import CosetFamily, SymmetrizedSum, clear_denominator, symmetrize


@dataclass(frozen=True)
class SigmaChoice:
    """Integer pairing on grading variables (all non-hbar parameters).

    A monomial's grade is the pairing-weighted sum of its exponents;
    positive means attracting, negative repelling, zero fixed.
    """

    pairing: dict[str, int]

    def grade(self, w: TorusWeight) -> Fraction:
        return sum((Fraction(e2, 2) * self.pairing.get(var, 0)
                    for var, e2 in w.doubled), Fraction(0))

    def is_generic_for(self, w: TorusWeight) -> bool:
        """Nonzero grading-torus weights must have nonzero grade."""
        nontrivial = any(var != "hbar" and e2 for var, e2 in w.doubled)
        return (not nontrivial) or self.grade(w) != 0


def default_sigma(Q: QuiverModel) -> SigmaChoice:
    """Loop parameter graded by -1; framing columns by large distinct steps."""
    pairing: dict[str, int] = {}
    if any(e.param for e in Q.edges):
        pairing["t1"] = -1
    step = 0
    for i in range(Q.num_vertices):
        for l in range(Q.w[i]):
            step += 1
            pairing[f"a{i}_{l}"] = -1000 * step
    return SigmaChoice(pairing)


@dataclass
class WeightFunction:
    Q: QuiverModel
    F: FixedComponent
    kernel: FactoredRational
    family: CosetFamily
    twist2: TorusWeight = one
    _symmetrized: SymmetrizedSum | None = None
    s_poly: LaurentPoly | None = None

    def symmetrized(self) -> SymmetrizedSum:
        if self._symmetrized is None:
            self._symmetrized = symmetrize(self.kernel, self.family)
        return self._symmetrized


def coset_family_for(Q: QuiverModel, F: FixedComponent) -> CosetFamily:
    groups = {}
    blocks = {}
    for i in range(Q.num_vertices):
        groups[i] = tuple(Q.chern_roots(i))
        by_char: dict[TorusWeight, list[int]] = {}
        for k in range(Q.v[i]):
            by_char.setdefault(F.a_character(i, k), []).append(k)
        blocks[i] = tuple(tuple(b) for b in by_char.values())
    return CosetFamily(groups, blocks)


def build_weight_function(
    Q: QuiverModel,
    F: FixedComponent,
    sigma: SigmaChoice | None = None,
    pol: PolarizationSpec | None = None,
) -> WeightFunction:
    """Kernel = hat-Koszul(repelling part + hbar * attracting part)."""
    if sigma is None:
        sigma = default_sigma(Q)
    if pol is None:
        pol = polarization(Q)
    sub = F.substitution(Q)
    hbar = weight(hbar=1)
    kernel = FactoredRational.one()
    twist: dict[str, int] = {}
    for src, tgt, mult in pol.oriented:
        # square-root twist recentering the whole polarization, fixed part
        # included: this is the symmetric normalization the weight bound uses
        for var, e2 in (src * tgt).doubled:
            twist[var] = twist.get(var, 0) - e2 * mult
        graded = (tgt / src).substitute(sub)
        if not sigma.is_generic_for(graded):
            raise ValueError(f"grading is not generic: weight {graded} at {F.label} grades to 0")
        g = sigma.grade(graded)
        if g == 0:  # grading-fixed directions do not enter the kernel
            continue
        if g > 0:  # attracting, shifted by hbar
            tgt = hbar * tgt
        kernel = kernel * FactoredRational.binomial(src, tgt, mult)
    return WeightFunction(Q, F, kernel, coset_family_for(Q, F),
                          twist2=TorusWeight.from_doubled({v: e // 2 for v, e in twist.items()}))


def hilbert_weight_function(Q: QuiverModel, F: FixedComponent) -> WeightFunction:
    """Content-predicate closed form for the one-column instanton case.

    Slots are ordered by (content, row); t2 stands for 1/(hbar*t1).
    """
    if Q.num_vertices != 1 or Q.w != (1,) or not Q.is_cyclic():
        raise ValueError("closed form applies to the one-vertex, one-column case")
    contents = [-ch.exponent("t1") for ch in F.chars[0]]
    n = len(contents)
    x = [weight(**{x_var(0, k): 1}) for k in range(n)]
    t1 = weight(t1=1)
    t1t2 = weight(hbar=-1)  # t1 * t2 = 1/hbar
    t2 = weight(hbar=-1, t1=-1)
    kernel = FactoredRational.one()
    for i in range(n):
        if contents[i] < 0:
            kernel = kernel * FactoredRational.binomial(one, x[i], 1)
        elif contents[i] > 0:
            kernel = kernel * FactoredRational.binomial(t1t2, x[i], 1)
    for i in range(n):
        for j in range(n):
            if contents[i] < contents[j] + 1:
                kernel = kernel * FactoredRational.binomial(x[j], t1 * x[i], 1)
            elif contents[i] > contents[j] + 1:
                kernel = kernel * FactoredRational.binomial(t2 * x[j], x[i], 1)
    for i in range(n):
        for j in range(n):
            if contents[i] < contents[j]:
                kernel = kernel * FactoredRational.binomial(x[j], x[i], -1)
            elif contents[i] > contents[j]:
                kernel = kernel * FactoredRational.binomial(t1t2 * x[j], x[i], -1)
    return WeightFunction(Q, F, kernel, coset_family_for(Q, F))


# ----- certificates ----------------------------------------------------


@dataclass
class Certificate:
    kind: str
    component: str
    passed: bool
    witness: str = ""

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        tail = f"  witness: {self.witness}" if self.witness and not self.passed else ""
        return f"{self.kind}  {self.component}  {status}{tail}"


def check_polynomial(wf: WeightFunction) -> Certificate:
    """The Koszul factor times the symmetrized kernel must be a polynomial."""
    ok, poly, witness = clear_denominator(wf.symmetrized(), wf.Q.delta_hbar())
    if ok:
        wf.s_poly = poly
        return Certificate("polynomiality", wf.F.label, True)
    return Certificate("polynomiality", wf.F.label, False, witness or "")


def _zonotope_generators(Q: QuiverModel) -> list[tuple[Fraction, ...]]:
    """x-exponent vectors of the enlarged polarization at the diagonal point.

    Enlarging the gauge dimension by itself adds hbar^{-1} End(V_i), which
    cancels the -End(V_i) of the polarization in the x-exponent multiset;
    what remains are the framing and edge exponent vectors.
    """
    xorder = Q.all_chern_roots()
    idx = {v: r for r, v in enumerate(xorder)}
    gens: dict[tuple[Fraction, ...], int] = {}
    for src, tgt in Q.framing_weights() + Q.edge_weights():
        chi = tgt / src
        vec = [Fraction(0)] * len(xorder)
        for var, e2 in chi.doubled:
            if var in idx:
                vec[idx[var]] = Fraction(e2, 2)
        key = tuple(vec)
        if any(key):
            gens[key] = gens.get(key, 0) + 1
    out = []
    for vec, m in gens.items():
        out.extend([vec] * m)
    return out


def check_weight_bound(wf: WeightFunction, eps: Fraction) -> Certificate:
    """All exponent vectors of the cleared polynomial lie in the shifted zonotope."""
    if wf.s_poly is None:
        cert = check_polynomial(wf)
        if not cert.passed:
            return Certificate("weight-bound", wf.F.label, False,
                               "no polynomial available: " + cert.witness)
    xorder = tuple(wf.Q.all_chern_roots())
    gens = _zonotope_generators(wf.Q)
    # centered zonotope sum of [-g/2, g/2], shifted by the small ample slope
    center = [Fraction(eps) for _ in xorder]
    for g in gens:
        for r, c in enumerate(g):
            center[r] -= c / 2
    Z = Zonotope(tuple(center), tuple(tuple(g) for g in gens))
    # recenter by the square-root twist of the kernel's own factors
    twist_exp = dict(wf.twist2.doubled)
    shift = [Fraction(twist_exp.get(var, 0), 2) for var in xorder]
    for raw in sorted(wf.s_poly.x_support(xorder)):
        vec = tuple(r + s for r, s in zip(raw, shift))
        if not Z.contains(vec):
            return Certificate("weight-bound", wf.F.label, False,
                               f"exponent {tuple(map(str, vec))} outside (eps={eps})")
    return Certificate("weight-bound", wf.F.label, True)


# ----- restriction matrix ----------------------------------------------


def _random_param_sqrts(rng: Random, params: Sequence[str]) -> dict[str, Fraction]:
    out = {}
    for p in params:
        out[p] = Fraction(rng.randint(2, 97), rng.randint(2, 97))
    return out


def _univariate_at(poly: LaurentPoly, sub: Mapping[str, TorusWeight],
                   directions: Mapping[str, int],
                   sqrts: Mapping[str, Fraction]) -> dict[int, Fraction]:
    """Evaluate a polynomial at x_k -> char_k * u^{d_k}, params numeric.

    Returns the coefficient map of the resulting univariate Laurent
    polynomial in u (exponents doubled, matching the internal lattice).
    """
    coeffs: dict[int, Fraction] = {}
    for mono, c in poly.monomial_terms().items():
        val = Fraction(c)
        uexp = 0
        for var, e2 in mono.doubled:
            if var in sub:
                ch = sub[var]
                for pvar, pe2 in ch.doubled:
                    val *= sqrts[pvar] ** (pe2 * e2 // 2)
                uexp += directions[var] * e2
            else:
                val *= sqrts[var] ** e2
        coeffs[uexp] = coeffs.get(uexp, Fraction(0)) + val
        if coeffs[uexp] == 0:
            del coeffs[uexp]
    return coeffs


def _limit_at_one(num: dict[int, Fraction], den: dict[int, Fraction]) -> Fraction:
    """lim_{u -> 1} num(u)/den(u) for univariate Laurent polynomials."""

    def reduce(c: dict[int, Fraction]) -> tuple[list[Fraction], int]:
        if not c:
            return [], -1
        lo = min(c)
        hi = max(c)
        coeffs = [c.get(e, Fraction(0)) for e in range(lo, hi + 1)]
        order = 0
        while True:
            val = sum(coeffs)
            if val != 0 or len(coeffs) == 1:
                return coeffs, order
            # synthetic division by (u - 1)
            out = []
            acc = Fraction(0)
            for cf in coeffs[:-1]:
                acc += cf
                out.append(acc)
            coeffs = out
            order += 1

    ncoeffs, nord = reduce(num)
    if not ncoeffs:
        return Fraction(0)
    dcoeffs, dord = reduce(den)
    if not dcoeffs:
        raise ZeroDivisionError("denominator is identically zero")
    if nord > dord:
        return Fraction(0)
    if nord < dord:
        raise ZeroDivisionError("restriction has a genuine pole")
    return sum(ncoeffs) / sum(dcoeffs)


def restrict_weight_function(wf: WeightFunction, Fprime: FixedComponent,
                             sqrts: Mapping[str, Fraction]) -> Fraction:
    """Exact value of the eigenfunction at the characters of Fprime.

    Computed as a limit along a generic one-parameter direction, which
    resolves the removable singularities of the Koszul denominator.
    """
    if wf.s_poly is None:
        cert = check_polynomial(wf)
        if not cert.passed:
            raise ValueError("cannot restrict: " + cert.witness)
    Q = wf.Q
    sub = Fprime.substitution(Q)
    directions = {v: 2 * r + 1 for r, v in enumerate(Q.all_chern_roots())}
    dnum, dden = Q.delta_hbar().expand_pair()
    if not dden.is_constant():
        raise AssertionError("Koszul factor must be a polynomial")
    num = _univariate_at(wf.s_poly, sub, directions, sqrts)
    den = _univariate_at(dnum, sub, directions, sqrts)
    if dden.constant_value() != 1:
        den = {e: c * Fraction(dden.constant_value()) for e, c in den.items()}
    return _limit_at_one(num, den)


def quiver_parameters(Q: QuiverModel) -> list[str]:
    names = {"hbar"}
    for e in Q.edges:
        if e.param:
            names.add(e.param)
    for i in range(Q.num_vertices):
        names.update(Q.framing_params(i))
    return sorted(names)


def restriction_matrix(
    wfs: Sequence[WeightFunction],
    leq: Callable[[FixedComponent, FixedComponent], bool],
    seed: int = 0,
    points: int = 3,
) -> tuple[list[list[list[Fraction]]], Certificate]:
    """M[row=F'][col=F] = f_F evaluated at F', at several random points.

    The certificate asserts vanishing whenever F' is not below F in the
    supplied order and a nonzero diagonal.
    """
    rng = Random(seed)
    Q = wfs[0].Q
    params = quiver_parameters(Q)
    comps = [wf.F for wf in wfs]
    values: list[list[list[Fraction]]] = []
    for _ in range(points):
        sqrts = _random_param_sqrts(rng, params)
        values.append([[restrict_weight_function(wf, Fp, sqrts) for wf in wfs]
                       for Fp in comps])
    for r, Fp in enumerate(comps):
        for c, wf in enumerate(wfs):
            vals = [values[p][r][c] for p in range(points)]
            nonzero = any(v != 0 for v in vals)
            if r == c and not nonzero:
                return values, Certificate("triangularity", "matrix", False,
                                           f"diagonal entry at {Fp.label} vanishes")
            if r != c and nonzero and not leq(Fp, wf.F):
                return values, Certificate(
                    "triangularity", "matrix", False,
                    f"entry ({Fp.label}, {wf.F.label}) nonzero outside the order")
    return values, Certificate("triangularity", "matrix", True)
