"""Bethe equations, the Yang-Yang potential, and a homotopy root solver.

The equations read ahat(x_{i,k} d/dx_{i,k} TX) = z_i, one per Chern root.
Seeds are the torus-fixed-point characters, which solve the system in the
z -> 0 limit; roots at a finite twist are reached by predictor-corrector
Newton continuation along a straight segment in ln z.
"""

from __future__ import annotations

import random

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import mpmath as mp

from .fixedpoints import FixedComponent
from .monomial import KClass, TorusWeight, chern_indices
from .quiver import QuiverModel, polarization, tangent_weights
from .rational import FactoredRational, ahat


@dataclass(frozen=True)
class TangentClass:
    """Virtual tangent class together with its polarization half."""

    Q: QuiverModel
    TX: KClass
    half: KClass  # T^{1/2}, satisfying T^{1/2} + hbar^{-1} (T^{1/2})^dual = TX


def tangent_class(Q: QuiverModel) -> TangentClass:
    return TangentClass(Q, tangent_weights(Q), polarization(Q).weights)


@dataclass
class BetheSystem:
    """One factored equation lhs(x) = z_{vertex} per Chern root.

    shift_exponents stores, per Chern root, its exponent in det T^{1/2};
    it converts between the twist z and its half-power shift z_#.
    """

    tc: TangentClass
    variables: tuple[str, ...]
    lhs: dict[str, FactoredRational]
    shift_exponents: dict[str, Fraction]

    @property
    def Q(self) -> QuiverModel:
        return self.tc.Q

    def vertex_of(self, var: str) -> int:
        return chern_indices(var)[0]


def bethe_equations(tc: TangentClass) -> BetheSystem:
    Q = tc.Q
    variables = tuple(Q.all_chern_roots())
    det_half = tc.half.det()
    lhs = {}
    shifts = {}
    for var in variables:
        lhs[var] = ahat(tc.TX.x_derivative(var))
        shifts[var] = det_half.exponent(var)
    return BetheSystem(tc, variables, lhs, shifts)


# ----- numeric evaluation ------------------------------------------------


def sqrt_map(values: Mapping[str, object]) -> dict[str, mp.mpc]:
    """Principal square roots of the given variable values."""
    return {v: mp.sqrt(mp.mpmathify(val)) for v, val in values.items()}


def _log_x(sqrts: Mapping[str, object], var: str):
    return 2 * mp.log(sqrts[var])


def _eval_log_lhs(fr: FactoredRational, sqrts: Mapping[str, object]):
    """Principal-branch sum of logarithms of the factored expression."""
    total = mp.log(mp.mpmathify(fr.coeff)) if fr.coeff != 1 else mp.mpf(0)
    pre = fr.prefactor.evaluate(sqrts)
    if not fr.prefactor.is_one():
        total += mp.log(pre)
    for (a, b), e in fr.factors.items():
        total += e * mp.log(a.evaluate(sqrts) - b.evaluate(sqrts))
    return total


def _mpq(f) -> mp.mpf:
    f = Fraction(f)
    return mp.mpf(f.numerator) / f.denominator


def _log_jacobian_row(fr: FactoredRational, sqrts, xorder):
    """d ln(fr) / d ln x_j for each Chern root x_j."""
    row = [mp.mpc(_mpq(fr.prefactor.exponent(var))) for var in xorder]
    for (a, b), e in fr.factors.items():
        av = a.evaluate(sqrts)
        bv = b.evaluate(sqrts)
        diff = av - bv
        for j, var in enumerate(xorder):
            alpha = a.exponent(var)
            beta = b.exponent(var)
            if alpha or beta:
                row[j] += e * (_mpq(alpha) * av - _mpq(beta) * bv) / diff
    return row


@dataclass
class RootRecord:
    component: str
    roots: dict[str, mp.mpc]
    residual: mp.mpf
    converged: bool
    message: str = ""


def _newton_correct(system: BetheSystem, sqrts, param_sqrts, lnz, tol,
                    max_iter=60, max_step=None):
    """Damped Newton in ln x on ln(lhs) - ln z = 0; updates sqrts in place.

    A stall within a factor 10^15 of the target is accepted: rounding in
    the factor evaluations sets a residual floor slightly above the
    Newton tolerance at unlucky points.
    """
    xorder = system.variables
    accept = tol * mp.mpf(10) ** 15

    two_pi = 2 * mp.pi

    def residual_vec(sq):
        merged = dict(param_sqrts)
        merged.update(sq)
        out = []
        for v in xorder:
            d = _eval_log_lhs(system.lhs[v], merged) - lnz[system.vertex_of(v)]
            # lhs = z is insensitive to the winding of the factorwise log
            im = mp.im(d) - two_pi * mp.nint(mp.im(d) / two_pi)
            out.append(mp.re(d) + 1j * im)
        return merged, out

    try:
        merged, r = residual_vec(sqrts)
    except (ValueError, ZeroDivisionError):
        return False
    rnorm = max(abs(x) for x in r)
    for _ in range(max_iter):
        if rnorm < tol:
            return True
        J = mp.matrix([_log_jacobian_row(system.lhs[v], merged, xorder)
                       for v in xorder])
        try:
            delta = mp.lu_solve(J, mp.matrix([-x for x in r]))
        except (ZeroDivisionError, ValueError):
            return False
        if max_step is not None and max(abs(d) for d in delta) > max_step:
            return False  # wild step: caller shortens the path segment
        # backtracking: the residual has logarithmic singularities, so the
        # full step can overshoot to the wrong side of a vanishing factor
        scale = mp.mpf(1)
        for _ in range(30):
            trial = {var: sqrts[var] * mp.exp(scale * delta[j] / 2)
                     for j, var in enumerate(xorder)}
            try:
                merged2, r2 = residual_vec(trial)
            except (ValueError, ZeroDivisionError):
                scale /= 2
                continue
            rnorm2 = max(abs(x) for x in r2)
            if rnorm2 < rnorm:
                sqrts.update(trial)
                merged, r, rnorm = merged2, r2, rnorm2
                break
            scale /= 2
        else:
            return rnorm < accept
    return rnorm < accept


def _residual(system: BetheSystem, sqrts, param_sqrts, zvals):
    merged = dict(param_sqrts)
    merged.update(sqrts)
    worst = mp.mpf(0)
    for v in system.variables:
        val = system.lhs[v].evaluate(merged) / zvals[system.vertex_of(v)]
        worst = max(worst, abs(val - 1))
    return worst


class _OffsetSystem:
    """The factored lhs rewritten around a fixed-point seed.

    Every Chern root is parametrized as x_j = char_j * (1 + u_j).  Each
    binomial factor a(x) - b(x) then reads a(char) * e^B * (e^{A-B} - c)
    with A, B linear in L_j = ln(1+u_j) and c = b(char)/a(char); factors
    whose ratio becomes the trivial character at the seed have c = 1
    exactly and are evaluated with expm1, so the lhs keeps full relative
    precision however small the offsets u_j get.  Evaluating through the
    plain coordinates x_j instead would round the offsets away once
    |u_j| drops below the working epsilon.
    """

    def __init__(self, system: BetheSystem, F: FixedComponent, param_sqrts):
        self.system = system
        self.xorder = system.variables
        sub = F.substitution(system.Q)
        self.chars = {v: sub[v].evaluate(param_sqrts) for v in self.xorder}
        char_sqrts = dict(param_sqrts)
        for v in self.xorder:
            char_sqrts[v] = mp.sqrt(self.chars[v])
        self.rows = []
        for v in self.xorder:
            fr = system.lhs[v]
            const = mp.log(mp.mpmathify(fr.coeff)) if fr.coeff != 1 \
                else mp.mpf(0)
            if not fr.prefactor.is_one():
                const += mp.log(fr.prefactor.evaluate(char_sqrts))
            pre = [_mpq(fr.prefactor.exponent(xv)) for xv in self.xorder]
            facs = []
            for (a, b), e in fr.factors.items():
                da = [_mpq(a.exponent(xv)) for xv in self.xorder]
                db = [_mpq(b.exponent(xv)) for xv in self.xorder]
                ratio = (b / a).substitute(sub)
                c = None if ratio.is_one() else ratio.evaluate(param_sqrts)
                facs.append((e, mp.log(a.evaluate(char_sqrts)), da, db, c))
            self.rows.append((const, pre, facs))

    def log_residual(self, L, lnz):
        """ln(lhs) - ln z per equation, imaginary part folded to (-pi, pi]."""
        two_pi = 2 * mp.pi
        n = len(self.xorder)
        out = []
        for v, (const, pre, facs) in zip(self.xorder, self.rows):
            total = const + mp.fsum(pre[j] * L[j] for j in range(n))
            for e, log_a, da, db, c in facs:
                B = mp.fsum(db[j] * L[j] for j in range(n))
                D = mp.fsum((da[j] - db[j]) * L[j] for j in range(n))
                bracket = mp.expm1(D) if c is None else mp.exp(D) - c
                total += e * (log_a + B + mp.log(bracket))
            d = total - lnz[self.system.vertex_of(v)]
            im = mp.im(d) - two_pi * mp.nint(mp.im(d) / two_pi)
            out.append(mp.re(d) + 1j * im)
        return out

    def log_jacobian(self, L):
        """d ln(lhs_k) / d L_j (equals d ln(lhs_k) / d ln x_j)."""
        n = len(self.xorder)
        rows = []
        for const, pre, facs in self.rows:
            row = [mp.mpc(p) for p in pre]
            for e, log_a, da, db, c in facs:
                D = mp.fsum((da[j] - db[j]) * L[j] for j in range(n))
                eD = mp.exp(D)
                g = eD / (mp.expm1(D) if c is None else eD - c)
                for j in range(n):
                    if da[j] or db[j]:
                        row[j] += e * (db[j] + (da[j] - db[j]) * g)
            rows.append(row)
        return rows


def _newton_in_w(osys: _OffsetSystem, w, lnz, tol, radius, max_iter=80):
    """Damped Newton in w_j = ln(x_j/char_j - 1) on ln(lhs) - ln z = 0.

    Returns (w, u) or None; a stall within a factor 10^15 of the target
    tolerance is accepted as a rounding floor.
    """
    n = len(osys.xorder)
    accept = tol * mp.mpf(10) ** 15

    def point(wv):
        u = [mp.exp(x) for x in wv]
        return u, [mp.log1p(x) for x in u]

    u, L = point(w)
    try:
        r = osys.log_residual(L, lnz)
    except (ValueError, ZeroDivisionError):
        return None
    rnorm = max(abs(x) for x in r)
    for _ in range(max_iter):
        if rnorm < tol:
            return w, u
        Jx = osys.log_jacobian(L)
        J = mp.matrix(n)
        for k in range(n):
            for j in range(n):
                J[k, j] = Jx[k][j] * u[j] / (1 + u[j])
        try:
            delta = mp.lu_solve(J, mp.matrix([-x for x in r]))
        except (ZeroDivisionError, ValueError):
            return None
        scale = mp.mpf(1)
        for _ in range(40):
            wt = [w[j] + scale * delta[j] for j in range(n)]
            ut, Lt = point(wt)
            # stay inside the seed's neighbourhood
            if max(abs(x) for x in ut) > radius:
                scale /= 2
                continue
            try:
                r2 = osys.log_residual(Lt, lnz)
            except (ValueError, ZeroDivisionError):
                scale /= 2
                continue
            rnorm2 = max(abs(x) for x in r2)
            if rnorm2 < rnorm:
                w, u, L, r, rnorm = wt, ut, Lt, r2, rnorm2
                break
            scale /= 2
        else:
            return (w, u) if rnorm < accept else None
    return (w, u) if rnorm < accept else None


def _seed_newton(system: BetheSystem, F: FixedComponent, param_sqrts,
                 lnz, tol, offset: float = 1e-6):
    """Find the root near a fixed-point seed at small |z|.

    Near the seed every equation is close to linear in the offset
    coordinates w_j (each lhs vanishes or blows up as a monomial in the
    offsets and their differences), so Newton does not hop into the basin
    of a different seed; the 0.2 radius guard rejects any root that is
    not an O(|z|) perturbation of this component's characters.

    The per-variable offsets can scale with different powers of z (for a
    column of stacked characters they go like z, z^2, z^3, ...), so a
    single flat initial guess can start hopelessly far from the root.
    Deterministic multi-start covers the flat guess, graded-magnitude
    guesses, and seeded random magnitude/phase draws.

    Returns (offset system, u offsets) or None.
    """
    osys = _OffsetSystem(system, F, param_sqrts)
    n = len(system.variables)
    base = -mp.log10(mp.mpf(offset))
    starts = [
        [mp.log(mp.mpf(offset) * (j + 1)) + 0.37j for j in range(n)],
        [(j + 1) * mp.log(mp.mpf(offset)) + 0.37j for j in range(n)],
        [(n - j) * mp.log(mp.mpf(offset)) + 0.37j for j in range(n)],
    ]
    rng = random.Random(20210 + n)
    for _ in range(12):
        starts.append([
            -rng.uniform(0.5, 3.5) * base * mp.log(10)
            + 1j * rng.uniform(0, 2 * 3.15)
            for _ in range(n)])
    for w in starts:
        got = _newton_in_w(osys, w, lnz, tol, radius=mp.mpf("0.2"))
        if got is not None:
            return osys, got
    return None


def solve(system: BetheSystem,
          z_targets: Sequence[complex],
          params: Mapping[str, complex],
          seeds: Sequence[FixedComponent],
          digits: int = 50,
          z_start_mag: float = 1e-6) -> list[RootRecord]:
    """Continue each fixed-point seed from |z| = z_start_mag to z_targets.

    The path runs in the offset coordinates w_j = ln(x_j/char_j - 1)
    while every |z_i| is at most 1e-3 (offsets that scale like high
    powers of z would otherwise drown in rounding) and in plain ln x
    coordinates afterwards.
    """
    records = []
    # extra working precision: factor values near a seed lose the leading
    # |z| digits to cancellation, so the Newton floor must sit well below
    # the certified residual tolerance
    with mp.workdps(digits + 20):
        tol = mp.mpf(10) ** (-(digits + 5))
        accept = mp.mpf(10) ** (-(digits - 10))
        param_sqrts = sqrt_map(params)
        lnz_target = [mp.log(mp.mpmathify(z)) for z in z_targets]
        lnz_start = [
            mp.log(mp.mpf(z_start_mag)) + 1j * mp.arg(mp.mpmathify(z))
            for z in z_targets]

        def lnz_at(t):
            return [a + t * (b - a) for a, b in zip(lnz_start, lnz_target)]

        # stay in offset coordinates until some |z_i(t)| passes 1e-3
        t_switch = mp.mpf(1)
        for a, b in zip(lnz_start, lnz_target):
            span = mp.re(b) - mp.re(a)
            if span > 0:
                t_switch = min(t_switch, (mp.log(mp.mpf("1e-3")) - mp.re(a))
                               / span)
        t_switch = min(max(t_switch, mp.mpf(0)), mp.mpf(1))

        for F in seeds:
            got = _seed_newton(system, F, param_sqrts, lnz_start, tol,
                               offset=float(z_start_mag))
            if got is None:
                records.append(RootRecord(F.label, {}, mp.mpf("inf"), False,
                                          "seed correction failed"))
                continue
            osys, (w, u) = got
            t = mp.mpf(0)
            dt = mp.mpf("0.125")
            failed = ""
            while t < t_switch:
                step = min(dt, t_switch - t)
                got = _newton_in_w(osys, list(w), lnz_at(t + step), tol,
                                   radius=mp.mpf("0.5"))
                if got is not None:
                    w, u = got
                    t += step
                    dt = min(dt * 2, mp.mpf("0.25"))
                else:
                    dt /= 2
                    if dt < mp.mpf("1e-12"):
                        failed = f"path stalled at t={float(t):.6f}"
                        break
            sqrts = {v: mp.sqrt(osys.chars[v] * (1 + u[j]))
                     for j, v in enumerate(system.variables)}
            while not failed and t < 1:
                step = min(dt, 1 - t)
                trial = dict(sqrts)
                if _newton_correct(system, trial, param_sqrts,
                                   lnz_at(t + step), tol, max_step=4):
                    sqrts = trial
                    t += step
                    dt = min(dt * 2, mp.mpf("0.25"))
                else:
                    dt /= 2
                    if dt < mp.mpf("1e-12"):
                        failed = f"path stalled at t={float(t):.6f}"
                        break
            if failed:
                records.append(RootRecord(F.label, {}, mp.mpf("inf"), False,
                                          failed))
                continue
            roots = {v: sqrts[v] ** 2 for v in system.variables}
            res = _residual(system, sqrts, param_sqrts,
                            [mp.mpmathify(z) for z in z_targets])
            records.append(RootRecord(F.label, roots, res, res < accept))
    return records


def collisions(records: Sequence[RootRecord], Q: QuiverModel,
               tol: float = 1e-20) -> list[tuple[str, str]]:
    """Pairs of seeds whose root multisets coincide within tolerance."""

    def signature(rec):
        sig = []
        for i in range(Q.num_vertices):
            vals = sorted((rec.roots[v] for v in Q.chern_roots(i)),
                          key=lambda c: (mp.re(c), mp.im(c)))
            sig.extend(vals)
        return sig

    out = []
    good = [r for r in records if r.converged]
    for p in range(len(good)):
        for q in range(p + 1, len(good)):
            sp, sq = signature(good[p]), signature(good[q])
            if all(abs(x - y) <= tol * (1 + abs(x)) for x, y in zip(sp, sq)):
                out.append((good[p].component, good[q].component))
    return out


def reverse_check(system: BetheSystem, records: Sequence[RootRecord],
                  z_targets, params, seeds, digits=50,
                  z_start_mag=None):
    """Continue solved roots back to tiny |z|; max distance to the seeds.

    The end magnitude defaults to 10^-(digits-12): the continued root sits
    within O(|z|) of its fixed-point seed, so the round-trip distance is
    then far below the residual tolerance.  The final leg of the path runs
    in the offset coordinates w_j = ln(x_j/char_j - 1), which keep the
    shrinking distance to the seed resolvable at fixed working precision.

    The path tolerance is deliberately loose (half the digits): the lhs
    evaluated at x = char*(1+u) carries a rounding floor of eps/|u|, and
    the round-trip distance only needs modest relative accuracy.
    """
    if z_start_mag is None:
        z_start_mag = mp.mpf(10) ** (-(digits - 12))
    out = []
    with mp.workdps(digits + 20):
        tol = mp.mpf(10) ** (-(digits // 2))
        param_sqrts = sqrt_map(params)
        lnz_target = [mp.log(mp.mpmathify(z)) for z in z_targets]
        lnz_start = [
            mp.log(mp.mpf(z_start_mag)) + 1j * mp.arg(mp.mpmathify(z))
            for z in z_targets]

        def lnz_at(t):
            return [a + t * (b - a) for a, b in zip(lnz_target, lnz_start)]

        # switch to offset coordinates once every |z_i| has dropped to 1e-4
        t_switch = mp.mpf(0)
        for a, b in zip(lnz_target, lnz_start):
            span = mp.re(b) - mp.re(a)
            if span < 0:
                t_switch = max(t_switch, (mp.log(mp.mpf("1e-4")) - mp.re(a))
                               / span)
        t_switch = min(max(t_switch, mp.mpf(0)), mp.mpf(1))

        for rec, F in zip(records, seeds):
            if not rec.converged:
                out.append(mp.mpf("inf"))
                continue
            osys = _OffsetSystem(system, F, param_sqrts)
            chars = osys.chars
            sqrts = {v: mp.sqrt(rec.roots[v]) for v in system.variables}
            t = mp.mpf(0)
            dt = mp.mpf("0.125")
            stalled = False
            while t < t_switch:
                step = min(dt, t_switch - t)
                trial = dict(sqrts)
                if _newton_correct(system, trial, param_sqrts, lnz_at(t + step),
                                   tol, max_step=4):
                    sqrts = trial
                    t += step
                    dt = min(dt * 2, mp.mpf("0.25"))
                else:
                    dt /= 2
                    if dt < mp.mpf("1e-12"):
                        stalled = True
                        break
            u = None
            if not stalled:
                w = [mp.log(sqrts[v] ** 2 / chars[v] - 1)
                     for v in system.variables]
                dt = mp.mpf("0.125")
                while t < 1:
                    step = min(dt, 1 - t)
                    got = _newton_in_w(osys, list(w), lnz_at(t + step), tol,
                                       radius=mp.mpf("0.5"))
                    if got is not None:
                        w, u = got
                        t += step
                        dt = min(dt * 2, mp.mpf("0.25"))
                    else:
                        dt /= 2
                        if dt < mp.mpf("1e-12"):
                            stalled = True
                            break
            if stalled or u is None:
                out.append(mp.mpf("inf"))
                continue
            dist = max(abs(chars[v]) * abs(u[j])
                       for j, v in enumerate(system.variables))
            out.append(dist)
    return out


# ----- Yang-Yang potential ----------------------------------------------


def _ln_zshift(lnz, shift_exp: Fraction, hbar_sqrt):
    """ln z_# with z_# = z * (-hbar^{1/2})^{-shift}; principal branches."""
    e = Fraction(shift_exp)
    return lnz - mp.mpf(e.numerator) / e.denominator * mp.log(-hbar_sqrt)


def yang_yang(tc: TangentClass, sqrts: Mapping[str, object],
              z_targets: Sequence[complex]):
    """W = sum over T^{1/2} of [Li2(hbar chi) - Li2(chi)] - sum ln x ln z_#.

    Critical points of W in ln x are exactly the Bethe roots: the x-log-
    gradient of W equals ln lhs - ln z componentwise (principal branches).
    """
    hbar = sqrts["hbar"] ** 2
    total = mp.mpf(0)
    for chi, d in tc.half.items():
        val = chi.evaluate(sqrts)
        total += d * (mp.polylog(2, hbar * val) - mp.polylog(2, val))
    det_half = tc.half.det()
    for var in tc.Q.all_chern_roots():
        i = chern_indices(var)[0]
        lnz = mp.log(mp.mpmathify(z_targets[i]))
        lnzs = _ln_zshift(lnz, det_half.exponent(var), sqrts["hbar"])
        total -= _log_x(sqrts, var) * lnzs
    return total


def yang_yang_gradient(tc: TangentClass, sqrts: Mapping[str, object],
                       z_targets, step: float = 1e-5) -> list:
    """Central finite-difference x-log-gradient of the potential."""
    grad = []
    for var in tc.Q.all_chern_roots():
        up = dict(sqrts)
        dn = dict(sqrts)
        h = mp.mpf(step)
        up[var] = sqrts[var] * mp.exp(h / 2)
        dn[var] = sqrts[var] * mp.exp(-h / 2)
        grad.append((yang_yang(tc, up, z_targets)
                     - yang_yang(tc, dn, z_targets)) / (2 * h))
    return grad


def criticality_check(tc: TangentClass, rec: RootRecord, z_targets,
                      params: Mapping[str, complex], digits: int = 30,
                      step: float = 1e-5):
    """Max finite-difference gradient component of W at a solved root.

    W is built from principal branches of ln and Li2, so criticality
    only holds modulo 2 pi i (the exponentiated equations are exact);
    each component is measured against the nearest such multiple.
    """
    with mp.workdps(digits):
        sqrts = sqrt_map(params)
        for var, val in rec.roots.items():
            sqrts[var] = mp.sqrt(val)
        grad = yang_yang_gradient(tc, sqrts, z_targets, step)
        two_pi = 2 * mp.pi
        worst = mp.mpf(0)
        for g in grad:
            im = mp.im(g) - two_pi * mp.nint(mp.im(g) / two_pi)
            worst = max(worst, abs(mp.re(g) + 1j * im))
        return worst


def gradient_consistency(system: BetheSystem, sqrts: Mapping[str, object],
                         z_targets, step: float = 1e-5):
    """Max |(ln lhs - ln z) - x-log-gradient of W| over the Chern roots.

    ln lhs is summed factor by factor, so it may differ from the gradient
    by an integer multiple of 2 pi i; the comparison is taken modulo that.
    """
    grad = yang_yang_gradient(system.tc, sqrts, z_targets, step)
    worst = mp.mpf(0)
    two_pi = 2 * mp.pi
    for g, var in zip(grad, system.variables):
        lnb = _eval_log_lhs(system.lhs[var], sqrts)
        lnz = mp.log(mp.mpmathify(z_targets[system.vertex_of(var)]))
        diff = lnb - lnz - g
        diff_im = mp.im(diff) - two_pi * mp.nint(mp.im(diff) / two_pi)
        worst = max(worst, abs(mp.re(diff) + 1j * diff_im))
    return worst
