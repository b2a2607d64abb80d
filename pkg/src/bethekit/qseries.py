"""q-series layer: Euler phi function, monomial difference kernel, the
half-tangent product Phi, integrand assembly, and the q -> 1 saddle check.

The saddle check is the analytic counterpart of the Bethe equations: as
q -> 1, the logarithmic x-derivative of ln Phi + ln e(x, z_#), scaled by
ln q, converges to ln z_i - ln ahat(x d/dx TX).  The residual of that
limit, evaluated at fixed generic points along a q-sequence, certifies
that the discrete q-difference data degenerates onto the Bethe system.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import mpmath as mp

from .bethe import TangentClass, bethe_equations, sqrt_map
from .envelope import WeightFunction


@dataclass(frozen=True)
class QSeriesContext:
    """Working data for truncated q-products: |q| < 1 and target digits."""

    q: object
    digits: int = 50

    def __post_init__(self):
        if abs(mp.mpmathify(self.q)) >= 1:
            raise ValueError("q-products require |q| < 1")

    def truncation_order(self, y_mag) -> int:
        """Smallest N with tail bound below 10^-(digits - 5)."""
        q = abs(mp.mpmathify(self.q))
        target = mp.mpf(10) ** (-(self.digits - 5))
        if y_mag == 0:
            return 1
        # tail(N) = |y| q^(N+1) / (1-q)^2
        n = (mp.log(target * (1 - q) ** 2 / y_mag) / mp.log(q)) - 1
        return max(1, int(mp.ceil(n)))

    def tail_bound(self, y_mag, N: int) -> mp.mpf:
        q = abs(mp.mpmathify(self.q))
        return y_mag * q ** (N + 1) / (1 - q) ** 2


def log_phi(y, ctx: QSeriesContext):
    """(sum of principal logs of (1 - y q^n), certified tail bound).

    The bound dominates the dropped log-factors provided |y| q^(N+1) is
    at most 1/2, which the adaptive truncation guarantees by a wide
    margin at any sensible digit count.
    """
    y = mp.mpmathify(y)
    q = mp.mpmathify(ctx.q)
    N = ctx.truncation_order(abs(y))
    total = mp.mpf(0)
    t = y
    for _ in range(N + 1):
        if t == 1:
            raise ZeroDivisionError("phi factor vanishes")
        total += mp.log(1 - t)
        t *= q
    return total, ctx.tail_bound(abs(y), N)


def phi(y, ctx: QSeriesContext):
    """Truncated Euler product prod_{n >= 0} (1 - y q^n) with tail bound."""
    y = mp.mpmathify(y)
    q = mp.mpmathify(ctx.q)
    N = ctx.truncation_order(abs(y))
    total = mp.mpf(1)
    t = y
    for _ in range(N + 1):
        total *= 1 - t
        t *= q
    return total, ctx.tail_bound(abs(y), N)


def _check_principal(val, what: str):
    v = mp.mpmathify(val)
    if v == 0 or (mp.im(v) == 0 and mp.re(v) < 0):
        raise ValueError(f"{what} value {v} sits on the logarithm cut")
    return v


def e_kernel(xs: Sequence, zs: Sequence, ctx: QSeriesContext):
    """exp((ln q)^-1 sum_j ln x_j ln z_j), principal branches throughout."""
    if len(xs) != len(zs):
        raise ValueError("variable/twist length mismatch")
    lnq = mp.log(mp.mpmathify(ctx.q))
    total = mp.mpf(0)
    for x, z in zip(xs, zs):
        total += mp.log(_check_principal(x, "spectral")) \
            * mp.log(_check_principal(z, "twist"))
    return mp.exp(total / lnq)


def shifted_twists(tc: TangentClass, zs: Mapping[int, object],
                   param_sqrts: Mapping[str, object]) -> dict[str, mp.mpc]:
    """Per-variable twist z_i (-hbar^(1/2))^(-m) for the e-kernel.

    m is the exponent of the variable in det T^(1/2); the half-power
    shift is what makes the q -> 1 saddle land on the Bethe equations.
    """
    det_half = tc.half.det()
    mhs = -param_sqrts["hbar"]
    out = {}
    for var in tc.Q.all_chern_roots():
        i = int(var[1:var.index("_")])
        m = Fraction(det_half.exponent(var))
        shift = mp.exp(-mp.mpf(m.numerator) / m.denominator
                       * mp.log(mhs)) if m else mp.mpf(1)
        out[var] = mp.mpmathify(zs[i]) * shift
    return out


def big_phi_log(tc: TangentClass, sqrts: Mapping[str, object],
                ctx: QSeriesContext):
    """(ln Phi, accumulated tail bound) for Phi = prod phi(q chi)/phi(hbar chi).

    The product runs over the polarization weights chi of T^(1/2) with
    their multiplicities.  A vanishing denominator factor reports the
    offending weight.
    """
    q = mp.mpmathify(ctx.q)
    hbar = sqrts["hbar"] ** 2
    total = mp.mpf(0)
    tail = mp.mpf(0)
    for wgt, mult in tc.half.items():
        chi = wgt.evaluate(sqrts)
        num, t1 = log_phi(q * chi, ctx)
        try:
            den, t2 = log_phi(hbar * chi, ctx)
        except ZeroDivisionError:
            raise ZeroDivisionError(
                f"phi pole at polarization weight {wgt}") from None
        total += mult * (num - den)
        tail += abs(mult) * (t1 + t2)
    return total, tail


def big_phi(tc: TangentClass, xvals: Mapping[str, object],
            params: Mapping[str, object], ctx: QSeriesContext):
    sqrts = sqrt_map({**params, **xvals})
    lp, tail = big_phi_log(tc, sqrts, ctx)
    return mp.exp(lp), tail


def integrand(wf: WeightFunction, tc: TangentClass,
              xvals: Mapping[str, object], zs: Mapping[int, object],
              params: Mapping[str, object], ctx: QSeriesContext,
              g_beta: Callable | None = None):
    """f_F(x) e(x, z_#) Phi(x) with an optional basis-factor hook.

    Returns (value, breakdown dict).  g_beta, when supplied, is called
    with (xvals, zs) and multiplies the result; the default is the
    constant 1.
    """
    sqrts = sqrt_map({**params, **xvals})
    fval = wf.symmetrized().evaluate(sqrts)
    zhat = shifted_twists(tc, zs, sqrts)
    order = list(tc.Q.all_chern_roots())
    eval_ = e_kernel([xvals[v] for v in order], [zhat[v] for v in order], ctx)
    lp, tail = big_phi_log(tc, sqrts, ctx)
    pval = mp.exp(lp)
    g = mp.mpf(1) if g_beta is None else g_beta(xvals, zs)
    return fval * eval_ * pval * g, {
        "weight_function": fval, "e_kernel": eval_, "big_phi": pval,
        "g_beta": g, "phi_tail": tail}


def _fold_imag(val):
    two_pi = 2 * mp.pi
    k = mp.nint(mp.im(val) / two_pi)
    return val - 1j * two_pi * k


def saddle_residual(tc: TangentClass, xvals: Mapping[str, object],
                    zs: Mapping[int, object], params: Mapping[str, object],
                    q_sequence: Sequence, digits: int = 30,
                    step=mp.mpf("1e-8")):
    """Residual table for the q -> 1 degeneration onto the Bethe system.

    For each q, computes per Chern root

        D = ln q * x d/dx [ln Phi] + ln z_i - m ln(-hbar^(1/2))

    (central finite differences in ln x for the Phi term; the e-kernel
    term is linear in ln x, so its exact derivative ln z_i minus the
    half-power shift is used directly) and the limit target

        L = ln z_i - ln ahat(x d/dx TX),

    and reports |D - L| folded to the nearest 2 pi i multiple (both
    sides are only defined modulo the choice of log branches).

    Returns a list of {"q": q, residuals per variable, "max": worst}.
    """
    system = bethe_equations(tc)
    rows = []
    with mp.workdps(digits + 15):
        sqrts = sqrt_map({**params, **xvals})
        mhs = -sqrts["hbar"]
        det_half = tc.half.det()
        target = {}
        for var in system.variables:
            i = system.vertex_of(var)
            lhs_val = system.lhs[var].evaluate(sqrts)
            target[var] = mp.log(mp.mpmathify(zs[i])) - mp.log(lhs_val)
        for q in q_sequence:
            ctx = QSeriesContext(q, digits)
            lnq = mp.log(mp.mpmathify(q))
            row = {"q": mp.mpmathify(q)}
            worst = mp.mpf(0)
            for var in system.variables:
                i = system.vertex_of(var)
                # sqrts holds square roots: multiplying one by
                # exp(step/4) moves ln x by step/2, giving a central
                # difference with total separation step
                shifted = dict(sqrts)
                shifted[var] = sqrts[var] * mp.exp(step / 4)
                up, _ = big_phi_log(tc, shifted, ctx)
                shifted[var] = sqrts[var] * mp.exp(-step / 4)
                dn, _ = big_phi_log(tc, shifted, ctx)
                m = Fraction(det_half.exponent(var))
                d_val = (lnq * (up - dn) / step
                         + mp.log(mp.mpmathify(zs[i]))
                         - mp.mpf(m.numerator) / m.denominator * mp.log(mhs))
                resid = abs(_fold_imag(d_val - target[var]))
                row[var] = resid
                worst = max(worst, resid)
            row["max"] = worst
            rows.append(row)
    return rows
