"""q-products, the difference kernel, and the q -> 1 saddle residual."""

from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bethekit import qseries
from bethekit.bethe import tangent_class
from bethekit.quiver import a1_quiver, jordan_quiver

mp.mp.dps = 60

CTX = qseries.QSeriesContext(mp.mpf("0.5"), digits=50)


def test_context_rejects_large_q():
    with pytest.raises(ValueError, match="q"):
        qseries.QSeriesContext(mp.mpf("1.0"))
    with pytest.raises(ValueError):
        qseries.QSeriesContext(2j)


def test_phi_at_zero_argument():
    val, tail = qseries.phi(0, CTX)
    assert val == 1


def test_phi_reference_value():
    val, tail = qseries.phi(mp.mpf("0.5"), CTX)
    assert abs(val - mp.mpf("0.2887880951")) < mp.mpf("1e-10")
    assert tail < mp.mpf("1e-40")


def test_phi_matches_qp():
    y = mp.mpf("0.3") * mp.exp(0.7j)
    val, _ = qseries.phi(y, CTX)
    assert abs(val - mp.qp(y, CTX.q)) < mp.mpf("1e-40")


@settings(max_examples=30, deadline=None)
@given(st.floats(min_value=-0.9, max_value=0.9),
       st.floats(min_value=-0.9, max_value=0.9))
def test_phi_functional_equation(re, im):
    # phi(y) = (1 - y) phi(q y)
    y = mp.mpf(re) + 1j * mp.mpf(im)
    lhs, t1 = qseries.phi(y, CTX)
    rhs, t2 = qseries.phi(CTX.q * y, CTX)
    assert abs(lhs - (1 - y) * rhs) < 2 * (t1 + t2) + mp.mpf("1e-44")


def test_phi_pole_is_reported():
    Q = a1_quiver(1, 1)
    tc = tangent_class(Q)
    # the weight x/a reaches the pole hbar * chi = 1 at x = a / hbar
    with pytest.raises(ZeroDivisionError, match="polarization weight"):
        qseries.big_phi(tc, {"x0_0": mp.mpf("1.0")},
                        {"hbar": mp.mpf("0.3"), "a0_0": mp.mpf("0.3")}, CTX)


def test_e_kernel_trivial_twist():
    xs = [mp.mpf("0.7"), mp.mpf("1.3")]
    assert abs(qseries.e_kernel(xs, [1, 1], CTX) - 1) < mp.mpf("1e-45")


def test_e_kernel_integer_power():
    # x = q^d gives e(x, z) = z^d
    q = mp.mpf("0.5")
    z = mp.mpf("0.8") * mp.exp(0.3j)
    for d in (1, 2, 3):
        val = qseries.e_kernel([q ** d], [z], CTX)
        assert abs(val - z ** d) < mp.mpf("1e-40")


def test_e_kernel_additive_in_log_twist():
    x = [mp.mpf("0.7") * mp.exp(0.2j)]
    z1, z2 = mp.mpf("0.9") * mp.exp(0.1j), mp.mpf("1.1") * mp.exp(-0.3j)
    lhs = qseries.e_kernel(x, [z1], CTX) * qseries.e_kernel(x, [z2], CTX)
    rhs = qseries.e_kernel(x, [z1 * z2], CTX)
    assert abs(lhs - rhs) < mp.mpf("1e-12")


def test_e_kernel_rejects_cut_values():
    with pytest.raises(ValueError, match="cut"):
        qseries.e_kernel([mp.mpf("-0.5")], [1], CTX)
    with pytest.raises(ValueError):
        qseries.e_kernel([mp.mpf("0.5")], [0], CTX)


def test_big_phi_is_one_when_hbar_equals_q():
    # every numerator factor phi(q chi) cancels the denominator phi(hbar chi)
    Q = a1_quiver(1, 2)
    tc = tangent_class(Q)
    params = {"hbar": mp.mpf("0.5"), "a0_0": mp.mpf("1.2"),
              "a0_1": mp.mpf("0.8")}
    val, tail = qseries.big_phi(tc, {"x0_0": mp.mpf("0.6")}, params, CTX)
    assert abs(val - 1) < 10 * tail + mp.mpf("1e-40")


def test_shifted_twists_apply_half_power():
    Q = a1_quiver(1, 2)
    tc = tangent_class(Q)
    params = {"hbar": mp.mpf("0.3"), "a0_0": mp.mpf("1.2"),
              "a0_1": mp.mpf("0.8")}
    from bethekit.bethe import sqrt_map
    sqrts = sqrt_map(params)
    z = mp.mpf("0.4") * mp.exp(0.2j)
    zhat = qseries.shifted_twists(tc, {0: z}, sqrts)
    m = Fraction(tc.half.det().exponent("x0_0"))
    expect = z * mp.exp(-mp.mpf(m.numerator) / m.denominator
                        * mp.log(-sqrts["hbar"]))
    assert abs(zhat["x0_0"] - expect) < mp.mpf("1e-45")


def test_integrand_q_shift_of_twist():
    # shifting z_i -> q z_i multiplies e(x, z_#) by prod_k x_{i,k},
    # with the weight function and Phi factors unchanged
    Q = jordan_quiver(2)
    tc = tangent_class(Q)
    from bethekit.envelope import build_weight_function
    from bethekit.fixedpoints import enumerate_fixed
    wf = build_weight_function(Q, enumerate_fixed(Q)[0])
    params = {"hbar": mp.mpf("0.3"), "a0_0": mp.mpf("1.1"), "t1": mp.mpf("0.45")}
    xv = {"x0_0": mp.mpf("0.62") * mp.exp(0.3j),
          "x0_1": mp.mpf("0.41") * mp.exp(-0.2j)}
    z = mp.mpf("0.7") * mp.exp(0.5j)
    v1, b1 = qseries.integrand(wf, tc, xv, {0: z}, params, CTX)
    v2, b2 = qseries.integrand(wf, tc, xv, {0: CTX.q * z}, params, CTX)
    ratio = b2["e_kernel"] / b1["e_kernel"]
    assert abs(ratio - xv["x0_0"] * xv["x0_1"]) < mp.mpf("1e-10")
    assert b1["weight_function"] == b2["weight_function"]
    assert b1["big_phi"] == b2["big_phi"]


def test_integrand_g_beta_hook():
    Q = jordan_quiver(1)
    tc = tangent_class(Q)
    from bethekit.envelope import build_weight_function
    from bethekit.fixedpoints import enumerate_fixed
    wf = build_weight_function(Q, enumerate_fixed(Q)[0])
    params = {"hbar": mp.mpf("0.3"), "a0_0": mp.mpf("1.1"), "t1": mp.mpf("0.45")}
    xv = {"x0_0": mp.mpf("0.62") * mp.exp(0.3j)}
    v1, _ = qseries.integrand(wf, tc, xv, {0: mp.mpf("0.7")}, params, CTX)
    v2, b2 = qseries.integrand(wf, tc, xv, {0: mp.mpf("0.7")}, params, CTX,
                               g_beta=lambda x, z: mp.mpf(3))
    assert abs(v2 - 3 * v1) < mp.mpf("1e-40") * abs(v1)
    assert b2["g_beta"] == 3


def test_saddle_residual_decays():
    Q = jordan_quiver(1)
    tc = tangent_class(Q)
    params = {"hbar": mp.mpf("0.3"), "a0_0": mp.mpf("1.0"), "t1": mp.mpf("0.45")}
    xv = {"x0_0": mp.mpf("0.6") * mp.exp(0.2j)}
    zs = {0: mp.mpf("0.7") * mp.exp(0.4j)}
    rows = qseries.saddle_residual(tc, xv, zs, params,
                                   [mp.mpf("0.9"), mp.mpf("0.99")], digits=30)
    assert rows[1]["max"] < rows[0]["max"]
    assert rows[1]["max"] < mp.mpf("1e-1")
