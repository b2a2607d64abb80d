"""Spin-chain oracle: R-matrix identities, monodromy, eigenvector checks."""

import mpmath as mp
import pytest

from bethekit import xxz
from bethekit.bethe import bethe_equations, solve, tangent_class
from bethekit.fixedpoints import enumerate_fixed
from bethekit.quiver import a1_quiver

mp.mp.dps = 60

HB = mp.mpf("0.3")
Z = mp.mpf("0.001") * mp.exp(mp.mpf("0.4") * 1j)
US = [mp.mpf("0.77") * mp.exp(0.9j), mp.mpf("2.3") * mp.exp(-0.5j)]


def _params(w):
    out = {"hbar": HB}
    for l in range(w):
        out[f"a0_{l}"] = mp.mpf(1) + mp.mpf(l) / 3
    return out


def _chain(w):
    return xxz.chain_for(a1_quiver(1, w), _params(w), digits=50)


def _roots(v, w, digits=50):
    Q = a1_quiver(v, w)
    recs = solve(bethe_equations(tangent_class(Q)), [Z], _params(w),
                 enumerate_fixed(Q), digits=digits)
    assert all(r.converged for r in recs)
    return [[r.roots[f"x0_{k}"] for k in range(v)] for r in recs]


@pytest.mark.parametrize("c_split", ["plain", "tilted"])
def test_yang_baxter(c_split):
    r = xxz.yang_baxter_residual(mp.mpf("0.31") + 0.2j, mp.mpf("1.7") - 0.4j,
                                 HB, c_split)
    assert r < mp.mpf("1e-20")


def test_r_matrix_rejects_unknown_gauge():
    with pytest.raises(ValueError):
        xxz.r_matrix(mp.mpf("0.5"), HB, "other")


def test_transfer_matrices_commute():
    s = _chain(3)
    r = xxz.commutator_residual(s, US[0], US[1], Z)
    assert r < mp.mpf("1e-18")


def test_magnon_blocks_exactly_preserved():
    s = _chain(3)
    assert xxz.magnon_block_residual(s, US[0], Z) == 0


def test_off_shell_trivial_cases():
    s = _chain(2)
    # v = 0: the vacuum itself
    v0 = xxz.off_shell_vector(s, [])
    assert v0[0] == 1 and all(v0[i] == 0 for i in range(1, 4))
    # v = N: proportional to the all-down state
    vN = xxz.off_shell_vector(s, US)
    assert all(vN[i] == 0 for i in range(3))
    assert vN[3] != 0


def test_off_shell_single_site_by_hand():
    a0 = mp.mpf("1.37")
    s = xxz.ChainState(HB, (a0,), "plain", "A")
    x = mp.mpf("0.8") * mp.exp(0.3j)
    psi = xxz.off_shell_vector(s, [x])
    _, cu, _ = xxz.r_entries(x / a0, HB, "plain")
    assert psi[0] == 0
    assert abs(psi[1] - cu) < mp.mpf("1e-50")


def test_off_shell_rejects_coincident_parameters():
    s = _chain(2)
    with pytest.raises(ValueError, match="coincident"):
        xxz.off_shell_vector(s, [US[0], US[0]])


def test_eigen_check_at_solved_roots():
    s = _chain(3)
    for roots in _roots(2, 3):
        assert xxz.eigen_check(s, roots, Z, US) < mp.mpf("1e-10")


def test_eigen_check_rejects_generic_vectors():
    s = _chain(3)
    roots = _roots(1, 3)[0]
    bad = [x * mp.mpf("1.05") for x in roots]
    assert xxz.eigen_check(s, bad, Z, US) > mp.mpf("1e-3")


def test_eigen_residual_scales_with_precision():
    s30 = _chain(2)
    roots30 = _roots(1, 2, digits=30)[0]
    roots50 = _roots(1, 2, digits=50)[0]
    with mp.workdps(40):
        r30 = xxz.eigen_check(s30, roots30, Z, US)
    with mp.workdps(70):
        r50 = xxz.eigen_check(s30, roots50, Z, US)
    assert r50 < r30 * mp.mpf("1e-10")


def test_calibration_is_cached_and_reported():
    first = xxz.calibrate(digits=50)
    second = xxz.calibrate(digits=50)
    assert first is second
    assert "twist=" in first.convention_id()


def test_chain_for_rejects_other_quivers():
    from bethekit.quiver import jordan_quiver
    with pytest.raises(ValueError):
        xxz.chain_for(jordan_quiver(1), {"hbar": HB, "a0_0": 1}, digits=50)


def test_component_index_labels_framing_columns():
    assert xxz.component_index((), 3) == 0
    assert xxz.component_index((0,), 3) == 4
    assert xxz.component_index((2,), 3) == 1
    assert xxz.component_index((0, 1, 2), 3) == 7
