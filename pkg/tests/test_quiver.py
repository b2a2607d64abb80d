"""Quiver models: dimension data, polarization identity, serialization."""

import pytest
from hypothesis import given, settings, strategies as st

from bethekit.quiver import (Edge, QuiverModel, a1_quiver,
                             check_polarization_identity, cyclic_quiver,
                             jordan_quiver, quiver_from_text, quiver_to_text)


CORPUS = ([jordan_quiver(n) for n in (1, 2, 3)]
          + [a1_quiver(v, w) for v in (1, 2) for w in (v, v + 1, 4)]
          + [cyclic_quiver((1, 1), (1, 0)), cyclic_quiver((2, 1), (1, 1))])


@pytest.mark.parametrize("Q", CORPUS, ids=lambda Q: f"v{Q.v}w{Q.w}")
def test_polarization_identity(Q):
    # T^(1/2) + hbar^-1 (T^(1/2))^dual == TX, exactly
    assert check_polarization_identity(Q)


@pytest.mark.parametrize("Q", CORPUS, ids=lambda Q: f"v{Q.v}w{Q.w}")
def test_text_roundtrip(Q):
    assert quiver_from_text(quiver_to_text(Q)) == Q


def test_dangling_edge_is_named():
    with pytest.raises(ValueError, match="edge 0->3"):
        QuiverModel(2, (Edge(0, 3, "t1"),), (1, 1), (1, 0))


def test_dimension_vector_validation():
    with pytest.raises(ValueError):
        QuiverModel(2, (), (1,), (1, 0))
    with pytest.raises(ValueError):
        QuiverModel(1, (), (-1,), (1,))


def test_malformed_text_rejected():
    with pytest.raises(ValueError, match="parse error"):
        quiver_from_text("{not json")
    with pytest.raises(ValueError, match="missing field"):
        quiver_from_text('{"vertices": 1}')


@given(st.integers(1, 3), st.integers(1, 3))
@settings(max_examples=20, deadline=None)
def test_chern_root_bookkeeping(v, w):
    Q = a1_quiver(v, w)
    roots = Q.all_chern_roots()
    assert len(roots) == v
    assert len(set(roots)) == v
    assert Q.framing_params(0) == [f"a0_{l}" for l in range(w)]


def test_baxter_eigenvalue_is_pi_ratio():
    import mpmath as mp
    from bethekit.bethe import sqrt_map
    Q = a1_quiver(2, 3)
    sq = sqrt_map({"hbar": mp.mpf("0.3"), "a0_0": 1, "a0_1": 2, "a0_2": 3,
                   "x0_0": mp.mpc("0.7", "0.1"), "x0_1": mp.mpc("1.1", "-0.2")})
    lhs = Q.baxter_eigenvalue().evaluate(sq)
    rhs = Q.pi_prime().evaluate(sq) / Q.pi_factor().evaluate(sq)
    assert abs(lhs - rhs) < mp.mpf("1e-12") * abs(rhs)
