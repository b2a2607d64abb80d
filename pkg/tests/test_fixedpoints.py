"""Fixed-component enumeration, partitions, and attracting orders."""

from math import comb

import pytest

from bethekit.fixedpoints import (Partition, column_leq, component_order,
                                  dominance_leq, enumerate_fixed,
                                  partitions_of)
from bethekit.quiver import a1_quiver, cyclic_quiver, jordan_quiver

PARTITION_COUNTS = {1: 1, 2: 2, 3: 3, 4: 5, 5: 7, 6: 11, 7: 15, 8: 22}


@pytest.mark.parametrize("n,count", sorted(PARTITION_COUNTS.items()))
def test_partition_counts(n, count):
    parts = list(partitions_of(n))
    assert len(parts) == count
    assert len({p.parts for p in parts}) == count
    assert all(p.size == n for p in parts)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_jordan_components_are_partitions(n):
    comps = enumerate_fixed(jordan_quiver(n))
    assert len(comps) == PARTITION_COUNTS[n]
    for F in comps:
        assert len(F.chars[0]) == n


@pytest.mark.parametrize("v,w", [(1, 1), (1, 3), (2, 3), (2, 4), (3, 4)])
def test_subset_components_count(v, w):
    comps = enumerate_fixed(a1_quiver(v, w))
    assert len(comps) == comb(w, v)
    assert len({F.columns for F in comps}) == comb(w, v)


def test_cyclic_components_fold_contents():
    comps = enumerate_fixed(cyclic_quiver((2, 1), (1, 0)))
    assert comps
    for F in comps:
        assert len(F.chars[0]) == 2 and len(F.chars[1]) == 1


def test_dominance_order_properties():
    comps = enumerate_fixed(jordan_quiver(4))
    for a in comps:
        assert dominance_leq(a, a)
    for a in comps:
        for b in comps:
            if a is not b:
                assert not (dominance_leq(a, b) and dominance_leq(b, a))


def test_column_order_properties():
    comps = enumerate_fixed(a1_quiver(2, 4))
    for a in comps:
        assert column_leq(a, a)
    for a in comps:
        for b in comps:
            if a is not b:
                assert not (column_leq(a, b) and column_leq(b, a))


def test_component_order_dispatch():
    assert component_order(jordan_quiver(2)) is dominance_leq
    assert component_order(a1_quiver(1, 2)) is column_leq
    assert component_order(cyclic_quiver((1, 1), (1, 0))) is None


def test_partition_dominance_basics():
    a = Partition((2, 1, 1))
    b = Partition((4,))
    c = Partition((2, 2))
    assert b.dominates(a) and b.dominates(c)
    assert c.dominates(a)
    assert not a.dominates(c)
    assert not Partition((3,)).dominates(b)
