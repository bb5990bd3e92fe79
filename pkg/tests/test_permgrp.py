import numpy as np
import pytest

from hypermaps.app.errors import CapExceededError, DefectError, UsageError
from hypermaps.app.services.permgrp import (
    close_generators,
    close_permutations,
    cyclic_subgroup_labels,
    lcm_of_orders,
    RowIndex,
    orbit_labels,
)


def test_identity_comes_first(sym3):
    assert sym3.order == 6
    assert sym3.id_index == 0
    assert list(sym3.perms[0]) == [0, 1, 2]
    assert sym3.degree == 3


def test_products_read_left_to_right(sym3):
    for i in range(sym3.order):
        for j in range(sym3.order):
            expected = sym3.perms[j][sym3.perms[i]]
            assert list(sym3.perms[sym3.mul(i, j)]) == list(expected)
    a, b = np.meshgrid(np.arange(6), np.arange(6))
    many = sym3.mul_many(a.ravel(), b.ravel())
    assert list(many) == [sym3.mul(int(x), int(y)) for x, y in zip(a.ravel(), b.ravel())]


def test_inverses_and_powers(sym3):
    for i in range(sym3.order):
        assert sym3.mul(i, sym3.inverse_of(i)) == sym3.id_index
        assert sym3.power(i, sym3.order_of(i)) == sym3.id_index
        assert sym3.power(i, -1) == sym3.inverse_of(i)
    assert sorted(sym3.orders.tolist()) == [1, 2, 2, 2, 3, 3]


def test_conjugation_convention(sym3):
    for x in range(sym3.order):
        for a in range(sym3.order):
            ai = sym3.inverse_of(a)
            assert sym3.conjugate(x, a) == sym3.mul(sym3.mul(ai, x), a)
        cmap = sym3.conjugates_of(x)
        assert [sym3.conjugate(x, a) for a in range(sym3.order)] == cmap.tolist()
    for a in range(sym3.order):
        assert sym3.conjugation_map(a).tolist() == [sym3.conjugate(x, a) for x in range(sym3.order)]


def test_classes_and_centralizers(sym3):
    assert sorted(c.size for c in sym3.conjugacy_classes()) == [1, 2, 3]
    three_cycle = int(sym3.elements_of_order(3)[0])
    assert sym3.centralizer(three_cycle).size == 3
    assert sym3.class_sizes[three_cycle] == 2


def test_generation(sym3):
    t = int(sym3.elements_of_order(2)[0])
    c = int(sym3.elements_of_order(3)[0])
    assert sym3.generates(t, c)
    assert not sym3.generates(c)
    assert sorted(sym3.subgroup_generated([c]).tolist()) == sorted([0, c, sym3.inverse_of(c)])
    assert sym3.is_closed([0, c, sym3.inverse_of(c)])
    assert not sym3.is_closed([0, t, c])
    i, j = sym3.find_generating_pair(seed=1)
    assert sym3.generates(i, j)


def test_words_evaluate_back(sym3):
    for i in range(sym3.order):
        assert sym3.evaluate_word(sym3.word(i)) == i
        assert len(sym3.word(i)) == sym3.depth[i]


def test_closure_cap_and_bad_generators():
    with pytest.raises(CapExceededError):
        close_permutations([[1, 0, 2], [1, 2, 0]], cap=3)
    with pytest.raises(UsageError):
        close_permutations([[0, 0, 1]])


def test_closure_compares_rows_on_hash_hits(monkeypatch):
    # a row sum is equal for every permutation of the same degree
    monkeypatch.setattr(RowIndex, "hash", lambda self, rows: np.asarray(rows).astype(np.uint64).sum(axis=-1))
    with pytest.raises(DefectError):
        close_permutations([[1, 0, 2], [1, 2, 0]])
    with pytest.raises(DefectError):
        close_permutations([[1, 2, 0]])


def test_generic_closure_matches_cyclic_group():
    Z6 = close_generators([1], lambda a, b: (a + b) % 6, identity=0, name="Z6")
    assert Z6.order == 6
    assert sorted(Z6.orders.tolist()) == [1, 2, 3, 3, 6, 6]
    assert Z6.key(Z6.index_of(4)) == 4
    assert Z6.index_of(7) == -1
    assert Z6.mul(Z6.index_of(5), Z6.index_of(3)) == Z6.index_of(2)
    assert Z6.inverse_of(Z6.index_of(1)) == Z6.index_of(5)


def test_orbit_labels():
    assert orbit_labels(5, [np.array([1, 0, 2, 3, 4]), np.array([0, 1, 3, 4, 2])]).tolist() == [0, 0, 2, 2, 2]


def test_alt5_invariants(alt5):
    S = alt5.S
    assert S.order == 60
    assert sorted(c.size for c in S.conjugacy_classes()) == [1, 12, 12, 15, 20]
    assert lcm_of_orders(S) == 30
    assert len(S.gens) == 2
    summary = S.summary()
    assert summary.order == 60 and summary.n_classes == 5


def test_cyclic_subgroup_labels_agree_for_generators_of_one_subgroup(alt5):
    S = alt5.S
    fives = S.elements_of_order(5)
    labels = cyclic_subgroup_labels(S, fives)
    # six subgroups of order 5, four generators each
    assert np.unique(labels).size == 6
    assert sorted(np.bincount(np.unique(labels, return_inverse=True)[1]).tolist()) == [4] * 6
