import numpy as np
import pytest

from hypermaps.app.errors import UsageError
from hypermaps.app.families import (
    alt_model,
    build_model,
    cycle_notation,
    perm_from_cycles,
    psl_model,
    psu_model,
)


def test_cycle_notation_round_trip():
    perm = perm_from_cycles([[1, 2, 3], [5, 6]], 7, one_based=True)
    assert perm.tolist() == [1, 2, 0, 3, 5, 4, 6]
    assert cycle_notation(perm) == "(1,2,3)(5,6)"
    assert cycle_notation(np.arange(4)) == "()"


def test_alt_models():
    m = alt_model(5)
    assert m.S.order == 60
    assert m.S.degree == 5
    assert m.expected_aut_order == 120
    assert [g.tag for g in m.aut_gens].count("outer") == 1
    assert m.singer_order == 5


def test_alt_model_rejects_small_or_wrong_input():
    with pytest.raises(UsageError):
        alt_model(4)
    with pytest.raises(UsageError):
        alt_model(5, gens=[perm_from_cycles([[0, 1, 2]], 5)])
    with pytest.raises(UsageError):
        alt_model(6, gens=[perm_from_cycles([[0, 1, 2]], 6)])


def test_alt6_acts_on_points_and_totals():
    m = build_model("ALT", 6)
    assert m.S.order == 360
    assert m.S.degree == 12
    assert m.expected_aut_order == 1440
    tags = {g.tag for g in m.aut_gens}
    assert {"outer", "exceptional"} <= tags
    swap = m.special["exceptional"]
    assert swap[swap].tolist() == list(range(12))


@pytest.mark.parametrize("n,q,order,degree,special", [
    (2, 7, 168, 8, {"diag"}),
    (2, 8, 504, 9, {"diag", "field"}),
    (2, 9, 360, 10, {"diag", "field"}),
    (3, 2, 168, 14, {"graph"}),
    (3, 3, 5616, 26, {"diag", "graph"}),
])
def test_psl_models(n, q, order, degree, special):
    m = psl_model(n, q)
    assert m.S.order == order
    assert m.S.degree == degree
    assert set(m.special) == special
    assert len(m.S.gens) == 2


def test_psl3_graph_swaps_points_and_lines():
    m = psl_model(3, 3)
    graph = m.special["graph"]
    assert graph[graph].tolist() == list(range(26))
    assert m.singer_order == 13


def test_psu3_model():
    m = psu_model(3)
    assert m.S.order == 6048
    assert m.S.degree == 28
    assert m.expected_aut_order == 12096
    assert m.singer_order == 7
    phi = m.special["phi"]
    assert phi[phi].tolist() == list(range(28))


def test_build_model_validates_its_arguments():
    with pytest.raises(UsageError):
        build_model("FOO", 3, 3)
    with pytest.raises(UsageError):
        build_model("PSU", 4, 3)
    with pytest.raises(UsageError):
        build_model("PSL", 4, 2)
    with pytest.raises(UsageError):
        build_model("ALT")
    assert build_model("alt", 5) is build_model("alt", 5)


@pytest.mark.parametrize("q", [2, pytest.param(3, marks=pytest.mark.slow)])
def test_psl3_graph_is_an_outer_automorphism(q):
    model = psl_model(3, q)
    S, g = model.S, model.special["graph"]
    rows = g[S.perms.astype(np.int64)[:, np.argsort(g)]]
    image = S.lookup_perms(rows.astype(S.perms.dtype))
    assert (image >= 0).all()
    assert np.unique(image).size == S.order
    assert (image[image] == np.arange(S.order)).all()
    for s in range(S.order):
        assert np.array_equal(image[S.right_mul_column(s)], S.right_mul_column(int(image[s]))[image])
    # inverse transpose moves a class of elements of order q^2 + q + 1
    assert (S.class_labels[image] != S.class_labels).any()
