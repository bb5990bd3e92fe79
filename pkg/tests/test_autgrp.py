import numpy as np
import pytest

from hypermaps.app.errors import CapExceededError, DefectError, UsageError
from hypermaps.app.families import AutGenerator, build_model
from hypermaps.app.services.autgrp import (
    aut_bruteforce,
    aut_constructed,
    inverters,
    subgroup_inverters,
)


def test_alt5_aut_is_sym5(alt5_aut):
    assert alt5_aut.order == 120
    summary = alt5_aut.summary()
    assert (summary.inner, summary.outer) == (60, 2)


def test_maps_are_automorphisms(alt5, alt5_aut):
    S = alt5.S
    for a in range(0, alt5_aut.order, 11):
        m = alt5_aut.map_of(a)
        assert np.unique(m).size == S.order
        for s in range(0, S.order, 7):
            for t in range(0, S.order, 5):
                assert m[S.mul(s, t)] == S.mul(int(m[s]), int(m[t]))


def test_images_match_maps(alt5, alt5_aut):
    for s in (0, 3, 17):
        images = alt5_aut.images(s)
        assert images.tolist() == [int(alt5_aut.map_of(a)[s]) for a in range(alt5_aut.order)]
        subset = np.array([0, 5, 9])
        assert alt5_aut.images(s, subset).tolist() == images[subset].tolist()


def test_inner_automorphisms_are_conjugations(alt5, alt5_aut):
    S = alt5.S
    inner = alt5_aut.inner_index
    assert int((inner >= 0).sum()) == 60
    for a in np.flatnonzero(inner >= 0)[:10]:
        s = int(inner[a])
        assert alt5_aut.map_of(int(a)).tolist() == S.conjugation_map(s).tolist()
    assert alt5_aut.tag_of(0) == "inner"
    outer = int(np.flatnonzero(inner < 0)[0])
    assert alt5_aut.element(outer).tag == "outer"


def test_bruteforce_oracle_matches_construction(psl27, psl27_aut):
    oracle = aut_bruteforce(psl27.S)
    assert oracle.order == psl27_aut.order == 336
    assert oracle.mode == "direct"
    assert (oracle.handle.lookup_perms(psl27_aut.rows(np.arange(psl27_aut.order))) >= 0).all()
    assert oracle.summary().inner == 168


def test_constructed_aut_with_field_automorphisms():
    model = build_model("PSL", 2, 8)
    A = aut_constructed(model, validate=True)
    assert A.order == 1512
    assert A.summary().outer == 3


def test_alt6_has_four_outer_classes():
    A = aut_constructed(build_model("ALT", 6), validate=True)
    assert A.order == 1440
    assert A.summary().outer == 4
    assert "exceptional" in A.gen_tags


def test_non_normalizing_generator_is_a_defect():
    model = build_model("ALT", 6)
    bad = AutGenerator(np.array([1, 0] + list(range(2, 12)), dtype=np.int64), "outer")
    broken = type(model)(
        model.family, model.n, model.q, model.S, model.aut_gens + [bad], model.expected_aut_order,
    )
    with pytest.raises(DefectError):
        aut_constructed(broken, validate=False)


def test_bruteforce_respects_the_oracle_cap():
    model = build_model("PSL", 3, 3)
    with pytest.raises(CapExceededError):
        aut_bruteforce(model.S)


def test_inverters_form_a_coset_of_the_centralizer(alt5, alt5_aut):
    S = alt5.S
    for x in S.gens:
        inv = inverters(alt5_aut, x)
        assert inv.size == alt5_aut.centralizer(x).size
        assert (alt5_aut.images(x, inv.members) == S.inverse_of(x)).all()
        report = inv.report(alt5_aut)
        assert report.size == inv.size
        assert report.member_orders == sorted(report.member_orders)


def test_subgroup_inverters(alt5, alt5_aut):
    S = alt5.S
    trivial = subgroup_inverters(alt5_aut, [S.id_index])
    assert trivial.size == 26  # identity, 10 transpositions, 15 double transpositions
    x = int(S.elements_of_order(5)[0])
    C = S.subgroup_generated([x])
    by_subgroup = subgroup_inverters(alt5_aut, C, involutions_only=False)
    assert sorted(by_subgroup.members.tolist()) == sorted(inverters(alt5_aut, x).members.tolist())
    with pytest.raises(UsageError):
        subgroup_inverters(alt5_aut, [S.id_index, x])


def test_klein_subgroup_inverters_are_intersections(alt5, alt5_aut):
    S = alt5.S
    t = int(S.elements_of_order(2)[0])
    cent = S.centralizer(t)
    klein = cent[S.orders[cent] <= 2]
    assert klein.size == 4
    K = subgroup_inverters(alt5_aut, klein, involutions_only=False)
    # every element of an elementary abelian 2-group is its own inverse
    expected = set(range(alt5_aut.order))
    for k in klein:
        expected &= set(np.flatnonzero(alt5_aut.images(int(k)) == int(k)).tolist())
    assert set(K.members.tolist()) == expected


def test_bruteforce_on_sym3(sym3):
    A = aut_bruteforce(sym3)
    assert A.order == 6
    summary = A.summary()
    assert (summary.inner, summary.outer) == (6, 1)
