from fractions import Fraction

import pytest

from hypermaps.app.errors import CapExceededError, DefectError, UsageError
from hypermaps.app.families import build_model
from hypermaps.app.services.autgrp import aut_constructed
from hypermaps.app.services.chirality import (
    check_inverter_is_involution,
    delta_statistic,
    hypermap_census,
    is_strongly_symmetric,
    is_symmetric_pair,
    naive_generating_pair_count,
    pair_orbit_scan,
    wilson_interval,
)


def test_alt5_delta_is_one(alt5, alt5_aut):
    report = delta_statistic(alt5.S, alt5_aut)
    assert report.exact
    assert report.delta == "1/1"
    assert report.n_generating_pairs == 2280
    assert report.n_symmetric_pairs == 2280
    assert report.aut_order == 120


def test_orbit_scan_agrees_with_naive_count(alt5, alt5_aut):
    orbits = sum(int(scan.y_gen.size) for scan in pair_orbit_scan(alt5.S, alt5_aut))
    assert orbits * alt5_aut.order == naive_generating_pair_count(alt5.S)


def test_threaded_scan_matches_serial(alt5, alt5_aut):
    serial = delta_statistic(alt5.S, alt5_aut, threads=1)
    threaded = delta_statistic(alt5.S, alt5_aut, threads=4)
    assert serial == threaded


def test_sampled_delta(alt5, alt5_aut):
    report = delta_statistic(alt5.S, alt5_aut, sample=300, seed=7)
    assert not report.exact
    assert report.sample_size == 300
    assert 0 < report.n_generating_pairs <= 300
    assert report.delta == "1/1"
    low, high = report.interval
    assert 0.0 <= low <= 1.0 <= high + 1e-12
    again = delta_statistic(alt5.S, alt5_aut, sample=300, seed=7)
    assert again == report


def test_delta_cap(alt5, alt5_aut):
    with pytest.raises(CapExceededError):
        delta_statistic(alt5.S, alt5_aut, cap=10)


def test_wilson_interval():
    assert wilson_interval(0, 0) == [0.0, 1.0]
    low, high = wilson_interval(50, 100)
    assert low < 0.5 < high
    assert abs((0.5 - low) - (high - 0.5)) < 1e-12


def test_symmetric_pair_witness_is_an_involution(alt5, alt5_aut):
    S = alt5.S
    x, y = S.gens
    witness = is_symmetric_pair(S, alt5_aut, x, y)
    assert witness is not None
    assert witness.order == 2
    assert check_inverter_is_involution(S, alt5_aut, x, y, witness)
    assert witness.map[x] == S.inverse_of(x)
    assert witness.map[y] == S.inverse_of(y)


def test_symmetry_is_invariant_under_automorphisms(alt5, alt5_aut):
    S = alt5.S
    x = S.gens[0]
    for a in range(0, alt5_aut.order, 13):
        m = alt5_aut.map_of(a)
        for y in range(S.order):
            before = is_symmetric_pair(S, alt5_aut, x, y, relaxed=True)
            after = is_symmetric_pair(S, alt5_aut, int(m[x]), int(m[y]), relaxed=True)
            assert (before is None) == (after is None)


def test_symmetric_pair_requires_a_generating_pair(alt5, alt5_aut):
    x = alt5.S.gens[0]
    with pytest.raises(UsageError):
        is_symmetric_pair(alt5.S, alt5_aut, x, x)
    assert is_symmetric_pair(alt5.S, alt5_aut, x, x, relaxed=True) is not None


def test_inverter_check_rejects_non_inverters(alt5, alt5_aut):
    S = alt5.S
    x, y = S.gens
    with pytest.raises(UsageError):
        check_inverter_is_involution(S, alt5_aut, x, y, 0)


def test_inverter_check_flags_a_trivial_inverter(dihedral8, dihedral8_aut):
    # two reflections are inverted by the identity, which is not an involution
    x, y = dihedral8.gens
    assert dihedral8.generates(x, y)
    assert dihedral8_aut.order == 8
    with pytest.raises(DefectError):
        check_inverter_is_involution(dihedral8, dihedral8_aut, x, y, 0)


@pytest.mark.parametrize("strategy", ["exhaustive", "witness-first"])
def test_alt5_is_strongly_symmetric(alt5, alt5_aut, strategy):
    verdict = is_strongly_symmetric(alt5.S, alt5_aut, strategy, singer_order=alt5.singer_order)
    assert verdict.strongly_symmetric
    assert verdict.witness is None
    assert verdict.strategy == strategy


def test_psl27_is_strongly_symmetric(psl27, psl27_aut):
    assert is_strongly_symmetric(psl27.S, psl27_aut).strongly_symmetric


def test_unknown_strategy(alt5, alt5_aut):
    with pytest.raises(UsageError):
        is_strongly_symmetric(alt5.S, alt5_aut, "random")


def test_alt5_census(alt5, alt5_aut):
    report = hypermap_census(alt5.S, alt5_aut)
    assert report.n_orbits == 19
    assert report.n_generating_pairs == 2280
    assert report.n_chiral == 0
    assert report.n_reflexible == 19
    for c in report.classes:
        assert c.mirror == c.rep
        x, y = c.rep
        assert c.type_triple == [
            alt5.S.order_of(x), alt5.S.order_of(y), alt5.S.order_of(alt5.S.mul(x, y)),
        ]
        assert c.is_map == (c.type_triple[1] == 2)
    assert report.n_maps == sum(c.is_map for c in report.classes)
    assert [c.rep for c in report.classes] == sorted(c.rep for c in report.classes)


def _assert_census_invariants(S, A):
    census = hypermap_census(S, A)
    report = delta_statistic(S, A)
    assert census.n_orbits * A.order == census.n_generating_pairs == report.n_generating_pairs
    assert census.n_reflexible + census.n_chiral == census.n_orbits
    assert census.n_chiral % 2 == 0
    assert Fraction(report.delta) == Fraction(census.n_reflexible, census.n_orbits)
    by_rep = {tuple(c.rep): c for c in census.classes}
    for c in census.classes:
        assert tuple(by_rep[tuple(c.mirror)].mirror) == tuple(c.rep)
        assert (c.mirror == c.rep) == c.reflexible
    return census, report


def test_psl27_census(psl27, psl27_aut):
    census, report = _assert_census_invariants(psl27.S, psl27_aut)
    assert (census.n_orbits, census.n_generating_pairs) == (57, 19152)
    assert report.delta == "1/1"


def test_alt6_census():
    model = build_model("ALT", 6)
    census, report = _assert_census_invariants(model.S, aut_constructed(model, validate=False))
    assert (census.n_orbits, census.n_generating_pairs) == (53, 76320)
    assert report.delta == "1/1"


def test_census_cap(alt5, alt5_aut):
    with pytest.raises(CapExceededError):
        hypermap_census(alt5.S, alt5_aut, cap=59)


def test_scan_rejects_foreign_automorphism_group(psl27, alt5_aut):
    with pytest.raises(UsageError):
        list(pair_orbit_scan(psl27.S, alt5_aut))


@pytest.mark.slow
def test_alt7_has_chiral_hypermaps():
    model = build_model("ALT", 7)
    A = aut_constructed(model, validate=False)
    report = delta_statistic(model.S, A, threads=2)
    num, den = (int(v) for v in report.delta.split("/"))
    assert num < den
    census = hypermap_census(model.S, A, threads=2)
    assert census.n_chiral >= 2 and census.n_chiral % 2 == 0
    assert census.n_reflexible * A.order == report.n_symmetric_pairs
    by_rep = {tuple(c.rep): c for c in census.classes}
    for c in census.classes:
        assert tuple(by_rep[tuple(c.mirror)].mirror) == tuple(c.rep)
    verdict = is_strongly_symmetric(model.S, A, "witness-first", singer_order=model.singer_order)
    assert not verdict.strongly_symmetric
    w = verdict.witness
    assert is_symmetric_pair(model.S, A, w.x, w.y) is None
    for m in A.generator_maps:
        assert is_symmetric_pair(model.S, A, int(m[w.x]), int(m[w.y])) is None
