import pytest

from hypermaps.app.errors import DefectError, UsageError
from hypermaps.app.services import verify
from hypermaps.app.services.verify import (
    DELTA1_CORRECTION,
    DOUBLE_COUNTS,
    PRINTED_DELTA1,
    double_count_check,
    is_disjoint_cycles,
    parse_cycles,
    run_ledger,
    verify_alt7,
    verify_lemma_scans,
    verify_macbeath,
    verify_oracles,
    verify_psl3,
    verify_psu3,
    verify_small_cases,
)


def _failures(claims):
    return [(c.claim_id, c.expected, c.computed) for c in claims if not c.passed]


def test_parse_cycles():
    assert parse_cycles("(1,2)(3,4,5)") == [[1, 2], [3, 4, 5]]
    with pytest.raises(UsageError):
        parse_cycles("1,2")


def test_printed_delta1_has_exactly_one_malformed_entry():
    bad = [t for t in PRINTED_DELTA1 if not is_disjoint_cycles(parse_cycles(t))]
    assert bad == ["(2,7)(3,6)(2,4)"]
    assert is_disjoint_cycles(parse_cycles(DELTA1_CORRECTION))


def test_alt7_claims():
    claims = verify_alt7()
    assert not _failures(claims)
    ids = {c.claim_id for c in claims}
    assert {"alt7.delta1-printed", "alt7.delta2-printed", "alt7.not-symmetric"} <= ids
    typo = next(c for c in claims if c.claim_id == "alt7.delta1-printed")
    assert typo.computed == [DELTA1_CORRECTION]


def test_small_cases():
    claims = verify_small_cases()
    assert not _failures(claims)
    assert len(claims) == 4


def test_macbeath_small_fields():
    claims = verify_macbeath((4, 5, 7))
    assert not _failures(claims)
    assert [c.claim_id for c in claims] == ["macbeath.q4", "macbeath.q4.order", "macbeath.q5", "macbeath.q7"]


def test_oracles():
    assert not _failures(verify_oracles())


def test_case_functions_reject_other_fields():
    with pytest.raises(UsageError):
        verify_psl3(5)
    with pytest.raises(UsageError):
        verify_psu3(4)
    with pytest.raises(UsageError):
        double_count_check(5)


def test_ledger_prefix_filter():
    claims = run_ledger(prefix="small.psu3")
    assert claims
    assert all(c.claim_id.startswith("small.psu3") for c in claims)


def test_ledger_turns_errors_into_failed_claims(monkeypatch):
    def boom(cap=None):
        raise DefectError("forced")

    monkeypatch.setattr(verify, "verify_small_cases", boom)
    claims = run_ledger(prefix="small")
    assert [c.claim_id for c in claims] == ["small.error"]
    assert not claims[0].passed
    assert claims[0].computed == "forced"


@pytest.mark.slow
def test_psl3_q3_claims():
    claims = verify_psl3(3)
    assert not _failures(claims)
    cent = next(c for c in claims if c.claim_id == "psl3.q3.centralizer-h")
    assert cent.computed == {"order": 13, "cyclic": True}


@pytest.mark.slow
def test_psl3_q4_claims():
    claims = verify_psl3(4)
    assert not _failures(claims)
    by_id = {c.claim_id: c for c in claims}
    # the semilinear map y -> y^8 doubles C_A(h) and adds seven involutions to Delta_H
    assert by_id["psl3.q4.centralizer-h"].computed == {"order": 42, "cyclic": False}
    assert by_id["psl3.q4.delta-H"].computed == 28


@pytest.mark.slow
def test_psu3_q3_claims():
    assert not _failures(verify_psu3(3))


@pytest.mark.slow
@pytest.mark.parametrize("q,omega2,meet,outside", [(3, 234, 13, 0), (4, 1008, 21, 7)])
def test_double_counting(q, omega2, meet, outside):
    claims = double_count_check(q)
    assert not _failures(claims)
    by_id = {c.claim_id: c for c in claims}
    assert by_id[f"double-count.q{q}.omega2"].computed == omega2
    assert by_id[f"double-count.q{q}.delta-H-meets-omega2"].computed == meet
    assert by_id[f"double-count.q{q}.delta-H-meets-omega2"].witness == {"outside_omega2": outside}
    assert by_id[f"double-count.q{q}.edges"].computed == DOUBLE_COUNTS[q][0] * omega2


def test_lemma_scans_pass_for_small_fields():
    assert not _failures(verify_lemma_scans((2, 3)))


@pytest.mark.slow
def test_lemma_counterexample_over_gf4_fails_the_ledger():
    claims = verify_lemma_scans((4,))
    assert [c.claim_id for c in claims if not c.passed] == ["lemma.q4.solutions", "lemma.q4.in-singer"]
    solutions = claims[0]
    assert (solutions.expected, solutions.computed) == (63, 126)
    assert all(w["frobenius"] == 1 and w["z"] != 1 for w in solutions.witness)


@pytest.mark.slow
def test_full_ledger():
    claims = run_ledger(threads=2)
    assert [c.claim_id for c in claims if not c.passed] == ["lemma.q4.solutions", "lemma.q4.in-singer"]
    assert len({c.claim_id for c in claims}) == len(claims)


def test_ledger_cap_bounds_each_step():
    claims = run_ledger(prefix="small", cap=100)
    assert [c.claim_id for c in claims] == ["small.error"]
    assert "exceeds cap 100" in claims[0].computed
