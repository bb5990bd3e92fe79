import json

import pandas as pd
import pytest

from hypermaps.app.models import ClaimResult
from hypermaps.main import main
from hypermaps.utils.cli import parse_args
from hypermaps.utils.command_handlers import LONG_RUN_CAP, build_run_config, get_command_handlers
from hypermaps.utils.export import render, to_frame


def test_family_is_case_insensitive():
    args = parse_args(["group", "--family", "psl", "--n", "2", "--q", "7"])
    assert args.family == "PSL"
    assert args.format == "json"
    assert args.threads == 1


@pytest.mark.parametrize("argv", [
    ["delta", "--family", "ALT", "--n", "5", "--threads", "0"],
    ["delta", "--family", "ALT", "--n", "5", "--sample", "0"],
    ["group", "--family", "ALT", "--n", "5", "--cap", "-1"],
    ["census", "--family", "GL", "--n", "2", "--q", "3"],
    ["verify"],
    ["verify", "--all", "--claim", "alt7"],
])
def test_bad_flags_exit_with_usage_code(argv):
    with pytest.raises(SystemExit) as exc:
        parse_args(argv)
    assert exc.value.code == 2


def test_cap_flag_targets_the_command_cap():
    config = build_run_config(parse_args(["delta", "--family", "ALT", "--n", "5", "--cap", "100"]))
    assert config.settings.delta_cap == 100
    config = build_run_config(parse_args(["census", "--family", "ALT", "--n", "5", "--cap", "100"]))
    assert config.settings.census_cap == 100
    config = build_run_config(parse_args(["verify", "--all", "--long"]))
    assert config.settings.enum_cap >= LONG_RUN_CAP
    assert config.long


def test_every_command_has_a_handler():
    assert set(get_command_handlers()) == {
        "group", "delta", "census", "strongly-symmetric", "lemma", "verify",
    }


def test_group_command_prints_json(capsys):
    main(["group", "--family", "ALT", "--n", "5"])
    out = json.loads(capsys.readouterr().out)
    assert out["order"] == 60
    assert out["aut_order"] == 120
    assert (out["inner"], out["outer"]) == (60, 2)


def test_group_command_for_matrix_kinds(capsys):
    main(["group", "--family", "SL", "--n", "2", "--q", "3"])
    out = json.loads(capsys.readouterr().out)
    assert out["name"] == "SL(2,3)"
    assert out["order"] == 24
    assert out["aut_order"] is None


def test_delta_command(capsys):
    main(["delta", "--family", "ALT", "--n", "5"])
    out = json.loads(capsys.readouterr().out)
    assert out["delta"] == "1/1"
    assert out["n_generating_pairs"] == 2280


def test_strongly_symmetric_command(capsys):
    main(["strongly-symmetric", "--family", "PSL", "--n", "2", "--q", "7", "--strategy", "witness-first"])
    out = json.loads(capsys.readouterr().out)
    assert out["strongly_symmetric"] is True
    assert out["strategy"] == "witness-first"


def test_census_csv_to_file(tmp_path, capsys):
    path = tmp_path / "alt5.csv"
    main(["census", "--family", "ALT", "--n", "5", "--format", "csv", "--out", str(path)])
    assert capsys.readouterr().out == ""
    frame = pd.read_csv(path)
    assert list(frame.columns) == [
        "rep_x", "rep_y", "type_l", "type_m", "type_n", "reflexible", "mirror_x", "mirror_y", "is_map",
    ]
    assert len(frame) == 19
    assert frame["reflexible"].all()


def test_lemma_command(capsys):
    main(["lemma", "--n", "3", "--q", "2"])
    out = json.loads(capsys.readouterr().out)
    assert out["solutions"] == 7
    assert out["all_in_singer"] is True


def test_verify_command_emits_the_ledger(capsys):
    main(["verify", "--claim", "small"])
    out = json.loads(capsys.readouterr().out)
    assert {c["claim_id"] for c in out} == {
        "small.psl3-2.order", "small.psl3-2.strongly-symmetric",
        "small.psu3-2.order", "small.psu3-2.normal-subgroup",
    }
    assert all(c["pass"] for c in out)


@pytest.mark.parametrize("argv,code", [
    (["group", "--family", "ALT", "--n", "4"], 2),
    (["delta", "--family", "PSL", "--n", "2"], 2),
    (["group", "--family", "PSL", "--n", "2", "--q", "7", "--cap", "10"], 3),
    (["delta", "--family", "PSL", "--n", "2", "--q", "7", "--cap", "100"], 3),
    (["verify", "--claim", "nothing-matches"], 2),
    ([], 2),
])
def test_errors_map_to_exit_codes(argv, code):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == code


def test_failed_claims_exit_with_one(monkeypatch, capsys):
    from hypermaps.app.services import verify

    def failing(cap=None):
        return [ClaimResult(claim_id="small.forced", params={}, expected=1, computed=2, passed=False)]

    monkeypatch.setattr(verify, "verify_small_cases", failing)
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--claim", "small"])
    assert exc.value.code == 1
    out = json.loads(capsys.readouterr().out)
    assert out[0]["pass"] is False


def test_ledger_table_rendering():
    claims = [
        ClaimResult(claim_id="a.one", params={}, expected=[1, 2], computed=[1, 2], passed=True),
        ClaimResult(claim_id="a.two", params={}, expected=3, computed=4, passed=False),
    ]
    frame = to_frame(claims)
    assert list(frame.columns) == ["claim_id", "pass", "expected", "computed"]
    assert frame.loc[0, "expected"] == "[1, 2]"
    assert "a.two" in render(claims, "table")
    assert json.loads(render(claims, "json"))[1]["pass"] is False


def test_cap_flag_reaches_every_closure(monkeypatch, capsys):
    from dataclasses import replace

    from hypermaps.app.services import permgrp
    from hypermaps.utils import command_handlers

    small = replace(command_handlers.SETTINGS, enum_cap=100)
    monkeypatch.setattr(command_handlers, "SETTINGS", small)
    monkeypatch.setattr(permgrp, "SETTINGS", small)
    argv = ["group", "--family", "PSL", "--n", "2", "--q", "7"]
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 3
    capsys.readouterr()

    main(argv + ["--cap", "1000"])
    out = json.loads(capsys.readouterr().out)
    assert (out["order"], out["aut_order"]) == (168, 336)
