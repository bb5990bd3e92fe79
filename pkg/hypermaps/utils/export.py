"""Writers for report models: JSON, flat CSV and plain-text tables."""

import json
from pathlib import Path
from typing import Any, Optional, Sequence, Union

import pandas as pd
from pydantic import BaseModel

from hypermaps.app.models import CensusReport, ClaimResult
from hypermaps.utils.console import log

Payload = Union[BaseModel, Sequence[BaseModel]]


def to_json(payload: Payload) -> str:
    if isinstance(payload, BaseModel):
        data: Any = payload.model_dump(by_alias=True)
    else:
        data = [item.model_dump(by_alias=True) for item in payload]
    return json.dumps(data, indent=2, sort_keys=True)


def _cell(value: Any) -> Any:
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return value


def to_frame(payload: Payload) -> pd.DataFrame:
    """Flat rows: census classes, ledger claims, or one row per report."""
    if isinstance(payload, CensusReport):
        return pd.DataFrame([
            {
                "rep_x": c.rep[0], "rep_y": c.rep[1],
                "type_l": c.type_triple[0], "type_m": c.type_triple[1], "type_n": c.type_triple[2],
                "reflexible": c.reflexible,
                "mirror_x": c.mirror[0], "mirror_y": c.mirror[1],
                "is_map": c.is_map,
            }
            for c in payload.classes
        ], columns=["rep_x", "rep_y", "type_l", "type_m", "type_n", "reflexible", "mirror_x", "mirror_y", "is_map"])
    items = [payload] if isinstance(payload, BaseModel) else list(payload)
    if items and isinstance(items[0], ClaimResult):
        return pd.DataFrame([
            {"claim_id": c.claim_id, "pass": c.passed, "expected": _cell(c.expected), "computed": _cell(c.computed)}
            for c in items
        ], columns=["claim_id", "pass", "expected", "computed"])
    return pd.DataFrame([{k: _cell(v) for k, v in item.model_dump(by_alias=True).items()} for item in items])


def render(payload: Payload, fmt: str) -> str:
    if fmt == "json":
        return to_json(payload)
    frame = to_frame(payload)
    if fmt == "csv":
        return frame.to_csv(index=False)
    if fmt == "table":
        return frame.to_string(index=False) + "\n"
    raise ValueError(f"unknown output format {fmt!r}")


def emit(payload: Payload, fmt: str = "json", out_path: Optional[str] = None) -> str:
    """Render the payload and write it to out_path or stdout; returns the text."""
    text = render(payload, fmt)
    if not text.endswith("\n"):
        text += "\n"
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
        log(f"💾 Wrote {fmt} output to {out_path}")
    else:
        print(text, end="")
    return text
