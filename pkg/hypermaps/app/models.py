"""Pydantic models for report schemas."""

from pydantic import BaseModel, ConfigDict, Field
from typing import Optional, Dict, Any, List

class GroupSummary(BaseModel):
    """Order and conjugacy data of an enumerated group."""
    name: str
    order: int
    n_classes: int
    class_sizes: List[int]
    generator_orders: List[int]
    aut_order: Optional[int] = None
    inner: Optional[int] = None
    outer: Optional[int] = None

class AutSummary(BaseModel):
    order: int
    inner: int
    outer: int

class InverterSetReport(BaseModel):
    """Automorphisms inverting an element or every element of a subgroup."""
    target: List[int]
    size: int
    involutions_only: bool
    member_orders: List[int]

class LemmaCounterexample(BaseModel):
    matrix: List[int]
    frobenius: int
    z: int
    epsilon: int

class LemmaReport(BaseModel):
    """Outcome of the exhaustive semilinear scan around a Singer cycle."""
    n: int
    q: int
    scanned: int
    solutions: int
    expected_solutions: int
    all_in_singer: bool
    frobenius_parts: List[int]
    counterexamples: List[LemmaCounterexample] = []

class GenPair(BaseModel):
    x: int
    y: int

class HypermapClass(BaseModel):
    """One Aut-orbit of generating pairs, i.e. one orientably regular hypermap."""
    model_config = ConfigDict(populate_by_name=True)
    rep: List[int]
    type_triple: List[int] = Field(alias="type")
    reflexible: bool
    mirror: List[int]
    is_map: bool

class CensusReport(BaseModel):
    group: str
    order: int
    aut_order: int
    n_generating_pairs: int
    n_orbits: int
    n_reflexible: int
    n_chiral: int
    n_maps: int
    n_reflexible_maps: int
    classes: List[HypermapClass]
    elapsed: float

class DeltaReport(BaseModel):
    """Proportion of symmetric generating pairs; exact unless sampled."""
    group: str
    order: int
    aut_order: int
    n_generating_pairs: int
    n_symmetric_pairs: int
    delta: str
    exact: bool = True
    sample_size: Optional[int] = None
    interval: Optional[List[float]] = None

class StrongSymmetryVerdict(BaseModel):
    group: str
    strongly_symmetric: bool
    witness: Optional[GenPair] = None
    strategy: str
    pairs_checked: int

class ClaimResult(BaseModel):
    """One ledger entry: a concrete claim recomputed from scratch."""
    model_config = ConfigDict(populate_by_name=True)
    claim_id: str
    params: Dict[str, Any]
    expected: Any
    computed: Any
    passed: bool = Field(alias="pass")
    witness: Optional[Any] = None
