"""
Automorphism Group Service

Aut(S) for an enumerated simple group S, in two flavours:

- constructed (``aut_constructed``): automorphisms are permutations of the
  model domain normalizing S (inner, diagonal, field and graph generators);
  an element a acts by conjugation, s -> a^-1 s a.
- brute force (``aut_bruteforce``): automorphisms are index bijections of S
  found by trying every image of the two stored generators. Oracle scale only.

Both are wrapped in ``AutGroup``, which applies automorphisms to elements of S
either from a materialized |A| x |S| table or lazily from the domain rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from hypermaps.app.errors import CapExceededError, DefectError, UsageError
from hypermaps.app.families import GroupModel
from hypermaps.app.models import AutSummary, InverterSetReport
from hypermaps.app.services.permgrp import GroupHandle, close_permutations, orbit_labels
from hypermaps.config.settings import SETTINGS
from hypermaps.utils.console import log

_CHUNK = 2_000_000


@dataclass(frozen=True)
class AutElem:
    index: int
    tag: str
    order: int
    map: np.ndarray = field(repr=False, compare=False)


@dataclass(frozen=True)
class InverterSet:
    target: tuple[int, ...]
    members: np.ndarray = field(compare=False)
    involutions_only: bool

    @property
    def size(self) -> int:
        return int(self.members.size)

    def report(self, A: "AutGroup") -> InverterSetReport:
        return InverterSetReport(
            target=list(self.target),
            size=self.size,
            involutions_only=self.involutions_only,
            member_orders=sorted(int(o) for o in A.orders[self.members]),
        )


class AutGroup:
    """Aut(S) as a group handle plus its action on the indices of S."""

    def __init__(self, parent: GroupHandle, handle: GroupHandle, gen_tags: Sequence[str], mode: str, kind: str = ""):
        if mode not in ("conjugation", "direct"):
            raise UsageError(f"unknown automorphism mode {mode!r}")
        self.S = parent
        self.handle = handle
        self.gen_tags = list(gen_tags)
        self.mode = mode
        self.kind = kind

    @property
    def order(self) -> int:
        return self.handle.order

    def __len__(self) -> int:
        return self.order

    @property
    def orders(self) -> np.ndarray:
        return self.handle.orders

    # ------------------------------------------------------------------
    # Action on S
    # ------------------------------------------------------------------
    @cached_property
    def maps(self) -> Optional[np.ndarray]:
        """maps[a][s] = s^a, or None when |A|*|S| exceeds the materialization cap."""
        if self.mode == "direct":
            return self.handle.perms
        if self.order * self.S.order > SETTINGS.aut_map_cap:
            return None
        A = self.handle
        out = np.empty((A.order, self.S.order), dtype=np.int32)
        out[A.id_index] = np.arange(self.S.order)
        gen_maps = self.generator_maps
        depth = A.depth
        for d in range(1, int(depth.max(initial=0)) + 1):
            layer = np.flatnonzero(depth == d)
            for pos, gm in enumerate(gen_maps):
                idx = layer[A.via[layer] == pos]
                if idx.size:
                    out[idx] = gm[out[A.parent[idx]]]
        return out

    def _map_from_row(self, row: np.ndarray) -> np.ndarray:
        row = row.astype(np.int64)
        rows = row[self.S.perms[:, np.argsort(row)]]
        out = self.S.lookup_perms(rows)
        if (out < 0).any():
            raise DefectError(f"{self.kind or 'automorphism'}: domain permutation does not normalize {self.S.name}")
        return out

    @cached_property
    def generator_maps(self) -> list[np.ndarray]:
        return [self.map_of(g) if self.mode == "direct" else self._map_from_row(self.handle.perms[g])
                for g in self.handle.gens]

    def map_of(self, a: int) -> np.ndarray:
        if self.maps is not None:
            return self.maps[a].astype(np.int64)
        return self._map_from_row(self.handle.perms[a])

    def rows(self, indices: Sequence[int]) -> np.ndarray:
        """Stacked maps of the given automorphisms."""
        idx = np.asarray(indices, dtype=np.int64)
        if self.maps is not None:
            return self.maps[idx].astype(np.int64)
        if idx.size == 0:
            return np.empty((0, self.S.order), dtype=np.int64)
        return np.stack([self.map_of(int(a)) for a in idx])

    def images(self, s: int, subset: Optional[np.ndarray] = None) -> np.ndarray:
        """Array with s^a for every automorphism a (or every a in subset)."""
        if self.maps is not None:
            col = self.maps[:, s] if subset is None else self.maps[subset, s]
            return col.astype(np.int64)
        AP = self.handle.perms if subset is None else self.handle.perms[subset]
        rows = np.empty_like(AP)
        np.put_along_axis(rows, AP.astype(np.int64), AP[:, self.S.perms[s].astype(np.int64)], axis=1)
        return self.S.lookup_perms(rows)

    def centralizer(self, x: int) -> np.ndarray:
        return np.flatnonzero(self.images(x) == x)

    def inverters_of(self, x: int) -> np.ndarray:
        return np.flatnonzero(self.images(x) == self.S.inverse_of(x))

    @cached_property
    def orbit_labels(self) -> np.ndarray:
        """Least index of the A-orbit of every element of S."""
        return orbit_labels(self.S.order, self.generator_maps)

    # ------------------------------------------------------------------
    # Inner automorphisms and provenance
    # ------------------------------------------------------------------
    @cached_property
    def inner_index(self) -> np.ndarray:
        """inner_index[a] = s when a is conjugation by s, else -1."""
        if self.mode == "conjugation":
            return self.S.lookup_perms(self.handle.perms)
        out = np.full(self.order, -1, dtype=np.int64)
        step = max(1, _CHUNK // max(1, self.S.order))
        for start in range(0, self.S.order, step):
            stop = min(self.S.order, start + step)
            conj = np.stack([self.S.conjugation_map(s) for s in range(start, stop)])
            hit = self.handle.lookup_perms(conj)
            ok = hit >= 0
            out[hit[ok]] = np.arange(start, stop)[ok]
        return out

    @property
    def inner_mask(self) -> np.ndarray:
        return self.inner_index >= 0

    def tag_of(self, a: int) -> str:
        if self.inner_mask[a]:
            return "inner"
        mask = self.inner_mask
        tags = {
            self.gen_tags[pos]
            for pos in self.handle.word(a)
            if not mask[self.handle.gens[pos]]
        }
        return tags.pop() if len(tags) == 1 else "composite"

    def element(self, a: int) -> AutElem:
        return AutElem(int(a), self.tag_of(a), int(self.orders[a]), self.map_of(a))

    def index_of_row(self, row: np.ndarray) -> int:
        """Index of the automorphism given by a domain row (conjugation) or a map (direct)."""
        return int(self.handle.lookup_perms(np.asarray(row))[0])

    def summary(self) -> AutSummary:
        inner = int(self.inner_mask.sum())
        return AutSummary(order=self.order, inner=inner, outer=self.order // max(1, inner))


# ----------------------------------------------------------------------
# Validation helpers
# ----------------------------------------------------------------------

def _is_homomorphism(G: GroupHandle, m: np.ndarray, exhaustive: bool) -> bool:
    """m[g*s] == m[g]*m[s] for every g and every s (all of G, or its generators)."""
    targets = range(G.order) if exhaustive else dict.fromkeys(G.gens)
    for s in targets:
        if not np.array_equal(m[G.right_mul_column(s)], G.right_mul_column(int(m[s]))[m]):
            return False
    return True


def _pair_keys(A: AutGroup) -> np.ndarray:
    x, y = A.S.gens[0], A.S.gens[1]
    return A.images(x) * A.S.order + A.images(y)


# ----------------------------------------------------------------------
# Constructed Aut(S)
# ----------------------------------------------------------------------

def aut_constructed(
    model: GroupModel,
    validate: bool = True,
    cap: Optional[int] = None,
    oracle_cap: Optional[int] = None,
) -> AutGroup:
    """
    Aut(S) generated by the model's normalizing permutations.

    Args:
        model: Family model supplying S and the tagged Aut generators.
        validate: Cross-check against ``aut_bruteforce`` when |S| is within the oracle cap.
        cap: Enumeration cap for Aut (defaults to SETTINGS.enum_cap).
        oracle_cap: Largest |S| checked exhaustively and by brute force
            (defaults to SETTINGS.oracle_cap).

    Returns:
        AutGroup in conjugation mode.

    Raises:
        DefectError: A generator does not normalize S, the order is wrong,
            a map is not a homomorphism or the oracle disagrees.
        CapExceededError: |Aut| exceeds the cap.
    """
    S = model.S
    if len(S.gens) != 2:
        raise UsageError(f"{S.name}: Aut construction expects two stored generators")
    log(f"🔧 Building Aut({S.name}) from {len(model.aut_gens)} generators...")
    dtype = S.perms.dtype
    for gen in model.aut_gens:
        g = np.asarray(gen.perm, dtype=np.int64)
        rows = g[S.perms[S.gens].astype(np.int64)[:, np.argsort(g)]]
        if (S.lookup_perms(rows.astype(dtype)) < 0).any():
            raise DefectError(f"{S.name}: {gen.tag} generator does not normalize S")

    handle = close_permutations(
        [g.perm for g in model.aut_gens], cap, name=f"Aut({S.name})", meta={"family": model.family},
    )
    if handle.order != model.expected_aut_order:
        raise DefectError(f"Aut({S.name}) has order {handle.order}, expected {model.expected_aut_order}")
    A = AutGroup(S, handle, [g.tag for g in model.aut_gens], "conjugation", kind="constructed")

    if np.unique(_pair_keys(A)).size != A.order:
        raise DefectError(f"Aut({S.name}): two automorphisms agree on the generators of S")
    oracle_cap = SETTINGS.oracle_cap if oracle_cap is None else oracle_cap
    exhaustive = S.order <= oracle_cap
    for pos, m in enumerate(A.generator_maps):
        if not _is_homomorphism(S, m, exhaustive):
            raise DefectError(f"Aut({S.name}): generator {pos} ({A.gen_tags[pos]}) is not a homomorphism")

    if validate and exhaustive:
        oracle = aut_bruteforce(S, oracle_cap)
        same = oracle.order == A.order and bool((oracle.handle.lookup_perms(A.rows(np.arange(A.order))) >= 0).all())
        if not same:
            raise DefectError(f"Aut({S.name}): construction and brute-force oracle disagree")
        log(f"✅ Oracle agrees on Aut({S.name})")
    log(f"✅ Aut({S.name}) ready: order {A.order}")
    return A


# ----------------------------------------------------------------------
# Brute-force oracle
# ----------------------------------------------------------------------

def _candidates(G: GroupHandle, g: int) -> np.ndarray:
    return np.flatnonzero((G.orders == G.orders[g]) & (G.class_sizes == G.class_sizes[g]))


def _induced_maps(G: GroupHandle, images: np.ndarray) -> np.ndarray:
    """Maps determined by generator images, one row per candidate (images shape (C, ngens))."""
    C = images.shape[0]
    maps = np.zeros((C, G.order), dtype=np.int64)
    depth = G.depth
    for d in range(1, int(depth.max(initial=0)) + 1):
        layer = np.flatnonzero(depth == d)
        par = G.parent[layer]
        gen_img = images[:, G.via[layer]]
        maps[:, layer] = G.mul_many(maps[:, par].ravel(), gen_img.ravel()).reshape(C, layer.size)
    return maps


def aut_bruteforce(G: GroupHandle, cap: Optional[int] = None) -> AutGroup:
    """Every automorphism of a 2-generated group, found from generator images."""
    if len(G.gens) != 2:
        raise UsageError(f"{G.name}: brute-force Aut needs exactly two stored generators")
    cap = SETTINGS.oracle_cap if cap is None else cap
    if G.order > cap:
        raise CapExceededError(f"brute-force Aut of {G.name}", G.order, cap)
    log(f"🔍 Brute-forcing Aut({G.name})...")
    x, y = G.gens
    o_xy = G.order_of(G.mul(x, y))
    o_xyi = G.order_of(G.mul(x, G.inverse_of(y)))
    cand_b = _candidates(G, y)
    inv_b = G.inverses[cand_b]

    pairs = []
    for a in _candidates(G, x):
        col = G.left_mul_column(int(a))
        ok = (G.orders[col[cand_b]] == o_xy) & (G.orders[col[inv_b]] == o_xyi)
        pairs.extend((int(a), int(b)) for b in cand_b[ok])
    pairs = np.array(pairs, dtype=np.int64).reshape(-1, 2)

    valid = []
    step = max(1, _CHUNK // G.order)
    for start in range(0, len(pairs), step):
        maps = _induced_maps(G, pairs[start:start + step])
        for m in maps:
            if np.unique(m).size == G.order and _is_homomorphism(G, m, exhaustive=False):
                valid.append(m)
    if not valid:
        raise DefectError(f"{G.name}: brute force found no automorphism")
    valid = np.array(valid)

    ident = np.arange(G.order)
    gens: list[np.ndarray] = []
    handle = close_permutations([ident], name=f"Aut({G.name})")
    for m in valid:
        if handle.order == len(valid):
            break
        if (m == ident).all() or handle.lookup_perms(m.astype(handle.perms.dtype))[0] >= 0:
            continue
        gens.append(m)
        handle = close_permutations(gens, cap=len(valid), name=f"Aut({G.name})")
    if handle.order != len(valid):
        raise DefectError(f"Aut({G.name}): {len(valid)} valid maps close to a group of order {handle.order}")

    A = AutGroup(G, handle, ["outer"] * len(handle.gens), "direct", kind="bruteforce")
    A.gen_tags = ["inner" if A.inner_mask[g] else "outer" for g in handle.gens]
    log(f"✅ Brute force found {A.order} automorphisms of {G.name}")
    return A


# ----------------------------------------------------------------------
# Inverter sets
# ----------------------------------------------------------------------

def inverters(A: AutGroup, x: int, involutions_only: bool = False) -> InverterSet:
    members = A.inverters_of(x)
    if involutions_only:
        members = members[A.orders[members] <= 2]
    return InverterSet((int(x),), members, involutions_only)


def subgroup_inverters(A: AutGroup, K: Sequence[int], involutions_only: bool = True) -> InverterSet:
    """Automorphisms inverting every element of the subgroup K."""
    S = A.S
    K = np.unique(np.asarray(K, dtype=np.int64))
    if not S.is_closed(K):
        raise UsageError("subgroup_inverters needs a subgroup (K is not closed)")
    if K.size == 1:
        members = np.arange(A.order)
    else:
        cyclic = K[S.orders[K] == K.size]
        if cyclic.size:
            members = A.inverters_of(int(cyclic[0]))
        else:
            members = np.arange(A.order)
            for k in K:
                if k == S.id_index:
                    continue
                members = members[A.images(int(k), members) == S.inverse_of(int(k))]
                if members.size == 0:
                    break
    if involutions_only:
        members = members[A.orders[members] <= 2]
    return InverterSet(tuple(int(k) for k in K), members, involutions_only)
