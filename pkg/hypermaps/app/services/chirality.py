"""
Chirality Service

Symmetric generating pairs, the delta statistic, strong symmetry and the
census of orientably regular hypermaps of a group.

All exhaustive questions go through one scan over Aut-orbits of pairs: x runs
over representatives of the Aut-orbits on S, and for each x the pairs (x, y)
are grouped into orbits of C_A(x). Generation and symmetry are both
Aut-invariant, so one representative per orbit decides the whole orbit, and
generating orbits all have length |Aut|.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from hypermaps.app.errors import CapExceededError, DefectError, UsageError
from hypermaps.app.models import (
    CensusReport,
    DeltaReport,
    GenPair,
    HypermapClass,
    StrongSymmetryVerdict,
)
from hypermaps.app.services.autgrp import AutElem, AutGroup
from hypermaps.app.services.permgrp import GroupHandle
from hypermaps.config.settings import SETTINGS
from hypermaps.utils.console import log

STRATEGIES = ("exhaustive", "witness-first")
_Z95 = 1.959963984540054


@dataclass
class XScan:
    """Pair orbits with first coordinate in the Aut-orbit of x."""
    x: int
    x_orbit: int
    stab_size: int
    y_min: np.ndarray
    y_gen: np.ndarray
    symmetric: np.ndarray


def _format_fraction(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def _x_representatives(G: GroupHandle, A: AutGroup) -> tuple[np.ndarray, np.ndarray]:
    labels = A.orbit_labels
    reps, sizes = np.unique(labels, return_counts=True)
    keep = reps != G.id_index
    if int(G.orders.max()) == G.order:
        keep[:] = True
    reps, sizes = reps[keep], sizes[keep]
    order = np.lexsort((reps, -sizes))
    return reps[order], sizes[order]


def _scan_x(G: GroupHandle, A: AutGroup, x: int, x_orbit: int) -> XScan:
    stab = A.centralizer(x)
    R = A.rows(stab)
    y_min = R.min(axis=0)
    y_reps = np.flatnonzero(y_min == np.arange(G.order))
    gen = np.array([G.generates(x, int(y)) for y in y_reps], dtype=bool)
    y_gen = y_reps[gen]
    if y_gen.size:
        sizes = np.bincount(y_min, minlength=G.order)[y_gen]
        bad = y_gen[sizes != stab.size]
        if bad.size:
            raise DefectError(
                f"{G.name}: automorphism fixes the generating pair ({x}, {int(bad[0])})",
                witness=[x, int(bad[0])],
            )
    inv = A.inverters_of(x)
    if inv.size and y_gen.size:
        images = A.rows(inv)[:, y_gen]
        symmetric = (images == G.inverses[y_gen][None, :]).any(axis=0)
    else:
        symmetric = np.zeros(y_gen.size, dtype=bool)
    return XScan(int(x), int(x_orbit), int(stab.size), y_min, y_gen, symmetric)


def _prepare(G: GroupHandle, A: AutGroup) -> None:
    # Warm shared caches before worker threads read them.
    _ = G.inverses, G.orders, A.orbit_labels, A.maps, A.handle.orders


def pair_orbit_scan(G: GroupHandle, A: AutGroup, threads: int = 1) -> Iterator[XScan]:
    """Yield one XScan per Aut-orbit representative x, largest orbits first."""
    if A.S is not G:
        raise UsageError("automorphism group belongs to a different group")
    _prepare(G, A)
    reps, sizes = _x_representatives(G, A)
    if threads <= 1:
        for x, size in zip(reps, sizes):
            yield _scan_x(G, A, int(x), int(size))
        return
    with ThreadPoolExecutor(max_workers=threads) as pool:
        yield from pool.map(lambda xs: _scan_x(G, A, int(xs[0]), int(xs[1])), zip(reps, sizes))


# ----------------------------------------------------------------------
# Symmetric pairs
# ----------------------------------------------------------------------

def is_symmetric_pair(G: GroupHandle, A: AutGroup, x: int, y: int, relaxed: bool = False) -> Optional[AutElem]:
    """An automorphism inverting both x and y, or None."""
    if not relaxed and not G.generates(x, y):
        raise UsageError(f"({x}, {y}) does not generate {G.name}")
    inv = A.inverters_of(x)
    if inv.size == 0:
        return None
    hit = inv[A.images(y, inv) == G.inverse_of(y)]
    return A.element(int(hit[0])) if hit.size else None


def check_inverter_is_involution(G: GroupHandle, A: AutGroup, x: int, y: int, witness) -> bool:
    """An automorphism inverting a generating pair squares to the identity and is not trivial."""
    a = witness.index if isinstance(witness, AutElem) else int(witness)
    m = A.map_of(a)
    if m[x] != G.inverse_of(x) or m[y] != G.inverse_of(y):
        raise UsageError(f"automorphism {a} does not invert ({x}, {y})")
    sq = A.map_of(A.handle.mul(a, a))
    if sq[x] != x or sq[y] != y:
        raise DefectError(f"{G.name}: square of inverter {a} does not centralize ({x}, {y})", witness=[x, y, a])
    order = A.handle.order_of(a)
    if order != 2:
        raise DefectError(f"{G.name}: inverter {a} of ({x}, {y}) has order {order}", witness=[x, y, a])
    return True


# ----------------------------------------------------------------------
# Delta statistic
# ----------------------------------------------------------------------

def wilson_interval(successes: int, n: int, z: float = _Z95) -> list[float]:
    if n == 0:
        return [0.0, 1.0]
    p = successes / n
    denom = 1 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return [max(0.0, center - half), min(1.0, center + half)]


def delta_statistic(
    G: GroupHandle,
    A: AutGroup,
    *,
    cap: Optional[int] = None,
    sample: Optional[int] = None,
    seed: int = SETTINGS.seed,
    threads: int = 1,
) -> DeltaReport:
    """
    Proportion of symmetric pairs among generating pairs.

    Exact through the pair-orbit scan when |G| is within the cap; with
    ``sample`` it draws uniform pairs and reports a Wilson 95% interval.

    Raises:
        CapExceededError: |G| exceeds the cap and no sample size was given.
    """
    cap = SETTINGS.delta_cap if cap is None else cap
    if sample:
        log(f"📊 Sampling {sample} pairs of {G.name} (seed {seed})...")
        rng = np.random.default_rng(seed)
        n_gen = n_sym = 0
        for x, y in rng.integers(0, G.order, size=(sample, 2)):
            if not G.generates(int(x), int(y)):
                continue
            n_gen += 1
            if is_symmetric_pair(G, A, int(x), int(y)) is not None:
                n_sym += 1
        return DeltaReport(
            group=G.name, order=G.order, aut_order=A.order,
            n_generating_pairs=n_gen, n_symmetric_pairs=n_sym,
            delta=_format_fraction(Fraction(n_sym, n_gen)) if n_gen else "0/1",
            exact=False, sample_size=sample, interval=wilson_interval(n_sym, n_gen),
        )
    if G.order > cap:
        raise CapExceededError(f"exact delta of {G.name}", G.order, cap)

    log(f"📊 Counting symmetric generating pairs of {G.name}...")
    gen_orbits = sym_orbits = 0
    for scan in pair_orbit_scan(G, A, threads):
        gen_orbits += int(scan.y_gen.size)
        sym_orbits += int(scan.symmetric.sum())
    n_gen, n_sym = gen_orbits * A.order, sym_orbits * A.order
    delta = Fraction(n_sym, n_gen) if n_gen else Fraction(0)
    log(f"✅ delta({G.name}) = {_format_fraction(delta)} over {n_gen} generating pairs")
    return DeltaReport(
        group=G.name, order=G.order, aut_order=A.order,
        n_generating_pairs=n_gen, n_symmetric_pairs=n_sym, delta=_format_fraction(delta),
    )


def naive_generating_pair_count(G: GroupHandle) -> int:
    """Generating pairs counted by testing every ordered pair."""
    return sum(G.generates(x, y) for x in range(G.order) for y in range(G.order))


# ----------------------------------------------------------------------
# Strong symmetry
# ----------------------------------------------------------------------

def _verdict(G: GroupHandle, strategy: str, checked: int, witness: Optional[tuple[int, int]] = None) -> StrongSymmetryVerdict:
    return StrongSymmetryVerdict(
        group=G.name,
        strongly_symmetric=witness is None,
        witness=GenPair(x=witness[0], y=witness[1]) if witness else None,
        strategy=strategy,
        pairs_checked=checked,
    )


def _witness_first(G: GroupHandle, A: AutGroup, singer_order: Optional[int]) -> tuple[Optional[tuple[int, int]], int]:
    target = singer_order if singer_order and (G.orders == singer_order).any() else int(G.orders.max())
    x = int(G.elements_of_order(target)[0])
    inv = A.inverters_of(x)
    ys = np.unique(G.conjugates_of(x))
    checked = 0
    for y in ys:
        y = int(y)
        if y == x or not G.generates(x, y):
            continue
        checked += 1
        if inv.size == 0 or not (A.images(y, inv) == G.inverse_of(y)).any():
            return (x, y), checked
    return None, checked


def is_strongly_symmetric(
    G: GroupHandle,
    A: AutGroup,
    strategy: str = "exhaustive",
    singer_order: Optional[int] = None,
    cap: Optional[int] = None,
) -> StrongSymmetryVerdict:
    """
    Decide whether every generating pair of G is symmetric.

    Args:
        strategy: "exhaustive" scans every pair orbit; "witness-first" tries
            x of Singer order and y among its conjugates before scanning.
        singer_order: Preferred order of x for the witness search.
        cap: Largest group for the exhaustive scan (defaults to SETTINGS.delta_cap).

    Returns:
        StrongSymmetryVerdict with a non-symmetric generating pair when one exists.
    """
    if strategy not in STRATEGIES:
        raise UsageError(f"unknown strategy {strategy!r}; expected one of {', '.join(STRATEGIES)}")
    cap = SETTINGS.delta_cap if cap is None else cap
    checked = 0
    if strategy == "witness-first":
        log(f"🔍 Searching {G.name} for a non-symmetric pair around a Singer element...")
        witness, checked = _witness_first(G, A, singer_order)
        if witness is not None:
            log(f"✅ {G.name} is not strongly symmetric: witness {witness}")
            return _verdict(G, strategy, checked, witness)
        log(f"⚠️ No witness among conjugates in {G.name}; falling back to the exhaustive scan")

    if G.order > cap:
        raise CapExceededError(f"exhaustive strong-symmetry scan of {G.name}", G.order, cap)
    log(f"🔍 Scanning all generating pairs of {G.name}...")
    for scan in pair_orbit_scan(G, A):
        bad = np.flatnonzero(~scan.symmetric)
        if bad.size:
            checked += int(bad[0]) + 1
            witness = (scan.x, int(scan.y_gen[bad[0]]))
            log(f"✅ {G.name} is not strongly symmetric: witness {witness}")
            return _verdict(G, strategy, checked, witness)
        checked += int(scan.y_gen.size)
    log(f"✅ {G.name} is strongly symmetric ({checked} pair orbits)")
    return _verdict(G, strategy, checked)


# ----------------------------------------------------------------------
# Hypermap census
# ----------------------------------------------------------------------

def hypermap_census(G: GroupHandle, A: AutGroup, threads: int = 1, cap: Optional[int] = None) -> CensusReport:
    """
    One class per Aut-orbit of generating pairs, with type, reflexibility and mirror.

    Reflexibility is decided twice, by the existence of an inverting
    automorphism and by comparing the orbit of (x^-1, y^-1) with the orbit of
    (x, y); the two must agree.

    Raises:
        CapExceededError: |G| exceeds the census cap.
        DefectError: A structural invariant of the census fails.
    """
    cap = SETTINGS.census_cap if cap is None else cap
    if G.order > cap:
        raise CapExceededError(f"hypermap census of {G.name}", G.order, cap)
    log(f"📊 Hypermap census of {G.name} (|Aut| = {A.order})...")
    start = time.perf_counter()
    scans = {s.x: s for s in pair_orbit_scan(G, A, threads)}
    labels = A.orbit_labels
    inv = G.inverses

    classes: list[HypermapClass] = []
    movers: dict[int, np.ndarray] = {}
    for x, scan in scans.items():
        xi = int(inv[x])
        xr = int(labels[xi])
        if xr not in movers:
            alpha = int(np.flatnonzero(A.images(xi) == xr)[0])
            movers[xr] = A.map_of(alpha)
        mover = movers[xr]
        mirror_scan = scans[xr]
        for y, sym in zip(scan.y_gen, scan.symmetric):
            y = int(y)
            mirror = (xr, int(mirror_scan.y_min[mover[inv[y]]]))
            reflexible = mirror == (x, y)
            if reflexible != bool(sym):
                raise DefectError(f"{G.name}: reflexibility tests disagree on ({x}, {y})", witness=[x, y])
            classes.append(HypermapClass(
                rep=[x, y],
                type=[G.order_of(x), G.order_of(y), G.order_of(G.mul(x, y))],
                reflexible=reflexible,
                mirror=list(mirror),
                is_map=G.order_of(y) == 2,
            ))
    classes.sort(key=lambda c: tuple(c.rep))

    by_rep = {tuple(c.rep): c for c in classes}
    for c in classes:
        back = by_rep.get(tuple(c.mirror))
        if back is None or tuple(back.mirror) != tuple(c.rep):
            raise DefectError(f"{G.name}: mirroring is not an involution at {c.rep}", witness=c.rep)
    n_reflexible = sum(c.reflexible for c in classes)
    n_chiral = len(classes) - n_reflexible
    if n_chiral % 2:
        raise DefectError(f"{G.name}: odd number of chiral classes ({n_chiral})")

    report = CensusReport(
        group=G.name,
        order=G.order,
        aut_order=A.order,
        n_generating_pairs=len(classes) * A.order,
        n_orbits=len(classes),
        n_reflexible=n_reflexible,
        n_chiral=n_chiral,
        n_maps=sum(c.is_map for c in classes),
        n_reflexible_maps=sum(c.is_map and c.reflexible for c in classes),
        classes=classes,
        elapsed=round(time.perf_counter() - start, 3),
    )
    log(f"✅ {report.n_orbits} hypermaps: {n_reflexible} reflexible, {n_chiral} chiral")
    return report
