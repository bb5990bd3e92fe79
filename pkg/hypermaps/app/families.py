"""
Factory functions for the concrete group models.
Provides one construction pattern for every family the chirality tools work on.

A model is the simple group S as a permutation group on a domain Omega, plus
permutations of Omega that normalize S and generate Aut(S) by conjugation.
Each Aut generator carries a provenance tag:
    inner, diag (PGL / PGU), field (Frobenius), graph (inverse transpose),
    outer (Sym(n) on Alt(n)), exceptional (the extra outer automorphism of Alt(6)).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, gcd
from typing import Callable, Optional, Sequence

import numpy as np
from sympy.combinatorics import Permutation

from hypermaps.app.errors import DefectError, UsageError
from hypermaps.app.services.gf import FieldSpec, build_field, field_of_order
from hypermaps.app.services.matgrp import (
    Mat,
    VectorDomain,
    classical_order,
    inverse_transpose,
    isotropic_vectors,
    projective_points,
    transvection_generators,
    unitary_generator_stages,
)
from hypermaps.app.services.permgrp import GroupHandle, close_permutations
from hypermaps.config.settings import SETTINGS
from hypermaps.utils.console import log

FAMILIES = ("ALT", "PSL", "PSU")


@dataclass
class AutGenerator:
    perm: np.ndarray
    tag: str


@dataclass
class GroupModel:
    family: str
    n: int
    q: Optional[int]
    S: GroupHandle
    aut_gens: list[AutGenerator]
    expected_aut_order: int
    singer_order: Optional[int] = None
    special: dict[str, np.ndarray] = field(default_factory=dict)
    matrix_to_perm: Optional[Callable[[Mat], np.ndarray]] = None
    field: Optional[FieldSpec] = None

    @property
    def name(self) -> str:
        return self.S.name


# ----------------------------------------------------------------------
# Cycle notation
# ----------------------------------------------------------------------

def perm_from_cycles(cycles: Sequence[Sequence[int]], degree: int, one_based: bool = False) -> np.ndarray:
    shift = 1 if one_based else 0
    cyc = [[p - shift for p in c] for c in cycles]
    return np.array(Permutation(cyc, size=degree).array_form, dtype=np.int64)


def cycle_notation(perm: Sequence[int], one_based: bool = True) -> str:
    shift = 1 if one_based else 0
    cycles = Permutation(list(int(v) for v in perm)).cyclic_form
    return "".join("(" + ",".join(str(p + shift) for p in c) + ")" for c in cycles) or "()"


def _two_generated(perms: Sequence[np.ndarray], name: str, expected: int, cap: Optional[int] = None) -> GroupHandle:
    """Close, check the order, then re-close on a seeded generating pair."""
    S0 = close_permutations(perms, cap, name=name)
    if S0.order != expected:
        raise DefectError(f"{name}: closure has order {S0.order}, expected {expected}")
    i, j = S0.find_generating_pair(SETTINGS.seed)
    return close_permutations([S0.perms[i], S0.perms[j]], cap, name=name)


# ----------------------------------------------------------------------
# Alternating groups
# ----------------------------------------------------------------------

def _synthematic_totals() -> list[frozenset]:
    duads = list(itertools.combinations(range(6), 2))
    synthemes = [
        frozenset(c) for c in itertools.combinations(duads, 3)
        if len({p for d in c for p in d}) == 6
    ]
    return [
        frozenset(t) for t in itertools.combinations(synthemes, 5)
        if len({d for s in t for d in s}) == 15
    ]


def _totals_action(sigma: Sequence[int], totals: list[frozenset]) -> list[int]:
    index = {t: i for i, t in enumerate(totals)}

    def image(total):
        return frozenset(
            frozenset(tuple(sorted((sigma[a], sigma[b]))) for a, b in s) for s in total
        )

    return [index[image(t)] for t in totals]


def _involutory_outer(totals: list[frozenset]) -> Callable[[Sequence[int]], list[int]]:
    """An outer automorphism theta of Sym(6) with theta^2 = 1, via a labelling of the totals."""
    gens = [[1, 0, 2, 3, 4, 5], [1, 2, 3, 4, 5, 0]]
    for beta in itertools.permutations(range(6)):
        beta_inv = [0] * 6
        for t, label in enumerate(beta):
            beta_inv[label] = t

        def theta(sigma, beta=beta, beta_inv=beta_inv):
            act = _totals_action(sigma, totals)
            return [beta[act[beta_inv[label]]] for label in range(6)]

        if all(theta(theta(g)) == g for g in gens):
            return theta
    raise DefectError("no involutory outer automorphism of Sym(6) found")


def _alt6_model() -> GroupModel:
    totals = _synthematic_totals()
    theta = _involutory_outer(totals)

    def embed(sigma: Sequence[int]) -> np.ndarray:
        return np.array(list(sigma) + [6 + v for v in theta(sigma)], dtype=np.int64)

    s_gens = [embed(perm_from_cycles([[0, 1, 2]], 6)), embed(perm_from_cycles([[1, 2, 3, 4, 5]], 6))]
    S = close_permutations(s_gens, name="Alt(6)")
    if S.order != 360:
        raise DefectError(f"Alt(6): closure has order {S.order}")
    swap = np.array([(i + 6) % 12 for i in range(12)], dtype=np.int64)
    aut_gens = [AutGenerator(g, "inner") for g in s_gens] + [
        AutGenerator(embed(perm_from_cycles([[0, 1]], 6)), "outer"),
        AutGenerator(swap, "exceptional"),
    ]
    return GroupModel("ALT", 6, None, S, aut_gens, 1440, singer_order=5, special={"exceptional": swap})


def alt_model(n: int, gens: Optional[Sequence[Sequence[int]]] = None, cap: Optional[int] = None) -> GroupModel:
    """Alt(n) on n points (Aut = Sym(n)); Alt(6) on points plus synthematic totals."""
    if n < 5:
        raise UsageError(f"Alt({n}) is not a non-abelian simple group")
    if n == 6 and gens is not None:
        raise UsageError("Alt(6) is built on points and synthematic totals; explicit generators are not supported")
    log(f"🔧 Building Alt({n}) model...")
    try:
        if n == 6:
            model = _alt6_model()
        else:
            if gens is None:
                gens = [perm_from_cycles([[0, 1, 2]], n)]
                gens.append(perm_from_cycles([list(range(n))] if n % 2 else [list(range(1, n))], n))
            s_gens = [np.asarray(g, dtype=np.int64) for g in gens]
            S = close_permutations(s_gens, cap, name=f"Alt({n})")
            if S.order != factorial(n) // 2:
                raise UsageError(f"the given permutations generate a group of order {S.order}, not Alt({n})")
            aut_gens = [AutGenerator(g, "inner") for g in s_gens]
            aut_gens.append(AutGenerator(perm_from_cycles([[0, 1]], n), "outer"))
            model = GroupModel("ALT", n, None, S, aut_gens, factorial(n), singer_order=n if n % 2 else n - 1)
        log(f"✅ Alt({n}) model ready: |S| = {model.S.order}, degree {model.S.degree}")
        return model
    except Exception as e:
        log(f"❌ Failed to build Alt({n}): {e}")
        raise


# ----------------------------------------------------------------------
# PSL(2, q) and PSL(3, q)
# ----------------------------------------------------------------------

def psl_model(n: int, q: int, cap: Optional[int] = None) -> GroupModel:
    """PSL(n, q) on projective points (n = 2) or points and lines (n = 3)."""
    if n not in (2, 3):
        raise UsageError("PSL models exist for n = 2 and n = 3")
    spec = field_of_order(q)
    name = f"PSL({n},{q})"
    log(f"🔧 Building {name} model...")
    try:
        points = projective_points(n, spec)
        domain = VectorDomain(points, spec, projective=True)
        npts = len(points)

        if n == 2:
            def matrix_to_perm(m: Mat) -> np.ndarray:
                return domain.perm(m)
        else:
            def matrix_to_perm(m: Mat) -> np.ndarray:
                return np.concatenate([domain.perm(m), npts + domain.perm(inverse_transpose(m))])

        expected = classical_order("PSL", n, q)
        S = _two_generated([matrix_to_perm(g) for g in transvection_generators(n, spec)], name, expected, cap)

        aut_gens = [AutGenerator(S.perms[g].astype(np.int64), "inner") for g in S.gens]
        special: dict[str, np.ndarray] = {}
        if q > 2:
            diag = matrix_to_perm(Mat.diag(spec, (spec.primitive_code,) + (1,) * (n - 1)))
            aut_gens.append(AutGenerator(diag, "diag"))
            special["diag"] = diag
        if spec.k > 1:
            frob = domain.frobenius_perm(1)
            if n == 3:
                frob = np.concatenate([frob, npts + frob])
            aut_gens.append(AutGenerator(frob, "field"))
            special["field"] = frob
        if n == 3:
            graph = np.concatenate([np.arange(npts) + npts, np.arange(npts)])
            aut_gens.append(AutGenerator(graph, "graph"))
            special["graph"] = graph

        aut_order = classical_order("PGL", n, q) * spec.k * (2 if n == 3 else 1)
        d = gcd(n, q - 1)
        singer = (q * q + q + 1) // d if n == 3 else (q + 1) // gcd(2, q - 1)
        model = GroupModel("PSL", n, q, S, aut_gens, aut_order, singer, special, matrix_to_perm, spec)
        log(f"✅ {name} model ready: |S| = {S.order}, degree {S.degree}")
        return model
    except Exception as e:
        log(f"❌ Failed to build {name}: {e}")
        raise


# ----------------------------------------------------------------------
# PSU(3, q)
# ----------------------------------------------------------------------

def psu_model(q: int, cap: Optional[int] = None) -> GroupModel:
    """PSU(3, q) on the q^3 + 1 isotropic points of PG(2, q^2)."""
    spec = field_of_order(q)
    big = build_field(spec.p, 2 * spec.k)
    name = f"PSU(3,{q})"
    log(f"🔧 Building {name} model...")
    try:
        domain = VectorDomain(isotropic_vectors(big, 3, projective=True), big, projective=True)
        if len(domain) != q ** 3 + 1:
            raise DefectError(f"{name}: found {len(domain)} isotropic points, expected {q ** 3 + 1}")
        expected = classical_order("PSU", 3, q)
        S = None
        for stage in unitary_generator_stages(spec):
            perms = [domain.perm(m) for m in stage]
            S0 = close_permutations(perms, cap, name=name)
            if S0.order == expected:
                S = _two_generated(perms, name, expected, cap)
                break
            log(f"⚠️ {name}: generator set closed to order {S0.order}; widening")
        if S is None:
            raise DefectError(f"{name}: no generator stage reached order {expected}")

        aut_gens = [AutGenerator(S.perms[g].astype(np.int64), "inner") for g in S.gens]
        nu = big.pow_code(big.primitive_code, q - 1)
        diag = domain.perm(Mat.diag(big, (nu, 1, 1)))
        frob = domain.frobenius_perm(1)
        phi = domain.frobenius_perm(spec.k)
        aut_gens += [AutGenerator(diag, "diag"), AutGenerator(frob, "field")]
        aut_order = classical_order("PGU", 3, q) * 2 * spec.k
        singer = (q * q - q + 1) // gcd(3, q + 1)
        model = GroupModel(
            "PSU", 3, q, S, aut_gens, aut_order, singer,
            {"diag": diag, "field": frob, "phi": phi}, domain.perm, big,
        )
        log(f"✅ {name} model ready: |S| = {S.order}, degree {S.degree}")
        return model
    except Exception as e:
        log(f"❌ Failed to build {name}: {e}")
        raise


@lru_cache(maxsize=8)
def build_model(family: str, n: Optional[int] = None, q: Optional[int] = None, cap: Optional[int] = None) -> GroupModel:
    family = family.upper()
    if family == "ALT":
        if n is None:
            raise UsageError("ALT needs --n")
        return alt_model(n, cap=cap)
    if family == "PSL":
        if n is None or q is None:
            raise UsageError("PSL needs --n and --q")
        return psl_model(n, q, cap)
    if family == "PSU":
        if q is None:
            raise UsageError("PSU needs --q")
        if n not in (None, 3):
            raise UsageError("PSU models exist for n = 3 only")
        return psu_model(q, cap)
    raise UsageError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
