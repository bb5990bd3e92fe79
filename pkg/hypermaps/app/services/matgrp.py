"""
Matrix Group Service

Matrices over GF(q) stored as row-major tuples of element codes, the classical
groups GL / SL / PGL / PSL / GU / SU / PGU / PSU (n = 3) / Sp(2, q), Singer
cycles, semilinear elements of GammaL(n, q) and the exhaustive semilinear scan
around a Singer cycle.

Conventions:
- Row vectors; a matrix M acts by v -> vM, so products read left to right.
- Projective matrices are scaled so that the first nonzero entry (row-major) is 1.
- Unitary groups preserve the Hermitian form with Gram matrix I, i.e.
  M * conj(M)^T = I with conj(x) = x^q, entries in GF(q^2).
- A semilinear element (A, i) acts by v -> (v^(sigma^i)) A where sigma is the
  Frobenius x -> x^p; (A, i)(B, j) = (A^(sigma^j) B, i + j) and therefore
  x^(A, i) = A^-1 x^(sigma^i) A.

Groups are enumerated through a faithful permutation action (nonzero vectors,
projective points, or isotropic vectors/points for unitary kinds) and every
element gets its canonical matrix attached as its key.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import gcd, prod
from typing import Iterator, Optional, Sequence

import numpy as np

from hypermaps.app.errors import CapExceededError, DefectError, SingularMatrixError, UsageError
from hypermaps.app.models import LemmaCounterexample, LemmaReport
from hypermaps.app.services.gf import (
    FieldElement,
    FieldSpec,
    Polynomial,
    build_field,
    prime_factors,
)
from hypermaps.app.services.permgrp import GroupHandle, close_generators, close_permutations
from hypermaps.config.settings import SETTINGS
from hypermaps.utils.console import log

KINDS = ("GL", "SL", "PGL", "PSL", "GU", "SU", "PGU", "PSU", "SP2")
PROJECTIVE_KINDS = {"PGL", "PSL", "PGU", "PSU"}
UNITARY_KINDS = {"GU", "SU", "PGU", "PSU"}


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mat:
    n: int
    spec: FieldSpec
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.n * self.n:
            raise UsageError(f"expected {self.n * self.n} entries, got {len(self.entries)}")
        if any(not 0 <= c < self.spec.q for c in self.entries):
            raise UsageError(f"entries must be element codes of {self.spec}")

    @classmethod
    def identity(cls, n: int, spec: FieldSpec) -> "Mat":
        return cls(n, spec, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diag(cls, spec: FieldSpec, codes: Sequence[int]) -> "Mat":
        n = len(codes)
        return cls(n, spec, tuple(codes[i] if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[int]]) -> "Mat":
        return cls(len(rows), spec, tuple(int(c) for row in rows for c in row))

    @classmethod
    def from_array(cls, spec: FieldSpec, arr: np.ndarray) -> "Mat":
        arr = np.asarray(arr)
        return cls(arr.shape[-1], spec, tuple(int(c) for c in arr.ravel()))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.n + j]

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement.from_code(self.spec, self[i, j])

    def rows(self) -> list[tuple[int, ...]]:
        n = self.n
        return [self.entries[i * n:(i + 1) * n] for i in range(n)]

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.n, self.n)

    def is_symmetric(self) -> bool:
        return self == transpose(self)

    def __mul__(self, other: "Mat") -> "Mat":
        return mat_mul(self, other)

    def to_json(self) -> list[list[list[int]]]:
        return [[list(self.spec.coeffs_of(c)) for c in row] for row in self.rows()]


@dataclass(frozen=True)
class ProjMat:
    """A matrix modulo scalars, held in canonical form."""
    rep: Mat

    @classmethod
    def of(cls, m: Mat) -> "ProjMat":
        return cls(Mat(m.n, m.spec, canon_entries(m.entries, m.spec)))

    def __mul__(self, other: "ProjMat") -> "ProjMat":
        return ProjMat.of(mat_mul(self.rep, other.rep))


def canon_entries(entries: Sequence[int], spec: FieldSpec) -> tuple[int, ...]:
    """Entries scaled so the first nonzero one is 1."""
    lead = next((c for c in entries if c), None)
    if lead is None:
        raise SingularMatrixError("the zero matrix has no projective image")
    s = spec.inv_l[lead]
    mul = spec.mul_l
    return tuple(mul[s][c] for c in entries)


def _mul_entries(n: int, a: Sequence[int], b: Sequence[int], add, mul) -> tuple[int, ...]:
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            s = 0
            for t in range(n):
                x = row[t]
                if x:
                    s = add[s][mul[x][b[t * n + j]]]
            out.append(s)
    return tuple(out)


def _check_pair(a: Mat, b: Mat) -> None:
    if a.n != b.n or a.spec != b.spec:
        raise UsageError("matrices of different shapes or fields")


def mat_mul(a: Mat, b: Mat) -> Mat:
    """Product ab over a shared field and dimension."""
    _check_pair(a, b)
    return Mat(a.n, a.spec, _mul_entries(a.n, a.entries, b.entries, a.spec.add_l, a.spec.mul_l))


def transpose(m: Mat) -> Mat:
    n = m.n
    return Mat(n, m.spec, tuple(m.entries[j * n + i] for i in range(n) for j in range(n)))


def det(m: Mat) -> int:
    """Determinant code by Gaussian elimination."""
    spec = m.spec
    add, mul, neg, inv = spec.add_l, spec.mul_l, spec.neg_l, spec.inv_l
    rows = [list(r) for r in m.rows()]
    n = m.n
    d = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            return 0
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            d = neg[d]
        pv = rows[col][col]
        d = mul[d][pv]
        pinv = inv[pv]
        for r in range(col + 1, n):
            f = mul[rows[r][col]][pinv]
            if f:
                rows[r] = [add[x][neg[mul[f][y]]] for x, y in zip(rows[r], rows[col])]
    return d


def mat_inv(m: Mat) -> Mat:
    """Gauss-Jordan inversion."""
    spec = m.spec
    add, mul, neg, inv = spec.add_l, spec.mul_l, spec.neg_l, spec.inv_l
    n = m.n
    aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(m.rows())]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pinv = inv[aug[col][col]]
        aug[col] = [mul[pinv][x] for x in aug[col]]
        for r in range(n):
            f = aug[r][col]
            if r != col and f:
                aug[r] = [add[x][neg[mul[f][y]]] for x, y in zip(aug[r], aug[col])]
    return Mat(n, spec, tuple(c for row in aug for c in row[n:]))


def inverse_transpose(m: Mat) -> Mat:
    return transpose(mat_inv(m))


def mat_pow(m: Mat, e: int) -> Mat:
    """
    m ** e by square and multiply.

    Args:
        m: Square matrix; it must be invertible when e < 0.
        e: Any integer exponent.

    Returns:
        The identity for e == 0.
    """
    if e < 0:
        m, e = mat_inv(m), -e
    result, base = Mat.identity(m.n, m.spec), m
    while e:
        if e & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        e >>= 1
    return result


def classical_order(kind: str, n: int, q: int) -> int:
    """
    Order of a classical group from its closed formula.

    Args:
        kind: One of GL, SL, PGL, PSL, SP2, GU, SU, PGU, PSU (any case).
        n: Dimension; the unitary formulas assume n = 3.
        q: Field order (for unitary kinds, the fixed field GF(q) of GF(q^2)).

    Returns:
        The group order.

    Raises:
        UsageError: Unknown kind.
    """
    kind = kind.upper()
    gl = prod(q ** n - q ** i for i in range(n))
    if kind == "GL":
        return gl
    if kind in ("SL", "PGL"):
        return gl // (q - 1)
    if kind == "PSL":
        return gl // (q - 1) // gcd(n, q - 1)
    if kind == "SP2":
        return q * (q * q - 1)
    su = q ** 3 * (q ** 3 + 1) * (q * q - 1)
    if kind == "GU":
        return su * (q + 1)
    if kind in ("SU", "PGU"):
        return su
    if kind == "PSU":
        return su // gcd(3, q + 1)
    raise UsageError(f"unknown group kind {kind!r}")


def mat_order(m: Mat) -> int:
    """
    Multiplicative order, found by stripping primes from |GL(n, q)|.

    Raises:
        SingularMatrixError: m is singular.
    """
    if det(m) == 0:
        raise SingularMatrixError("singular matrices have no order")
    ident = Mat.identity(m.n, m.spec)
    e = classical_order("GL", m.n, m.spec.q)
    for r in prime_factors(e):
        while e % r == 0 and mat_pow(m, e // r) == ident:
            e //= r
    return e


def frobenius_mat(m: Mat, i: int) -> Mat:
    """Entrywise a -> a**(p**i)."""
    row = m.spec.frob_tables[i % m.spec.k]
    return Mat(m.n, m.spec, tuple(int(row[c]) for c in m.entries))


def companion_matrix(poly: Polynomial) -> Mat:
    """Rows e_2, ..., e_n and the negated low coefficients; characteristic polynomial is poly."""
    if not poly.is_monic() or poly.degree < 1:
        raise UsageError("companion matrix needs a monic polynomial of positive degree")
    spec, n = poly.field, poly.degree
    neg = spec.neg_l
    rows = [[1 if j == i + 1 else 0 for j in range(n)] for i in range(n - 1)]
    rows.append([neg[c] for c in poly.coeffs[:n]])
    return Mat.from_rows(spec, rows)


def _poly_det(a: list[list[Polynomial]]) -> Polynomial:
    n = len(a)
    if n == 1:
        return a[0][0]
    total = Polynomial(a[0][0].field, ())
    for j in range(n):
        if a[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in a[1:]]
        term = a[0][j] * _poly_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def char_poly(m: Mat) -> Polynomial:
    """
    Characteristic polynomial det(T*I - M).

    Args:
        m: Square matrix over GF(q).

    Returns:
        Monic polynomial of degree n, by cofactor expansion over GF(q)[T].
    """
    spec, n, neg = m.spec, m.n, m.spec.neg_l
    a = [
        [Polynomial(spec, (neg[m[i, j]], 1) if i == j else (neg[m[i, j]],)) for j in range(n)]
        for i in range(n)
    ]
    return _poly_det(a)


def poly_on_matrix(f: Polynomial, m: Mat) -> Mat:
    """
    Evaluate f at a matrix by Horner's rule.

    Args:
        f: Polynomial over the matrix field.
        m: Square matrix.

    Returns:
        f(m); the zero matrix when f is the characteristic polynomial of m.
    """
    acc = Mat(m.n, m.spec, (0,) * (m.n * m.n))
    for c in reversed(f.coeffs):
        acc = mat_mul(acc, m)
        acc = Mat(m.n, m.spec, tuple(
            m.spec.add_l[x][c] if i % (m.n + 1) == 0 else x for i, x in enumerate(acc.entries)
        ))
    return acc


def vec_mat(v: Sequence[int], m: Mat) -> tuple[int, ...]:
    """Row vector times matrix."""
    add, mul, n = m.spec.add_l, m.spec.mul_l, m.n
    out = []
    for j in range(n):
        s = 0
        for t in range(n):
            s = add[s][mul[v[t]][m.entries[t * n + j]]]
        out.append(s)
    return tuple(out)


# ---------------------------------------------------------------------------
# Singer cycles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingerData:
    g: Mat
    x: Mat
    order_g: int
    order_x: int
    poly: Polynomial


def singer_cycle(n: int, spec: FieldSpec) -> SingerData:
    """
    Companion matrix of the least monic polynomial whose companion has order q^n - 1.

    Args:
        n: Dimension, at least 1.
        spec: GF(q).

    Returns:
        SingerData with g, x = g^gcd(n, q - 1), their orders and the polynomial.

    Raises:
        UsageError: n < 1.
    """
    if n < 1:
        raise UsageError("dimension must be >= 1")
    q = spec.q
    big = q ** n - 1
    ident = Mat.identity(n, spec)
    rs = prime_factors(big)
    for tail in itertools.product(range(q), repeat=n):
        if tail[0] == 0:
            continue
        f = Polynomial(spec, tail + (1,))
        g = companion_matrix(f)
        if mat_pow(g, big) != ident or any(mat_pow(g, big // r) == ident for r in rs):
            continue
        d = gcd(n, q - 1)
        return SingerData(g=g, x=mat_pow(g, d), order_g=big, order_x=big // d, poly=f)
    raise DefectError(f"no Singer cycle found in GL({n},{q})")


def singer_orbit_lengths(g: Mat) -> set[int]:
    """Lengths of the <g>-orbits on nonzero row vectors."""
    seen: set[tuple[int, ...]] = set()
    lengths = set()
    for v in nonzero_vectors(g.n, g.spec):
        if v in seen:
            continue
        cur, length = v, 0
        while True:
            seen.add(cur)
            cur = vec_mat(cur, g)
            length += 1
            if cur == v:
                break
        lengths.add(length)
    return lengths


# ---------------------------------------------------------------------------
# Vectorized kernels
# ---------------------------------------------------------------------------

def batch_mat_mul(a: np.ndarray, b: np.ndarray, spec: FieldSpec) -> np.ndarray:
    """Products of (..., n, n) code arrays with numpy broadcasting."""
    add, mul = spec.add_table, spec.mul_table
    a, b = np.asarray(a), np.asarray(b)
    n = a.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
    for t in range(n):
        out = add[out, mul[a[..., :, t, None], b[..., None, t, :]]]
    return out


def batch_mat_pow(a: np.ndarray, e: int, spec: FieldSpec) -> np.ndarray:
    n = a.shape[-1]
    result = np.broadcast_to(np.eye(n, dtype=np.int64), a.shape).copy()
    base = np.asarray(a, dtype=np.int64)
    while e:
        if e & 1:
            result = batch_mat_mul(result, base, spec)
        base = batch_mat_mul(base, base, spec)
        e >>= 1
    return result


def batch_det(a: np.ndarray, spec: FieldSpec) -> np.ndarray:
    """Leibniz determinant of (m, n, n) code arrays."""
    add, mul, neg = spec.add_table, spec.mul_table, spec.neg_table
    n = a.shape[-1]
    out = np.zeros(a.shape[0], dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        term = np.ones(a.shape[0], dtype=np.int64)
        for i, j in enumerate(perm):
            term = mul[term, a[:, i, j]]
        inversions = sum(1 for s in range(n) for t in range(s + 1, n) if perm[s] > perm[t])
        out = add[out, neg[term] if inversions % 2 else term]
    return out


def batch_vec_mat(v: np.ndarray, m: np.ndarray, spec: FieldSpec) -> np.ndarray:
    add, mul = spec.add_table, spec.mul_table
    n = m.shape[-1]
    out = np.zeros((v.shape[0], n), dtype=np.int64)
    for t in range(v.shape[1]):
        out = add[out, mul[v[:, t, None], m[t][None, :]]]
    return out


def canon_rows(rows: np.ndarray, spec: FieldSpec) -> np.ndarray:
    """Scale each nonzero row so its first nonzero entry is 1."""
    pos = np.argmax(rows != 0, axis=1)
    lead = rows[np.arange(rows.shape[0]), pos]
    return spec.mul_table[spec.inv_table[lead][:, None], rows]


def encode_rows(rows: np.ndarray, q: int) -> np.ndarray:
    return rows.astype(np.int64) @ (q ** np.arange(rows.shape[1], dtype=np.int64))


# ---------------------------------------------------------------------------
# Action domains
# ---------------------------------------------------------------------------

def nonzero_vectors(n: int, spec: FieldSpec) -> list[tuple[int, ...]]:
    return [v for v in itertools.product(range(spec.q), repeat=n) if any(v)]


def projective_points(n: int, spec: FieldSpec) -> list[tuple[int, ...]]:
    """Canonical representatives (first nonzero coordinate 1) in lexicographic order."""
    return [v for v in nonzero_vectors(n, spec) if next(c for c in v if c) == 1]


def norm_table(big: FieldSpec) -> np.ndarray:
    """x -> x^(q+1) on GF(q^2)."""
    q = int(round(big.q ** 0.5))
    return np.array([big.pow_code(c, q + 1) for c in range(big.q)], dtype=np.int64)


def conj_table(big: FieldSpec) -> np.ndarray:
    """x -> x^q on GF(q^2)."""
    return big.frob_tables[big.k // 2]


def hermitian_norm(rows: np.ndarray, big: FieldSpec) -> np.ndarray:
    norm = norm_table(big)
    out = np.zeros(rows.shape[0], dtype=np.int64)
    for t in range(rows.shape[1]):
        out = big.add_table[out, norm[rows[:, t]]]
    return out


class VectorDomain:
    """A finite set of row vectors (or projective points) permuted by matrices."""

    def __init__(self, vectors: Sequence[Sequence[int]], spec: FieldSpec, projective: bool):
        self.spec = spec
        self.vectors = np.array(vectors, dtype=np.int64)
        self.projective = projective
        n = self.vectors.shape[1]
        self._lookup = np.full(spec.q ** n, -1, dtype=np.int64)
        self._lookup[encode_rows(self.vectors, spec.q)] = np.arange(len(self.vectors))

    def __len__(self) -> int:
        return len(self.vectors)

    def index(self, v: Sequence[int]) -> int:
        return int(self._lookup[encode_rows(np.array([v]), self.spec.q)[0]])

    def images(self, rows: np.ndarray) -> np.ndarray:
        """Indices of the given vectors (canonicalized when projective); -1 if outside the domain."""
        if self.projective:
            rows = canon_rows(rows, self.spec)
        return self._lookup[encode_rows(rows, self.spec.q)]

    def perm(self, m: Mat) -> np.ndarray:
        idx = self.images(batch_vec_mat(self.vectors, m.as_array(), self.spec))
        if (idx < 0).any():
            raise UsageError("matrix does not preserve the action domain")
        return idx

    def frobenius_perm(self, i: int) -> np.ndarray:
        idx = self.images(self.spec.frob_tables[i % self.spec.k][self.vectors])
        if (idx < 0).any():
            raise UsageError("Frobenius does not preserve the action domain")
        return idx


def isotropic_vectors(big: FieldSpec, n: int = 3, projective: bool = False) -> list[tuple[int, ...]]:
    vecs = np.array(projective_points(n, big) if projective else nonzero_vectors(n, big), dtype=np.int64)
    keep = hermitian_norm(vecs, big) == 0
    return [tuple(int(c) for c in v) for v in vecs[keep]]


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def elementary(n: int, spec: FieldSpec, i: int, j: int, c: int) -> Mat:
    entries = list(Mat.identity(n, spec).entries)
    entries[i * n + j] = c
    return Mat(n, spec, tuple(entries))


def transvection_generators(n: int, spec: FieldSpec) -> list[Mat]:
    """x_ij(t^e) for i != j and an additive basis 1, t, ..., t^(k-1); these generate SL(n, q)."""
    basis = [spec.pow_code(spec.primitive_code, e) for e in range(spec.k)]
    return [elementary(n, spec, i, j, c) for i in range(n) for j in range(n) if i != j for c in basis]


def unitary_condition(m: Mat) -> bool:
    conj = conj_table(m.spec)
    mbar_t = transpose(Mat(m.n, m.spec, tuple(int(conj[c]) for c in m.entries)))
    return mat_mul(m, mbar_t) == Mat.identity(m.n, m.spec)


def su2_elements(big: FieldSpec) -> list[Mat]:
    """All of SU(2, q) as [[a, b], [-b^q, a^q]] with N(a) + N(b) = 1."""
    norm, conj = norm_table(big), conj_table(big)
    add, neg = big.add_l, big.neg_l
    out = []
    for a in range(big.q):
        for b in range(big.q):
            if add[int(norm[a])][int(norm[b])] == 1:
                out.append(Mat(2, big, (a, b, neg[int(conj[b])], int(conj[a]))))
    return out


def _greedy_generators(elements: Sequence[Mat]) -> list[Mat]:
    if not elements:
        return []
    spec, n = elements[0].spec, elements[0].n
    ident = Mat.identity(n, spec).entries
    target = len(elements)
    gens: list[Mat] = []
    closure = {ident}
    for m in sorted(elements, key=lambda m: m.entries):
        if m.entries in closure:
            continue
        gens.append(m)
        add, mul = spec.add_l, spec.mul_l
        H = close_generators(
            [g.entries for g in gens],
            lambda a, b: _mul_entries(n, a, b, add, mul),
            target,
            identity=ident,
        )
        closure = {H.key(i) for i in range(H.order)}
        if len(closure) == target:
            break
    return gens


def _embed(m: Mat, i: int, j: int, n: int = 3) -> Mat:
    entries = list(Mat.identity(n, m.spec).entries)
    for (r, c), v in zip(((i, i), (i, j), (j, i), (j, j)), m.entries):
        entries[r * n + c] = v
    return Mat(n, m.spec, tuple(entries))


def _su3_by_rows(big: FieldSpec) -> list[Mat]:
    conj = conj_table(big)
    add, mul = big.add_l, big.mul_l
    vecs = np.array(nonzero_vectors(3, big), dtype=np.int64)
    units = [tuple(int(c) for c in v) for v in vecs[hermitian_norm(vecs, big) == 1]]

    def form(u, v):
        s = 0
        for a, b in zip(u, v):
            s = add[s][mul[a][int(conj[b])]]
        return s

    out = []
    for r1 in units:
        for r2 in units:
            if form(r1, r2):
                continue
            for r3 in units:
                if form(r1, r3) or form(r2, r3):
                    continue
                m = Mat(3, big, r1 + r2 + r3)
                if det(m) == 1:
                    out.append(m)
    return out


def unitary_generator_stages(spec: FieldSpec) -> Iterator[list[Mat]]:
    """Candidate generating sets of SU(3, q) over GF(q^2), smallest first."""
    big = build_field(spec.p, 2 * spec.k)
    su2 = _greedy_generators(su2_elements(big))
    stage = [_embed(m, 0, 1) for m in su2] + [_embed(m, 1, 2) for m in su2]
    yield stage
    nu = big.pow_code(big.primitive_code, spec.q - 1)
    nu_inv = big.inv_l[nu]
    stage = stage + [_embed(m, 0, 2) for m in su2] + [
        Mat.diag(big, (nu, nu_inv, 1)),
        Mat.diag(big, (1, nu, nu_inv)),
    ]
    yield stage
    if big.q ** 3 <= 1000:
        yield _su3_by_rows(big)


# ---------------------------------------------------------------------------
# Group construction
# ---------------------------------------------------------------------------

def element_matrices(G: GroupHandle, gens: Sequence[Mat], projective: bool) -> np.ndarray:
    """Canonical matrix of every element, rebuilt along the breadth-first tree."""
    spec, n = gens[0].spec, gens[0].n
    ga = np.stack([g.as_array() for g in gens])
    keys = np.zeros((G.order, n, n), dtype=np.int64)
    keys[0] = np.eye(n, dtype=np.int64)
    depth = G.depth
    bounds = np.searchsorted(depth, np.arange(1, int(depth.max(initial=0)) + 2))
    for s, e in zip(bounds[:-1], bounds[1:]):
        if s == e:
            continue
        prod_ = batch_mat_mul(keys[G.parent[s:e]], ga[G.via[s:e]], spec)
        if projective:
            prod_ = canon_rows(prod_.reshape(e - s, n * n), spec).reshape(e - s, n, n)
        keys[s:e] = prod_
    return keys.reshape(G.order, n * n).astype(np.int16)


def close_matrix_group(
    gens: Sequence[Mat],
    domain: VectorDomain,
    *,
    cap: Optional[int] = None,
    name: str = "G",
    meta: Optional[dict] = None,
) -> GroupHandle:
    if not gens:
        gens = [Mat.identity(domain.vectors.shape[1], domain.spec)]
    G = close_permutations([domain.perm(g) for g in gens], cap, name=name, meta=meta)
    G.attach_keys(element_matrices(G, gens, domain.projective))
    G.meta.setdefault("mat_gens", list(gens))
    return G


def build_matrix_group(kind: str, n: int, spec: FieldSpec, cap: Optional[int] = None) -> GroupHandle:
    """
    Enumerate a classical group as permutations of vectors or points.

    Args:
        kind: A name from KINDS.
        n: Dimension (3 for unitary kinds, 2 for SP2).
        spec: GF(q); unitary kinds work over GF(q^2).
        cap: Largest order enumerated (defaults to SETTINGS.enum_cap).

    Returns:
        GroupHandle with matrix keys attached and meta carrying kind, n, q and field.

    Raises:
        UsageError: Unknown kind or unsupported dimension.
        CapExceededError: The classical order exceeds the cap.
        DefectError: No generator set closes to the classical order.
    """
    kind = kind.upper()
    if kind not in KINDS:
        raise UsageError(f"unknown group kind {kind!r}; expected one of {', '.join(KINDS)}")
    if kind in UNITARY_KINDS and n != 3:
        raise UsageError(f"{kind} is only constructed for n = 3")
    if kind == "SP2" and n != 2:
        raise UsageError("SP2 requires n = 2")
    if n < 1:
        raise UsageError("dimension must be >= 1")
    q = spec.q
    expected = classical_order(kind, n, q)
    cap = SETTINGS.enum_cap if cap is None else cap
    name = f"{kind}({n},{q})"
    if expected > cap:
        raise CapExceededError(name, expected, cap)
    projective = kind in PROJECTIVE_KINDS
    meta = {"kind": kind, "n": n, "q": q, "projective": projective}

    if kind in UNITARY_KINDS:
        big = build_field(spec.p, 2 * spec.k)
        domain = VectorDomain(isotropic_vectors(big, 3, projective), big, projective)
        extra = []
        if kind in ("GU", "PGU"):
            extra = [Mat.diag(big, (big.pow_code(big.primitive_code, q - 1), 1, 1))]
        stages = (stage + extra for stage in unitary_generator_stages(spec))
        meta["field"] = big
    else:
        gens = transvection_generators(n, spec)
        if kind in ("GL", "PGL"):
            gens.append(Mat.diag(spec, (spec.primitive_code,) + (1,) * (n - 1)))
        if kind == "SP2":
            form = Mat.from_rows(spec, [[0, 1], [spec.neg_l[1], 0]])
            if any(mat_mul(mat_mul(g, form), transpose(g)) != form for g in gens):
                raise DefectError("Sp(2, q) generator does not preserve the symplectic form")
        vectors = projective_points(n, spec) if projective else nonzero_vectors(n, spec)
        domain = VectorDomain(vectors, spec, projective)
        stages = iter([gens])
        meta["field"] = spec

    for gens in stages:
        G = close_matrix_group(gens, domain, cap=cap, name=name, meta=meta)
        if G.order == expected:
            return G
        log(f"⚠️ {name}: generator set closed to order {G.order}, expected {expected}; widening")
    raise DefectError(f"{name}: closure never reached the classical order {expected}")


def handle_matrix(G: GroupHandle, i: int) -> Mat:
    """Matrix of element i of a group built by ``build_matrix_group``."""
    spec = G.meta["field"]
    n = G.meta["n"]
    return Mat(n, spec, G.key(i))


def find_symmetric_singer(n: int, spec: FieldSpec) -> Optional[Mat]:
    """First symmetric matrix (upper-triangle entries in lexicographic order) of order q^n - 1."""
    q = spec.q
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    r = np.arange(q ** len(slots), dtype=np.int64)
    digits = (r[:, None] // (q ** np.arange(len(slots), dtype=np.int64))) % q
    mats = np.zeros((len(r), n, n), dtype=np.int64)
    for t, (i, j) in enumerate(slots):
        mats[:, i, j] = digits[:, t]
        mats[:, j, i] = digits[:, t]
    mats = mats[batch_det(mats, spec) != 0]
    big = q ** n - 1
    ident = np.eye(n, dtype=np.int64)
    ok = (batch_mat_pow(mats, big, spec) == ident).all(axis=(1, 2))
    for rr in prime_factors(big):
        ok &= ~(batch_mat_pow(mats, big // rr, spec) == ident).all(axis=(1, 2))
    hits = np.flatnonzero(ok)
    return Mat.from_array(spec, mats[hits[0]]) if hits.size else None


# ---------------------------------------------------------------------------
# Semilinear elements and the Singer scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemilinearElem:
    mat: Mat
    frob: int

    def __post_init__(self):
        object.__setattr__(self, "frob", self.frob % self.mat.spec.k)

    def compose(self, other: "SemilinearElem") -> "SemilinearElem":
        """self first, then other."""
        return SemilinearElem(mat_mul(frobenius_mat(self.mat, other.frob), other.mat), self.frob + other.frob)

    def inverse(self) -> "SemilinearElem":
        j = (-self.frob) % self.mat.spec.k
        return SemilinearElem(mat_inv(frobenius_mat(self.mat, j)), j)

    def act(self, v: Sequence[int]) -> tuple[int, ...]:
        row = self.mat.spec.frob_tables[self.frob]
        return vec_mat([int(row[c]) for c in v], self.mat)

    def conjugate(self, x: Mat) -> Mat:
        """x^(A, i) = A^-1 x^(sigma^i) A."""
        return mat_mul(mat_mul(mat_inv(self.mat), frobenius_mat(x, self.frob)), self.mat)


def verify_singer_lemma(
    n: int,
    spec: FieldSpec,
    *,
    threads: int = 1,
    cap: Optional[int] = None,
    chunk: int = 1 << 16,
) -> LemmaReport:
    """
    Scan all of GammaL(n, q) for a with x^a = z * x^eps, x = g^gcd(n, q-1).

    Args:
        n: Dimension, at least 3.
        spec: GF(q).
        threads: Worker threads over chunks of the matrix space.
        cap: Largest |GammaL(n, q)| scanned (defaults to SETTINGS.lemma_cap).
        chunk: Matrices per work item.

    Returns:
        LemmaReport with the solution count, the Frobenius parts seen and
        every solution that is not a power of g with trivial twist.

    Raises:
        UsageError: n < 3.
        CapExceededError: |GammaL(n, q)| exceeds the cap.
    """
    if n < 3:
        raise UsageError("the Singer scan needs n >= 3")
    q, k = spec.q, spec.k
    total = classical_order("GL", n, q) * k
    cap = SETTINGS.lemma_cap if cap is None else cap
    if total > cap:
        raise CapExceededError(f"GammaL({n},{q})", total, cap)
    singer = singer_cycle(n, spec)
    x = singer.x
    lefts = [frobenius_mat(x, i).as_array() for i in range(k)]
    rights = {1: x.as_array(), -1: mat_inv(x).as_array()}
    powers = set()
    cur = Mat.identity(n, spec)
    for _ in range(singer.order_g):
        powers.add(cur.entries)
        cur = mat_mul(cur, singer.g)
    nn = n * n
    space = q ** nn
    place = q ** np.arange(nn, dtype=np.int64)
    mul, inv = spec.mul_table, spec.inv_table

    def scan(start: int) -> tuple[int, list[tuple[tuple[int, ...], int, int, int]]]:
        r = np.arange(start, min(start + chunk, space), dtype=np.int64)
        a = ((r[:, None] // place) % q).reshape(-1, n, n)
        a = a[batch_det(a, spec) != 0]
        found = []
        for i in range(k):
            lhs = batch_mat_mul(lefts[i], a, spec).reshape(-1, nn)
            for eps in (1, -1):
                rhs = batch_mat_mul(a, rights[eps], spec).reshape(-1, nn)
                rows = np.arange(rhs.shape[0])
                pos = np.argmax(rhs != 0, axis=1)
                z = mul[lhs[rows, pos], inv[rhs[rows, pos]]]
                ok = (mul[z[:, None], rhs] == lhs).all(axis=1)
                for t in np.flatnonzero(ok):
                    found.append((tuple(int(c) for c in a[t].ravel()), i, eps, int(z[t])))
        return a.shape[0] * k, found

    log(f"🔍 Scanning GammaL({n},{q}): {total} semilinear maps")
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(scan, range(0, space, chunk)))

    scanned = sum(s for s, _ in results)
    if scanned != total:
        raise DefectError(f"scanned {scanned} semilinear maps, expected {total}")
    solutions: dict[tuple[tuple[int, ...], int], tuple[int, int]] = {}
    for _, found in results:
        for entries, i, eps, z in found:
            solutions.setdefault((entries, i), (z, eps))
    counterexamples = [
        LemmaCounterexample(matrix=list(entries), frobenius=i, z=z, epsilon=eps)
        for (entries, i), (z, eps) in sorted(solutions.items())
        if z != 1 or eps != 1 or i != 0 or entries not in powers
    ]
    return LemmaReport(
        n=n,
        q=q,
        scanned=scanned,
        solutions=len(solutions),
        expected_solutions=singer.order_g,
        all_in_singer=not counterexamples,
        frobenius_parts=sorted({i for (_, i) in solutions}),
        counterexamples=counterexamples,
    )
