"""
Finite Field Service

Exact arithmetic in GF(p^k) in a polynomial basis. An element is a coefficient
vector over GF(p), constant term first. Every element also has an integer code
sum(c_i * p**i); the matrix kernels work on codes and gather from the cached
addition / multiplication / negation / inversion / Frobenius tables, which are
themselves built from the polynomial arithmetic below.

Moduli are chosen deterministically: for k = 1 the modulus is T - g with g the
least primitive root mod p, for k >= 2 it is the lexicographically least
primitive polynomial (coefficients read from the constant term up).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Sequence

import numpy as np
from sympy import factorint, isprime
from sympy.ntheory import primitive_root

from hypermaps.app.errors import FieldError, UsageError


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of n in increasing order."""
    return sorted(factorint(n)) if n > 1 else []


# ---------------------------------------------------------------------------
# Polynomial arithmetic over GF(p) on plain coefficient lists
# ---------------------------------------------------------------------------

def _reduce(coeffs: list[int], modulus: Sequence[int], p: int) -> list[int]:
    k = len(modulus) - 1
    out = [c % p for c in coeffs]
    for d in range(len(out) - 1, k - 1, -1):
        c = out[d]
        if c:
            for t in range(k + 1):
                out[d - k + t] = (out[d - k + t] - c * modulus[t]) % p
    out = out[:k] + [0] * max(0, k - len(out))
    return out


def _mulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> list[int]:
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _reduce(prod, modulus, p)


def _powmod(a: Sequence[int], e: int, modulus: Sequence[int], p: int) -> list[int]:
    k = len(modulus) - 1
    result = [1] + [0] * (k - 1)
    base = list(a)
    while e > 0:
        if e & 1:
            result = _mulmod(result, base, modulus, p)
        base = _mulmod(base, base, modulus, p)
        e >>= 1
    return result


def _root_coeffs(modulus: Sequence[int], p: int) -> list[int]:
    """Residue of T modulo the modulus."""
    k = len(modulus) - 1
    if k == 1:
        return [(-modulus[0]) % p]
    return [0, 1] + [0] * (k - 2)


def _is_primitive(modulus: Sequence[int], p: int) -> bool:
    k = len(modulus) - 1
    if modulus[0] % p == 0 and k > 1:
        return False
    q = p ** k
    t = _root_coeffs(modulus, p)
    one = [1] + [0] * (k - 1)
    if _powmod(t, q - 1, modulus, p) != one:
        return False
    return all(_powmod(t, (q - 1) // r, modulus, p) != one for r in prime_factors(q - 1))


# ---------------------------------------------------------------------------
# Field specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """GF(p^k) presented as GF(p)[T] / (modulus), modulus monic and primitive."""

    p: int
    k: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not isprime(self.p):
            raise UsageError(f"characteristic {self.p} is not prime")
        if self.k < 1:
            raise UsageError(f"extension degree must be >= 1, got {self.k}")
        if len(self.modulus) != self.k + 1 or self.modulus[-1] != 1:
            raise UsageError(f"modulus {self.modulus} is not monic of degree {self.k}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise UsageError(f"modulus coefficients must lie in [0, {self.p})")
        if not _is_primitive(self.modulus, self.p):
            raise UsageError(f"modulus {self.modulus} is not primitive over GF({self.p})")

    @cached_property
    def q(self) -> int:
        return self.p ** self.k

    def __str__(self) -> str:
        return f"GF({self.q})"

    # --- codes ---------------------------------------------------------
    def coeffs_of(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            code, r = divmod(code, self.p)
            out.append(r)
        return tuple(out)

    def code_of(self, coeffs: Sequence[int]) -> int:
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + c % self.p
        return code

    def from_int(self, n: int) -> int:
        """Code of the prime-field element n mod p."""
        return n % self.p

    @cached_property
    def primitive_code(self) -> int:
        """Code of the residue of T, a generator of the multiplicative group."""
        return self.code_of(_root_coeffs(self.modulus, self.p))

    # --- tables --------------------------------------------------------
    @cached_property
    def digits(self) -> np.ndarray:
        return np.array([self.coeffs_of(c) for c in range(self.q)], dtype=np.int64).reshape(self.q, self.k)

    @cached_property
    def exp_table(self) -> np.ndarray:
        """exp_table[i] is the code of t**i for 0 <= i < q-1."""
        t = _root_coeffs(self.modulus, self.p)
        cur = [1] + [0] * (self.k - 1)
        out = []
        for _ in range(self.q - 1):
            out.append(self.code_of(cur))
            cur = _mulmod(cur, t, self.modulus, self.p)
        return np.array(out, dtype=np.int64)

    @cached_property
    def log_table(self) -> np.ndarray:
        log = np.full(self.q, -1, dtype=np.int64)
        log[self.exp_table] = np.arange(self.q - 1)
        return log

    @cached_property
    def add_table(self) -> np.ndarray:
        d = self.digits
        s = (d[:, None, :] + d[None, :, :]) % self.p
        return s @ (self.p ** np.arange(self.k, dtype=np.int64))

    @cached_property
    def mul_table(self) -> np.ndarray:
        log, exp = self.log_table, self.exp_table
        table = exp[(log[:, None] + log[None, :]) % (self.q - 1)]
        table[0, :] = 0
        table[:, 0] = 0
        return table

    @cached_property
    def neg_table(self) -> np.ndarray:
        return ((-self.digits) % self.p) @ (self.p ** np.arange(self.k, dtype=np.int64))

    @cached_property
    def inv_table(self) -> np.ndarray:
        """inv_table[0] is 0; callers reject zero before gathering."""
        inv = np.zeros(self.q, dtype=np.int64)
        inv[1:] = self.exp_table[(-self.log_table[1:]) % (self.q - 1)]
        return inv

    @cached_property
    def frob_tables(self) -> np.ndarray:
        """frob_tables[i][a] is the code of a**(p**i)."""
        rows = []
        for i in range(self.k):
            row = np.zeros(self.q, dtype=np.int64)
            row[1:] = self.exp_table[(self.log_table[1:] * self.p ** i) % (self.q - 1)]
            rows.append(row)
        return np.stack(rows)

    # Nested-list views for scalar hot loops (list indexing beats numpy scalars)
    @cached_property
    def add_l(self) -> list[list[int]]:
        return self.add_table.tolist()

    @cached_property
    def mul_l(self) -> list[list[int]]:
        return self.mul_table.tolist()

    @cached_property
    def neg_l(self) -> list[int]:
        return self.neg_table.tolist()

    @cached_property
    def inv_l(self) -> list[int]:
        return self.inv_table.tolist()

    def pow_code(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise FieldError("zero has no inverse")
            return 1 if e == 0 else 0
        return int(self.exp_table[(int(self.log_table[a]) * e) % (self.q - 1)])

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "modulus": list(self.modulus)}


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.spec.k or any(not 0 <= c < self.spec.p for c in self.coeffs):
            raise FieldError(f"{self.coeffs} is not a coefficient vector of {self.spec}")

    @classmethod
    def from_code(cls, spec: FieldSpec, code: int) -> "FieldElement":
        return cls(spec, spec.coeffs_of(code))

    @classmethod
    def t(cls, spec: FieldSpec) -> "FieldElement":
        return cls.from_code(spec, spec.primitive_code)

    @property
    def code(self) -> int:
        return self.spec.code_of(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return fe_add(self, other)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return fe_add(self, fe_neg(other))

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return fe_mul(self, other)

    def __neg__(self) -> "FieldElement":
        return fe_neg(self)

    def __pow__(self, e: int) -> "FieldElement":
        return fe_pow(self, e)

    def inverse(self) -> "FieldElement":
        return fe_inv(self)

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            coef = str(c) if (c != 1 or i == 0) else ""
            terms.append(f"{coef}{mono}")
        return "+".join(reversed(terms)) or "0"


def _same_field(a: FieldElement, b: FieldElement) -> FieldSpec:
    if a.spec != b.spec:
        raise FieldError(f"operands live in different fields: {a.spec} vs {b.spec}")
    return a.spec


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    """Sum of two elements of the same field."""
    spec = _same_field(a, b)
    return FieldElement(spec, tuple((x + y) % spec.p for x, y in zip(a.coeffs, b.coeffs)))


def fe_neg(a: FieldElement) -> FieldElement:
    return FieldElement(a.spec, tuple((-x) % a.spec.p for x in a.coeffs))


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = _same_field(a, b)
    return FieldElement(spec, tuple(_mulmod(a.coeffs, b.coeffs, spec.modulus, spec.p)))


def fe_pow(a: FieldElement, e: int) -> FieldElement:
    """a ** e by square and multiply; negative e goes through the inverse."""
    spec = a.spec
    if e < 0:
        return fe_pow(fe_inv(a), -e)
    return FieldElement(spec, tuple(_powmod(a.coeffs, e, spec.modulus, spec.p)))


def fe_inv(a: FieldElement) -> FieldElement:
    """
    Multiplicative inverse as a ** (q - 2).

    Raises:
        FieldError: a is zero.
    """
    if a.is_zero():
        raise FieldError(f"zero has no inverse in {a.spec}")
    return fe_pow(a, a.spec.q - 2)


def frobenius(a: FieldElement, i: int) -> FieldElement:
    """a ** (p ** i); the exponent is taken mod k."""
    return fe_pow(a, a.spec.p ** (i % a.spec.k))


def element_order(a: FieldElement) -> int:
    """
    Multiplicative order of a nonzero element.

    Args:
        a: A nonzero element of GF(q).

    Returns:
        The least m > 0 with a ** m == 1; it divides q - 1.

    Raises:
        FieldError: a is zero.
    """
    if a.is_zero():
        raise FieldError("zero has no multiplicative order")
    one = FieldElement.from_code(a.spec, 1)
    order = a.spec.q - 1
    for r in prime_factors(order):
        while order % r == 0 and fe_pow(a, order // r) == one:
            order //= r
    return order


# ---------------------------------------------------------------------------
# Polynomials over a field (coefficients are element codes)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @classmethod
    def constant(cls, field: FieldSpec, c: int) -> "Polynomial":
        return cls(field, (c,))

    @classmethod
    def linear(cls, field: FieldSpec, root: int) -> "Polynomial":
        """T - root."""
        return cls(field, (field.neg_l[root], 1))

    def _coerce(self, other: "Polynomial") -> None:
        if other.field != self.field:
            raise FieldError("polynomials over different fields")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._coerce(other)
        add = self.field.add_l
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        a = a + (0,) * (n - len(a))
        b = b + (0,) * (n - len(b))
        return Polynomial(self.field, tuple(add[x][y] for x, y in zip(a, b)))

    def __neg__(self) -> "Polynomial":
        neg = self.field.neg_l
        return Polynomial(self.field, tuple(neg[c] for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Polynomial(self.field, ())
        add, mul = self.field.add_l, self.field.mul_l
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] = add[out[i + j]][mul[x][y]]
        return Polynomial(self.field, tuple(out))

    def scale(self, c: int) -> "Polynomial":
        mul = self.field.mul_l
        return Polynomial(self.field, tuple(mul[c][x] for x in self.coeffs))

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        self._coerce(other)
        if other.is_zero():
            raise FieldError("polynomial division by zero")
        add, mul, neg, inv = self.field.add_l, self.field.mul_l, self.field.neg_l, self.field.inv_l
        rem = list(self.coeffs)
        dq = other.degree
        lead_inv = inv[other.coeffs[-1]]
        quot = [0] * max(0, len(rem) - dq)
        for d in range(len(rem) - 1, dq - 1, -1):
            c = rem[d]
            if c == 0:
                continue
            factor = mul[c][lead_inv]
            quot[d - dq] = factor
            for t, y in enumerate(other.coeffs):
                rem[d - dq + t] = add[rem[d - dq + t]][neg[mul[factor][y]]]
        return Polynomial(self.field, tuple(quot)), Polynomial(self.field, tuple(rem[:dq]))

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def __call__(self, x: int) -> int:
        """Horner evaluation at the element with code x."""
        add, mul = self.field.add_l, self.field.mul_l
        acc = 0
        for c in reversed(self.coeffs):
            acc = add[mul[acc][x]][c]
        return acc

    def roots(self) -> list[int]:
        return [x for x in range(self.field.q) if self(x) == 0]

    def to_json(self) -> list[list[int]]:
        return [list(self.field.coeffs_of(c)) for c in self.coeffs]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            coef = str(FieldElement.from_code(self.field, c))
            if i == 0:
                terms.append(coef)
            else:
                mono = "T" if i == 1 else f"T^{i}"
                terms.append(mono if c == 1 else f"({coef}){mono}")
        return " + ".join(reversed(terms))


def is_irreducible(poly: Polynomial) -> bool:
    """
    Irreducibility over the coefficient field.

    Trial division by every monic polynomial of degree <= deg/2.

    Args:
        poly: Polynomial over GF(q).

    Returns:
        False for constants, True for every linear polynomial.
    """
    n = poly.degree
    if n <= 0:
        return False
    if n == 1:
        return True
    field = poly.field
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(field.q), repeat=d):
            if (poly % Polynomial(field, tail + (1,))).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# Deterministic construction
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def prime_field(p: int) -> FieldSpec:
    """GF(p) with modulus T - g for the least primitive root g."""
    if not isprime(p):
        raise UsageError(f"characteristic {p} is not prime")
    g = primitive_root(p)
    return FieldSpec(p, 1, ((-g) % p, 1))


def find_modulus(p: int, k: int) -> Polynomial:
    """
    Least primitive monic polynomial of degree k over GF(p).

    Candidates are scanned with coefficient tuples in lexicographic order,
    so the choice is deterministic.

    Args:
        p: Characteristic, a prime.
        k: Extension degree, at least 1.

    Returns:
        Polynomial over GF(p) whose root generates GF(p^k)*.

    Raises:
        UsageError: p is not prime or k < 1.
    """
    if not isprime(p):
        raise UsageError(f"characteristic {p} is not prime")
    if k < 1:
        raise UsageError(f"extension degree must be >= 1, got {k}")
    base = prime_field(p)
    if k == 1:
        return Polynomial(base, base.modulus)
    for tail in itertools.product(range(p), repeat=k):
        if tail[0] == 0:
            continue
        candidate = tail + (1,)
        if _is_primitive(candidate, p):
            return Polynomial(base, candidate)
    raise FieldError(f"no primitive polynomial of degree {k} over GF({p})")


@lru_cache(maxsize=None)
def build_field(p: int, k: int) -> FieldSpec:
    if k == 1:
        return prime_field(p)
    return FieldSpec(p, k, find_modulus(p, k).coeffs)


def field_of_order(q: int) -> FieldSpec:
    """
    The canonical GF(q).

    Args:
        q: A prime power.

    Returns:
        Cached FieldSpec built by ``build_field``.

    Raises:
        UsageError: q is not a prime power.
    """
    if q < 2:
        raise UsageError(f"no field of order {q}")
    factors = factorint(q)
    if len(factors) != 1:
        raise UsageError(f"{q} is not a prime power")
    (p, k), = factors.items()
    return build_field(p, k)


def fixed_field(spec: FieldSpec, i: int) -> list[int]:
    """
    Codes fixed by a -> a**(p**i); for GF(q^2) with i = k/2 this is GF(q).

    Args:
        spec: The field.
        i: Frobenius power, taken mod k.

    Returns:
        Sorted codes of the subfield of order p**gcd(i, k).
    """
    row = spec.frob_tables[i % spec.k]
    return [int(c) for c in np.flatnonzero(row == np.arange(spec.q))]
