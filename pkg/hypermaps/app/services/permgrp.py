"""
Group Engine Service

A uniform element-indexed engine for a finite group given by generators and a
multiplication rule. Elements are numbered by breadth-first discovery from the
identity (index 0); every element remembers the generator that discovered it,
so each index has a generator word.

Two backends share one interface:
- permutation groups (``close_permutations``): elements are rows of a numpy
  array and all bulk work (closure, right-multiplication columns, conjugation,
  centralizers, orders) is vectorized; rows are located by a hashed index.
- generic groups (``close_generators``): elements are arbitrary hashable keys
  and a Python multiplication rule.

Products read left to right: ``mul(a, b)`` is "a then b". Permutations are
0-based image tuples acting on the right, so (a*b)[i] = b[a[i]], and
conjugation is x^a = a^-1 x a.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Any, Callable, Hashable, Iterable, Optional, Sequence

import numpy as np

from hypermaps.app.errors import CapExceededError, DefectError, UsageError
from hypermaps.app.models import GroupSummary
from hypermaps.config.settings import SETTINGS

_HASH_SEED = 0x5EED_2017
_LRU_COLUMNS = 256


def _row_dtype(degree: int):
    return np.int16 if degree < 2 ** 15 else np.int32


class RowIndex:
    """Hashed lookup of integer rows; ``lookup`` returns -1 for unknown rows."""

    def __init__(self, rows: np.ndarray):
        self.rows = rows
        rng = np.random.default_rng(_HASH_SEED + rows.shape[1])
        self._weights = rng.integers(1, 2 ** 62, size=rows.shape[1], dtype=np.uint64) * np.uint64(2) + np.uint64(1)
        hashes = self.hash(rows)
        self._order = np.argsort(hashes, kind="stable")
        self._sorted = hashes[self._order]
        if len(hashes) > 1 and bool((self._sorted[1:] == self._sorted[:-1]).any()):
            raise DefectError("row hash collision in group index")

    def hash(self, rows: np.ndarray) -> np.ndarray:
        r = np.asarray(rows).astype(np.uint64) + np.uint64(1)
        return (r * self._weights).sum(axis=-1, dtype=np.uint64)

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        rows = np.atleast_2d(rows)
        h = self.hash(rows)
        pos = np.minimum(np.searchsorted(self._sorted, h), len(self._sorted) - 1)
        cand = self._order[pos]
        ok = (self._sorted[pos] == h) & (self.rows[cand] == rows).all(axis=1)
        return np.where(ok, cand, -1).astype(np.int64)


@dataclass(frozen=True)
class ConjClass:
    rep: int
    members: np.ndarray
    element_order: int

    @property
    def size(self) -> int:
        return int(self.members.size)


class GroupHandle:
    """A fully enumerated finite group. Immutable apart from internal memo caches."""

    def __init__(
        self,
        name: str,
        parent: np.ndarray,
        via: np.ndarray,
        gens: list[int],
        *,
        perms: Optional[np.ndarray] = None,
        keys: Optional[list[Hashable]] = None,
        mul_rule: Optional[Callable[[Any, Any], Any]] = None,
        inv_rule: Optional[Callable[[Any], Any]] = None,
        meta: Optional[dict] = None,
    ):
        self.name = name
        self._parent = parent
        self._via = via
        self.gens = list(gens)
        self.id_index = 0
        self.perms = perms
        self._keys = keys
        self._mul_rule = mul_rule
        self._inv_rule = inv_rule
        self.meta = dict(meta or {})
        self.keys_array: Optional[np.ndarray] = None
        self._key_index: Optional[RowIndex] = None
        self._lock = threading.Lock()
        self._right_cols: "OrderedDict[int, np.ndarray]" = OrderedDict()
        self._left_cols: "OrderedDict[int, np.ndarray]" = OrderedDict()
        if perms is not None:
            self._index = RowIndex(perms)
            self._key_to_index = None
        else:
            self._index = None
            self._key_to_index = {k: i for i, k in enumerate(keys)}

    # ------------------------------------------------------------------
    # Basic access
    # ------------------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self._parent)

    def __len__(self) -> int:
        return self.order

    @property
    def degree(self) -> int:
        return 0 if self.perms is None else self.perms.shape[1]

    @property
    def is_permutation_group(self) -> bool:
        return self.perms is not None

    def attach_keys(self, keys_array: np.ndarray) -> None:
        """Attach canonical element keys (one row per element) for ``key`` / ``index_of``."""
        self.keys_array = keys_array
        self._key_index = RowIndex(keys_array)

    def key(self, i: int) -> tuple:
        if self.keys_array is not None:
            return tuple(int(v) for v in self.keys_array[i])
        if self.perms is not None:
            return tuple(int(v) for v in self.perms[i])
        return self._keys[i]

    def index_of(self, key: Hashable) -> int:
        """Index of an element key; -1 if the key is not in the group."""
        if self._key_index is not None:
            return int(self._key_index.lookup(np.asarray(key))[0])
        if self.perms is not None:
            return int(self._index.lookup(np.asarray(key))[0])
        return self._key_to_index.get(key, -1)

    def lookup_perms(self, rows: np.ndarray) -> np.ndarray:
        if self.perms is None:
            raise UsageError(f"{self.name} has no permutation representation")
        return self._index.lookup(rows)

    # ------------------------------------------------------------------
    # Multiplication
    # ------------------------------------------------------------------
    def mul(self, i: int, j: int) -> int:
        col = self._right_cols.get(j)
        if col is not None:
            return int(col[i])
        if self.perms is not None:
            row = self.perms[j][self.perms[i]]
            return int(self._index.lookup(row)[0])
        return self._key_to_index[self._mul_rule(self._keys[i], self._keys[j])]

    def mul_many(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.perms is not None:
            rows = np.take_along_axis(self.perms[b], self.perms[a].astype(np.int64), axis=1)
            return self._index.lookup(rows)
        return np.array([self.mul(int(x), int(y)) for x, y in zip(a, b)], dtype=np.int64)

    def _cached_column(self, cache: OrderedDict, g: int, build: Callable[[], np.ndarray]) -> np.ndarray:
        col = cache.get(g)
        if col is not None:
            return col
        col = build().astype(np.int32)
        with self._lock:
            cache[g] = col
            if self.order > SETTINGS.table_cap and len(cache) > _LRU_COLUMNS:
                cache.popitem(last=False)
        return col

    def right_mul_column(self, g: int) -> np.ndarray:
        """Column c with c[i] = index of i*g."""
        def build() -> np.ndarray:
            if self.perms is not None:
                return self._index.lookup(self.perms[g][self.perms])
            gk = self._keys[g]
            return np.array([self._key_to_index[self._mul_rule(k, gk)] for k in self._keys], dtype=np.int64)
        return self._cached_column(self._right_cols, g, build)

    def left_mul_column(self, g: int) -> np.ndarray:
        """Column c with c[i] = index of g*i."""
        def build() -> np.ndarray:
            if self.perms is not None:
                return self._index.lookup(self.perms[:, self.perms[g]])
            gk = self._keys[g]
            return np.array([self._key_to_index[self._mul_rule(gk, k)] for k in self._keys], dtype=np.int64)
        return self._cached_column(self._left_cols, g, build)

    @cached_property
    def inverses(self) -> np.ndarray:
        if self.perms is not None:
            return self._index.lookup(np.argsort(self.perms, axis=1))
        if self._inv_rule is not None:
            return np.array([self._key_to_index[self._inv_rule(k)] for k in self._keys], dtype=np.int64)
        out = np.empty(self.order, dtype=np.int64)
        for i in range(self.order):
            prev, cur = self.id_index, i
            while cur != self.id_index:
                prev, cur = cur, self.mul(cur, i)
            out[i] = prev
        return out

    def inverse_of(self, i: int) -> int:
        return int(self.inverses[i])

    def power(self, i: int, e: int) -> int:
        if e < 0:
            i, e = self.inverse_of(i), -e
        result, base = self.id_index, i
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    # ------------------------------------------------------------------
    # Orders
    # ------------------------------------------------------------------
    @cached_property
    def orders(self) -> np.ndarray:
        out = np.zeros(self.order, dtype=np.int64)
        if self.perms is not None:
            ident = np.arange(self.degree)
            active = np.arange(self.order)
            cur = self.perms.copy()
            m = 1
            while active.size:
                done = (cur == ident).all(axis=1)
                out[active[done]] = m
                active = active[~done]
                cur = np.take_along_axis(self.perms[active], cur[~done], axis=1)
                m += 1
            return out
        for i in range(self.order):
            m, cur = 1, i
            while cur != self.id_index:
                cur = self.mul(cur, i)
                m += 1
            out[i] = m
        return out

    def order_of(self, i: int) -> int:
        return int(self.orders[i])

    def elements_of_order(self, m: int) -> np.ndarray:
        return np.flatnonzero(self.orders == m)

    # ------------------------------------------------------------------
    # Conjugation
    # ------------------------------------------------------------------
    def conjugate(self, x: int, a: int) -> int:
        """x^a = a^-1 x a."""
        return self.mul(self.mul(self.inverse_of(a), x), a)

    def conjugation_map(self, a: int) -> np.ndarray:
        """Array m with m[x] = index of x^a, for every x."""
        if self.perms is not None:
            a_row = self.perms[a].astype(np.int64)
            a_inv = np.argsort(a_row)
            rows = a_row[self.perms[:, a_inv]]
            return self._index.lookup(rows)
        ai = self.inverse_of(a)
        return np.array([self.mul(self.mul(ai, x), a) for x in range(self.order)], dtype=np.int64)

    def _conjugate_rows(self, x: int) -> np.ndarray:
        rows = np.empty_like(self.perms)
        np.put_along_axis(rows, self.perms, self.perms[:, self.perms[x]], axis=1)
        return rows

    def conjugates_of(self, x: int) -> np.ndarray:
        """Array c with c[a] = index of x^a, for every a."""
        if self.perms is not None:
            return self._index.lookup(self._conjugate_rows(x))
        return np.array([self.conjugate(x, a) for a in range(self.order)], dtype=np.int64)

    def centralizer(self, x: int) -> np.ndarray:
        if self.perms is not None:
            return np.flatnonzero((self._conjugate_rows(x) == self.perms[x]).all(axis=1))
        return np.array([a for a in range(self.order) if self.mul(a, x) == self.mul(x, a)], dtype=np.int64)

    @cached_property
    def class_labels(self) -> np.ndarray:
        """Label of each element: the least index in its conjugacy class."""
        maps = [self.conjugation_map(g) for g in dict.fromkeys(self.gens)]
        return orbit_labels(self.order, maps)

    @cached_property
    def _classes(self) -> list[ConjClass]:
        labels = self.class_labels
        order = np.argsort(labels, kind="stable")
        reps, starts = np.unique(labels[order], return_index=True)
        bounds = list(starts) + [len(order)]
        return [
            ConjClass(int(r), np.sort(order[bounds[t]:bounds[t + 1]]), self.order_of(int(r)))
            for t, r in enumerate(reps)
        ]

    def conjugacy_classes(self) -> list[ConjClass]:
        return list(self._classes)

    @cached_property
    def class_sizes(self) -> np.ndarray:
        """class_sizes[i] is the size of the conjugacy class of i."""
        return np.bincount(self.class_labels, minlength=self.order)[self.class_labels]

    # ------------------------------------------------------------------
    # Subgroups
    # ------------------------------------------------------------------
    def _closure_mask(self, indices: Iterable[int], stop_at_full: bool) -> np.ndarray:
        cols = [self.right_mul_column(int(i)) for i in dict.fromkeys(indices)]
        seen = np.zeros(self.order, dtype=bool)
        seen[self.id_index] = True
        count = 1
        frontier = np.array([self.id_index], dtype=np.int64)
        while frontier.size and cols:
            nxt = np.concatenate([c[frontier] for c in cols])
            nxt = np.unique(nxt[~seen[nxt]])
            seen[nxt] = True
            count += nxt.size
            if stop_at_full and count == self.order:
                break
            frontier = nxt
        return seen

    def generates(self, *indices: int) -> bool:
        return bool(self._closure_mask(indices, stop_at_full=True).all())

    def subgroup_generated(self, indices: Iterable[int]) -> np.ndarray:
        return np.flatnonzero(self._closure_mask(indices, stop_at_full=False))

    def is_closed(self, indices: Sequence[int]) -> bool:
        members = np.unique(np.asarray(indices, dtype=np.int64))
        if members.size == 0 or self.id_index not in members:
            return False
        mask = np.zeros(self.order, dtype=bool)
        mask[members] = True
        return all(bool(mask[self.right_mul_column(int(g))[members]].all()) for g in members)

    def find_generating_pair(self, seed: int = SETTINGS.seed, attempts: int = 20_000) -> tuple[int, int]:
        rng = np.random.default_rng(seed)
        for _ in range(attempts):
            i, j = (int(v) for v in rng.integers(0, self.order, size=2))
            if self.generates(i, j):
                return i, j
        raise UsageError(f"no generating pair of {self.name} found in {attempts} random draws")

    # ------------------------------------------------------------------
    # Words
    # ------------------------------------------------------------------
    @cached_property
    def depth(self) -> np.ndarray:
        depth = np.zeros(self.order, dtype=np.int64)
        for i in range(1, self.order):
            depth[i] = depth[self._parent[i]] + 1
        return depth

    @property
    def parent(self) -> np.ndarray:
        return self._parent

    @property
    def via(self) -> np.ndarray:
        return self._via

    def word(self, i: int) -> list[int]:
        """Generator positions whose left-to-right product is element i."""
        out = []
        while i != self.id_index:
            out.append(int(self._via[i]))
            i = int(self._parent[i])
        return out[::-1]

    def evaluate_word(self, word: Sequence[int]) -> int:
        idx = self.id_index
        for pos in word:
            idx = self.mul(idx, self.gens[pos])
        return idx

    def summary(self) -> GroupSummary:
        classes = self._classes
        return GroupSummary(
            name=self.name,
            order=self.order,
            n_classes=len(classes),
            class_sizes=sorted(c.size for c in classes),
            generator_orders=[self.order_of(g) for g in self.gens],
        )


def orbit_labels(n: int, maps: Sequence[np.ndarray]) -> np.ndarray:
    """
    Least point of each orbit of the group generated by the index maps.

    Args:
        n: Number of points.
        maps: Permutations of range(n) as index arrays.

    Returns:
        labels[i] is the smallest point in the orbit of i.
    """
    labels = np.arange(n, dtype=np.int64)
    while True:
        before = labels.copy()
        for m in maps:
            np.minimum.at(labels, m, labels)
            labels = np.minimum(labels, labels[m])
        labels = labels[labels]
        if np.array_equal(before, labels):
            return labels


# ----------------------------------------------------------------------
# Closures
# ----------------------------------------------------------------------

def close_generators(
    gen_keys: Sequence[Hashable],
    mul_rule: Callable[[Any, Any], Any],
    cap: Optional[int] = None,
    *,
    identity: Hashable,
    inv_rule: Optional[Callable[[Any], Any]] = None,
    name: str = "G",
    meta: Optional[dict] = None,
) -> GroupHandle:
    """
    Breadth-first closure of arbitrary keys under a multiplication rule.

    Args:
        gen_keys: Hashable generator keys.
        mul_rule: Product of two keys, read left to right.
        cap: Largest order enumerated (defaults to SETTINGS.enum_cap).
        identity: Key of the identity; it gets index 0.
        inv_rule: Optional inverse of a key, used by ``inverses``.
        name: Group name for logs and errors.
        meta: Extra metadata stored on the handle.

    Returns:
        GroupHandle over the keys with the breadth-first word tree.

    Raises:
        UsageError: No generators were given.
        CapExceededError: The closure grows past the cap.
    """
    if not gen_keys:
        raise UsageError("at least one generator is required")
    cap = SETTINGS.enum_cap if cap is None else cap
    keys = [identity]
    index = {identity: 0}
    parent, via = [-1], [-1]
    head = 0
    while head < len(keys):
        cur = keys[head]
        for pos, g in enumerate(gen_keys):
            nxt = mul_rule(cur, g)
            if nxt not in index:
                index[nxt] = len(keys)
                keys.append(nxt)
                parent.append(head)
                via.append(pos)
                if len(keys) > cap:
                    raise CapExceededError(f"closure of {name}", len(keys), cap)
        head += 1
    gens = [index[g] for g in gen_keys]
    return GroupHandle(
        name, np.array(parent, dtype=np.int64), np.array(via, dtype=np.int64), gens,
        keys=keys, mul_rule=mul_rule, inv_rule=inv_rule, meta=meta,
    )


def close_permutations(
    gen_perms: Sequence[Sequence[int]],
    cap: Optional[int] = None,
    *,
    name: str = "G",
    meta: Optional[dict] = None,
) -> GroupHandle:
    """
    Level-by-level vectorized closure of permutations given as image rows.

    Rows are deduplicated by hash and every hash hit is confirmed by
    comparing the rows themselves.

    Args:
        gen_perms: Generators as rows of images of 0..degree-1.
        cap: Largest order enumerated (defaults to SETTINGS.enum_cap).
        name: Group name for logs and errors.
        meta: Extra metadata stored on the handle.

    Returns:
        GroupHandle with identity at index 0 and rows in breadth-first order.

    Raises:
        UsageError: A generator is not a permutation.
        CapExceededError: The closure grows past the cap.
        DefectError: Two distinct rows share a hash.
    """
    gens = np.atleast_2d(np.asarray(gen_perms, dtype=np.int64))
    if gens.size == 0:
        raise UsageError("at least one generator is required")
    degree = gens.shape[1]
    if not (np.sort(gens, axis=1) == np.arange(degree)).all():
        raise UsageError("generators must be permutations of 0..degree-1")
    cap = SETTINGS.enum_cap if cap is None else cap
    dtype = _row_dtype(degree)
    gens_small = gens.astype(dtype)
    hasher = RowIndex(np.arange(degree, dtype=dtype)[None, :])
    identity = np.arange(degree, dtype=dtype)

    store = np.empty((1024, degree), dtype=dtype)
    store[0] = identity
    parents = [np.array([-1])]
    vias = [np.array([-1])]
    seen = {int(hasher.hash(identity[None, :])[0]): 0}
    frontier = identity[None, :]
    frontier_idx = np.array([0])
    total = 1
    ngen = gens.shape[0]
    while frontier.shape[0]:
        cand = gens_small[:, frontier].transpose(1, 0, 2).reshape(-1, degree)
        hashes = hasher.hash(cand)
        uniq, first, inverse = np.unique(hashes, return_index=True, return_inverse=True)
        if (cand != cand[first[inverse.ravel()]]).any():
            raise DefectError(f"row hash collision in closure of {name}")
        by_position = np.argsort(first)
        uniq, first = uniq[by_position], first[by_position]
        known = np.array([seen.get(h, -1) for h in uniq.tolist()], dtype=np.int64)
        hit = known >= 0
        if (store[known[hit]] != cand[first[hit]]).any():
            raise DefectError(f"row hash collision in closure of {name}")
        keep = first[~hit]
        if not keep.size:
            break
        for offset, h in enumerate(uniq[~hit].tolist()):
            seen[h] = total + offset
        new_rows = cand[keep]
        if total + keep.size > store.shape[0]:
            grown = np.empty((max(2 * store.shape[0], total + keep.size), degree), dtype=dtype)
            grown[:total] = store[:total]
            store = grown
        store[total:total + keep.size] = new_rows
        parents.append(frontier_idx[keep // ngen])
        vias.append(keep % ngen)
        frontier_idx = np.arange(total, total + keep.size)
        total += int(keep.size)
        if total > cap:
            raise CapExceededError(f"closure of {name}", total, cap)
        frontier = new_rows

    perms = store[:total].copy()
    handle = GroupHandle(
        name,
        np.concatenate(parents).astype(np.int64),
        np.concatenate(vias).astype(np.int64),
        [],
        perms=perms,
        meta=meta,
    )
    positions = handle.lookup_perms(gens.astype(dtype))
    if (positions < 0).any():
        raise DefectError(f"closure of {name} is inconsistent (hash collision)")
    handle.gens = [int(p) for p in positions]
    return handle


def cyclic_subgroup_labels(G: GroupHandle, elems: np.ndarray) -> np.ndarray:
    """For each element, the least index of a non-identity element of the cyclic group it generates."""
    elems = np.asarray(elems, dtype=np.int64)
    labels = elems.copy()
    cur = elems.copy()
    for _ in range(int(G.orders[elems].max(initial=1)) if elems.size else 0):
        cur = G.mul_many(cur, elems)
        labels = np.where(cur != G.id_index, np.minimum(labels, cur), labels)
    return labels


def lcm_of_orders(G: GroupHandle) -> int:
    """Exponent of G."""
    exponent = 1
    for m in np.unique(G.orders):
        exponent = exponent * int(m) // gcd(exponent, int(m))
    return exponent
