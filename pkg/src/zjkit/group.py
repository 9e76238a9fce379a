"""Explicit finite groups stored as full multiplication tables.

Elements are the integers ``0..n-1``. Products act on the right, so for
permutation input ``(x*y)`` sends a point ``i`` to ``y[x[i]]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import bitset
from .errors import ClosureCapExceeded, InternalError, InvalidPermutation

DEFAULT_CAP = 5000


@dataclass(frozen=True)
class Permutation:
    degree: int
    images: tuple[int, ...]

    def __post_init__(self):
        if self.degree < 1 or len(self.images) != self.degree:
            raise InvalidPermutation(f"expected {self.degree} images, got {len(self.images)}")
        if sorted(self.images) != list(range(self.degree)):
            raise InvalidPermutation(f"not a bijection on 0..{self.degree - 1}: {self.images}")

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(degree))
        seen = set()
        for cyc in cycles:
            for pt in cyc:
                if not 0 <= pt < degree or pt in seen:
                    raise InvalidPermutation(f"bad cycle {list(cyc)} for degree {degree}")
                seen.add(pt)
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a] = b
        return cls(degree, tuple(images))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(self.degree, tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(self.degree, tuple(inv))


class GroupTable:
    """A finite group given by its Cayley table.

    Immutable after construction. The identity is whatever element acts
    as one on the table; every builder in zjkit places it at index 0.
    Heavier derived tables (conjugation, commuting pairs) are computed on
    first use.
    """

    def __init__(self, mul: np.ndarray, label: str = "G", *, check: str = "spot",
                 names: dict[str, int] | None = None, seed: int = 0):
        mul = np.ascontiguousarray(mul)
        n = mul.shape[0]
        if mul.shape != (n, n) or n == 0:
            raise InternalError(f"multiplication table must be square, got {mul.shape}")
        dtype = np.int16 if n < 2**15 else np.int32
        self.mul = mul.astype(dtype, copy=False)
        self.mul.flags.writeable = False
        self.n = n
        self.label = label
        self.names = dict(names or {})
        self._cache: dict = {}
        self.generators: tuple[int, ...] = ()
        self.degree: int | None = None
        self.perm_images: np.ndarray | None = None

        ar = np.arange(n)
        left_id = np.flatnonzero((self.mul == ar[None, :]).all(axis=1))
        if left_id.size != 1 or not np.array_equal(self.mul[:, left_id[0]], ar):
            raise InternalError("table has no two-sided identity")
        self.id = int(left_id[0])
        rows = self.mul == self.id
        if not (rows.sum(axis=1) == 1).all():
            raise InternalError("table is not a Latin square over the identity")
        inv = rows.argmax(axis=1)
        if not (self.mul[inv, ar] == self.id).all():
            raise InternalError("left and right inverses differ")
        self.inv = inv.astype(dtype)
        self.inv.flags.writeable = False
        self.order_of = self._element_orders()
        self.order_of.flags.writeable = False

        if check == "paranoid":
            self.check_associative_exhaustive()
        elif check == "spot":
            self.check_associative_sample(seed=seed)

    def __repr__(self):
        return f"GroupTable({self.label!r}, n={self.n})"

    def __len__(self):
        return self.n

    def _element_orders(self) -> np.ndarray:
        n = self.n
        ar = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        power = ar.copy()
        k = 1
        while (orders == 0).any():
            hit = (power == self.id) & (orders == 0)
            orders[hit] = k
            power = self.mul[power, ar]
            k += 1
            if k > n + 1:
                raise InternalError("element order exceeds group order")
        return orders

    def check_associative_sample(self, samples: int = 4096, seed: int = 0) -> None:
        rng = np.random.default_rng(seed)
        a, b, c = rng.integers(0, self.n, size=(3, samples))
        lhs = self.mul[self.mul[a, b], c]
        rhs = self.mul[a, self.mul[b, c]]
        bad = np.flatnonzero(lhs != rhs)
        if bad.size:
            i = bad[0]
            raise InternalError(f"not associative at ({a[i]}, {b[i]}, {c[i]})")

    def check_associative_exhaustive(self) -> None:
        mul = self.mul
        for a in range(self.n):
            # (a*b)*c over all b, c against a*(b*c)
            lhs = mul[mul[a]]
            rhs = mul[a][mul]
            if not np.array_equal(lhs, rhs):
                b, c = np.argwhere(lhs != rhs)[0]
                raise InternalError(f"not associative at ({a}, {b}, {c})")

    # arithmetic

    def prod(self, *xs: int) -> int:
        acc = self.id
        for x in xs:
            acc = int(self.mul[acc, x])
        return acc

    def power(self, x: int, k: int) -> int:
        k %= int(self.order_of[x])
        acc = self.id
        for _ in range(k):
            acc = int(self.mul[acc, x])
        return acc

    def commutator(self, w: int, x: int, *more: int) -> int:
        """``[w, x, ...]`` nested to the left; ``[w, x] = w^-1 x^-1 w x``."""
        acc = commutator(self, w, x)
        for y in more:
            acc = commutator(self, acc, y)
        return acc

    def conjugate(self, w: int, x: int) -> int:
        return conjugate(self, w, x)

    # derived tables

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[x, w] == w^x``, one row per conjugating element."""
        ar = np.arange(self.n)
        left = self.mul[self.inv]          # left[x, w] = x^-1 w
        out = self.mul[left, ar[:, None]]  # (x^-1 w) x
        out.flags.writeable = False
        return out

    @cached_property
    def commutes(self) -> np.ndarray:
        out = self.mul == self.mul.T
        out.flags.writeable = False
        return out

    @cached_property
    def centralizer_masks(self) -> list[int]:
        return [bitset.from_bool(row) for row in self.commutes]

    def cycles(self, x: int) -> list[list[int]]:
        """Cycle notation of element ``x`` when the table came from permutations."""
        if self.perm_images is None:
            raise InternalError("group was not built from permutations")
        images = self.perm_images[x]
        seen, out = set(), []
        for start in range(len(images)):
            if start in seen or images[start] == start:
                continue
            cyc, pt = [], start
            while pt not in seen:
                seen.add(pt)
                cyc.append(int(pt))
                pt = int(images[pt])
            out.append(cyc)
        return out

    def is_abelian(self) -> bool:
        return bool(self.commutes.all())

    @property
    def all_mask(self) -> int:
        return bitset.full(self.n)


def commutator(G: GroupTable, w: int, x: int) -> int:
    mul, inv = G.mul, G.inv
    return int(mul[mul[inv[w], inv[x]], mul[w, x]])


def conjugate(G: GroupTable, w: int, x: int) -> int:
    mul = G.mul
    return int(mul[mul[G.inv[x], w], x])


def _find_base(perms: np.ndarray) -> list[int]:
    """Greedy list of points whose images already tell all elements apart."""
    n, degree = perms.shape
    base: list[int] = []
    keys = np.zeros(n, dtype=np.int64)
    for _ in range(degree):
        if np.unique(keys).size == n:
            return base
        best, best_count = None, -1
        for pt in range(degree):
            if pt in base:
                continue
            cand = np.unique(np.stack([keys, perms[:, pt]]), axis=1).shape[1]
            if cand > best_count:
                best, best_count = pt, cand
            if best_count == n:
                break
        base.append(best)
        _, keys = np.unique(perms[:, base], axis=0, return_inverse=True)
        keys = keys.reshape(-1).astype(np.int64)
    return base


def build_from_permutations(degree: int, gens: Sequence[Permutation], *, cap: int = DEFAULT_CAP,
                            label: str = "G", check: str = "spot",
                            names: dict[str, int] | None = None) -> GroupTable:
    """Close ``gens`` under composition and tabulate the resulting group.

    Elements are numbered breadth-first from the identity, applying the
    generators in the order given; ``names`` maps labels to generator
    positions and is translated to element indices.
    """
    gens = list(gens)
    for g in gens:
        if g.degree != degree:
            raise InvalidPermutation(f"generator of degree {g.degree}, expected {degree}")
    gen_arrays = [np.asarray(g.images, dtype=np.int32) for g in gens]
    ident = np.arange(degree, dtype=np.int32)
    elems = [ident]
    index = {ident.tobytes(): 0}
    gen_index = []
    head = 0
    while head < len(elems):
        x = elems[head]
        head += 1
        for g in gen_arrays:
            y = g[x]
            key = y.tobytes()
            if key not in index:
                if len(elems) >= cap:
                    raise ClosureCapExceeded(f"group generated exceeds cap {cap}")
                index[key] = len(elems)
                elems.append(y)
    for g in gen_arrays:
        gen_index.append(index[g.tobytes()])

    perms = np.stack(elems)
    n = perms.shape[0]
    base = _find_base(perms)
    radix = np.int64(degree)
    if len(base) and degree ** len(base) < 2**62:
        weights = radix ** np.arange(len(base), dtype=np.int64)
        keys = (perms[:, base].astype(np.int64) * weights).sum(axis=1)
        order = np.argsort(keys)
        sorted_keys = keys[order]
        mul = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            # images of the base under x_i * x_j, for every j at once
            imgs = perms[:, perms[i, base]]
            k = (imgs.astype(np.int64) * weights).sum(axis=1)
            mul[i] = order[np.searchsorted(sorted_keys, k)]
    else:
        mul = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            prods = perms[:, perms[i]]
            mul[i] = [index[row.tobytes()] for row in prods]
    name_idx = {k: gen_index[v] for k, v in (names or {}).items()}
    G = GroupTable(mul, label, check=check, names=name_idx)
    G.generators = tuple(gen_index)
    G.degree = degree
    G.perm_images = perms
    return G


def build_from_table(mul: Sequence[Sequence[int]] | np.ndarray, label: str = "G", *,
                     check: str = "spot", names: dict[str, int] | None = None) -> GroupTable:
    return GroupTable(np.asarray(mul), label, check=check, names=names)
