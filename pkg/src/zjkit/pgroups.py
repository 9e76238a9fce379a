"""Omega subgroups, abelian shapes, the lex order, and abelian subgroup enumeration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import bitset
from .errors import ClosureCapExceeded, NotAbelian, NotAPGroup
from .group import GroupTable
from .subgroups import (Subgroup, center, centralizer, generated_subgroup, is_p_group, join,
                        trivial)

ENUMERATION_LIMIT = 10**6

LT, EQ, GT = -1, 0, 1


def _log(n: int, p: int) -> int:
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


def prime_divisors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def omega_i(G: GroupTable, H: Subgroup, p: int, i: int = 1) -> Subgroup:
    """Subgroup of H generated by its elements of order dividing ``p**i``."""
    if not is_p_group(H, p):
        raise NotAPGroup(f"order {H.order} is not a power of {p}")
    small = H.elems[G.order_of[H.elems] <= p**i]
    return generated_subgroup(G, small)


@dataclass(frozen=True)
class AbelianShape:
    """Order, exponent, rank and omega sequence of an abelian p-group.

    ``omega[i-1] == |Omega_i(A)|``; the sequence stops where it reaches the
    order, which happens at index ``log_p(exponent)``.
    """

    p: int
    order: int
    exponent: int
    rank: int
    omega: tuple[int, ...]

    def omega_at(self, i: int) -> int:
        if i < 1:
            return 1
        return self.omega[i - 1] if i <= len(self.omega) else self.order

    @property
    def is_elementary(self) -> bool:
        return self.exponent <= self.p

    def invariants(self) -> tuple[int, ...]:
        """Cyclic factor orders, largest first, recovered from the omega sequence."""
        counts = [_log(w, self.p) for w in (1,) + self.omega]
        # number of cyclic factors of order >= p^i is log|Omega_i| - log|Omega_(i-1)|
        at_least = [counts[i] - counts[i - 1] for i in range(1, len(counts))] + [0]
        out = []
        for i in range(1, len(at_least)):
            out += [self.p**i] * (at_least[i - 1] - at_least[i])
        return tuple(sorted(out, reverse=True))


def abelian_shape(G: GroupTable, A: Subgroup, p: int) -> AbelianShape:
    if not is_p_group(A, p):
        raise NotAPGroup(f"order {A.order} is not a power of {p}")
    if not A.is_abelian():
        raise NotAbelian(f"subgroup of order {A.order} is not abelian")
    orders = G.order_of[A.elems]
    exponent = int(orders.max())
    # in an abelian group the elements of order <= p^i already form Omega_i
    omega = tuple(int((orders <= p**i).sum()) for i in range(1, _log(exponent, p) + 1))
    rank = _log(omega[0], p) if omega else 0
    return AbelianShape(p, A.order, exponent, rank, omega)


Comparable = Union[AbelianShape, Sequence[int]]


def _padded(x: Comparable, length: int) -> list[int]:
    if isinstance(x, AbelianShape):
        return [x.omega_at(i) for i in range(1, length + 1)]
    seq = [int(v) for v in x]
    if not seq:
        raise ValueError("cannot compare an empty sequence")
    return seq[:length] + [seq[-1]] * max(0, length - len(seq))


def _length(x: Comparable) -> int:
    return len(x.omega) if isinstance(x, AbelianShape) else len(x)


def lex_compare(x: Comparable, y: Comparable) -> int:
    """Compare omega sequences lexicographically; returns ``LT``, ``EQ`` or ``GT``.

    Sequences are eventually constant: shapes continue with their order,
    explicit integer sequences repeat their last entry.
    """
    length = max(_length(x), _length(y)) + 1
    a, b = _padded(x, length), _padded(y, length)
    if a == b:
        return EQ
    return GT if a > b else LT


def _power_table(G: GroupTable, r: int) -> np.ndarray:
    key = ("power", r)
    if key not in G._cache:
        ar = np.arange(G.n)
        pw = ar.copy()
        for _ in range(r - 1):
            pw = G.mul[pw, ar]
        G._cache[key] = pw
    return G._cache[key]


def _prime_steps(G: GroupTable, A: Subgroup, ambient: int, primes: Sequence[int]):
    """Subgroups ``<A, x>`` with x in ``ambient`` and prime index over A.

    ``ambient`` must centralize A. Each child is produced once.
    """
    rest = ambient & ~A.mask
    if not rest:
        return
    inA = A.bool
    cand_flags = np.zeros(G.n, dtype=bool)
    for r in primes:
        cand_flags |= inA[_power_table(G, r)]
    todo = rest & bitset.from_bool(cand_flags)
    while todo:
        x = bitset.lowest(todo)
        B = generated_subgroup(G, [x], start=A)
        todo &= ~B.mask
        yield B


def maximal_abelian_subgroups(G: GroupTable, D: Subgroup, limit: int = ENUMERATION_LIMIT) -> list[Subgroup]:
    """All inclusion-maximal abelian subgroups of D, sorted canonically.

    Depth-first over commuting extensions starting at Z(D). After each step
    the candidate B is saturated with Z(C_D(B)), which every maximal abelian
    subgroup containing B must contain.
    """
    key = ("maximal_abelian", D.mask)
    if key in G._cache:
        return list(G._cache[key])
    primes = prime_divisors(D.order)
    start = _saturate(G, center(G, D), D)
    seen = {start.mask}
    stack = [start]
    found: dict[int, Subgroup] = {}
    while stack:
        A = stack.pop()
        C = centralizer(G, A, within=D)
        if C.mask == A.mask:
            found[A.mask] = A
            continue
        for B in _prime_steps(G, A, C.mask, primes):
            B = _saturate(G, B, D)
            if B.mask not in seen:
                seen.add(B.mask)
                stack.append(B)
                if len(seen) > limit:
                    raise ClosureCapExceeded(f"abelian search exceeded {limit} nodes")
    out = sorted(found.values(), key=Subgroup.key)
    G._cache[key] = tuple(out)
    return out


def _saturate(G: GroupTable, B: Subgroup, D: Subgroup) -> Subgroup:
    while True:
        Z = center(G, centralizer(G, B, within=D))
        if Z <= B:
            return B
        B = join(G, B, Z)


def subgroups_of_abelian(G: GroupTable, M: Subgroup, limit: int = ENUMERATION_LIMIT) -> list[Subgroup]:
    """Every subgroup of the abelian group M, via prime-index steps up from 1."""
    if not M.is_abelian():
        raise NotAbelian("subgroups_of_abelian needs an abelian M")
    primes = prime_divisors(M.order)
    start = trivial(G)
    found = {start.mask: start}
    queue = [start]
    head = 0
    while head < len(queue):
        A = queue[head]
        head += 1
        for B in _prime_steps(G, A, M.mask, primes):
            if B.mask not in found:
                found[B.mask] = B
                queue.append(B)
                if len(found) > limit:
                    raise ClosureCapExceeded(f"more than {limit} subgroups")
    return list(found.values())


def all_abelian_subgroups(G: GroupTable, D: Subgroup, limit: int = ENUMERATION_LIMIT) -> list[Subgroup]:
    """Every abelian subgroup of D: the union of the subgroup lattices of the maximal ones."""
    key = ("all_abelian", D.mask)
    if key in G._cache:
        return list(G._cache[key])
    found: dict[int, Subgroup] = {}
    for M in maximal_abelian_subgroups(G, D, limit=limit):
        for A in subgroups_of_abelian(G, M, limit=limit):
            found.setdefault(A.mask, A)
        if len(found) > limit:
            raise ClosureCapExceeded(f"more than {limit} abelian subgroups")
    out = sorted(found.values(), key=Subgroup.key)
    G._cache[key] = tuple(out)
    return out


def shape_cached(G: GroupTable, A: Subgroup, p: int) -> AbelianShape:
    key = ("shape", p, A.mask)
    if key not in G._cache:
        G._cache[key] = abelian_shape(G, A, p)
    return G._cache[key]


def rank_of_pgroup(G: GroupTable, S: Subgroup, p: int) -> int:
    """Largest rank of an abelian subgroup of S."""
    if not is_p_group(S, p):
        raise NotAPGroup(f"order {S.order} is not a power of {p}")
    return max(shape_cached(G, A, p).rank for A in all_abelian_subgroups(G, S))


def log_p(n: int, p: int) -> int:
    k = round(math.log(n, p)) if n > 1 else 0
    if p**k != n:
        raise NotAPGroup(f"{n} is not a power of {p}")
    return k
