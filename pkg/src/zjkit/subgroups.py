"""Subgroup calculus on a :class:`GroupTable`.

Subgroups are bitsets over element indices. Most operations accept an
optional ``within`` subgroup that plays the role of the ambient group
(centralizers in S, normal subgroups of S, ...); it defaults to the whole
table.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from . import bitset
from .errors import ClosureCapExceeded, InternalError, NotNilpotent, NotNormal
from .group import GroupTable

NORMAL_LATTICE_LIMIT = 10**6


class Subgroup:
    """A subgroup of ``group``, stored as a bitset of element indices.

    Construction does not re-verify closure; use :func:`is_closed` for that.
    """

    def __init__(self, group: GroupTable, mask: int, gens: Iterable[int] | None = None):
        self.group = group
        self.mask = mask
        if gens is not None:
            self.__dict__["gens"] = tuple(int(g) for g in gens)

    @classmethod
    def from_elements(cls, G: GroupTable, elems: Iterable[int]) -> "Subgroup":
        return cls(G, bitset.from_indices(list(elems), G.n))

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    def __len__(self):
        return self.order

    @cached_property
    def bool(self) -> np.ndarray:
        return bitset.to_bool(self.mask, self.group.n)

    @cached_property
    def elems(self) -> np.ndarray:
        out = np.flatnonzero(self.bool)
        out.flags.writeable = False
        return out

    @cached_property
    def gens(self) -> tuple[int, ...]:
        """A small generating set (greedy, smallest indices of largest order first)."""
        G = self.group
        elems = self.elems
        order = np.lexsort((elems, -G.order_of[elems]))
        in_set = np.zeros(G.n, dtype=bool)
        in_set[G.id] = True
        cur = np.array([G.id])
        gens: list[int] = []
        for g in elems[order]:
            if in_set[g]:
                continue
            gens.append(int(g))
            cur = _extend(G, cur, in_set, gens)
            if cur.size == elems.size:
                break
        return tuple(gens)

    def key(self) -> tuple:
        """Canonical sort key: order, then the sorted element list."""
        return (self.order, tuple(int(x) for x in self.elems))

    def __contains__(self, x) -> bool:
        return bool(self.mask >> int(x) & 1)

    def __iter__(self):
        return iter(int(x) for x in self.elems)

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.group is other.group and self.mask == other.mask

    def __hash__(self):
        return hash(self.mask)

    def __le__(self, other: "Subgroup") -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "Subgroup") -> bool:
        return self.mask != other.mask and self <= other

    def __ge__(self, other: "Subgroup") -> bool:
        return other <= self

    def __gt__(self, other: "Subgroup") -> bool:
        return other < self

    def __and__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, self.mask & other.mask)

    def __repr__(self):
        shown = list(self.elems[:8])
        more = "..." if self.order > 8 else ""
        return f"Subgroup(order={self.order}, elems={shown}{more})"

    def is_abelian(self) -> bool:
        g = list(self.gens)
        return bool(self.group.commutes[np.ix_(g, g)].all())

    def exponent(self) -> int:
        return int(np.lcm.reduce(self.group.order_of[self.elems]))


def _as_elems(G: GroupTable, X) -> np.ndarray:
    if isinstance(X, Subgroup):
        return X.elems
    return np.unique(np.asarray(list(X), dtype=np.int64)) if not isinstance(X, np.ndarray) \
        else np.unique(X.astype(np.int64))


def _extend(G: GroupTable, cur: np.ndarray, in_set: np.ndarray, gens: list[int]) -> np.ndarray:
    """Grow the subgroup ``cur`` to ``<cur, gens>`` by adjoining whole cosets.

    ``in_set`` is the membership flag array of ``cur`` and is updated in place.
    ``gens`` must generate the result together with ``cur``.
    """
    mul = G.mul
    reps = [G.id]
    pieces = [cur]
    head = 0
    while head < len(reps):
        r = reps[head]
        head += 1
        for s in gens:
            w = int(mul[r, s])
            if not in_set[w]:
                coset = mul[cur, w]
                in_set[coset] = True
                pieces.append(coset)
                reps.append(w)
    if len(pieces) == 1:
        return cur
    return np.sort(np.concatenate(pieces))


def trivial(G: GroupTable) -> Subgroup:
    return Subgroup(G, 1 << G.id, gens=())


def whole(G: GroupTable) -> Subgroup:
    return Subgroup(G, G.all_mask)


def generated_subgroup(G: GroupTable, seed, start: Subgroup | None = None) -> Subgroup:
    """``<seed>`` (joined with ``start`` when given), by coset-wise closure."""
    in_set = np.zeros(G.n, dtype=bool)
    if start is None:
        cur = np.array([G.id])
        gens: list[int] = []
    else:
        cur = start.elems.copy()
        gens = list(start.gens)
    in_set[cur] = True
    added: list[int] = []
    for g in _as_elems(G, seed):
        if in_set[g]:
            continue
        gens.append(int(g))
        added.append(int(g))
        cur = _extend(G, cur, in_set, gens)
    all_gens = (list(start.gens) if start is not None else []) + added
    return Subgroup(G, bitset.from_bool(in_set), gens=all_gens)


def join(G: GroupTable, X: Subgroup, Y: Subgroup) -> Subgroup:
    if Y <= X:
        return X
    if X <= Y:
        return Y
    return generated_subgroup(G, Y.gens, start=X)


def is_closed(G: GroupTable, elems) -> bool:
    """Brute-force subgroup test: contains 1, closed under products and inverses."""
    e = _as_elems(G, elems)
    if e.size == 0:
        return False
    flags = np.zeros(G.n, dtype=bool)
    flags[e] = True
    return bool(flags[G.id] and flags[G.mul[np.ix_(e, e)]].all() and flags[G.inv[e]].all())


def centralizer(G: GroupTable, H, within: Subgroup | None = None) -> Subgroup:
    """``C_within(H)`` for a subgroup or any set of elements ``H``."""
    gens = list(H.gens) if isinstance(H, Subgroup) else list(_as_elems(G, H))
    mask = G.all_mask if within is None else within.mask
    if gens:
        mask &= bitset.from_bool(G.commutes[gens].all(axis=0))
    return Subgroup(G, mask)


def center(G: GroupTable, H: Subgroup | None = None) -> Subgroup:
    H = whole(G) if H is None else H
    return centralizer(G, H, within=H)


def normalizer(G: GroupTable, H: Subgroup, within: Subgroup | None = None) -> Subgroup:
    """``N_within(H) = {x in within : H^x = H}``."""
    gens = list(H.gens)
    mask = G.all_mask if within is None else within.mask
    if gens:
        mask &= bitset.from_bool(H.bool[G.conj[:, gens]].all(axis=1))
    return Subgroup(G, mask)


def normalizes(G: GroupTable, x, H: Subgroup) -> bool:
    """True when every element of ``x`` (one element or a set) normalizes ``H``."""
    xs = [int(x)] if np.isscalar(x) else list(_as_elems(G, x))
    if not xs or not H.gens:
        return True
    return bool(H.bool[G.conj[np.ix_(xs, list(H.gens))]].all())


def is_normal(G: GroupTable, H: Subgroup, within: Subgroup | None = None) -> bool:
    W = whole(G) if within is None else within
    if not H <= W:
        return False
    return normalizes(G, W.gens, H)


def conjugate_subgroup(G: GroupTable, H: Subgroup, x: int) -> Subgroup:
    return Subgroup(G, bitset.from_indices(G.conj[x, H.elems], G.n))


def commutator_elements(G: GroupTable, X, Y) -> np.ndarray:
    """All ``[x, y]`` with ``x`` in X and ``y`` in Y (unique, sorted)."""
    xs, ys = _as_elems(G, X), _as_elems(G, Y)
    mul, inv = G.mul, G.inv
    left = mul[np.ix_(inv[xs], inv[ys])]
    right = mul[np.ix_(xs, ys)]
    return np.unique(mul[left, right])


def commutator_subgroup(G: GroupTable, X, Y) -> Subgroup:
    """``[X, Y] = <[x, y] : x in X, y in Y>``."""
    return generated_subgroup(G, commutator_elements(G, X, Y))


def derived_subgroup(G: GroupTable, H: Subgroup) -> Subgroup:
    return commutator_subgroup(G, H, H)


def lower_central_series(G: GroupTable, H: Subgroup) -> list[Subgroup]:
    """``[H, [H,H], [[H,H],H], ...]`` until it stabilises."""
    series = [H]
    while True:
        nxt = commutator_subgroup(G, series[-1], H)
        if nxt == series[-1]:
            return series
        series.append(nxt)


def nilpotency_class(G: GroupTable, H: Subgroup) -> int:
    series = lower_central_series(G, H)
    if series[-1].order != 1:
        raise NotNilpotent(f"lower central series stops at order {series[-1].order}")
    return len(series) - 1


def conjugacy_classes(G: GroupTable, within: Subgroup | None = None,
                      of: Subgroup | None = None) -> list[np.ndarray]:
    """Classes of ``of`` (default ``within``) under conjugation by ``within``."""
    W = whole(G) if within is None else within
    target = W if of is None else of
    seen = np.zeros(G.n, dtype=bool)
    conj_rows = G.conj[W.elems]
    classes = []
    for x in target.elems:
        if seen[x]:
            continue
        cls = np.unique(conj_rows[:, x])
        seen[cls] = True
        classes.append(cls)
    return classes


def normal_closure(G: GroupTable, X, within: Subgroup | None = None) -> Subgroup:
    W = whole(G) if within is None else within
    xs = _as_elems(G, X)
    orbit = np.unique(G.conj[np.ix_(W.elems, xs)])
    return generated_subgroup(G, orbit)


def all_normal_subgroups(G: GroupTable, within: Subgroup | None = None,
                         limit: int = NORMAL_LATTICE_LIMIT) -> list[Subgroup]:
    """Every normal subgroup of ``within`` (default G), sorted by order then elements.

    Normal subgroups are exactly the joins of normal closures of conjugacy
    classes, so the lattice is closed up from those closures.
    """
    W = whole(G) if within is None else within
    cache_key = ("normal_subgroups", W.mask)
    if cache_key in G._cache:
        return list(G._cache[cache_key])
    closures: dict[int, Subgroup] = {}
    for cls in conjugacy_classes(G, within=W):
        K = generated_subgroup(G, cls)
        closures.setdefault(K.mask, K)
    atoms = sorted(closures.values(), key=Subgroup.key)
    start = trivial(G)
    found = {start.mask: start}
    queue = [start]
    head = 0
    while head < len(queue):
        N = queue[head]
        head += 1
        for K in atoms:
            if K.mask & ~N.mask == 0:
                continue
            J = join(G, N, K)
            if J.mask not in found:
                found[J.mask] = J
                queue.append(J)
                if len(found) > limit:
                    raise ClosureCapExceeded(f"more than {limit} normal subgroups")
    out = sorted(found.values(), key=Subgroup.key)
    G._cache[cache_key] = tuple(out)
    return out


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def is_p_power(n: int, p: int) -> bool:
    return p_part(n, p) == n


def is_p_group(H: Subgroup, p: int) -> bool:
    return is_p_power(H.order, p)


def sylow_p(G: GroupTable, p: int, within: Subgroup | None = None) -> Subgroup:
    """A Sylow p-subgroup, grown one normalizing p-element at a time."""
    W = whole(G) if within is None else within
    target = p_part(W.order, p)
    p_elems = W.elems[[is_p_power(int(o), p) for o in G.order_of[W.elems]]]
    P = trivial(G)
    while P.order < target:
        N = normalizer(G, P, within=W)
        cand = [x for x in p_elems if x in N and x not in P]
        if not cand:
            raise InternalError(f"Sylow search stalled at order {P.order} < {target}")
        P = generated_subgroup(G, [cand[0]], start=P)
    if P.order != target:
        raise InternalError(f"Sylow search overshot: {P.order} != {target}")
    return P


@dataclass(frozen=True)
class QuotientMap:
    source: GroupTable
    kernel: Subgroup
    quotient: GroupTable
    proj: np.ndarray
    reps: np.ndarray

    def image(self, H: Subgroup) -> Subgroup:
        return Subgroup(self.quotient, bitset.from_indices(self.proj[H.elems], self.quotient.n))

    def preimage(self, Q: Subgroup) -> Subgroup:
        return Subgroup(self.source, bitset.from_bool(Q.bool[self.proj]))


def quotient(G: GroupTable, N: Subgroup) -> QuotientMap:
    if not is_normal(G, N):
        raise NotNormal(f"subgroup of order {N.order} is not normal in {G.label}")
    proj = np.full(G.n, -1, dtype=np.int64)
    reps = []
    for x in range(G.n):
        if proj[x] < 0:
            proj[G.mul[x, N.elems]] = len(reps)
            reps.append(x)
    reps = np.array(reps)
    qmul = proj[G.mul[np.ix_(reps, reps)]]
    Q = GroupTable(qmul, f"{G.label}/N{N.order}")
    proj.flags.writeable = False
    return QuotientMap(G, N, Q, proj, reps)


def p_core(G: GroupTable, p: int) -> Subgroup:
    """``O_p(G)`` as the intersection of all conjugates of a Sylow p-subgroup."""
    S = sylow_p(G, p)
    return Subgroup(G, bitset.from_bool(S.bool[G.conj].all(axis=0)))


def p_core_via_normals(G: GroupTable, p: int) -> Subgroup:
    """``O_p(G)`` as the largest p-group among the normal subgroups."""
    best = trivial(G)
    for N in all_normal_subgroups(G):
        if is_p_group(N, p):
            best = join(G, best, N)
    return best


def op_of_action(G: GroupTable, P: Subgroup, p: int) -> Subgroup:
    """Preimage of ``O_p(G / C_G(P))`` under the natural map."""
    if not is_normal(G, P):
        raise NotNormal("P must be normal in G")
    qmap = quotient(G, centralizer(G, P))
    return qmap.preimage(p_core(qmap.quotient, p))
