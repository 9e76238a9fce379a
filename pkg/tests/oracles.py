"""Brute-force reference computations.

Everything here works on plain Python lists and sets taken from the raw
multiplication table (or on raw permutation tuples), and shares no code
with the package's bitset and coset-closure machinery.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations


class Naive:
    """A group as a list-of-lists table with set-based helpers."""

    def __init__(self, mul_rows):
        self.mul = [list(map(int, r)) for r in mul_rows]
        self.n = len(self.mul)
        self.id = next(e for e in range(self.n) if all(self.mul[e][x] == x for x in range(self.n)))
        self.inv = [next(y for y in range(self.n) if self.mul[x][y] == self.id) for x in range(self.n)]

    @classmethod
    def of(cls, G):
        key = id(G)
        if key not in _NAIVE:
            _NAIVE[key] = (G, cls(G.mul.tolist()))
        return _NAIVE[key][1]

    def m(self, a, b):
        return self.mul[a][b]

    def order(self, x):
        k, y = 1, x
        while y != self.id:
            y = self.mul[y][x]
            k += 1
        return k

    def closure(self, gens) -> frozenset:
        out = {self.id}
        frontier = [self.id]
        gens = list(gens)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self.mul[a][g]
                    if b not in out:
                        out.add(b)
                        nxt.append(b)
            frontier = nxt
        return frozenset(out)

    def comm(self, a, b):
        m, i = self.mul, self.inv
        return m[m[i[a]][i[b]]][m[a][b]]

    def conj(self, a, x):
        return self.mul[self.mul[self.inv[x]][a]][x]

    def commute(self, a, b):
        return self.mul[a][b] == self.mul[b][a]

    def centralizer(self, H, within=None):
        within = range(self.n) if within is None else within
        return frozenset(x for x in within if all(self.commute(x, h) for h in H))

    def center(self, H=None):
        H = range(self.n) if H is None else H
        return self.centralizer(H, within=H)

    def normalizer(self, H, within=None):
        within = range(self.n) if within is None else within
        H = set(H)
        return frozenset(x for x in within if {self.conj(h, x) for h in H} == H)

    def is_normal(self, H, within=None):
        within = range(self.n) if within is None else within
        return all(self.conj(h, x) in H for h in H for x in within)

    def commutator_subgroup(self, X, Y):
        return self.closure({self.comm(x, y) for x in X for y in Y})

    def is_abelian(self, H):
        H = list(H)
        return all(self.commute(a, b) for a in H for b in H)

    def omega(self, H, p, i=1):
        return self.closure([x for x in H if self.order(x) <= p**i])

    def all_subgroups(self) -> set[frozenset]:
        """Every subgroup, from cyclic subgroups by repeated pairwise joins."""
        subs = {self.closure([x]) for x in range(self.n)}
        frontier = set(subs)
        while frontier:
            new = set()
            for H in frontier:
                for K in subs:
                    J = self.closure(set(H) | set(K))
                    if J not in subs and J not in new:
                        new.add(J)
            subs |= new
            frontier = new
        return subs

    def abelian_subgroups(self, ambient=None) -> set[frozenset]:
        """Every abelian subgroup, by adjoining one commuting element at a time."""
        ambient = frozenset(range(self.n)) if ambient is None else frozenset(ambient)
        start = frozenset([self.id])
        seen = {start}
        stack = [start]
        while stack:
            A = stack.pop()
            for x in ambient - A:
                if all(self.commute(x, a) for a in A):
                    B = self.closure(set(A) | {x})
                    if B not in seen:
                        seen.add(B)
                        stack.append(B)
        return seen

    def normal_subgroups(self) -> set[frozenset]:
        return {H for H in self.all_subgroups() if self.is_normal(H)}


_NAIVE: dict = {}


def perm_mul(x, y):
    """Product of permutation tuples acting on the right: apply x, then y."""
    return tuple(y[i] for i in x)


def perm_inv(x):
    out = [0] * len(x)
    for i, j in enumerate(x):
        out[j] = i
    return tuple(out)


def perm_from_cycles(degree, cycles):
    img = list(range(degree))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            img[a] = b
    return tuple(img)


def perm_comm(a, b):
    return perm_mul(perm_mul(perm_inv(a), perm_inv(b)), perm_mul(a, b))


@lru_cache(maxsize=None)
def symmetric_group_elements(degree):
    return tuple(permutations(range(degree)))


def automorphism_count(N: Naive) -> int:
    """|Aut| by trying every assignment of a generating pair/triple, small groups only."""
    elems = list(range(N.n))
    gens = _small_generating_set(N)
    count = 0
    for images in permutations(elems, len(gens)):
        phi = _extend_hom(N, gens, images)
        if phi is not None:
            count += 1
    return count


def _small_generating_set(N: Naive):
    gens = []
    cur = frozenset([N.id])
    while len(cur) < N.n:
        x = max((x for x in range(N.n) if x not in cur), key=lambda x: len(N.closure(set(cur) | {x})))
        gens.append(x)
        cur = N.closure(set(cur) | {x})
    return gens


def _extend_hom(N: Naive, gens, images):
    phi = {N.id: N.id}
    frontier = [N.id]
    while frontier:
        nxt = []
        for x in frontier:
            for g, h in zip(gens, images):
                y, im = N.m(x, g), N.m(phi[x], h)
                if y in phi:
                    if phi[y] != im:
                        return None
                else:
                    phi[y] = im
                    nxt.append(y)
        frontier = nxt
    if len(set(phi.values())) != N.n:
        return None
    for a in range(N.n):
        for b in range(N.n):
            if phi[N.m(a, b)] != N.m(phi[a], phi[b]):
                return None
    return phi
