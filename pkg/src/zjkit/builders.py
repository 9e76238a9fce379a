"""Constructors for the groups used in examples and the verification corpus.

Every abstract group is written down by a normal form and a multiplication
rule, turned into its right-regular permutation representation, and closed
with :func:`build_from_permutations`. The defining relations are then
re-checked on the finished table.
"""

from __future__ import annotations

import itertools
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import ClosureCapExceeded, InternalError, InvalidParams, InvalidPrime, UnknownBuilder
from .group import DEFAULT_CAP, GroupTable, Permutation, build_from_permutations, build_from_table


def is_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def _require_prime(p, odd=False):
    if not is_prime(p):
        raise InvalidPrime(f"{p!r} is not a prime")
    if odd and p == 2:
        raise InvalidPrime("p must be odd")


def from_normal_form(elements: Sequence[Hashable], mul: Callable, gens: dict[str, Hashable], *,
                     label: str, cap: int = DEFAULT_CAP, check: str = "spot") -> GroupTable:
    """Tabulate an abstract group through its right-regular representation."""
    if len(elements) > cap:
        raise ClosureCapExceeded(f"{label} has {len(elements)} elements, cap is {cap}")
    pos = {e: i for i, e in enumerate(elements)}
    degree = len(elements)
    names = list(gens)
    perms = [Permutation(degree, tuple(pos[mul(e, gens[nm])] for e in elements)) for nm in names]
    return build_from_permutations(degree, perms, cap=cap, label=label, check=check,
                                   names={nm: i for i, nm in enumerate(names)})


def _verify(G: GroupTable, relations: list[tuple[str, bool]]) -> GroupTable:
    bad = [text for text, ok in relations if not ok]
    if bad:
        raise InternalError(f"{G.label}: relations fail: {bad}")
    return G


def _pw(G, name, k):
    return G.power(G.names[name], k)


def _semidirect(base: list, base_mul: Callable, auto: Callable, q: int):
    """Elements ``t^k n`` with ``n^t = auto(n)``; returns (elements, mul)."""
    powers = {}

    def auto_pow(n, k):
        key = (n, k)
        if key not in powers:
            m = n
            for _ in range(k):
                m = auto(m)
            powers[key] = m
        return powers[key]

    elements = [(k, n) for k in range(q) for n in base]

    def mul(x, y):
        (k1, n1), (k2, n2) = x, y
        return ((k1 + k2) % q, base_mul(auto_pow(n1, k2), n2))

    return elements, mul


# -- small permutation groups -------------------------------------------------

def symmetric_3(**kw) -> GroupTable:
    G = build_from_permutations(3, [Permutation.from_cycles(3, [[0, 1, 2]]),
                                    Permutation.from_cycles(3, [[0, 1]])],
                                label="S3", names={"r": 0, "s": 1}, **kw)
    return _verify(G, [("|S3| = 6", G.n == 6)])


def symmetric_4(**kw) -> GroupTable:
    G = build_from_permutations(4, [Permutation.from_cycles(4, [[0, 1, 2, 3]]),
                                    Permutation.from_cycles(4, [[0, 1]])],
                                label="S4", names={"r": 0, "s": 1}, **kw)
    return _verify(G, [("|S4| = 24", G.n == 24)])


def dihedral_8(**kw) -> GroupTable:
    G = build_from_permutations(4, [Permutation.from_cycles(4, [[0, 1, 2, 3]]),
                                    Permutation.from_cycles(4, [[1, 3]])],
                                label="D8", names={"r": 0, "s": 1}, **kw)
    r, s = G.names["r"], G.names["s"]
    return _verify(G, [("r^4", G.order_of[r] == 4), ("s^2", G.order_of[s] == 2),
                       ("r^s = r^-1", G.conjugate(r, s) == G.inv[r]), ("|D8| = 8", G.n == 8)])


def quaternion_8(**kw) -> GroupTable:
    # a^i b^j with a^4 = 1, b^2 = a^2, a^b = a^-1
    elements = [(i, j) for j in range(2) for i in range(4)]

    def mul(x, y):
        i1, j1 = x
        i2, j2 = y
        i = i1 + (i2 if j1 == 0 else -i2)
        j = j1 + j2
        if j == 2:
            i, j = i + 2, 0
        return (i % 4, j)

    G = from_normal_form(elements, mul, {"a": (1, 0), "b": (0, 1)}, label="Q8", **kw)
    a, b = G.names["a"], G.names["b"]
    return _verify(G, [("a^4", G.order_of[a] == 4), ("b^2 = a^2", G.power(b, 2) == G.power(a, 2)),
                       ("a^b = a^-1", G.conjugate(a, b) == G.inv[a])])


# -- abelian groups ---------------------------------------------------------

def abelian(invariants: Sequence[int], label: str | None = None, **kw) -> GroupTable:
    invariants = [int(m) for m in invariants]
    if not invariants or any(m < 1 for m in invariants):
        raise InvalidParams(f"bad invariants {invariants}")
    elements = list(itertools.product(*[range(m) for m in invariants]))

    def mul(x, y):
        return tuple((a + b) % m for a, b, m in zip(x, y, invariants))

    gens = {}
    for t, m in enumerate(invariants):
        e = [0] * len(invariants)
        e[t] = 1 % m
        gens[f"e{t}"] = tuple(e)
    label = label or "x".join(f"Z{m}" for m in invariants)
    G = from_normal_form(elements, mul, gens, label=label, **kw)
    return _verify(G, [("abelian", G.is_abelian())])


def cyclic(n: int, **kw) -> GroupTable:
    return abelian([n], label=f"Z{n}", **kw)


def elementary_abelian(p: int, k: int, **kw) -> GroupTable:
    _require_prime(p)
    return abelian([p] * k, label=f"E{p}^{k}", **kw)


# -- p-groups separating the ZJ variants -------------------------------------

def heisenberg(m: int, label: str, **kw) -> GroupTable:
    """``<a, b, c | c = [a,b], c central, a^m = b^m = c^m = 1>`` as triples mod m."""
    elements = list(itertools.product(range(m), repeat=3))

    def mul(x, y):
        return ((x[0] + y[0]) % m, (x[1] + y[1]) % m, (x[2] + y[2] - x[1] * y[0]) % m)

    G = from_normal_form(elements, mul, {"a": (1, 0, 0), "b": (0, 1, 0), "c": (0, 0, 1)},
                         label=label, **kw)
    a, b, c = G.names["a"], G.names["b"], G.names["c"]
    return _verify(G, [
        ("c = [a,b]", G.commutator(a, b) == c),
        ("[c,a] = 1", G.commutator(c, a) == G.id),
        ("[c,b] = 1", G.commutator(c, b) == G.id),
        ("a^m = b^m = c^m = 1", all(G.order_of[g] == m for g in (a, b, c))),
        ("|S| = m^3", G.n == m**3),
    ])


def heisenberg_mod_p2(p: int, **kw) -> GroupTable:
    _require_prime(p)
    cap = kw.get("cap", DEFAULT_CAP)
    if p**6 > cap:
        raise ClosureCapExceeded(f"Heisenberg mod {p}^2 has order {p**6} > cap {cap}")
    return heisenberg(p * p, f"Heis({p}^2)", **kw)


def semidirect_p4(p: int, **kw) -> GroupTable:
    """``<x, y, u | [x,y] = x^(p^2) = y^p = u^p = 1, x^u = xy, y^u = y x^p>``."""
    _require_prime(p, odd=True)
    q = p * p
    base = [(i, j) for i in range(q) for j in range(p)]

    def base_mul(n1, n2):
        return ((n1[0] + n2[0]) % q, (n1[1] + n2[1]) % p)

    def act(n):  # x -> x y,  y -> x^p y
        i, j = n
        return ((i + p * j) % q, (i + j) % p)

    elements, mul = _semidirect(base, base_mul, act, p)
    G = from_normal_form(elements, mul, {"x": (0, (1, 0)), "y": (0, (0, 1)), "u": (1, (0, 0))},
                         label=f"(Z{q}xZ{p}):Z{p}", **kw)
    x, y, u = G.names["x"], G.names["y"], G.names["u"]
    return _verify(G, [
        ("[x,y] = 1", G.commutator(x, y) == G.id),
        ("x^(p^2) = 1", G.order_of[x] == q),
        ("y^p = 1", G.order_of[y] == p),
        ("u^p = 1", G.order_of[u] == p),
        ("x^u = xy", G.conjugate(x, u) == G.prod(x, y)),
        ("y^u = y x^p", G.conjugate(y, u) == G.prod(y, G.power(x, p))),
        ("|S| = p^4", G.n == p**4),
    ])


def extraspecial(p: int, exponent: int, **kw) -> GroupTable:
    """Extraspecial group of order ``p^3``; for p = 2 exponent 4 means D8."""
    _require_prime(p)
    if p == 2:
        if exponent != 4:
            raise InvalidParams("for p = 2 use exponent 4 (D8) or the q8 builder")
        return dihedral_8(**kw)
    if exponent == p:
        G = heisenberg(p, f"{p}^(1+2)+", **kw)
        return _verify(G, [("exponent p", int(G.order_of.max()) == p)])
    if exponent == p * p:
        return metacyclic_p3(p, **kw)
    raise InvalidParams(f"exponent must be {p} or {p * p}")


def metacyclic_p3(p: int, **kw) -> GroupTable:
    """``<x, y | x^(p^2) = y^p = 1, x^y = x^(1+p)>``."""
    _require_prime(p, odd=True)
    q = p * p
    elements, mul = _semidirect(list(range(q)), lambda a, b: (a + b) % q,
                                lambda i: (i * (1 + p)) % q, p)
    G = from_normal_form(elements, mul, {"x": (0, 1), "y": (1, 0)}, label=f"{p}^(1+2)-", **kw)
    x, y = G.names["x"], G.names["y"]
    return _verify(G, [("x^(p^2) = 1", G.order_of[x] == q), ("y^p = 1", G.order_of[y] == p),
                       ("x^y = x^(1+p)", G.conjugate(x, y) == G.power(x, 1 + p))])


# -- groups with a normal Sylow subgroup -------------------------------------

def _mat_order(M, p):
    ident = ((1, 0), (0, 1))
    cur, k = M, 1
    while cur != ident:
        cur = _mat_mul(cur, M, p)
        k += 1
        if k > p**4:
            return 0
    return k


def _mat_mul(A, B, p):
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(2)) % p for j in range(2))
                 for i in range(2))


def elementary_by_cyclic(p: int, q: int, **kw) -> GroupTable:
    """``(Z/p)^2 x| Z/q`` with the first order-q matrix of GL(2, p)."""
    _require_prime(p)
    _require_prime(q)
    if (p * p - 1) % q:
        raise InvalidParams(f"q = {q} must divide p^2 - 1 = {p * p - 1}")
    M = None
    for entries in itertools.product(range(p), repeat=4):
        cand = ((entries[0], entries[1]), (entries[2], entries[3]))
        if (cand[0][0] * cand[1][1] - cand[0][1] * cand[1][0]) % p and _mat_order(cand, p) == q:
            M = cand
            break
    base = [(i, j) for i in range(p) for j in range(p)]

    def act(v):
        return ((v[0] * M[0][0] + v[1] * M[1][0]) % p, (v[0] * M[0][1] + v[1] * M[1][1]) % p)

    elements, mul = _semidirect(base, lambda a, b: ((a[0] + b[0]) % p, (a[1] + b[1]) % p), act, q)
    G = from_normal_form(elements, mul, {"v": (0, (1, 0)), "w": (0, (0, 1)), "t": (1, (0, 0))},
                         label=f"{p}^2:{q}", **kw)
    v, w, t = G.names["v"], G.names["w"], G.names["t"]
    return _verify(G, [("t^q = 1", G.order_of[t] == q), ("[v,w] = 1", G.commutator(v, w) == G.id),
                       ("v^p = w^p = 1", G.order_of[v] == p and G.order_of[w] == p),
                       ("|G| = p^2 q", G.n == p * p * q)])


def _unit_of_order(q: int, m: int) -> int:
    for a in range(2, m):
        if pow(a, q, m) == 1:
            return a
    raise InvalidParams(f"no unit of order {q} modulo {m}")


def extraspecial_by_cyclic(p: int, q: int, exponent: int | None = None, **kw) -> GroupTable:
    """``p^(1+2) x| Z/q`` for a prime q dividing p - 1, acting faithfully on the Frattini quotient.

    Exponent p: ``a -> a^s, b -> b^(s^-1)`` fixes the centre.
    Exponent p^2: ``x -> x^s`` with s of order q modulo p^2, ``y`` fixed.
    """
    _require_prime(p, odd=True)
    _require_prime(q)
    exponent = exponent or p
    if (p - 1) % q:
        raise InvalidParams(f"q = {q} must divide p - 1")
    if exponent == p:
        s = _unit_of_order(q, p)
        s_inv = pow(s, -1, p)
        base = list(itertools.product(range(p), repeat=3))

        def base_mul(x, y):
            return ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] - x[1] * y[0]) % p)

        def act(n):
            return ((n[0] * s) % p, (n[1] * s_inv) % p, n[2])

        elements, mul = _semidirect(base, base_mul, act, q)
        gens = {"a": (0, (1, 0, 0)), "b": (0, (0, 1, 0)), "c": (0, (0, 0, 1)), "t": (1, (0, 0, 0))}
        G = from_normal_form(elements, mul, gens, label=f"{p}^(1+2)+:{q}", **kw)
        a, b, c, t = (G.names[k] for k in "abct")
        rels = [("c = [a,b]", G.commutator(a, b) == c), ("a^t = a^s", G.conjugate(a, t) == G.power(a, s)),
                ("b^t = b^(1/s)", G.conjugate(b, t) == G.power(b, s_inv)),
                ("c^t = c", G.conjugate(c, t) == c)]
    elif exponent == p * p:
        m = p * p
        s = _unit_of_order(q, m)
        inner, inner_mul = _semidirect(list(range(m)), lambda a, b: (a + b) % m,
                                       lambda i: (i * (1 + p)) % m, p)

        def act(n):
            k, i = n
            return (k, (i * s) % m)

        elements, mul = _semidirect(inner, inner_mul, act, q)
        gens = {"x": (0, (0, 1)), "y": (0, (1, 0)), "t": (1, (0, 0))}
        G = from_normal_form(elements, mul, gens, label=f"{p}^(1+2)-:{q}", **kw)
        x, y, t = (G.names[k] for k in "xyt")
        rels = [("x^y = x^(1+p)", G.conjugate(x, y) == G.power(x, 1 + p)),
                ("x^t = x^s", G.conjugate(x, t) == G.power(x, s)), ("y^t = y", G.conjugate(y, t) == y)]
    else:
        raise InvalidParams(f"exponent must be {p} or {p * p}")
    rels += [("t^q = 1", G.order_of[G.names["t"]] == q), ("|G| = p^3 q", G.n == p**3 * q)]
    return _verify(G, rels)


def direct_product(*factors: GroupTable, label: str | None = None, check: str = "spot") -> GroupTable:
    if not factors:
        raise InvalidParams("direct product of no factors")
    G = factors[0]
    for H in factors[1:]:
        n1, n2 = G.n, H.n
        # (g, h) -> g * n2 + h keeps the identity at 0 when both factors do
        gi = np.repeat(np.arange(n1), n2)
        hi = np.tile(np.arange(n2), n1)
        mul = G.mul[gi[:, None], gi[None, :]].astype(np.int64) * n2 + H.mul[hi[:, None], hi[None, :]]
        names = {f"{k}1": int(v) * n2 + H.id for k, v in G.names.items()}
        names.update({f"{k}2": G.id * n2 + int(v) for k, v in H.names.items()})
        G = build_from_table(mul, label=f"{G.label}x{H.label}", check=check, names=names)
    if label:
        G.label = label
    return G


# -- registry ---------------------------------------------------------------

def _ints(params, *keys, optional=()):
    out = {}
    for k in keys:
        if k not in params:
            raise InvalidParams(f"missing parameter {k!r}")
    for k in keys + tuple(optional):
        if k in params:
            try:
                out[k] = int(params[k])
            except (TypeError, ValueError):
                raise InvalidParams(f"parameter {k!r} must be an integer") from None
    extra = set(params) - set(keys) - set(optional)
    if extra:
        raise InvalidParams(f"unexpected parameters {sorted(extra)}")
    return out


def _direct(params, **kw):
    parts = params.get("factors")
    if not parts:
        raise InvalidParams("direct_product needs a non-empty 'factors' list")
    tables = []
    for part in parts:
        if not isinstance(part, dict) or "name" not in part:
            raise InvalidParams("each factor is {name, params}")
        tables.append(builder_corpus(part["name"], part.get("params", {}), **kw))
    return direct_product(*tables)


BUILDERS: dict[str, tuple[Callable, tuple, tuple]] = {
    # name: (constructor taking ints, required keys, optional keys)
    "semidirect_p4": (semidirect_p4, ("p",), ()),
    "heisenberg_mod_p2": (heisenberg_mod_p2, ("p",), ()),
    "elementary_abelian": (elementary_abelian, ("p", "k"), ()),
    "cyclic": (cyclic, ("n",), ()),
    "extraspecial": (extraspecial, ("p", "exponent"), ()),
    "d8": (dihedral_8, (), ()),
    "q8": (quaternion_8, (), ()),
    "s3": (symmetric_3, (), ()),
    "s4": (symmetric_4, (), ()),
    "elementary_by_cyclic": (elementary_by_cyclic, ("p", "q"), ()),
    "extraspecial_by_cyclic": (extraspecial_by_cyclic, ("p", "q"), ("exponent",)),
}


def builder_names() -> list[str]:
    return sorted(BUILDERS) + ["abelian", "direct_product"]


def builder_corpus(name: str, params: dict | None = None, **kw) -> GroupTable:
    """Build a registered group by name, e.g. ``builder_corpus("q8")``."""
    params = dict(params or {})
    if name == "direct_product":
        return _direct(params, **kw)
    if name == "abelian":
        inv = params.get("invariants")
        if not isinstance(inv, (list, tuple)) or set(params) - {"invariants"}:
            raise InvalidParams("abelian needs exactly an 'invariants' list")
        return abelian(inv, **kw)
    if name not in BUILDERS:
        raise UnknownBuilder(f"unknown builder {name!r}; known: {', '.join(builder_names())}")
    fn, required, optional = BUILDERS[name]
    return fn(**_ints(params, *required, optional=optional), **kw)
