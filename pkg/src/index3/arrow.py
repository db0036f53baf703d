"""Finite abelian groups and the arrow relation G -> m.

A triple (A, B, C) of nonempty subsets of G realizes G -> m when
0 is not in A + B + C, no element can be adjoined to any one of the three
sets without breaking that, and |A| + |B| + |C| = m.

Groups are products of cyclic groups Z_n1 x ... x Z_nr; elements are residue
tuples, and an element's code is its index in lexicographic tuple order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Optional

import numpy as np

from .field import Field, is_prime

Element = tuple[int, ...]

MAX_SEARCH_ORDER = 16


class ArrowError(ValueError):
    pass


@dataclass(frozen=True)
class AbelianGroup:
    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if not orders or any(n < 2 for n in orders):
            raise ArrowError(f"cyclic orders must all be >= 2, got {orders!r}")
        object.__setattr__(self, "orders", orders)

    def __repr__(self) -> str:
        return " x ".join(f"Z{n}" for n in self.orders)

    @cached_property
    def order(self) -> int:
        return math.prod(self.orders)

    def __len__(self) -> int:
        return self.order

    @cached_property
    def elements(self) -> list[Element]:
        return list(product(*(range(n) for n in self.orders)))

    @cached_property
    def _codes(self) -> dict[Element, int]:
        return {x: i for i, x in enumerate(self.elements)}

    @property
    def zero(self) -> Element:
        return self.elements[0]

    def element(self, x) -> Element:
        """Coerce a code, a residue tuple or (for cyclic groups) a residue."""
        if isinstance(x, (int, np.integer)):
            if len(self.orders) == 1:
                return (int(x) % self.orders[0],)
            if not 0 <= x < self.order:
                raise ArrowError(f"code {x} out of range for {self!r}")
            return self.elements[int(x)]
        x = tuple(int(c) for c in x)
        if len(x) != len(self.orders):
            raise ArrowError(f"{x!r} is not an element of {self!r}")
        return tuple(c % n for c, n in zip(x, self.orders))

    def code(self, x: Element) -> int:
        return self._codes[self.element(x)]

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple(-a % n for a, n in zip(x, self.orders))

    def subset(self, xs: Iterable) -> frozenset[Element]:
        return frozenset(self.element(x) for x in xs)

    def sorted(self, xs: Iterable[Element]) -> list[Element]:
        return sorted(xs, key=self.code)

    def to_json_element(self, x: Element):
        return x[0] if len(self.orders) == 1 else list(x)

    # -- bitmask tables (element i <-> bit i) -------------------------------------

    @cached_property
    def add_table(self) -> np.ndarray:
        return np.array([[self.code(self.add(x, y)) for y in self.elements] for x in self.elements], dtype=np.int64)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([self.code(self.neg(x)) for x in self.elements], dtype=np.int64)

    def mask(self, xs: Iterable[Element]) -> int:
        m = 0
        for x in xs:
            m |= 1 << self.code(x)
        return m

    def unmask(self, m: int) -> frozenset[Element]:
        return frozenset(self.elements[i] for i in range(self.order) if m >> i & 1)


def sumset(G: AbelianGroup, X: Iterable, Y: Iterable) -> frozenset[Element]:
    X, Y = G.subset(X), G.subset(Y)
    return frozenset(G.add(x, y) for x in X for y in Y)


def translate(G: AbelianGroup, X: Iterable, g) -> frozenset[Element]:
    g = G.element(g)
    return frozenset(G.add(x, g) for x in G.subset(X))


@dataclass(frozen=True)
class ArrowTriple:
    group: AbelianGroup
    A: frozenset
    B: frozenset
    C: frozenset

    def __post_init__(self):
        for name in "ABC":
            s = self.group.subset(getattr(self, name))
            if not s:
                raise ArrowError(f"component {name} is empty")
            object.__setattr__(self, name, s)

    @property
    def m(self) -> int:
        return len(self.A) + len(self.B) + len(self.C)

    def sort_key(self) -> tuple:
        G = self.group
        return tuple(tuple(sorted(G.code(x) for x in s)) for s in (self.A, self.B, self.C))

    def to_json(self) -> dict:
        G = self.group
        out: dict = {"group": list(G.orders)}
        for name in "ABC":
            out[name] = [G.to_json_element(x) for x in G.sorted(getattr(self, name))]
        return out


@dataclass(frozen=True)
class ArrowCheck:
    status: str  # "ok" | "not_avoiding" | "not_maximal"
    witness: Optional[tuple[Element, str]] = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _avoids(G: AbelianGroup, A, B, C) -> bool:
    negs = {G.neg(c) for c in C}
    return not any(G.add(a, b) in negs for a in A for b in B)


def realizes_arrow(t: ArrowTriple) -> ArrowCheck:
    G = t.group
    if not _avoids(G, t.A, t.B, t.C):
        return ArrowCheck("not_avoiding")
    sets = {"A": t.A, "B": t.B, "C": t.C}
    for name, others in (("A", "BC"), ("B", "AC"), ("C", "AB")):
        # x can join `name` iff -x is outside the sum of the other two
        forbidden = {G.neg(s) for s in sumset(G, sets[others[0]], sets[others[1]])}
        for x in G.elements:
            if x not in sets[name] and x not in forbidden:
                return ArrowCheck("not_maximal", (x, name))
    return ArrowCheck("ok")


def extend_to_maximal(t: ArrowTriple) -> ArrowTriple:
    """Greedily adjoin elements: A first, then B, then C, each in code order."""
    G = t.group
    if not _avoids(G, t.A, t.B, t.C):
        raise ArrowError("0 lies in A + B + C")
    sets = {"A": set(t.A), "B": set(t.B), "C": set(t.C)}
    for name, others in (("A", "BC"), ("B", "AC"), ("C", "AB")):
        for x in G.elements:
            if x in sets[name]:
                continue
            forbidden = {G.neg(s) for s in sumset(G, sets[others[0]], sets[others[1]])}
            if x not in forbidden:
                sets[name].add(x)
    return ArrowTriple(G, frozenset(sets["A"]), frozenset(sets["B"]), frozenset(sets["C"]))


def arrow_bounds(n: int) -> tuple[int, int]:
    """(least m with m^2 + 3m >= 9n, floor(3n/2)): necessary conditions for G -> m, |G| = n."""
    if n < 2:
        raise ArrowError("group order must be at least 2")
    m = 0
    while m * m + 3 * m < 9 * n:
        m += 1
    return m, 3 * n // 2


# -- exhaustive search ------------------------------------------------------------


@lru_cache(maxsize=None)
def _translation_tables(G: AbelianGroup) -> tuple[np.ndarray, np.ndarray]:
    n = G.order
    masks = np.arange(1 << n, dtype=np.int64)
    bits = [(masks >> i) & 1 for i in range(n)]
    add, neg = G.add_table, G.neg_table
    T = np.zeros((n, 1 << n), dtype=np.int64)
    for g in range(n):
        for i in range(n):
            T[g] |= bits[i] << add[i, g]
    N = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        N |= bits[i] << neg[i]
    return T, N


@lru_cache(maxsize=None)
def _normalized_maximal(G: AbelianGroup) -> tuple[tuple[int, int, int], ...]:
    """All maximal triples with 0 in A and 0 in B, as bitmasks."""
    n = G.order
    if n > MAX_SEARCH_ORDER:
        raise ArrowError(f"exhaustive search limited to |G| <= {MAX_SEARCH_ORDER}")
    T, N = _translation_tables(G)
    full = (1 << n) - 1
    all_B = np.arange(1, 1 << n, 2, dtype=np.int64)
    out = []
    for A in range(1, 1 << n, 2):
        elems_A = [i for i in range(n) if A >> i & 1]
        AB = np.zeros_like(all_B)
        for a in elems_A:
            AB |= T[a][all_B]
        C = full & ~N[AB]
        keep = C != 0
        B, C = all_B[keep], C[keep]
        AC = np.zeros_like(C)
        for a in elems_A:
            AC |= T[a][C]
        keep = (full & ~N[AC]) == B
        B, C = B[keep], C[keep]
        if not len(B):
            continue
        BC = np.zeros_like(C)
        for g in range(n):
            BC |= np.where((B >> g) & 1 == 1, T[g][C], 0)
        keep = (full & ~N[BC]) == A
        out.extend((A, int(b), int(c)) for b, c in zip(B[keep], C[keep]))
    return tuple(out)


@lru_cache(maxsize=None)
def _all_maximal_masks(G: AbelianGroup) -> np.ndarray:
    """Every maximal triple as a packed key A | B << n | C << 2n, sorted."""
    T, _ = _translation_tables(G)
    n = G.order
    add, neg = G.add_table, G.neg_table
    reps = np.array(_normalized_maximal(G), dtype=np.int64).reshape(-1, 3)
    keys = []
    for g in range(n):
        for h in range(n):
            keys.append(
                T[g][reps[:, 0]] | (T[h][reps[:, 1]] << n) | (T[neg[add[g, h]]][reps[:, 2]] << 2 * n)
            )
    return np.unique(np.concatenate(keys))


def _unpack(G: AbelianGroup, keys: np.ndarray) -> np.ndarray:
    n = G.order
    full = (1 << n) - 1
    return np.stack([keys & full, (keys >> n) & full, keys >> 2 * n], axis=1)


def _popcount(x: np.ndarray) -> np.ndarray:
    return np.bitwise_count(x.astype(np.uint64)).astype(np.int64)


def maximal_triple_masks(G: AbelianGroup) -> np.ndarray:
    """All maximal triples as an (R, 3) array of element bitmasks."""
    if G.order > MAX_SEARCH_ORDER:
        raise ArrowError(f"exhaustive search limited to |G| <= {MAX_SEARCH_ORDER}")
    return _unpack(G, _all_maximal_masks(G))


def _triple_from_masks(G: AbelianGroup, a: int, b: int, c: int) -> ArrowTriple:
    t = object.__new__(ArrowTriple)
    for name, m in zip(("group", "A", "B", "C"), (G, G.unmask(a), G.unmask(b), G.unmask(c))):
        object.__setattr__(t, name, m)
    return t


def all_maximal_triples(G: AbelianGroup) -> list[ArrowTriple]:
    """Every maximal triple of G, in deterministic order."""
    masks = maximal_triple_masks(G)
    triples = [_triple_from_masks(G, int(a), int(b), int(c)) for a, b, c in masks]
    return sorted(triples, key=lambda t: (t.m, t.sort_key()))


def search_arrow(G: AbelianGroup, m: int) -> list[ArrowTriple]:
    """All maximal triples with |A| + |B| + |C| = m (no symmetry quotient)."""
    masks = maximal_triple_masks(G)
    masks = masks[_popcount(masks).sum(axis=1) == m]
    triples = [_triple_from_masks(G, int(a), int(b), int(c)) for a, b, c in masks]
    return sorted(triples, key=ArrowTriple.sort_key)


def arrow_values(G: AbelianGroup) -> list[int]:
    return sorted(set(_popcount(maximal_triple_masks(G)).sum(axis=1).tolist()))


# -- subgroups, stabilisers, quotients --------------------------------------------


@dataclass(frozen=True)
class Subgroup:
    group: AbelianGroup
    elements: frozenset

    def __post_init__(self):
        G = self.group
        els = G.subset(self.elements)
        if G.zero not in els or any(G.add(x, y) not in els for x in els for y in els):
            raise ArrowError("not a subgroup")
        object.__setattr__(self, "elements", els)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return self.group.element(x) in self.elements

    def coset(self, g) -> frozenset[Element]:
        return translate(self.group, self.elements, g)

    def to_json(self) -> list:
        G = self.group
        return [G.to_json_element(x) for x in G.sorted(self.elements)]


def generated(G: AbelianGroup, gens: Iterable) -> Subgroup:
    els = {G.zero}
    frontier = [G.element(g) for g in gens]
    while frontier:
        new = {G.add(x, g) for x in els for g in frontier} - els
        els |= new
        frontier = [G.element(g) for g in gens] if new else []
    return Subgroup(G, frozenset(els))


@lru_cache(maxsize=None)
def subgroups(G: AbelianGroup) -> tuple[Subgroup, ...]:
    """All subgroups, ordered by size then element codes."""
    seen = {frozenset([G.zero])}
    frontier = list(seen)
    while frontier:
        nxt = []
        for H in frontier:
            for g in G.elements:
                if g not in H:
                    K = generated(G, list(H) + [g]).elements
                    if K not in seen:
                        seen.add(K)
                        nxt.append(K)
        frontier = nxt
    subs = [Subgroup(G, H) for H in seen]
    return tuple(sorted(subs, key=lambda H: (len(H), sorted(G.code(x) for x in H.elements))))


def stabilizer(G: AbelianGroup, X: Iterable) -> Subgroup:
    X = G.subset(X)
    return Subgroup(G, frozenset(g for g in G.elements if translate(G, X, g) == X))


def is_union_of_cosets(G: AbelianGroup, X: Iterable, H: Subgroup) -> bool:
    X = G.subset(X)
    return all(G.add(x, h) in X for x in X for h in H.elements)


def kneser_stabilizer(G: AbelianGroup, X: Iterable, Y: Iterable) -> Subgroup:
    """The stabiliser H of X + Y, checked against both conclusions of Kneser's theorem."""
    X, Y = G.subset(X), G.subset(Y)
    if not X or not Y:
        raise ArrowError("Kneser stabiliser needs nonempty sets")
    S = sumset(G, X, Y)
    H = stabilizer(G, S)
    if sumset(G, S, H.elements) != S:
        raise AssertionError("X + Y is not a union of cosets of its stabiliser")
    if len(S) < len(sumset(G, X, H.elements)) + len(sumset(G, Y, H.elements)) - len(H):
        raise AssertionError("Kneser inequality violated")
    return H


@dataclass(frozen=True)
class StructureCheck:
    status: str  # "not_applicable" | "ok" | "violation"
    subgroup: Optional[Subgroup] = None


def structure_check(t: ArrowTriple) -> StructureCheck:
    """For m > |G| + 1 find H with m = |G| + |H| and A, B, C unions of H-cosets."""
    if not realizes_arrow(t).ok:
        raise ArrowError("triple does not realize an arrow relation")
    G = t.group
    n = G.order
    if t.m <= n + 1:
        return StructureCheck("not_applicable")
    want = t.m - n
    for H in subgroups(G):
        if len(H) == want and all(is_union_of_cosets(G, X, H) for X in (t.A, t.B, t.C)):
            return StructureCheck("ok", H)
    return StructureCheck("violation")


@dataclass(frozen=True)
class Quotient:
    """G/K written as a product of cyclic groups, with the projection G -> G/K."""

    group: AbelianGroup
    kernel: Subgroup
    images: dict = field(repr=False, compare=False)

    def project(self, g) -> Element:
        return self.images[self.kernel.group.element(g)]

    def preimage(self, X: Iterable) -> frozenset[Element]:
        X = self.group.subset(X)
        return frozenset(g for g, img in self.images.items() if img in X)


@lru_cache(maxsize=None)
def quotient(G: AbelianGroup, K: Subgroup) -> Quotient:
    if K.group != G:
        raise ArrowError("subgroup of a different group")
    if len(K) == G.order:
        raise ArrowError("quotient by the whole group is trivial")
    rep = {g: min(translate(G, K.elements, g), key=G.code) for g in G.elements}
    cosets = sorted(set(rep.values()), key=G.code)

    def cadd(x, y):
        return rep[G.add(x, y)]

    def span(gens):
        # elements of the subgroup of G/K generated by gens, with coordinates
        out = {cosets[0]: ()}
        for g in gens:
            nxt = {}
            for x, coord in out.items():
                y, k = x, 0
                while True:
                    nxt.setdefault(y, coord + (k,))
                    y, k = cadd(y, g), k + 1
                    if y == x:
                        break
            out = nxt
        return out

    def order(x):
        y, k = cadd(x, cosets[0]), 1
        while y != cosets[0]:
            y, k = cadd(y, x), k + 1
        return k

    by_order = sorted(cosets[1:], key=lambda c: (-order(c), G.code(c)))

    def search(gens, current):
        if len(current) == len(cosets):
            return gens
        for g in by_order:
            cyc = span([g])
            if len(cyc) > 1 and not (set(cyc) - {cosets[0]}) & set(current):
                trial = span(gens + [g])
                if len(trial) == len(current) * len(cyc):
                    got = search(gens + [g], trial)
                    if got is not None:
                        return got
        return None

    gens = search([], span([]))
    coords = span(gens)
    Q = AbelianGroup(tuple(order(g) for g in gens))
    images = {g: coords[rep[g]] for g in G.elements}
    return Quotient(Q, K, images)


def lift_realization(G: AbelianGroup, K: Subgroup, t: ArrowTriple) -> ArrowTriple:
    """Preimages under G -> G/K of a realization on the quotient (realizes G -> |K| m)."""
    Q = quotient(G, K)
    if t.group != Q.group:
        raise ArrowError(f"triple lives on {t.group!r}, quotient is {Q.group!r}")
    if not realizes_arrow(t).ok:
        raise ArrowError("triple on the quotient is not a realization")
    return ArrowTriple(G, Q.preimage(t.A), Q.preimage(t.B), Q.preimage(t.C))


def divisor_realization(G: AbelianGroup, d: int) -> ArrowTriple:
    """A realization of G -> n + d lifted from J -> |J| + 1 on a quotient J of order n/d."""
    n = G.order
    if d < 1 or n % d or d == n:
        raise ArrowError(f"{d} is not a proper divisor of {n}")
    K = next(H for H in subgroups(G) if len(H) == d)
    J = quotient(G, K).group
    base = ArrowTriple(J, frozenset([J.zero]), frozenset([J.zero]), frozenset(J.elements[1:]))
    return lift_realization(G, K, base)


def szonyi_example(p: int) -> ArrowTriple:
    """Parabola triple on Z_p x Z_p realizing G -> 3p - 1."""
    if p % 2 == 0 or not is_prime(p) or p > 13:
        raise ArrowError("p must be an odd prime <= 13")
    G = AbelianGroup((p, p))
    A = frozenset((x, x * x % p) for x in range(p))
    B = frozenset(G.neg(a) for a in A)
    C = frozenset((0, y) for y in range(1, p))
    everything = frozenset(G.elements)
    if sumset(G, A, B) != everything - C:
        raise AssertionError("A + B != G \\ C")
    if sumset(G, A, C) != everything - A:
        raise AssertionError("A + C != G \\ A")
    if sumset(G, B, C) != everything - B:
        raise AssertionError("B + C != G \\ B")
    return ArrowTriple(G, A, B, C)


# -- field models -------------------------------------------------------------------


@dataclass(frozen=True)
class FieldModel:
    """(GF(q), +) as Z_p^k or GF(q)* as Z_{q-1}, with the element bijection."""

    field: Field
    kind: str  # "add" | "mult"
    group: AbelianGroup

    def to_group(self, x: int) -> Element:
        F = self.field
        if self.kind == "add":
            return tuple(reversed(F.digits(x)))
        return (F.dlog(x),)

    def to_field(self, g) -> int:
        F = self.field
        g = self.group.element(g)
        if self.kind == "add":
            return F.from_digits(reversed(g))
        return F.exp(g[0])

    def field_set(self, X: Iterable) -> frozenset[int]:
        return frozenset(self.to_field(g) for g in X)

    def group_set(self, xs: Iterable[int]) -> frozenset[Element]:
        return frozenset(self.to_group(x) for x in xs)

    def triple(self, A: Iterable[int], B: Iterable[int], C: Iterable[int]) -> ArrowTriple:
        """An ArrowTriple from three sets of field element codes."""
        return ArrowTriple(self.group, self.group_set(A), self.group_set(B), self.group_set(C))


def additive_model(F: Field) -> FieldModel:
    # digits are stored most significant first so group codes equal field codes
    return FieldModel(F, "add", AbelianGroup((F.p,) * F.k))


def multiplicative_model(F: Field) -> FieldModel:
    if F.q < 3:
        raise ArrowError("GF(2)* is trivial")
    return FieldModel(F, "mult", AbelianGroup((F.q - 1,)))
