import random

import pytest

from index3.arrow import (
    AbelianGroup,
    ArrowError,
    ArrowTriple,
    additive_model,
    all_maximal_triples,
    arrow_bounds,
    arrow_values,
    divisor_realization,
    extend_to_maximal,
    generated,
    kneser_stabilizer,
    lift_realization,
    multiplicative_model,
    quotient,
    realizes_arrow,
    search_arrow,
    structure_check,
    subgroups,
    sumset,
    szonyi_example,
)
from index3.field import make_field
from index3.serialize import triple_from_json

from oracles import maximal_triples_bruteforce

Z = lambda *ns: AbelianGroup(ns)  # noqa: E731

SMALL_GROUPS = [Z(2), Z(3), Z(4), Z(2, 2), Z(5), Z(6), Z(7), Z(8), Z(2, 4), Z(2, 2, 2)]


def triple(G, A, B, C):
    return ArrowTriple(G, frozenset(A), frozenset(B), frozenset(C))


def test_models():
    F7 = make_field(7)
    assert additive_model(F7).group.orders == (7,)
    mm = multiplicative_model(F7)
    assert mm.group.orders == (6,) and mm.to_group(3) == (1,)
    assert all(mm.to_field(mm.to_group(x)) == x for x in F7.nonzero)
    am8 = additive_model(make_field(2, 3))
    assert am8.group.orders == (2, 2, 2)
    assert all(am8.group.code(am8.to_group(x)) == x for x in range(8))
    F8 = make_field(2, 3)
    for x in range(8):
        for y in range(8):
            assert am8.to_group(F8.add(x, y)) == am8.group.add(am8.to_group(x), am8.to_group(y))


def test_sumset_examples():
    assert sumset(Z(7), [0], [1, 2]) == Z(7).subset([1, 2])
    assert sumset(Z(6), [0, 3], [0, 3]) == Z(6).subset([0, 3])


def test_realizes_arrow_examples():
    G = Z(7)
    assert realizes_arrow(triple(G, [0], [0], range(1, 7))).ok
    chk = realizes_arrow(triple(G, [0], [0], [1, 2]))
    assert chk.status == "not_maximal"
    # A is tried before C, so the first adjoinable element found is 1 -> A; adjoining 3 to C also works
    assert chk.witness == ((1,), "A")
    assert realizes_arrow(triple(G, [0, 1], [0], [1, 2])).status != "not_avoiding"
    assert realizes_arrow(triple(G, [0], [0], [1, 2, 3])).status != "not_avoiding"
    assert realizes_arrow(triple(Z(6), [0], [0], [0])).status == "not_avoiding"
    with pytest.raises(ArrowError):
        triple(G, [], [0], [1])


def test_extend_to_maximal():
    G = Z(7)
    # A is grown first, so the roles of A and C come out swapped relative to ({0}, {0}, {1..6})
    e = extend_to_maximal(triple(G, [0], [0], [1]))
    assert e == triple(G, range(0, 6), [0], [1]) and realizes_arrow(e).ok and e.m == 8
    t = triple(G, [0], [0], range(1, 7))
    assert extend_to_maximal(t) == t
    mm = multiplicative_model(make_field(7))
    e = extend_to_maximal(triple(mm.group, [0], [0], [3]))
    assert realizes_arrow(e).ok and e.m in (7, 8, 9)
    with pytest.raises(ArrowError):
        extend_to_maximal(triple(G, [0], [0], [0]))


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=repr)
def test_maximal_triples_match_bruteforce(G):
    got = {(t.A, t.B, t.C) for t in all_maximal_triples(G)}
    want = maximal_triples_bruteforce(G)
    assert got == want
    # translation covariance
    for A, B, C in list(want)[:200]:
        for g in G.elements:
            for h in G.elements:
                gh = G.neg(G.add(g, h))
                moved = (
                    frozenset(G.add(a, g) for a in A),
                    frozenset(G.add(b, h) for b in B),
                    frozenset(G.add(c, gh) for c in C),
                )
                assert moved in want


def test_search_arrow_examples():
    G7 = Z(7)
    r = search_arrow(G7, 8)
    assert triple(G7, [0], [0], range(1, 7)) in r
    assert all(t.m == 8 and realizes_arrow(t).ok for t in r)
    assert search_arrow(G7, 11) == []
    r9 = search_arrow(Z(6), 9)
    assert r9 and all(structure_check(t).status == "ok" and len(structure_check(t).subgroup) == 3 for t in r9)
    assert search_arrow(Z(6), 9) == r9
    with pytest.raises(ArrowError):
        search_arrow(Z(17), 20)


def test_arrow_bounds():
    # the true least m for Z7 is 8; the inequality alone allows 7
    assert arrow_bounds(7) == (7, 10)
    assert min(arrow_values(Z(7))) == 8
    assert arrow_bounds(4)[1] == 6
    lo, hi = arrow_bounds(6)
    assert {7, 8, 9} <= set(range(lo, hi + 1)) and arrow_values(Z(6)) == [7, 8, 9]
    with pytest.raises(ArrowError):
        arrow_bounds(1)


def test_lift_realization():
    G = Z(6)
    K = generated(G, [3])
    Q = quotient(G, K)
    assert Q.group.orders == (3,)
    tq = next(t for t in all_maximal_triples(Q.group) if t.m == 4)
    lifted = lift_realization(G, K, tq)
    assert lifted.m == 8 and realizes_arrow(lifted).ok
    G4 = Z(4)
    K4 = generated(G4, [2])
    t2 = triple(Z(2), [0], [0], [1])
    assert lift_realization(G4, K4, t2).m == 6 and realizes_arrow(lift_realization(G4, K4, t2)).ok
    G7 = Z(7)
    t7 = triple(G7, [0, 1], [0, 1], [1, 2, 3, 4])
    assert lift_realization(G7, generated(G7, []), t7) == t7
    with pytest.raises(ArrowError):
        lift_realization(G, K, triple(Z(3), [0], [0], [1]))


@pytest.mark.parametrize("G", [Z(4), Z(2, 2), Z(6), Z(8), Z(2, 4), Z(9), Z(3, 3), Z(12), Z(2, 6)], ids=repr)
def test_lifts_always_realize(G):
    for K in subgroups(G):
        if 1 < len(K) < G.order:
            Q = quotient(G, K)
            assert Q.group.order * len(K) == G.order
            for t in all_maximal_triples(Q.group)[:50]:
                lifted = lift_realization(G, K, t)
                assert realizes_arrow(lifted).ok and lifted.m == len(K) * t.m


def test_divisor_realization():
    assert divisor_realization(Z(6), 3).m == 9
    assert divisor_realization(Z(7), 1).m == 8
    assert divisor_realization(Z(8), 2).m == 10
    for G in (Z(6), Z(8), Z(2, 4), Z(12), Z(2, 6), Z(3, 3)):
        for d in range(1, G.order):
            if G.order % d == 0:
                t = divisor_realization(G, d)
                assert realizes_arrow(t).ok and t.m == G.order + d
    with pytest.raises(ArrowError):
        divisor_realization(Z(6), 4)


def test_kneser_stabilizer():
    assert kneser_stabilizer(Z(6), [0, 3], [0, 3]).elements == Z(6).subset([0, 3])
    assert kneser_stabilizer(Z(7), [0, 1], [0, 1]).elements == Z(7).subset([0])
    G = Z(4, 2)
    rng = random.Random(3)
    els = list(G.elements)
    for _ in range(50):
        X = rng.sample(els, rng.randint(1, 8))
        Y = rng.sample(els, rng.randint(1, 8))
        H = kneser_stabilizer(G, X, Y)
        S = sumset(G, X, Y)
        assert len(S) >= len(sumset(G, X, H.elements)) + len(sumset(G, Y, H.elements)) - len(H)
    with pytest.raises(ArrowError):
        kneser_stabilizer(G, [], [0])


def test_structure_check():
    t = triple(Z(7), [0], [0], range(1, 7))
    assert structure_check(t).status == "not_applicable"
    with pytest.raises(ArrowError):
        structure_check(triple(Z(7), [0], [0], [1]))


@pytest.mark.parametrize("p,m", [(3, 8), (5, 14), (7, 20)])
def test_szonyi(p, m):
    t = szonyi_example(p)
    G = t.group
    assert t.m == m == 3 * p - 1 and realizes_arrow(t).ok
    everything = frozenset(G.elements)
    assert sumset(G, t.A, t.B) == everything - t.C
    assert sumset(G, t.A, t.C) == everything - t.A
    assert sumset(G, t.B, t.C) == everything - t.B


def test_szonyi_rejects():
    for p in (2, 9, 17):
        with pytest.raises(ArrowError):
            szonyi_example(p)


def test_triple_json_roundtrip():
    for t in (szonyi_example(3), triple(Z(7), [0], [0], range(1, 7))):
        assert triple_from_json(t.to_json()) == t
    assert triple(Z(7), [0], [0], range(1, 7)).to_json() == {"group": [7], "A": [0], "B": [0], "C": [1, 2, 3, 4, 5, 6]}


def test_subgroups():
    assert [len(H) for H in subgroups(Z(12))] == [1, 2, 3, 4, 6, 12]
    assert len(subgroups(Z(2, 2))) == 5
    assert len(subgroups(Z(2, 2, 2))) == 16
