import random

import pytest

from index3.blocking import (
    AtLeast,
    analyze,
    cover_index,
    intersection_sizes,
    intersection_spectrum,
    is_blocking,
    is_minimal,
    is_proper,
    redei_lines,
    tangent_counts,
    tangents_at,
)
from index3.arrow import multiplicative_model
from index3.constructions import RedeiProfile, megyesi, profile_blocking_set, projective_triangle, triangle_from_arrow
from index3.field import field_of_order, make_field
from index3.plane import GeometryError, PointSet, plane

from oracles import cover_index_bruteforce

F7 = make_field(7)


def full_line(F, l):
    return PointSet(F, plane(F).points_on(l))


def test_blocking_predicates():
    L = full_line(F7, (0, 0, 1))
    assert is_blocking(L) and not is_proper(L)
    T = projective_triangle(F7).points
    assert is_blocking(T) and is_proper(T) and is_minimal(T)
    assert not is_blocking(PointSet(F7, [(0, 1, 0), (0, 1, 1), (0, 1, 2)]))


def test_tangents():
    T = projective_triangle(F7).points
    for P in T:
        for l in tangents_at(T, P):
            assert [Q for Q in T if Q in full_line(F7, l)] == [P]
    assert tangent_counts(T) == [len(tangents_at(T, P)) for P in T]
    with pytest.raises(GeometryError):
        tangents_at(T, next(P for P in plane(F7).points if P not in T))


def test_adding_a_point_breaks_minimality():
    T = projective_triangle(F7).points
    sizes = dict(zip(plane(F7).lines, intersection_sizes(T)))
    l = next(l for l, n in sizes.items() if n == 2)
    P = next(P for P in plane(F7).points_on(l) if P not in T)
    assert not is_minimal(T.union(PointSet(F7, [P])))


def test_triad_a0_every_redei_point_has_tangent():
    S = profile_blocking_set(RedeiProfile("triad", F7, {0})).points
    for l in redei_lines(S):
        for P in plane(F7).points_on(l):
            if P in S:
                assert tangents_at(S, P)


def test_cover_index_examples():
    assert cover_index(full_line(F7, (1, 2, 3))) == 1
    assert cover_index(projective_triangle(F7).points) == 3
    S = megyesi(F7, 1, "add").points
    assert len(S) == 14
    assert cover_index(S) == 3 == cover_index_bruteforce(S, 3)
    assert isinstance(cover_index(PointSet(F7, plane(F7).points[:20]), 2), AtLeast)
    with pytest.raises(GeometryError):
        cover_index(PointSet(F7, []))
    with pytest.raises(GeometryError):
        cover_index(S, 5)


@pytest.mark.parametrize("q", [3, 4, 5])
def test_cover_index_random_against_bruteforce(q):
    F = field_of_order(q)
    rng = random.Random(q)
    pts = plane(F).points
    for _ in range(60):
        S = PointSet(F, rng.sample(pts, rng.randint(1, 3 * q)))
        bf = cover_index_bruteforce(S, 4)
        got = cover_index(S, 4)
        assert got == (bf if bf is not None else AtLeast(5))


def test_redei_lines_examples():
    S = profile_blocking_set(RedeiProfile("triad", F7, {0, 1})).points
    assert redei_lines(S) == [(0, 0, 1)]
    t = multiplicative_model(F7).triple({1, 3}, {1, 3}, {2, 3, 6})
    assert redei_lines(triangle_from_arrow(F7, t).points) == []
    # z = 0 minus a point, plus the parabola y = x^2 which meets affine lines at most twice
    base = [P for P in plane(F7).points_on((0, 0, 1)) if P != (1, 0, 0)]
    extra = [(x, F7.mul(x, x), 1) for x in F7.elements]
    S2 = PointSet(F7, base + extra)
    assert len(S2) == 7 + 7 and max(intersection_sizes(S2)) == 7
    assert redei_lines(S2) == [(0, 0, 1)]


def test_spectrum_double_count():
    rng = random.Random(0)
    for q in (2, 3, 4, 5, 7, 8, 9):
        F = field_of_order(q)
        pts = plane(F).points
        for _ in range(10):
            S = PointSet(F, rng.sample(pts, rng.randint(1, len(pts))))
            spec = intersection_spectrum(S)
            assert sum(k * v for k, v in spec.items()) == len(S) * (q + 1)
            assert sum(spec.values()) == len(pts)


def test_report_json():
    rep = analyze(projective_triangle(F7).points)
    js = rep.to_json()
    assert js == {
        "is_blocking": True,
        "is_proper": True,
        "is_minimal": True,
        "index": 3,
        "redei_lines": [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
        "size": 12,
        "intersection_spectrum": {"1": 36, "2": 9, "3": 9, "5": 3},
    }
    assert analyze(PointSet(F7, plane(F7).points[:30]), 2).to_json()["index"] == ">=3"


def test_census_sets_cover_index_and_tangent_identity(census7):
    """Every census class: exact index against brute force, and the tangent count law on Rédei lines."""
    pl = plane(F7)
    for cls in census7.classes:
        S = cls.canonical
        assert cover_index(S, 4) == 3 == cover_index_bruteforce(S, 3)
        for rl in redei_lines(S):
            on_rl = pl.line_masks[pl.line_index[rl]]
            off = S.mask & ~on_rl
            for P in S:
                pi = pl.index[P]
                if not on_rl >> pi & 1:
                    continue
                # k = points of S off the Rédei line on each other line through P
                ks = [(pl.line_masks[li] & off).bit_count() for li in pl.point_lines[pi] if pl.lines[li] != rl]
                tangents = len(tangents_at(S, P))
                assert tangents == ks.count(0)
                assert tangents == sum(k - 1 for k in ks if k >= 2)
                if max(ks) <= 2:
                    assert tangents == ks.count(2)  # tangents = 3-secants
