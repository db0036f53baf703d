import json
from concurrent.futures import ProcessPoolExecutor

import pytest

from index3.blocking import intersection_sizes, redei_lines
from index3.census import (
    SCHEMA,
    CensusError,
    enumerate_index3,
    equivalence_table,
    fingerprint,
    pg27_checks,
    reference_sets_pg27,
)
from index3.constructions import check_prop33, check_prop36, megyesi_cosets, projective_triangle
from index3.field import make_field
from index3.plane import GeometryError, PointSet, canonical_form

from oracles import index3_sets_by_subsets

F7 = make_field(7)


def test_summary(census7):
    assert census7.summary() == {
        "12": 1, "12_redei": 1, "12_non_redei": 0,
        "13": 1, "13_redei": 1, "13_non_redei": 0,
        "14": 11, "14_redei": 8, "14_non_redei": 3,
    }  # fmt: skip
    assert census7.candidates_seen >= census7.candidates_kept > 0


def test_reference_checks(census7):
    checks = pg27_checks(census7)
    assert [c.name for c in checks if not c.passed] == []
    assert len(checks) >= 15


def test_classes_pairwise_inequivalent_and_ordered(census7):
    forms = [c.canonical for c in census7.classes]
    assert len(set(forms)) == len(forms)
    assert all(canonical_form(S) == S for S in forms)
    keys = [(c.size, not c.is_redei, c.canonical.points) for c in census7.classes]
    assert keys == sorted(keys)
    for c in census7.classes:
        assert c.fingerprint == fingerprint(c.canonical)
        assert c.is_redei == bool(redei_lines(c.canonical))


def test_redei_counts_match_stabilizer_predictions(census7):
    for c in census7.classes:
        if not c.is_redei:
            continue
        n = max(intersection_sizes(c.canonical))
        src = c.source
        if src["sweep"] == "triad_profile":
            assert n == check_prop33(F7, src["A"]).redei_points(7)
        elif src["sweep"] == "triangle_profile":
            assert n == check_prop36(F7, src["B"]).redei_points(7)
        assert len(c.canonical) == 7 + n


def test_completeness_against_unpruned_subsets(census7):
    """Every proper minimal blocking subset of either standard 3-line union, no normalisation."""
    oracle = index3_sets_by_subsets(F7, 12, 14)
    assert oracle == {c.canonical for c in census7.classes}


def test_json_schema(census7):
    js = json.loads(census7.dumps())
    assert js["schema"] == SCHEMA == "census/1"
    assert js["q"] == 7 and js["field"] == {"p": 7, "k": 1} and js["size_range"] == [12, 14]
    assert js["totals"]["14"] == {"redei": 8, "non_redei": 3}
    assert len(js["classes"]) == 13
    for c in js["classes"]:
        assert set(c) == {"size", "is_redei", "configuration", "source", "fingerprint", "hits", "unclaimed", "canonical"}
        assert c["configuration"] in {"triad", "triangle", "concurrent-degenerate"}
        assert len(c["canonical"]) == c["size"] == c["fingerprint"]["size"]
        assert sum(int(k) * v for k, v in c["fingerprint"]["intersection_spectrum"].items()) == 8 * c["size"]


def test_deterministic_across_workers(census7):
    with ProcessPoolExecutor(2) as ex:
        other = enumerate_index3(F7, 12, 14, mapper=ex.map)
    assert other.dumps() == census7.dumps()


def test_unsupported_q():
    with pytest.raises(CensusError):
        enumerate_index3(make_field(5), 12, 14)


def test_small_q_escape_hatch():
    # PG(2,5): the projective triangle (size 9) is the only index-3 class of size 9
    r = enumerate_index3(make_field(5), 9, 9, allow_large_q=True)
    assert [c.size for c in r.classes] == [9]
    assert r.classes[0].canonical == canonical_form(projective_triangle(make_field(5)).points)


# -- equivalence_table ------------------------------------------------------------------


def test_equivalence_table_examples():
    d3 = [megyesi_cosets(F7, 3, "mult", g0, g1).points for g0 in (1, 3) for g1 in (1, 3)]
    assert equivalence_table(d3) == [[0, 1, 2, 3]]
    refs = reference_sets_pg27()
    pair = [refs["12"][0][1], refs["13_redei"][0][1]]
    assert equivalence_table(pair) == [[0], [1]]
    fourteen = [S for _, S in refs["14_redei"] + refs["14_non_redei"]]
    assert equivalence_table(fourteen) == [[i] for i in range(11)]
    assert equivalence_table([]) == []
    with pytest.raises(GeometryError):
        equivalence_table([pair[0], PointSet(make_field(5), [(0, 0, 1)])])


def test_equivalence_table_prescreen_never_merges():
    # same size and fingerprint bucket, different classes
    refs = dict(reference_sets_pg27()["14_redei"])
    a, b = refs["triad A={0,1,5}"], refs["triad A={0,1,6}"]
    blocks = equivalence_table([a, b, a])
    assert blocks == [[0, 2], [1]]
    assert equivalence_table([a, b], mapper=lambda f, xs: list(map(f, xs))) == [[0], [1]]
