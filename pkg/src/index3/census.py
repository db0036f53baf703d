"""Classification of index-3 blocking sets of PG(2,q) up to projective equivalence.

Every index-3 set lies on three concurrent lines or on a triangle, and PGL
moves either configuration to a standard one.  The sweep therefore runs over
the standard coordinatisations only:

* triad and triangle Rédei profiles (every admissible A),
* maximal arrow triples of (GF(q),+) and GF(q)* mapped onto the concurrent
  and triangle configurations,
* the degenerate concurrent sets with two lines carrying q points each,
* the vertexless triangle.

Candidates are kept when proper, minimal and of index exactly 3, and are then
bucketed by canonical form.
"""
from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Iterator, Optional

from .arrow import ArrowTriple, additive_model, multiplicative_model, search_arrow
from .blocking import cover_index, intersection_spectrum, is_minimal, is_proper, redei_lines, tangent_counts
from .constructions import (
    RedeiProfile,
    concurrent_from_arrow,
    megyesi_cosets,
    multiplicative_subgroup,
    normalize_profile,
    profile_blocking_set,
    projective_triangle,
    triangle_from_arrow,
    vertexless_triangle,
)
from .field import Field, make_field
from .plane import Collineation, GeometryError, PointSet, apply, canonical_form

SCHEMA = "census/1"

Mapper = Callable[..., Iterable]


class CensusError(ValueError):
    pass


class CensusAssertionError(AssertionError):
    def __init__(self, failures: list[ReferenceCheck]):
        self.failures = failures
        lines = [f"{c.name}: expected {c.expected}, found {c.found}" for c in failures]
        super().__init__("census disagrees with the reference list:\n" + "\n".join(lines))


# -- candidates ----------------------------------------------------------------------


@dataclass(frozen=True)
class Candidate:
    points: PointSet
    configuration: str  # "triad" | "triangle" | "concurrent-degenerate"
    source: dict
    # a point set known to be projectively equivalent (via an explicit map)
    anchor: Optional[PointSet] = None


def _subsets(xs: list[int]) -> Iterator[frozenset[int]]:
    for r in range(len(xs) + 1):
        for c in combinations(xs, r):
            yield frozenset(c)


def _profile_candidates(F: Field, mode: str) -> Iterator[Candidate]:
    universe = list(F.elements) if mode == "triad" else list(F.nonzero)
    for A in _subsets(universe):
        try:
            prof = RedeiProfile(mode, F, A)
        except ValueError:
            continue
        S = profile_blocking_set(prof).points
        norm, c = normalize_profile(prof)
        anchor = apply(c, S)
        if anchor != profile_blocking_set(norm).points:
            raise AssertionError(f"profile normalisation broke for {prof}")
        yield Candidate(S, mode, {"sweep": f"{mode}_profile", **prof.to_json()}, anchor)


def _shift_collineation(F: Field, t: ArrowTriple, kind: str) -> tuple[ArrowTriple, Collineation]:
    """Translate t so that A and B contain the identity, with the matching collineation."""
    G = t.group
    a0 = min(t.A, key=G.code)
    b0 = min(t.B, key=G.code)
    ng = G.neg
    t0 = ArrowTriple(
        G,
        frozenset(G.add(a, ng(a0)) for a in t.A),
        frozenset(G.add(b, ng(b0)) for b in t.B),
        frozenset(G.add(G.add(c, a0), b0) for c in t.C),
    )
    if kind == "add":
        model = additive_model(F)
        fa, fb = model.to_field(a0), model.to_field(b0)
        # (x, y) -> (x, y - a0 + (a0 + b0) x)
        c = Collineation(F, ((1, F.add(fa, fb), 0), (0, 1, 0), (0, F.neg(fa), 1)))
    else:
        model = multiplicative_model(F)
        fa, fb = model.to_field(a0), model.to_field(b0)
        # diag(l, m, n) scales A by m/l, B by n/m, C by l/n
        c = Collineation(F, ((1, 0, 0), (0, F.inv(fa), 0), (0, 0, F.inv(F.mul(fa, fb)))))
    return t0, c


def _arrow_candidates(F: Field, lo: int, hi: int) -> Iterator[Candidate]:
    q = F.q
    for kind, build, size_of, config in (
        ("add", concurrent_from_arrow, lambda m: 3 * q + 1 - m, "triad"),
        ("mult", triangle_from_arrow, lambda m: 3 * q - m, "triangle"),
    ):
        model = additive_model(F) if kind == "add" else multiplicative_model(F)
        for m in range(1, 2 * model.group.order + 2):
            if not lo <= size_of(m) <= hi:
                continue
            for t in search_arrow(model.group, m):
                S = build(F, t).points
                t0, c = _shift_collineation(F, t, kind)
                anchor = apply(c, S)
                if anchor != build(F, t0).points:
                    raise AssertionError(f"translation map broke for {t}")
                src = {"sweep": f"arrow_{kind}", **{k: sorted(model.field_set(getattr(t, k))) for k in "ABC"}, "m": m}
                yield Candidate(S, config, src, anchor)


def _degenerate_candidates(F: Field) -> Iterator[Candidate]:
    """Two lines through (0,1,0) with q points each plus one point on the remaining secant."""
    base = [(0, 1, 0)]
    base += [(1, c, 0) for c in F.nonzero]  # z = 0 without (1,0,0)
    base += [(0, 1, c) for c in F.nonzero]  # x = 0 without (0,0,1)
    for x in F.nonzero:
        yield Candidate(
            PointSet(F, base + [(x, 0, 1)]), "concurrent-degenerate", {"sweep": "degenerate", "x": x}
        )


def candidates(F: Field, lo: int, hi: int) -> Iterator[Candidate]:
    yield from _profile_candidates(F, "triad")
    yield from _profile_candidates(F, "triangle")
    yield from _arrow_candidates(F, lo, hi)
    if lo <= 2 * F.q <= hi:
        yield from _degenerate_candidates(F)
    if lo <= 3 * (F.q - 1) <= hi and F.q >= 4:
        yield Candidate(vertexless_triangle(F).points, "triangle", {"sweep": "vertexless"})


def is_index3_minimal(S: PointSet) -> bool:
    return is_proper(S) and is_minimal(S) and cover_index(S, 3) == 3


# -- fingerprints and equivalence -------------------------------------------------------


def fingerprint(S: PointSet) -> tuple:
    """Cheap projective invariant; equal fingerprints do not imply equivalence."""
    return (
        len(S),
        tuple(sorted(intersection_spectrum(S).items())),
        bool(redei_lines(S)),
        tuple(sorted(Counter(tangent_counts(S)).items())),
    )


def _fingerprint_json(fp: tuple) -> dict:
    size, spectrum, redei, tangents = fp
    return {
        "size": size,
        "intersection_spectrum": {str(k): v for k, v in spectrum},
        "is_redei": redei,
        "tangent_counts": {str(k): v for k, v in tangents},
    }


def equivalence_table(sets: list[PointSet], mapper: Mapper = map) -> list[list[int]]:
    """Partition indices of ``sets`` into projective equivalence classes.

    Sets are compared only inside a fingerprint bucket, and a bucket holding a
    single set skips the canonical form entirely.
    """
    if not sets:
        return []
    F = sets[0].field
    if any(S.field != F for S in sets):
        raise GeometryError("mixed fields")
    buckets: dict[tuple, list[int]] = defaultdict(list)
    for i, S in enumerate(sets):
        buckets[fingerprint(S)].append(i)
    todo = [i for b in buckets.values() if len(b) > 1 for i in b]
    canon = dict(zip(todo, mapper(canonical_form, [sets[i] for i in todo])))
    blocks: list[list[int]] = []
    for b in buckets.values():
        groups: dict[PointSet, list[int]] = {}
        for i in b:
            groups.setdefault(canon.get(i, sets[i]), []).append(i)
        blocks.extend(groups.values())
    return sorted(blocks)


# -- the report ------------------------------------------------------------------------


@dataclass
class CensusClass:
    canonical: PointSet
    is_redei: bool
    configuration: str
    source: dict
    fingerprint: tuple
    hits: Counter = field(default_factory=Counter)
    unclaimed: bool = False

    @property
    def size(self) -> int:
        return len(self.canonical)

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "is_redei": self.is_redei,
            "configuration": self.configuration,
            "source": self.source,
            "fingerprint": _fingerprint_json(self.fingerprint),
            "hits": dict(sorted(self.hits.items())),
            "unclaimed": self.unclaimed,
            "canonical": [list(P) for P in self.canonical],
        }


@dataclass
class CensusReport:
    field: Field
    size_range: tuple[int, int]
    classes: list[CensusClass]
    candidates_seen: int
    candidates_kept: int

    @property
    def q(self) -> int:
        return self.field.q

    def classes_of(self, size: int, redei: Optional[bool] = None) -> list[CensusClass]:
        return [c for c in self.classes if c.size == size and (redei is None or c.is_redei == redei)]

    def totals(self) -> dict[str, dict[str, int]]:
        out = {}
        for size in range(self.size_range[0], self.size_range[1] + 1):
            out[str(size)] = {
                "redei": len(self.classes_of(size, True)),
                "non_redei": len(self.classes_of(size, False)),
            }
        return out

    def summary(self) -> dict[str, int]:
        out = {}
        for size, t in self.totals().items():
            out[size] = t["redei"] + t["non_redei"]
            out[f"{size}_redei"] = t["redei"]
            out[f"{size}_non_redei"] = t["non_redei"]
        return out

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "field": self.field.to_json(),
            "q": self.q,
            "size_range": list(self.size_range),
            "candidates_seen": self.candidates_seen,
            "candidates_kept": self.candidates_kept,
            "totals": self.totals(),
            "summary": self.summary(),
            "classes": [c.to_json() for c in self.classes],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False)


def enumerate_index3(
    F: Field, size_lo: int, size_hi: int, mapper: Mapper = map, allow_large_q: bool = False
) -> CensusReport:
    """Classify the index-3 minimal blocking sets of size in [size_lo, size_hi].

    ``mapper`` is used for the canonical-form calls, e.g. the ``map`` of a
    process pool; the report does not depend on it.
    """
    if F.q != 7 and not allow_large_q:
        raise CensusError("the census is supported for q = 7 only (use allow_large_q to override)")
    if size_lo > size_hi:
        raise CensusError("empty size range")
    kept: list[Candidate] = []
    seen = 0
    for cand in candidates(F, size_lo, size_hi):
        seen += 1
        if size_lo <= len(cand.points) <= size_hi and is_index3_minimal(cand.points):
            kept.append(cand)

    # every candidate is canonicalised through its anchor (an explicitly equivalent set)
    anchors = sorted({c.anchor or c.points for c in kept}, key=lambda S: S.points)
    canon = dict(zip(anchors, mapper(canonical_form, anchors)))

    classes: dict[PointSet, CensusClass] = {}
    for cand in kept:
        key = canon[cand.anchor or cand.points]
        cls = classes.get(key)
        if cls is None:
            cls = classes[key] = CensusClass(
                canonical=key,
                is_redei=bool(redei_lines(key)),
                configuration=cand.configuration,
                source=cand.source,
                fingerprint=fingerprint(key),
            )
        cls.hits[cand.source["sweep"]] += 1
    ordered = sorted(classes.values(), key=lambda c: (c.size, not c.is_redei, c.canonical.points))
    for c in ordered:
        # nothing is claimed about non-Rédei index-3 sets of size q + 6 = 13 in PG(2,7)
        c.unclaimed = F.q == 7 and c.size == 13 and not c.is_redei
    return CensusReport(F, (size_lo, size_hi), ordered, seen, len(kept))


# -- PG(2,7) reference check -------------------------------------------------------------


@dataclass(frozen=True)
class ReferenceCheck:
    name: str
    passed: bool
    expected: object
    found: object


def reference_sets_pg27() -> dict[str, list[tuple[str, PointSet]]]:
    """The representatives listed for PG(2,7), grouped by bucket."""
    F = make_field(7)
    triad = lambda A: profile_blocking_set(RedeiProfile("triad", F, A)).points  # noqa: E731
    tri = lambda B: profile_blocking_set(RedeiProfile.triangle_from_B(F, B)).points  # noqa: E731
    add, mult = additive_model(F), multiplicative_model(F)
    return {
        "12": [("projective triangle", projective_triangle(F).points)],
        "13_redei": [("triangle B={1,6}", tri({1, 6}))],
        "14_redei": [
            ("triad A={0}", triad({0})),
            ("triad A={0,1}", triad({0, 1})),
            ("triad A={0,1,5}", triad({0, 1, 5})),
            ("triad A={0,1,6}", triad({0, 1, 6})),
            ("triangle B={1,2}", tri({1, 2})),
            ("triangle B={1,3}", tri({1, 3})),
            ("triangle B={1,2,3}", tri({1, 2, 3})),
            ("triangle B={1,2,5}", tri({1, 2, 5})),
        ],
        "14_non_redei": [
            ("triangle A={1,3} B={1,3} C={2,3,6}", triangle_from_arrow(F, mult.triple({1, 3}, {1, 3}, {2, 3, 6})).points),
            ("triad A={0,1} B={0,1} C={1,2,3,4}", concurrent_from_arrow(F, add.triple({0, 1}, {0, 1}, {1, 2, 3, 4})).points),
            ("triad A={0,1} B={0,1,2} C={1,2,3}", concurrent_from_arrow(F, add.triple({0, 1}, {0, 1, 2}, {1, 2, 3})).points),
        ],
    }


def pg27_checks(report: CensusReport) -> list[ReferenceCheck]:
    F = report.field
    refs = reference_sets_pg27()
    canon = {name: canonical_form(S) for bucket in refs.values() for name, S in bucket}
    found = {
        "12": {c.canonical for c in report.classes_of(12)},
        "13_redei": {c.canonical for c in report.classes_of(13, True)},
        "14_redei": {c.canonical for c in report.classes_of(14, True)},
        "14_non_redei": {c.canonical for c in report.classes_of(14, False)},
    }
    checks = []
    want_counts = {"12": 1, "13_redei": 1, "14_redei": 8, "14_non_redei": 3}
    for bucket, n in want_counts.items():
        checks.append(ReferenceCheck(f"count {bucket}", len(found[bucket]) == n, n, len(found[bucket])))
        expected = {canon[name] for name, _ in refs[bucket]}
        missing = sorted(name for name, _ in refs[bucket] if canon[name] not in found[bucket])
        extra = len(found[bucket] - expected)
        checks.append(
            ReferenceCheck(
                f"representatives {bucket}",
                not missing and not extra,
                [name for name, _ in refs[bucket]],
                {"missing": missing, "unlisted_classes": extra},
            )
        )
    n14 = len(report.classes_of(14))
    checks.append(ReferenceCheck("total size 14", n14 == 11, 11, n14))

    mult_d3 = [megyesi_cosets(F, 3, "mult", g0, g1).points for g0 in (1, 3) for g1 in (1, 3)]
    d3_forms = {canonical_form(S) for S in mult_d3}
    checks.append(ReferenceCheck("d=3 coset variants isomorphic", len(d3_forms) == 1, 1, len(d3_forms)))
    assert multiplicative_subgroup(F, 3) == {1, 2, 4}

    def same(a: str, b: str) -> bool:
        return canon[a] == canon[b]

    tri = lambda B: canonical_form(profile_blocking_set(RedeiProfile.triangle_from_B(F, B)).points)  # noqa: E731
    tri1 = tri({1})
    checks.append(ReferenceCheck("triad {0} ~ triangle {1}", canon["triad A={0}"] == tri1, True, canon["triad A={0}"] == tri1))
    checks.append(ReferenceCheck("B={1,2} ~ B={1,4}", tri({1, 2}) == tri({1, 4}), True, tri({1, 2}) == tri({1, 4})))
    checks.append(ReferenceCheck("B={1,3} ~ B={1,5}", tri({1, 3}) == tri({1, 5}), True, tri({1, 3}) == tri({1, 5})))
    for a, b in [
        ("triad A={0,1,5}", "triad A={0,1,6}"),
        ("triangle B={1,2}", "triangle B={1,3}"),
        ("triangle B={1,2,3}", "triangle B={1,2,5}"),
    ]:
        checks.append(ReferenceCheck(f"{a} !~ {b}", not same(a, b), False, same(a, b)))
    return checks


def pg27_report(mapper: Mapper = map) -> tuple[CensusReport, list[ReferenceCheck]]:
    """Run the PG(2,7) census for sizes 12-14 and check it against the reference list.

    Raises CensusAssertionError (carrying every failed check) on disagreement.
    """
    report = enumerate_index3(make_field(7), 12, 14, mapper=mapper)
    checks = pg27_checks(report)
    failed = [c for c in checks if not c.passed]
    if failed:
        raise CensusAssertionError(failed)
    return report, checks
