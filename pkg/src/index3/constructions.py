"""Constructions of index-3 blocking sets in PG(2,q).

Two coordinate conventions coexist and are kept apart by type:

* :class:`RedeiProfile` describes a Rédei-type set by the coordinates of its
  affine points on x = 0 (the set ``A``) and the derived set ``B`` on the
  other line, with z = 0 as the Rédei line.
* :class:`~index3.arrow.ArrowTriple` describes the *missing* coordinates of a
  set inside three concurrent lines or a triangle.

Field elements are integer codes throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .arrow import ArrowTriple, additive_model, multiplicative_model, realizes_arrow
from .field import Field
from .plane import (
    Collineation,
    GeometryError,
    PointSet,
    central_homology,
    plane,
    vertical_elation,
    vertical_homology,
)


class ConstructionError(ValueError):
    pass


def additive_stabilizer(F: Field, A: Iterable[int]) -> frozenset[int]:
    A = frozenset(A)
    return frozenset(m for m in F.elements if all(F.add(a, m) in A for a in A))


def multiplicative_stabilizer(F: Field, B: Iterable[int]) -> frozenset[int]:
    B = frozenset(B)
    return frozenset(m for m in F.nonzero if all(F.mul(b, m) in B for b in B))


def additive_subgroup(F: Field, d: int) -> frozenset[int]:
    """The additive subgroup of order d spanned by 1, x, x^2, ...: codes 0..d-1."""
    r, k = d, 0
    while r % F.p == 0:
        r //= F.p
        k += 1
    if r != 1 or k > F.k:
        raise ConstructionError(f"{d} is not the order of an additive subgroup of {F!r}")
    return frozenset(range(d))


def multiplicative_subgroup(F: Field, d: int) -> frozenset[int]:
    if d < 1 or (F.q - 1) % d:
        raise ConstructionError(f"{d} does not divide q - 1 = {F.q - 1}")
    step = (F.q - 1) // d
    return frozenset(F.exp(i * step) for i in range(d))


def _is_additive_subgroup(F: Field, H: frozenset[int]) -> bool:
    return 0 in H and all(F.add(a, b) in H for a in H for b in H)


@dataclass(frozen=True)
class ConstructionRecord:
    recipe: str
    params: dict
    points: PointSet
    predicted_size: int
    predicted_directions: Optional[int] = None

    def __post_init__(self):
        if self.predicted_size != len(self.points):
            raise AssertionError(
                f"{self.recipe}: predicted size {self.predicted_size}, built {len(self.points)} points"
            )

    @property
    def field(self) -> Field:
        return self.points.field

    def to_json(self) -> dict:
        out = self.points.to_json()
        out.update(
            schema="construction/1",
            recipe=self.recipe,
            params=self.params,
            predicted_size=self.predicted_size,
            predicted_directions=self.predicted_directions,
        )
        return out


# -- Rédei profiles -----------------------------------------------------------------


@dataclass(frozen=True)
class RedeiProfile:
    mode: str  # "triad" | "triangle"
    field: Field
    A: frozenset[int]

    def __post_init__(self):
        F = self.field
        A = frozenset(int(a) for a in self.A)
        object.__setattr__(self, "A", A)
        if any(not 0 <= a < F.q for a in A):
            raise ConstructionError("profile entries must be field element codes")
        if self.mode == "triad":
            if not A or len(A) == F.q:
                raise ConstructionError("triad profile needs a proper nonempty subset of GF(q)")
        elif self.mode == "triangle":
            if not A or 0 in A:
                raise ConstructionError("triangle profile needs a nonempty subset of GF(q)*")
            if len(A) == F.q - 1:
                raise ConstructionError("triangle profile leaves B = GF(q)* \\ (-A) empty")
        else:
            raise ConstructionError(f"unknown profile mode {self.mode!r}")

    @classmethod
    def triangle_from_B(cls, F: Field, B: Iterable[int]) -> RedeiProfile:
        B = frozenset(B)
        if 0 in B:
            raise ConstructionError("B must avoid 0")
        return cls("triangle", F, frozenset(F.neg(x) for x in F.nonzero if x not in B))

    @classmethod
    def triad_from_B(cls, F: Field, B: Iterable[int]) -> RedeiProfile:
        B = frozenset(B)
        return cls("triad", F, frozenset(x for x in F.elements if x not in B))

    @property
    def B(self) -> frozenset[int]:
        F = self.field
        if self.mode == "triad":
            return frozenset(x for x in F.elements if x not in self.A)
        negA = {F.neg(a) for a in self.A}
        return frozenset(x for x in F.nonzero if x not in negA)

    @property
    def stabilizer(self) -> frozenset[int]:
        if self.mode == "triad":
            return additive_stabilizer(self.field, self.A)
        return multiplicative_stabilizer(self.field, self.B)

    def to_json(self) -> dict:
        return {"mode": self.mode, "A": sorted(self.A), "B": sorted(self.B)}


def triad_blocking_set(profile: RedeiProfile) -> ConstructionRecord:
    if profile.mode != "triad":
        raise ConstructionError("expected a triad profile")
    F, q = profile.field, profile.field.q
    stab = profile.stabilizer
    pts = [(0, a, 1) for a in profile.A]
    pts += [(1, b, 1) for b in profile.B]
    pts += [(0, 1, 0)]
    pts += [(1, m, 0) for m in F.elements if m not in stab]
    d = len(stab)
    return ConstructionRecord(
        "triad_profile", profile.to_json(), PointSet(F, pts), 2 * q + 1 - d, q + 1 - d
    )


def triangle_blocking_set(profile: RedeiProfile) -> ConstructionRecord:
    if profile.mode != "triangle":
        raise ConstructionError("expected a triangle profile")
    F, q = profile.field, profile.field.q
    stab = profile.stabilizer
    pts = [(0, a, 1) for a in profile.A]
    pts += [(b, 0, 1) for b in profile.B]
    pts += [(0, 0, 1), (1, 0, 0), (0, 1, 0)]
    pts += [(1, m, 0) for m in F.nonzero if m not in stab]
    d = len(stab)
    return ConstructionRecord(
        "triangle_profile", profile.to_json(), PointSet(F, pts), 2 * q + 1 - d, q + 1 - d
    )


def profile_blocking_set(profile: RedeiProfile) -> ConstructionRecord:
    if profile.mode == "triad":
        return triad_blocking_set(profile)
    return triangle_blocking_set(profile)


def normalize_profile(profile: RedeiProfile) -> tuple[RedeiProfile, Collineation]:
    """Move a profile to 0, 1 in A (triads) or 1 in B (triangles).

    Returns the new profile and a configuration-preserving collineation taking
    the old blocking set onto the new one.
    """
    F = profile.field
    if profile.mode == "triad":
        a0 = min(profile.A)
        c = vertical_elation(F, F.neg(a0))
        A = {F.sub(a, a0) for a in profile.A}
        if len(A) >= 2:
            a1 = min(A - {0})
            c = c.then(vertical_homology(F, 0, F.inv(a1)))
            A = {F.div(a, a1) for a in A}
        return RedeiProfile("triad", F, frozenset(A)), c
    b0 = min(profile.B)
    r = F.inv(b0)
    c = central_homology(F, r)
    return RedeiProfile("triangle", F, frozenset(F.mul(a, r) for a in profile.A)), c


# -- directions ---------------------------------------------------------------------


def determined_directions(U: PointSet) -> PointSet:
    """Points of z = 0 lying on a line with at least two points of the affine set U."""
    if any(P[2] == 0 for P in U):
        raise GeometryError("determined_directions needs affine points (z != 0)")
    pl = plane(U.field)
    u = U.mask
    inf = pl.line_index[(0, 0, 1)]
    out = []
    for pi in pl.line_points[inf]:
        if any((pl.line_masks[li] & u).bit_count() >= 2 for li in pl.point_lines[pi] if li != inf):
            out.append(pl.points[pi])
    return PointSet(U.field, out)


def affine_part(S: PointSet) -> PointSet:
    return PointSet(S.field, [P for P in S if P[2] != 0])


@dataclass(frozen=True)
class RedeiCount:
    kind: str  # "q_points" | "q_minus_1" | "other"
    d: int

    def redei_points(self, q: int) -> int:
        """Points of the blocking set on its Rédei line z = 0."""
        return q + 1 - self.d


def _classify(d: int) -> RedeiCount:
    if d == 1:
        return RedeiCount("q_points", 1)
    if d == 2:
        return RedeiCount("q_minus_1", 2)
    return RedeiCount("other", d)


def check_prop33(F: Field, A: Iterable[int]) -> RedeiCount:
    """Triad case: the Rédei line carries q + 1 - |Stab+(A)| points of the set."""
    A = frozenset(A)
    if not A or len(A) == F.q:
        raise ConstructionError("A must be a proper nonempty subset of GF(q)")
    return _classify(len(additive_stabilizer(F, A)))


def check_prop36(F: Field, B: Iterable[int]) -> RedeiCount:
    """Triangle case: the Rédei line carries q + 1 - |Stabx(B)| points of the set."""
    B = frozenset(B)
    if not B or 0 in B or len(B) == F.q - 1:
        raise ConstructionError("B must be a proper nonempty subset of GF(q)*")
    return _classify(len(multiplicative_stabilizer(F, B)))


# -- sets coordinatised by arrow triples ------------------------------------------------


def concurrent_from_arrow(F: Field, t: ArrowTriple) -> ConstructionRecord:
    """Set inside x = 0, x = 1, z = 0 through (0,1,0) whose missing coordinates are t."""
    model = additive_model(F)
    if t.group != model.group:
        raise ConstructionError(f"triple must live on {model.group!r}")
    if not realizes_arrow(t).ok:
        raise ConstructionError("triple does not realize (GF(q),+) -> m")
    A, B, C = (model.field_set(X) for X in (t.A, t.B, t.C))
    pts = [(0, a, 1) for a in F.elements if a not in A]
    pts += [(1, F.neg(b), 1) for b in F.elements if b not in B]
    pts += [(1, c, 0) for c in F.elements if c not in C]
    pts += [(0, 1, 0)]
    params = {"A": sorted(A), "B": sorted(B), "C": sorted(C), "m": t.m}
    return ConstructionRecord("concurrent_arrow", params, PointSet(F, pts), 3 * F.q + 1 - t.m)


def triangle_from_arrow(F: Field, t: ArrowTriple) -> ConstructionRecord:
    """Set inside the coordinate triangle whose missing side coordinates are t (xyz = 1)."""
    model = multiplicative_model(F)
    if t.group != model.group:
        raise ConstructionError(f"triple must live on {model.group!r}")
    if not realizes_arrow(t).ok:
        raise ConstructionError("triple does not realize GF(q)* -> m")
    A, B, C = (model.field_set(X) for X in (t.A, t.B, t.C))
    m1 = F.neg(1)
    pts = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    pts += [(m1, x, 0) for x in F.nonzero if x not in A]
    pts += [(0, m1, y) for y in F.nonzero if y not in B]
    pts += [(z, 0, m1) for z in F.nonzero if z not in C]
    params = {"A": sorted(A), "B": sorted(B), "C": sorted(C), "m": t.m}
    return ConstructionRecord("triangle_arrow", params, PointSet(F, pts), 3 * F.q - t.m)


def vertexless_triangle(F: Field) -> ConstructionRecord:
    q = F.q
    if q < 4:
        raise ConstructionError("the vertexless triangle needs q >= 4")
    pts = [(0, 1, c) for c in F.nonzero]
    pts += [(1, 0, c) for c in F.nonzero]
    pts += [(1, c, 0) for c in F.nonzero]
    return ConstructionRecord("vertexless", {"q": q}, PointSet(F, pts), 3 * (q - 1))


# -- Megyesi-type constructions --------------------------------------------------------


def megyesi_cosets(
    F: Field,
    d: int,
    mode: str,
    g0: int,
    g1: int,
    H: Optional[Iterable[int]] = None,
) -> ConstructionRecord:
    """U ∪ W1 built from cosets A = g0 H, B1 = g1 H of a subgroup H of order d.

    mode "mult": U = {(0,h,1): h ∉ A} ∪ {(-g,0,1): g ∈ B1}, missing directions
    C = (g0/g1) H.  mode "add": U = {(0,a,1): a ∉ A} ∪ {(1,b,1): b ∈ B1},
    missing directions C = (g1 - g0) + H.  W1 is z = 0 minus {(1,c,0): c ∈ C}.
    """
    q = F.q
    if mode == "mult":
        if d < 1 or (q - 1) % d or d >= q - 1:
            raise ConstructionError(f"need d | q - 1 and d < q - 1, got d = {d}, q = {q}")
        Hs = multiplicative_subgroup(F, d)
        if H is not None and frozenset(H) != Hs:
            raise ConstructionError("GF(q)* has a unique subgroup of each order")
        if not (0 < g0 < q and 0 < g1 < q):
            raise ConstructionError("coset representatives must be nonzero")
        A = {F.mul(g0, h) for h in Hs}
        B1 = {F.mul(g1, h) for h in Hs}
        C = {F.mul(F.div(g0, g1), h) for h in Hs}
        pts = [(0, h, 1) for h in F.elements if h not in A]
        pts += [(F.neg(g), 0, 1) for g in B1]
    elif mode == "add":
        if d < 1 or q % d or d >= q:
            raise ConstructionError(f"need d | q and d < q, got d = {d}, q = {q}")
        Hs = frozenset(H) if H is not None else additive_subgroup(F, d)
        if len(Hs) != d or not _is_additive_subgroup(F, Hs):
            raise ConstructionError(f"H is not an additive subgroup of order {d}")
        if not (0 <= g0 < q and 0 <= g1 < q):
            raise ConstructionError("coset representatives must be field elements")
        A = {F.add(g0, h) for h in Hs}
        B1 = {F.add(g1, h) for h in Hs}
        C = {F.add(F.sub(g1, g0), h) for h in Hs}
        pts = [(0, a, 1) for a in F.elements if a not in A]
        pts += [(1, b, 1) for b in B1]
    else:
        raise ConstructionError(f"mode must be 'add' or 'mult', got {mode!r}")
    W = {(1, c, 0) for c in C}
    pts += [P for P in (plane(F).points_on((0, 0, 1))) if P not in W]
    params = {"d": d, "mode": mode, "g0": g0, "g1": g1, "H": sorted(Hs), "C": sorted(C)}
    return ConstructionRecord("megyesi_cosets", params, PointSet(F, pts), 2 * q + 1 - d, q + 1 - d)


def megyesi(F: Field, d: int, mode: str, H: Optional[Iterable[int]] = None) -> ConstructionRecord:
    one = 1 if mode == "mult" else 0
    rec = megyesi_cosets(F, d, mode, one, one, H)
    return _retag(rec, "megyesi")


def _retag(rec: ConstructionRecord, recipe: str, **extra) -> ConstructionRecord:
    return ConstructionRecord(recipe, {**rec.params, **extra}, rec.points, rec.predicted_size, rec.predicted_directions)


def projective_triangle(F: Field) -> ConstructionRecord:
    if F.q % 2 == 0:
        raise ConstructionError("the projective triangle needs q odd")
    return _retag(megyesi(F, (F.q - 1) // 2, "mult"), "projective_triangle")


def projective_triad(F: Field) -> ConstructionRecord:
    if F.q % 2:
        raise ConstructionError("the projective triad needs q even")
    return _retag(megyesi(F, F.q // 2, "add"), "projective_triad")


def example45(F: Field, t: int) -> ConstructionRecord:
    """Triangle profile with A = {α, α^2, ..., α^t}, α the primitive element."""
    q = F.q
    if q % 2 == 0 or q <= 3:
        raise ConstructionError("needs q odd and q > 3")
    if not 1 <= t < (q - 1) / 2:
        raise ConstructionError(f"need 1 <= t < (q-1)/2, got t = {t}")
    A = frozenset(F.exp(i) for i in range(1, t + 1))
    rec = triangle_blocking_set(RedeiProfile("triangle", F, A))
    return _retag(rec, "example45", t=t)
