"""The Desarguesian plane PG(2,q): incidence, collineations, canonical forms.

Points and lines are plain tuples of field codes.  A point (x, y, z) is
normalised so that its leftmost nonzero coordinate is 1; a line [u, v, w]
(the set ux + vy + wz = 0) is normalised the same way.  Collineations act on
row vectors: P -> frob^e(P) @ M.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .field import Field

Point = tuple[int, int, int]
Line = tuple[int, int, int]

MAX_CANONICAL_Q = 9


class GeometryError(ValueError):
    pass


def normalize(F: Field, v: Sequence[int]) -> tuple[int, int, int]:
    v = tuple(int(c) for c in v)
    if len(v) != 3 or any(not 0 <= c < F.q for c in v):
        raise GeometryError(f"bad homogeneous triple {v!r} for {F!r}")
    for c in v:
        if c:
            s = F.inv(c)
            return tuple(F.mul(s, x) for x in v)  # type: ignore[return-value]
    raise GeometryError("the zero vector is not a projective point")


def _cross(F: Field, a: Sequence[int], b: Sequence[int]) -> tuple[int, int, int]:
    m, s = F.mul, F.sub
    return (
        s(m(a[1], b[2]), m(a[2], b[1])),
        s(m(a[2], b[0]), m(a[0], b[2])),
        s(m(a[0], b[1]), m(a[1], b[0])),
    )


def _dot(F: Field, a: Sequence[int], b: Sequence[int]) -> int:
    return F.add(F.add(F.mul(a[0], b[0]), F.mul(a[1], b[1])), F.mul(a[2], b[2]))


def line_through(F: Field, P: Sequence[int], Q: Sequence[int]) -> Line:
    P, Q = normalize(F, P), normalize(F, Q)
    if P == Q:
        raise GeometryError("line_through needs two distinct points")
    return normalize(F, _cross(F, P, Q))


def meet(F: Field, l: Sequence[int], m: Sequence[int]) -> Point:
    l, m = normalize(F, l), normalize(F, m)
    if l == m:
        raise GeometryError("meet needs two distinct lines")
    return normalize(F, _cross(F, l, m))


def incident(F: Field, P: Sequence[int], l: Sequence[int]) -> bool:
    return _dot(F, P, l) == 0


def line_equation(l: Line) -> str:
    """Human-readable form of a dual triple, e.g. ``x + 3y = 0``."""
    terms = []
    for c, name in zip(l, "xyz"):
        if c == 1:
            terms.append(name)
        elif c:
            terms.append(f"{c}{name}")
    return " + ".join(terms) + " = 0"


# -- matrices over F ------------------------------------------------------------

Matrix = tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]


def mat_mul(F: Field, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    out = []
    for i in range(3):
        row = []
        for j in range(3):
            s = 0
            for t in range(3):
                s = F.add(s, F.mul(A[i][t], B[t][j]))
            row.append(s)
        out.append(tuple(row))
    return tuple(out)  # type: ignore[return-value]


def mat_det(F: Field, M: Sequence[Sequence[int]]) -> int:
    m, s, a = F.mul, F.sub, F.add
    return a(
        a(
            m(M[0][0], s(m(M[1][1], M[2][2]), m(M[1][2], M[2][1]))),
            F.neg(m(M[0][1], s(m(M[1][0], M[2][2]), m(M[1][2], M[2][0])))),
        ),
        m(M[0][2], s(m(M[1][0], M[2][1]), m(M[1][1], M[2][0]))),
    )


def mat_inv(F: Field, M: Sequence[Sequence[int]]) -> Matrix:
    d = mat_det(F, M)
    if d == 0:
        raise GeometryError("singular matrix")
    di = F.inv(d)
    rows = [M[0], M[1], M[2]]
    cof = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            r = [x for x in range(3) if x != i]
            c = [x for x in range(3) if x != j]
            minor = F.sub(F.mul(rows[r[0]][c[0]], rows[r[1]][c[1]]), F.mul(rows[r[0]][c[1]], rows[r[1]][c[0]]))
            cof[i][j] = minor if (i + j) % 2 == 0 else F.neg(minor)
    # inverse = adjugate / det, adjugate = cofactor transpose
    return tuple(tuple(F.mul(cof[j][i], di) for j in range(3)) for i in range(3))  # type: ignore[return-value]


def _normalize_matrix(F: Field, M: Sequence[Sequence[int]]) -> Matrix:
    flat = [c for row in M for c in row]
    lead = next(c for c in flat if c)
    s = F.inv(lead)
    return tuple(tuple(F.mul(s, c) for c in row) for row in M)  # type: ignore[return-value]


@dataclass(frozen=True, eq=False)
class Collineation:
    """P -> frob^e(P) @ matrix, with frob(x) = x^p."""

    field: Field
    matrix: Matrix
    frobenius: int = 0

    def __post_init__(self):
        M = tuple(tuple(int(c) for c in row) for row in self.matrix)
        if len(M) != 3 or any(len(r) != 3 for r in M):
            raise GeometryError("collineation matrix must be 3x3")
        if mat_det(self.field, M) == 0:
            raise GeometryError("collineation matrix is singular")
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "frobenius", self.frobenius % self.field.k)

    @classmethod
    def identity(cls, F: Field) -> Collineation:
        return cls(F, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Collineation):
            return NotImplemented
        return (
            self.field == other.field
            and self.frobenius == other.frobenius
            and _normalize_matrix(self.field, self.matrix) == _normalize_matrix(other.field, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.frobenius, _normalize_matrix(self.field, self.matrix)))

    def __call__(self, P: Sequence[int]) -> Point:
        F = self.field
        v = [F.frobenius(c, self.frobenius) for c in P] if self.frobenius else list(P)
        w = [0, 0, 0]
        for i in range(3):
            if v[i]:
                for j in range(3):
                    w[j] = F.add(w[j], F.mul(v[i], self.matrix[i][j]))
        return normalize(F, w)

    def map_line(self, l: Sequence[int]) -> Line:
        pts = [P for P in plane(self.field).points_on(normalize(self.field, l))][:2]
        return line_through(self.field, self(pts[0]), self(pts[1]))

    def then(self, other: Collineation) -> Collineation:
        """The collineation ``P -> other(self(P))``."""
        F = self.field
        Mg = tuple(tuple(F.frobenius(c, other.frobenius) for c in row) for row in self.matrix)
        return Collineation(F, mat_mul(F, Mg, other.matrix), self.frobenius + other.frobenius)

    def inverse(self) -> Collineation:
        F = self.field
        e = -self.frobenius % F.k
        Minv = mat_inv(F, self.matrix)
        return Collineation(F, tuple(tuple(F.frobenius(c, e) for c in row) for row in Minv), e)

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "frobenius": self.frobenius}


# -- the plane --------------------------------------------------------------------


class Plane:
    """Points, lines and incidence of PG(2,q), indexed in coordinate order."""

    def __init__(self, F: Field):
        self.field = F
        q = self.q = F.q
        pts = [(0, 0, 1)]
        pts += [(0, 1, z) for z in range(q)]
        pts += [(1, y, z) for y in range(q) for z in range(q)]
        self.points: list[Point] = pts  # already in lexicographic order
        self.index = {P: i for i, P in enumerate(pts)}
        self.lines: list[Line] = list(pts)  # same normalised triples, read dually
        self.line_index = self.index
        self.line_points: list[list[int]] = [
            [i for i, P in enumerate(pts) if _dot(F, P, l) == 0] for l in self.lines
        ]
        self.line_masks = [sum(1 << i for i in ps) for ps in self.line_points]
        self.point_lines: list[list[int]] = [[] for _ in pts]
        for li, ps in enumerate(self.line_points):
            for pi in ps:
                self.point_lines[pi].append(li)

    def __len__(self) -> int:
        return len(self.points)

    def __reduce__(self):
        return plane, (self.field,)

    def points_on(self, l: Line) -> list[Point]:
        return [self.points[i] for i in self.line_points[self.line_index[l]]]

    def mask(self, pts: Iterable[Point]) -> int:
        m = 0
        for P in pts:
            m |= 1 << self.index[P]
        return m

    def unmask(self, m: int) -> list[Point]:
        return [self.points[i] for i in range(len(self.points)) if m >> i & 1]

    @cached_property
    def point_array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64)

    @cached_property
    def _code_to_index(self) -> np.ndarray:
        q = self.q
        table = np.full(q**3, -1, dtype=np.int64)
        for i, (x, y, z) in enumerate(self.points):
            table[(x * q + y) * q + z] = i
        return table

    def permutations(self, mats: np.ndarray, frobenius: int = 0) -> np.ndarray:
        """Point permutations of a stack of matrices, shape (T, 3, 3) -> (T, N)."""
        F = self.field
        add, mul = F.add_table, F.mul_table
        P = self.point_array
        if frobenius % F.k:
            fr = np.array([F.frobenius(c, frobenius) for c in range(F.q)], dtype=np.int64)
            P = fr[P]
        mats = np.asarray(mats, dtype=np.int64).reshape(-1, 3, 3)
        W = mul[P[None, :, 0, None], mats[:, None, 0, :]]
        W = add[W, mul[P[None, :, 1, None], mats[:, None, 1, :]]]
        W = add[W, mul[P[None, :, 2, None], mats[:, None, 2, :]]]
        lead = np.where(W[..., 0] != 0, W[..., 0], np.where(W[..., 1] != 0, W[..., 1], W[..., 2]))
        W = mul[W, F.inv_table[lead][..., None]]
        q = self.q
        return self._code_to_index[(W[..., 0] * q + W[..., 1]) * q + W[..., 2]]

    def permutation(self, c: Collineation) -> np.ndarray:
        return self.permutations(np.array([c.matrix]), c.frobenius)[0]


@lru_cache(maxsize=None)
def plane(F: Field) -> Plane:
    return Plane(F)


def all_points(F: Field) -> PointSet:
    return PointSet(F, plane(F).points)


def all_lines(F: Field) -> list[Line]:
    return list(plane(F).lines)


@dataclass(frozen=True)
class PointSet:
    """A set of points of PG(2,q), stored normalised and sorted."""

    field: Field
    points: tuple[Point, ...]

    def __post_init__(self):
        pts = sorted({normalize(self.field, P) for P in self.points})
        object.__setattr__(self, "points", tuple(pts))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, P) -> bool:
        return normalize(self.field, P) in self.points

    @cached_property
    def mask(self) -> int:
        return plane(self.field).mask(self.points)

    @cached_property
    def indices(self) -> tuple[int, ...]:
        idx = plane(self.field).index
        return tuple(idx[P] for P in self.points)

    @classmethod
    def from_mask(cls, F: Field, m: int) -> PointSet:
        return cls(F, plane(F).unmask(m))

    def union(self, other: PointSet) -> PointSet:
        _same_field(self, other)
        return PointSet(self.field, self.points + other.points)

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "points": [list(P) for P in self.points]}


def _same_field(S1: PointSet, S2: PointSet) -> None:
    if S1.field != S2.field:
        raise GeometryError(f"mixed fields {S1.field!r} and {S2.field!r}")


def apply(c: Collineation, S: PointSet) -> PointSet:
    if c.field != S.field:
        raise GeometryError("collineation and point set live over different fields")
    return PointSet(S.field, [c(P) for P in S])


# -- named collineations ---------------------------------------------------------


def triad_interchange(F: Field) -> Collineation:
    """Fixes (0,1,0) and (1,0,0), stabilises z = 0, swaps x = 0 and x = 1."""
    m1 = F.neg(1)
    return Collineation(F, ((m1, 0, 0), (0, 1, 0), (1, 0, 1)))


def triangle_interchange(F: Field) -> Collineation:
    """Fixes (0,0,1) and (1,1,0), stabilises z = 0, swaps x = 0 and y = 0."""
    return Collineation(F, ((0, 1, 0), (1, 0, 0), (0, 0, 1)))


def vertical_homology(F: Field, axis: int, ratio: int) -> Collineation:
    """Homology with centre (0,1,0) and axis y = axis: y -> axis + ratio*(y - axis).

    ratio = 1 degenerates to the identity; translations use :func:`vertical_elation`.
    """
    if ratio == 0:
        raise GeometryError("homology ratio must be nonzero")
    return Collineation(F, ((1, 0, 0), (0, ratio, 0), (0, F.mul(axis, F.sub(1, ratio)), 1)))


def vertical_elation(F: Field, shift: int) -> Collineation:
    return Collineation(F, ((1, 0, 0), (0, 1, 0), (0, shift, 1)))


def central_homology(F: Field, ratio: int) -> Collineation:
    """Homology with centre (0,0,1) and axis z = 0: (x, y) -> (ratio x, ratio y)."""
    if ratio == 0:
        raise GeometryError("homology ratio must be nonzero")
    return Collineation(F, ((ratio, 0, 0), (0, ratio, 0), (0, 0, 1)))


def triad_pair_map(F: Field, pair1: Sequence[Point], pair2: Sequence[Point]) -> Collineation:
    """A collineation of the triad configuration {x=0, x=1, z=0} taking pair1 to pair2.

    Each pair consists of two distinct affine points on x = 0 or on x = 1.
    Built from the interchange (when the pairs lie on different lines) and
    two homologies with centre (0,1,0).
    """

    def affine(P):
        P = normalize(F, P)
        if P[2] == 0:
            raise GeometryError(f"{P} is not affine")
        iz = F.inv(P[2])
        return F.mul(P[0], iz), F.mul(P[1], iz)

    (P1, Q1), (P2, Q2) = [tuple(affine(P) for P in pr) for pr in (pair1, pair2)]
    for P, Q in ((P1, Q1), (P2, Q2)):
        if P == Q or P[0] != Q[0] or P[0] not in (0, 1):
            raise GeometryError("each pair must be two distinct affine points on x = 0 or x = 1")
    g = Collineation.identity(F) if P1[0] == P2[0] else triad_interchange(F)
    a, b, c, d = P1[1], Q1[1], P2[1], Q2[1]
    if a != c:
        axis = next(n for n in F.elements if n not in (a, c))
        k = vertical_homology(F, axis, F.div(F.sub(c, axis), F.sub(a, axis)))
    else:
        k = Collineation.identity(F)
    b1 = affine(k(g((Q1[0], Q1[1], 1))))[1]
    h = vertical_homology(F, c, F.div(F.sub(d, c), F.sub(b1, c)))
    return g.then(k).then(h)


# -- group enumeration ------------------------------------------------------------


def pgl_order(q: int) -> int:
    return (q**3 - 1) * (q**3 - q) * (q**3 - q**2) // (q - 1)


def iter_pgl(F: Field) -> Iterator[Matrix]:
    """Every element of PGL(3,q) once, as a matrix whose first nonzero entry is 1.

    Brute force over all q^9 matrices; meant for q <= 4.
    """
    for flat in product(range(F.q), repeat=9):
        lead = next((c for c in flat if c), 0)
        if lead != 1:
            continue
        M = (flat[0:3], flat[3:6], flat[6:9])
        if mat_det(F, M):
            yield M


def count_ordered_frames(F: Field) -> int:
    """Number of ordered quadruples of points, no three collinear (= |PGL(3,q)|)."""
    pl = plane(F)
    n = len(pl)
    total = 0
    for a in range(n):
        for b in range(n):
            if b == a:
                continue
            lab = _line_of(pl, a, b)
            for c in range(n):
                if pl.line_masks[lab] >> c & 1:
                    continue
                bad = pl.line_masks[lab] | pl.line_masks[_line_of(pl, a, c)] | pl.line_masks[_line_of(pl, b, c)]
                total += n - bad.bit_count()
    return total


def _line_of(pl: Plane, a: int, b: int) -> int:
    return pl.line_index[line_through(pl.field, pl.points[a], pl.points[b])]


# -- canonical forms ----------------------------------------------------------------


def _frame_matrix(F: Field, a: Point, b: Point, c: Point | None) -> Matrix:
    """A matrix K with (0,0,1)K ~ a, (0,1,0)K ~ b and, if given, (0,1,1)K ~ c."""
    if c is None:
        alpha = beta = 1
    else:
        alpha = beta = None
        for i, j in combinations(range(3), 2):
            det = F.sub(F.mul(a[i], b[j]), F.mul(a[j], b[i]))
            if det:
                di = F.inv(det)
                # solve alpha*a + beta*b = c on coordinates i, j
                alpha = F.mul(di, F.sub(F.mul(c[i], b[j]), F.mul(c[j], b[i])))
                beta = F.mul(di, F.sub(F.mul(a[i], c[j]), F.mul(a[j], c[i])))
                break
        if not alpha or not beta:
            raise GeometryError("points are not three distinct collinear points")
    ab = _cross(F, a, b)
    t = next(P for P in plane(F).points if _dot(F, P, ab))
    return (
        tuple(t),
        tuple(F.mul(beta, x) for x in b),
        tuple(F.mul(alpha, x) for x in a),
    )  # type: ignore[return-value]


def _group_frobenius(F: Field, group: str) -> range:
    if group == "PGL":
        return range(1)
    if group == "PGammaL":
        return range(F.k)
    raise GeometryError(f"unknown group {group!r}; use 'PGL' or 'PGammaL'")


@lru_cache(maxsize=None)
def _fixer_perms(F: Field, group: str, npts: int) -> np.ndarray:
    """Setwise stabiliser of the first ``npts`` points of x = 0 ((0,0,1),(0,1,0)[,(0,1,1)])."""
    pl = plane(F)
    nz = list(F.nonzero)
    if npts == 3:
        mats = [((a, b, c), (0, 1, 0), (0, 0, 1)) for a in nz for b in F.elements for c in F.elements]
        targets = [(0, 0, 1), (0, 1, 0), (0, 1, 1)]
    else:
        mats = [((a, b, c), (0, l, 0), (0, 0, 1)) for a in nz for l in nz for b in F.elements for c in F.elements]
        targets = [(0, 0, 1), (0, 1, 0)]
    fix = np.concatenate([pl.permutations(np.array(mats), e) for e in _group_frobenius(F, group)])
    blocks = []
    from itertools import permutations as perms

    for order in perms(targets):
        K = _frame_matrix(F, order[0], order[1], order[2] if npts == 3 else None)
        sigma = pl.permutations(np.array([K]))[0]  # maps targets onto `order`
        blocks.append(sigma[fix])  # fix first, then sigma
    out = np.unique(np.concatenate(blocks), axis=0)
    return out


def _lexmin_rows(rows: np.ndarray) -> np.ndarray:
    for col in range(rows.shape[1]):
        rows = rows[rows[:, col] == rows[:, col].min()]
        if len(rows) == 1:
            break
    return rows[0]


def canonical_form(S: PointSet, group: str = "PGL") -> PointSet:
    """Lexicographically least image of S under PGL(3,q) (or PGammaL(3,q)).

    Every least image contains (0,0,1) and (0,1,0), and also (0,1,1) when S has
    three collinear points, since the group is transitive on such pairs and
    triples.  So only the elements carrying a collinear triple (else a pair)
    of S onto those points are swept, as coset representative times stabiliser.
    """
    F = S.field
    _group_frobenius(F, group)
    if F.q > MAX_CANONICAL_Q:
        raise GeometryError(f"canonical form sweep is limited to q <= {MAX_CANONICAL_Q}")
    n = len(S)
    if n == 0:
        return S
    pl = plane(F)
    if n == 1:
        return PointSet(F, [pl.points[0]])
    idx = np.array(S.indices, dtype=np.int64)
    triples = []
    for i, j in combinations(range(n), 2):
        lm = pl.line_masks[_line_of(pl, idx[i], idx[j])]
        for k in range(j + 1, n):
            if lm >> int(idx[k]) & 1:
                triples.append((S.points[i], S.points[j], S.points[k]))
    if triples:
        bases = [_frame_matrix(F, a, b, c) for a, b, c in triples]
        fix = _fixer_perms(F, group, 3)
    else:
        bases = [_frame_matrix(F, a, b, None) for a, b in combinations(S.points, 2)]
        fix = _fixer_perms(F, group, 2)
    # K maps the target points onto the chosen points of S; its inverse goes back
    inv = np.argsort(pl.permutations(np.array(bases)), axis=1)[:, idx]
    step = max(1, 4_000_000 // (len(fix) * n))
    best = None
    for start in range(0, len(inv), step):
        images = fix[:, inv[start : start + step]]  # (|fix|, chunk, n)
        cand = tuple(_lexmin_rows(np.sort(images.reshape(-1, n), axis=1)).tolist())
        if best is None or cand < best:
            best = cand
    return PointSet(F, [pl.points[i] for i in best])


def are_equivalent(S1: PointSet, S2: PointSet, group: str = "PGL") -> bool:
    _same_field(S1, S2)
    if len(S1) != len(S2):
        return False
    return canonical_form(S1, group) == canonical_form(S2, group)


def canonical_form_bruteforce(S: PointSet, group: str = "PGL") -> PointSet:
    """Full sweep over PGL(3,q) (times Frobenius); only feasible for q <= 4."""
    F = S.field
    pl = plane(F)
    idx = np.array(S.indices, dtype=np.int64)
    best = None
    mats = np.array(list(iter_pgl(F)))
    for e in _group_frobenius(F, group):
        for chunk in np.array_split(mats, max(1, len(mats) // 4096)):
            imgs = np.sort(pl.permutations(chunk, e)[:, idx], axis=1)
            cand = min(map(tuple, imgs.tolist())) if len(idx) else ()
            if best is None or cand < best:
                best = cand
    return PointSet(F, [pl.points[i] for i in best or ()])
