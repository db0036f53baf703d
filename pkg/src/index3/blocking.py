"""Blocking-set predicates and measures on point sets."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Union

from .plane import Line, Point, PointSet, GeometryError, normalize, plane


@dataclass(frozen=True)
class AtLeast:
    """Overflow value of :func:`cover_index`: the index is at least ``bound``."""

    bound: int

    def __str__(self) -> str:
        return f">={self.bound}"


Index = Union[int, AtLeast]


def intersection_sizes(S: PointSet) -> list[int]:
    """|S ∩ l| for every line l, in plane line order."""
    s = S.mask
    return [(lm & s).bit_count() for lm in plane(S.field).line_masks]


def intersection_spectrum(S: PointSet) -> dict[int, int]:
    return dict(sorted(Counter(intersection_sizes(S)).items()))


def is_blocking(S: PointSet) -> bool:
    s = S.mask
    return all(lm & s for lm in plane(S.field).line_masks)


def is_proper(S: PointSet) -> bool:
    """Blocking and containing no full line."""
    s = S.mask
    return is_blocking(S) and not any(lm & s == lm for lm in plane(S.field).line_masks)


def tangents_at(S: PointSet, P: Point) -> list[Line]:
    P = normalize(S.field, P)
    if P not in S.points:
        raise GeometryError(f"{P} is not a point of the set")
    pl = plane(S.field)
    s = S.mask
    return [pl.lines[li] for li in pl.point_lines[pl.index[P]] if (pl.line_masks[li] & s).bit_count() == 1]


def tangent_counts(S: PointSet) -> list[int]:
    pl = plane(S.field)
    s = S.mask
    one = [(lm & s).bit_count() == 1 for lm in pl.line_masks]
    return [sum(one[li] for li in pl.point_lines[pl.index[P]]) for P in S]


def is_minimal(S: PointSet) -> bool:
    """Blocking, and every point lies on a tangent line."""
    return is_blocking(S) and all(tangent_counts(S))


def cover_index(S: PointSet, max_index: int = 4) -> Index:
    """Least number of lines whose union contains S, or AtLeast(max_index + 1).

    Depth-first: the lowest uncovered point must lie on one of the chosen lines,
    so each level branches over the q + 1 lines through it.
    """
    if len(S) == 0:
        raise GeometryError("cover_index needs a nonempty set")
    if not 1 <= max_index <= 4:
        raise GeometryError("max_index must be between 1 and 4")
    pl = plane(S.field)

    def coverable(rest: int, depth: int) -> bool:
        if rest == 0:
            return True
        if depth == 0:
            return False
        low = (rest & -rest).bit_length() - 1
        return any(coverable(rest & ~pl.line_masks[li], depth - 1) for li in pl.point_lines[low])

    s = S.mask
    for k in range(1, max_index + 1):
        if coverable(s, k):
            return k
    return AtLeast(max_index + 1)


def redei_lines(S: PointSet) -> list[Line]:
    """Lines l with |S ∩ l| maximal and |S| = q + |S ∩ l|; empty if S is not of Rédei type."""
    sizes = intersection_sizes(S)
    n = max(sizes)
    if len(S) != S.field.q + n:
        return []
    lines = plane(S.field).lines
    return [lines[i] for i, c in enumerate(sizes) if c == n]


@dataclass(frozen=True)
class BlockingReport:
    is_blocking: bool
    is_proper: bool
    is_minimal: bool
    index: Index
    redei_lines: list[Line]
    size: int
    intersection_spectrum: dict[int, int]

    def to_json(self) -> dict:
        return {
            "is_blocking": self.is_blocking,
            "is_proper": self.is_proper,
            "is_minimal": self.is_minimal,
            "index": self.index if isinstance(self.index, int) else str(self.index),
            "redei_lines": [list(l) for l in self.redei_lines],
            "size": self.size,
            "intersection_spectrum": {str(k): v for k, v in self.intersection_spectrum.items()},
        }


def analyze(S: PointSet, max_index: int = 4) -> BlockingReport:
    return BlockingReport(
        is_blocking=is_blocking(S),
        is_proper=is_proper(S),
        is_minimal=is_minimal(S),
        index=cover_index(S, max_index),
        redei_lines=redei_lines(S),
        size=len(S),
        intersection_spectrum=intersection_spectrum(S),
    )
