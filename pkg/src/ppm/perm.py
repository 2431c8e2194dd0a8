"""Permutations as planar point sets: neighbors, incidence graphs, embeddings.

A permutation sigma of length n is identified with the point set
{(i, sigma(i)) : 1 <= i <= n}.  Two virtual points (0, 0) and (+inf, +inf)
act as sentinels so that every point has a neighbor in each of the four
axis directions.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from enum import Enum
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence


class Point(NamedTuple):
    x: float
    y: float


#: Virtual sentinel below-left of every real point.
LOW = Point(0, 0)
#: Virtual sentinel above-right of every real point.
HIGH = Point(math.inf, math.inf)


def is_virtual(p: Point) -> bool:
    return p == LOW or p == HIGH


class Direction(Enum):
    LEFT = "left"
    RIGHT = "right"
    DOWN = "down"
    UP = "up"


class Permutation:
    """Immutable permutation of 1..n, callable with 1-based positions."""

    __slots__ = ("values", "_inv")

    def __init__(self, values: Iterable[int]):
        vals = tuple(int(v) for v in values)
        n = len(vals)
        if n == 0:
            raise ValueError("empty permutation")
        if sorted(vals) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {vals!r}")
        object.__setattr__(self, "values", vals)
        inv = [0] * n
        for i, v in enumerate(vals):
            inv[v - 1] = i + 1
        object.__setattr__(self, "_inv", tuple(inv))

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Permutation is immutable")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __call__(self, i: int) -> int:
        """Value at 1-based position i."""
        if not 1 <= i <= len(self.values):
            raise IndexError(f"position {i} out of range 1..{len(self.values)}")
        return self.values[i - 1]

    def position_of(self, v: int) -> int:
        """1-based position holding value v."""
        if not 1 <= v <= len(self.values):
            raise IndexError(f"value {v} out of range 1..{len(self.values)}")
        return self._inv[v - 1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"Permutation({list(self.values)!r})"

    # -- point-set view ----------------------------------------------------

    def point(self, i: int) -> Point:
        return Point(i, self(i))

    def points(self) -> tuple[Point, ...]:
        return tuple(Point(i + 1, v) for i, v in enumerate(self.values))

    # -- symmetries ---------------------------------------------------------

    def reverse(self) -> "Permutation":
        """Mirror left-right: position i takes the old value at n+1-i."""
        return Permutation(self.values[::-1])

    def complement(self) -> "Permutation":
        """Mirror top-bottom: value v becomes n+1-v."""
        n = len(self.values)
        return Permutation(n + 1 - v for v in self.values)

    def inverse(self) -> "Permutation":
        """Mirror along the main diagonal (swap position and value)."""
        return Permutation(self._inv)

    def compose(self, other: "Permutation") -> "Permutation":
        """(self . other)(i) = self(other(i)); lengths must match."""
        if len(self) != len(other):
            raise ValueError("length mismatch in compose")
        return Permutation(self(other(i)) for i in range(1, len(self) + 1))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(1, n + 1))

    @classmethod
    def random(cls, n: int, rng) -> "Permutation":
        vals = list(range(1, n + 1))
        rng.shuffle(vals)
        return cls(vals)


def parse_permutation(text: str) -> Permutation:
    """Parse a whitespace-separated 1-based permutation from a string."""
    parts = text.split()
    if not parts:
        raise ValueError("no permutation entries found")
    try:
        vals = [int(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"non-integer permutation entry: {exc}") from None
    return Permutation(vals)


def neighbor(perm: Permutation, p: Point, direction: Direction) -> Point:
    """Nearest point of perm (or virtual sentinel) in one axis direction.

    LEFT/RIGHT step one position, DOWN/UP step one value.  Falling off the
    low end yields LOW, off the high end yields HIGH.  Virtual points have
    no neighbors.
    """
    if is_virtual(p):
        raise ValueError("virtual points have no neighbors")
    n = len(perm)
    i = int(p.x)
    if not (1 <= i <= n and perm(i) == p.y):
        raise ValueError(f"{p} is not a point of {perm!r}")
    if direction is Direction.LEFT:
        return perm.point(i - 1) if i > 1 else LOW
    if direction is Direction.RIGHT:
        return perm.point(i + 1) if i < n else HIGH
    v = int(p.y)
    if direction is Direction.DOWN:
        return perm.point(perm.position_of(v - 1)) if v > 1 else LOW
    if direction is Direction.UP:
        return perm.point(perm.position_of(v + 1)) if v < n else HIGH
    raise ValueError(f"unknown direction {direction!r}")


class IncidenceEdge(NamedTuple):
    u: int  # smaller 1-based position
    w: int  # larger 1-based position
    index_adjacent: bool  # positions differ by one
    value_adjacent: bool  # values differ by one


class IncidenceGraph:
    """Union of the position path and the value path of a permutation.

    Vertices are the 1-based positions.  The position path joins i and i+1;
    the value path joins the positions of v and v+1.  An edge lying on both
    paths is stored once with both adjacency flags set.
    """

    __slots__ = ("perm", "edges", "adjacency")

    def __init__(self, perm: Permutation):
        n = len(perm)
        flags: dict[tuple[int, int], list[bool]] = {}
        for i in range(1, n):
            flags.setdefault((i, i + 1), [False, False])[0] = True
        for v in range(1, n):
            a = perm.position_of(v)
            b = perm.position_of(v + 1)
            key = (a, b) if a < b else (b, a)
            flags.setdefault(key, [False, False])[1] = True
        edges = tuple(
            IncidenceEdge(u, w, fi, fv)
            for (u, w), (fi, fv) in sorted(flags.items())
        )
        adjacency: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
        for e in edges:
            adjacency[e.u].append(e.w)
            adjacency[e.w].append(e.u)
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(
            self, "adjacency", {v: tuple(sorted(ns)) for v, ns in adjacency.items()}
        )

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("IncidenceGraph is immutable")

    @property
    def n(self) -> int:
        return len(self.perm)

    def edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset((e.u, e.w) for e in self.edges)

    def degree(self, i: int) -> int:
        return len(self.adjacency[i])


def incidence_graph(perm: Permutation) -> IncidenceGraph:
    return IncidenceGraph(perm)


def validate_embedding(
    pattern: Permutation,
    text: Permutation,
    mapping: Mapping[Point, Point],
) -> bool:
    """Check the two neighbor-order conditions on a partial point map.

    For every mapped pattern point p and every mapped neighbor q of p:
    if q = right neighbor of p then mapping[p].x < mapping[q].x, and
    symmetrically for left; if q = up neighbor then mapping[p].y <
    mapping[q].y, symmetrically for down.  Virtual pattern points, when
    present in the mapping, must map to the same virtual text point and
    take part in the comparisons (LOW.x = 0 < every real x, etc.).

    Only these pairwise conditions are checked; callers wanting a genuine
    occurrence must supply a total map (then the conditions force order
    isomorphism, since images are monotone along both paths).
    """
    pattern_points = set(pattern.points())
    for p, q in mapping.items():
        if is_virtual(p):
            if q != p:
                return False
            continue
        if p not in pattern_points:
            raise ValueError(f"{p} is not a pattern point")
        if is_virtual(q):
            raise ValueError(f"real point {p} mapped to virtual {q}")
        i = int(q.x)
        if not (1 <= i <= len(text) and text(i) == q.y):
            raise ValueError(f"{q} is not a text point")

    def image(p: Point):
        if p in mapping:
            return mapping[p]
        if is_virtual(p):
            return p  # virtual points implicitly map to themselves
        return None

    for p, fp in mapping.items():
        if is_virtual(p):
            continue
        for direction in (Direction.LEFT, Direction.RIGHT):
            q = neighbor(pattern, p, direction)
            fq = image(q)
            if fq is None:
                continue
            if direction is Direction.RIGHT and not fp.x < fq.x:
                return False
            if direction is Direction.LEFT and not fq.x < fp.x:
                return False
        for direction in (Direction.DOWN, Direction.UP):
            q = neighbor(pattern, p, direction)
            fq = image(q)
            if fq is None:
                continue
            if direction is Direction.UP and not fp.y < fq.y:
                return False
            if direction is Direction.DOWN and not fq.y < fp.y:
                return False
    return True


class Embedding:
    """Injective map from pattern points to text points.

    Construction validates injectivity and membership; use
    validate_embedding to check the order conditions.
    """

    __slots__ = ("pattern", "text", "mapping")

    def __init__(
        self,
        pattern: Permutation,
        text: Permutation,
        mapping: Mapping[Point, Point],
    ):
        pat_points = set(pattern.points())
        txt_points = set(text.points())
        seen: set[Point] = set()
        clean: dict[Point, Point] = {}
        for p, q in mapping.items():
            if is_virtual(p):
                if p != q:
                    raise ValueError("virtual points must map to themselves")
                continue
            if p not in pat_points:
                raise ValueError(f"{p} is not a pattern point")
            if q not in txt_points:
                raise ValueError(f"{q} is not a text point")
            if q in seen:
                raise ValueError(f"not injective: {q} used twice")
            seen.add(q)
            clean[p] = q
        object.__setattr__(self, "pattern", pattern)
        object.__setattr__(self, "text", text)
        object.__setattr__(self, "mapping", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Embedding is immutable")

    @classmethod
    def from_index_map(
        cls, pattern: Permutation, text: Permutation, indices: Mapping[int, int]
    ) -> "Embedding":
        """Build from a map of 1-based pattern positions to text positions."""
        mapping = {
            pattern.point(i): text.point(j) for i, j in indices.items()
        }
        return cls(pattern, text, mapping)

    def index_map(self) -> dict[int, int]:
        return {int(p.x): int(q.x) for p, q in self.mapping.items()}

    def is_valid(self) -> bool:
        return validate_embedding(self.pattern, self.text, self.mapping)


def lis_lds(perm: Permutation | Sequence[int]) -> tuple[int, int]:
    """Lengths of the longest strictly increasing and decreasing subsequences.

    Patience sorting, O(n log n).
    """
    vals = perm.values if isinstance(perm, Permutation) else tuple(perm)
    inc_tails: list[int] = []
    dec_tails: list[int] = []  # tails of increasing subsequences of -v
    for v in vals:
        i = bisect_left(inc_tails, v)
        if i == len(inc_tails):
            inc_tails.append(v)
        else:
            inc_tails[i] = v
        i = bisect_left(dec_tails, -v)
        if i == len(dec_tails):
            dec_tails.append(-v)
        else:
            dec_tails[i] = -v
    return len(inc_tails), len(dec_tails)
