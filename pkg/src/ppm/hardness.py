"""Colored pattern-matching instances from partitioned subgraph isomorphism.

``psi_to_pppm`` compiles a partitioned subgraph isomorphism question (pick
one host-graph vertex per color class so that every wanted edge is present)
into a colored pattern-matching question: both graphs become grid-like
permutations whose points encode adjacency-matrix cells, and the text
coloring ties every text point to the pattern point it is allowed to match.
A color-respecting embedding then exists iff the vertex selection does, and
the embeddings are in bijection with the selections.

``count_colorful`` goes the other way for counting: it removes the coloring
by inclusion-exclusion over color subsets, so any plain counting backend can
count the embeddings that use every color once.  On the compiled instances
these are exactly the color-respecting embeddings; on arbitrary instances
they may permute the colors, which is why the cross-check target is the
brute colorful count and not the color-respecting one.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Sequence

from .oracle import brute_count
from .perm import Permutation, parse_permutation

__all__ = [
    "PppmInstance",
    "PsiInstance",
    "count_colorful",
    "count_psi_brute",
    "iter_psi_solutions",
    "parse_edge_list",
    "parse_pppm_instance",
    "psi_to_pppm",
    "render_pppm_instance",
    "solve_psi_brute",
]


def _normalize_edges(
    edges: Sequence[tuple[int, int]], vertex_count: int, what: str
) -> tuple[tuple[int, int], ...]:
    seen = set()
    for u, v in edges:
        if not (1 <= u <= vertex_count and 1 <= v <= vertex_count):
            raise ValueError(
                f"{what} edge ({u}, {v}) outside vertex range 1..{vertex_count}"
            )
        if u == v:
            raise ValueError(f"{what} edge ({u}, {v}) is a self-loop")
        seen.add((min(u, v), max(u, v)))
    return tuple(sorted(seen))


@dataclass(frozen=True)
class PsiInstance:
    """One vertex per class of the host graph must realize every wanted edge.

    Host vertices are 1..n in a canonical order where class i occupies one
    contiguous block, so ``class_sizes`` fully describes the coloring.
    ``pattern_edges`` live on the classes 1..k, ``host_edges`` on 1..n.
    """

    class_sizes: tuple[int, ...]
    pattern_edges: tuple[tuple[int, int], ...]
    host_edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.class_sizes)
        if not sizes:
            raise ValueError("at least one class required")
        if any(s < 0 for s in sizes):
            raise ValueError("class sizes must be nonnegative")
        object.__setattr__(self, "class_sizes", sizes)
        object.__setattr__(
            self,
            "pattern_edges",
            _normalize_edges(self.pattern_edges, len(sizes), "pattern"),
        )
        object.__setattr__(
            self, "host_edges", _normalize_edges(self.host_edges, sum(sizes), "host")
        )

    @property
    def k(self) -> int:
        return len(self.class_sizes)

    @property
    def n(self) -> int:
        return sum(self.class_sizes)

    def class_bounds(self, index: int) -> tuple[int, int]:
        """Inclusive vertex range (lo, hi) of class ``index``; empty classes
        give lo = hi + 1."""
        if not 1 <= index <= self.k:
            raise ValueError(f"class index {index} outside 1..{self.k}")
        lo = 1 + sum(self.class_sizes[: index - 1])
        return lo, lo + self.class_sizes[index - 1] - 1

    def class_of(self, vertex: int) -> int:
        if not 1 <= vertex <= self.n:
            raise ValueError(f"vertex {vertex} outside 1..{self.n}")
        upper = 0
        for i, size in enumerate(self.class_sizes, start=1):
            upper += size
            if vertex <= upper:
                return i
        raise AssertionError("unreachable: sizes sum to n")

    def preprocess(self) -> PsiInstance:
        """Drop host edges that no selection can ever use: those whose class
        pair is not a wanted edge (same-class pairs included).  The answer
        is unchanged and the result is what ``psi_to_pppm`` accepts."""
        wanted = set(self.pattern_edges)
        kept = tuple(
            (u, v)
            for u, v in self.host_edges
            if (
                min(self.class_of(u), self.class_of(v)),
                max(self.class_of(u), self.class_of(v)),
            )
            in wanted
        )
        return PsiInstance(self.class_sizes, self.pattern_edges, kept)


@dataclass(frozen=True)
class PppmInstance:
    """Pattern matching where text position p may only host pattern position
    ``colors[p-1]``."""

    text: Permutation
    colors: tuple[int, ...]
    pattern: Permutation

    def __post_init__(self) -> None:
        cols = tuple(int(c) for c in self.colors)
        object.__setattr__(self, "colors", cols)
        if len(cols) != len(self.text):
            raise ValueError("one color per text position required")
        k = len(self.pattern)
        if any(not 1 <= c <= k for c in cols):
            raise ValueError(f"colors must lie in 1..{k}")


# -- the grid encoding -------------------------------------------------------
#
# Both sides build the same point set from (unit count, cell list).  Units
# are classes on the pattern side and host vertices on the text side.  Per
# unit there is a vertical band holding a decreasing guard pair and a
# horizontal band holding an increasing guard pair; a cell (a, b) puts one
# point inside vertical band a and horizontal band b.  Horizontal bands are
# stacked top-to-bottom by unit while guard values rise with the unit on the
# vertical side, which tilts the whole picture: a point sequence is forced
# to stay inside one band pair, and the anchor separates the guard regions.


def _tilted_grid(
    units: int, cells: Sequence[tuple[int, int]]
) -> tuple[Permutation, dict[tuple, int]]:
    """Return the grid permutation and each point's 1-based position.

    Point ids: ("a",) the anchor, ("r", a, side) the vertical-band guards,
    ("c", b, side) the horizontal-band guards, ("p", a, b) the cell points.
    """
    by_vert: dict[int, list[int]] = {a: [] for a in range(1, units + 1)}
    by_horiz: dict[int, list[int]] = {b: [] for b in range(1, units + 1)}
    for a, b in cells:
        by_vert[a].append(b)
        by_horiz[b].append(a)
    for partners in by_vert.values():
        partners.sort()
    for partners in by_horiz.values():
        partners.sort()

    x_order: list[tuple] = [("a",)]
    for b in range(1, units + 1):
        x_order += [("c", b, 0), ("c", b, 1)]
    for a in range(1, units + 1):
        x_order.append(("r", a, 0))
        x_order += [("p", a, b) for b in by_vert[a]]
        x_order.append(("r", a, 1))

    # bottom to top: horizontal bands from the last unit upward, each one
    # low guard / cell points / high guard; then the anchor; then the
    # vertical guards, low point of each pair before its high point
    y_order: list[tuple] = []
    for b in range(units, 0, -1):
        y_order.append(("c", b, 0))
        y_order += [("p", a, b) for a in by_horiz[b]]
        y_order.append(("c", b, 1))
    y_order.append(("a",))
    for a in range(1, units + 1):
        y_order += [("r", a, 1), ("r", a, 0)]

    y_rank = {pid: rank for rank, pid in enumerate(y_order, start=1)}
    perm = Permutation(y_rank[pid] for pid in x_order)
    position = {pid: pos for pos, pid in enumerate(x_order, start=1)}
    return perm, position


def _cell_list(units: int, edges: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    cells = [(a, a) for a in range(1, units + 1)]
    for u, v in edges:
        cells += [(u, v), (v, u)]
    return cells


def psi_to_pppm(psi: PsiInstance) -> PppmInstance:
    """Compile a preprocessed instance; text length 5n+2m+1, pattern length
    5k+2|pattern_edges|+1.  Raises if any host edge's class pair is not a
    wanted edge (run ``preprocess`` first): such an edge has no cell color.
    """
    wanted = set(psi.pattern_edges)
    for u, v in psi.host_edges:
        pair = (
            min(psi.class_of(u), psi.class_of(v)),
            max(psi.class_of(u), psi.class_of(v)),
        )
        if pair not in wanted:
            raise ValueError(
                f"host edge ({u}, {v}) projects to {pair}, not a pattern edge;"
                " preprocess the instance first"
            )

    pattern, pattern_pos = _tilted_grid(psi.k, _cell_list(psi.k, psi.pattern_edges))
    text, text_pos = _tilted_grid(psi.n, _cell_list(psi.n, psi.host_edges))

    colors = [0] * len(text)
    for pid, pos in text_pos.items():
        if pid[0] == "a":
            ref = pid
        elif pid[0] == "p":
            ref = ("p", psi.class_of(pid[1]), psi.class_of(pid[2]))
        else:
            ref = (pid[0], psi.class_of(pid[1]), pid[2])
        colors[pos - 1] = pattern_pos[ref]
    return PppmInstance(text, tuple(colors), pattern)


# -- reference solvers -------------------------------------------------------


def iter_psi_solutions(psi: PsiInstance) -> Iterator[tuple[int, ...]]:
    """Yield every valid selection as a tuple (class-1 vertex, ..., class-k
    vertex), in lexicographic order."""
    present = set(psi.host_edges)
    ranges = [
        range(lo, hi + 1) for lo, hi in (psi.class_bounds(i) for i in range(1, psi.k + 1))
    ]
    for pick in product(*ranges):
        if all(
            (min(pick[i - 1], pick[j - 1]), max(pick[i - 1], pick[j - 1])) in present
            for i, j in psi.pattern_edges
        ):
            yield pick


def solve_psi_brute(psi: PsiInstance) -> bool:
    return next(iter_psi_solutions(psi), None) is not None


def count_psi_brute(psi: PsiInstance) -> int:
    return sum(1 for _ in iter_psi_solutions(psi))


def _standardize(vals: Sequence[int]) -> Permutation:
    order = sorted(vals)
    return Permutation(bisect_left(order, v) + 1 for v in vals)


def count_colorful(
    inst: PppmInstance,
    backend: Callable[[Permutation, Permutation], int] = brute_count,
) -> int:
    """Embeddings of the pattern that use every color exactly once.

    Inclusion-exclusion over color subsets X: the backend counts plain
    embeddings into the text restricted to colors in X, and the signed sum
    cancels every embedding that misses a color.  Subsets keeping fewer
    text entries than the pattern is long contribute zero and are skipped.
    """
    k = len(inst.pattern)
    tvals = inst.text.values
    total = 0
    for mask in range(1 << k):
        kept = [v for v, c in zip(tvals, inst.colors) if mask >> (c - 1) & 1]
        if len(kept) < k:
            continue
        term = backend(_standardize(kept), inst.pattern)
        total += term if (k - mask.bit_count()) % 2 == 0 else -term
    return total


# -- file formats -------------------------------------------------------------


def parse_edge_list(text: str) -> tuple[tuple[int, int], ...]:
    """Edges one per line as 'u v' (1-based); blank lines and text after
    '#' are ignored.  Validation against a vertex count happens when the
    edges enter a :class:`PsiInstance`."""
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer endpoint in {line!r}") from None
    return tuple(edges)


def render_pppm_instance(inst: PppmInstance) -> str:
    """Three lines: text permutation, colors, pattern permutation."""
    return "\n".join(
        (
            " ".join(str(v) for v in inst.text.values),
            " ".join(str(c) for c in inst.colors),
            " ".join(str(v) for v in inst.pattern.values),
        )
    ) + "\n"


def parse_pppm_instance(text: str) -> PppmInstance:
    lines = [line for line in text.splitlines() if line.strip()]
    if len(lines) != 3:
        raise ValueError(
            f"expected three lines (text, colors, pattern), got {len(lines)}"
        )
    try:
        colors = tuple(int(c) for c in lines[1].split())
    except ValueError:
        raise ValueError("non-integer color entry") from None
    return PppmInstance(parse_permutation(lines[0]), colors, parse_permutation(lines[2]))
