"""Brute-force reference solvers used to cross-check every other backend.

All functions here enumerate occurrences directly from the definition: an
occurrence of pattern pi (length k) in text tau (length n) is a strictly
increasing sequence of k text positions whose values are ordered like pi.
Backtracking prunes with the tightest value bounds implied by the already
placed positions, which shrinks the search without changing the enumerated
set.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Iterator, Sequence

from .perm import Permutation


def _value_bound_refs(pattern: Permutation) -> tuple[list[int], list[int]]:
    """For each 0-based position t: index of the earlier position carrying
    the largest pattern value below pattern[t], and the smallest above.

    -1 means no such position; then 0 / n+1 act as bounds.  Checking a new
    candidate only against these two is exact because the already placed
    prefix is order-isomorphic to the pattern prefix.
    """
    vals = pattern.values
    below = [-1] * len(vals)
    above = [-1] * len(vals)
    for t, v in enumerate(vals):
        best_lo = 0
        best_hi = len(vals) + 1
        for j in range(t):
            w = vals[j]
            if best_lo < w < v:
                best_lo = w
                below[t] = j
            elif v < w < best_hi:
                best_hi = w
                above[t] = j
    return below, above


def occurrences(
    text: Permutation, pattern: Permutation
) -> Iterator[tuple[int, ...]]:
    """Yield all occurrences as tuples of 1-based text positions, in
    lexicographic order."""
    n, k = len(text), len(pattern)
    if k > n:
        return
    below, above = _value_bound_refs(pattern)
    tvals = text.values
    chosen = [0] * k  # 0-based text indices

    def extend(t: int, start: int) -> Iterator[tuple[int, ...]]:
        if t == k:
            yield tuple(i + 1 for i in chosen)
            return
        lo = tvals[chosen[below[t]]] if below[t] >= 0 else 0
        hi = tvals[chosen[above[t]]] if above[t] >= 0 else n + 1
        # keep enough room for the remaining pattern positions
        for i in range(start, n - (k - t - 1)):
            v = tvals[i]
            if lo < v < hi:
                chosen[t] = i
                yield from extend(t + 1, i + 1)

    yield from extend(0, 0)


def brute_contains(text: Permutation, pattern: Permutation) -> bool:
    """True iff the text contains the pattern."""
    return next(occurrences(text, pattern), None) is not None


def brute_count(text: Permutation, pattern: Permutation) -> int:
    """Number of occurrences of the pattern in the text."""
    return sum(1 for _ in occurrences(text, pattern))


# -- colored variants --------------------------------------------------------


def _check_colors(
    text: Permutation, colors: Sequence[int], k: int
) -> tuple[int, ...]:
    cols = tuple(int(c) for c in colors)
    if len(cols) != len(text):
        raise ValueError("one color per text position required")
    if any(not 1 <= c <= k for c in cols):
        raise ValueError(f"colors must lie in 1..{k}")
    return cols


def colored_occurrences(
    text: Permutation, colors: Sequence[int], pattern: Permutation
) -> Iterator[tuple[int, ...]]:
    """Occurrences whose i-th position has color i: the embedding respects
    the coloring position by position.  Candidates are drawn per color
    class, so colored instances with long texts stay tractable."""
    n, k = len(text), len(pattern)
    cols = _check_colors(text, colors, k)
    if k > n:
        return
    below, above = _value_bound_refs(pattern)
    tvals = text.values
    by_color: list[list[int]] = [[] for _ in range(k + 1)]
    for i, c in enumerate(cols):
        by_color[c].append(i)
    chosen = [0] * k

    def extend(t: int, start: int) -> Iterator[tuple[int, ...]]:
        if t == k:
            yield tuple(i + 1 for i in chosen)
            return
        lo = tvals[chosen[below[t]]] if below[t] >= 0 else 0
        hi = tvals[chosen[above[t]]] if above[t] >= 0 else n + 1
        cand = by_color[t + 1]
        for i in cand[bisect_left(cand, start):]:
            v = tvals[i]
            if lo < v < hi:
                chosen[t] = i
                yield from extend(t + 1, i + 1)

    yield from extend(0, 0)


def brute_pppm_contains(
    text: Permutation, colors: Sequence[int], pattern: Permutation
) -> bool:
    """Decision for pattern matching with a position-respecting coloring."""
    return next(colored_occurrences(text, colors, pattern), None) is not None


def brute_pppm_count(
    text: Permutation, colors: Sequence[int], pattern: Permutation
) -> int:
    return sum(1 for _ in colored_occurrences(text, colors, pattern))


def colorful_occurrences(
    text: Permutation, colors: Sequence[int], pattern: Permutation
) -> Iterator[tuple[int, ...]]:
    """Occurrences that use every color exactly once, in any position order."""
    n, k = len(text), len(pattern)
    cols = _check_colors(text, colors, k)
    if k > n:
        return
    below, above = _value_bound_refs(pattern)
    tvals = text.values
    chosen = [0] * k

    def extend(t: int, start: int, used: int) -> Iterator[tuple[int, ...]]:
        if t == k:
            yield tuple(i + 1 for i in chosen)
            return
        lo = tvals[chosen[below[t]]] if below[t] >= 0 else 0
        hi = tvals[chosen[above[t]]] if above[t] >= 0 else n + 1
        for i in range(start, n - (k - t - 1)):
            bit = 1 << (cols[i] - 1)
            if used & bit:
                continue
            v = tvals[i]
            if lo < v < hi:
                chosen[t] = i
                yield from extend(t + 1, i + 1, used | bit)

    yield from extend(0, 0, 0)


def brute_colorful_count(
    text: Permutation, colors: Sequence[int], pattern: Permutation
) -> int:
    return sum(1 for _ in colorful_occurrences(text, colors, pattern))


def brute_colorful_contains(
    text: Permutation, colors: Sequence[int], pattern: Permutation
) -> bool:
    return next(colorful_occurrences(text, colors, pattern), None) is not None
