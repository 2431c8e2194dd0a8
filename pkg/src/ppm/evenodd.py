"""Occurrence search that guesses only the even pattern positions.

The even positions ("anchors") form roughly half the pattern; the odd
positions are squeezed between them.  Enumerate candidate anchor images as
index-subsequences of the text, prune candidates that leave no room for
the odd positions, then either extend greedily (decision) or count the
extensions chain by chain (counting).

Once anchors are fixed, every odd position has a box: horizontally between
its two anchor neighbors' images, vertically between the images of its
value neighbors.  Odd positions with consecutive pattern values form
chains whose images need increasing values; distinct chains do not
constrain each other, so extension counts multiply.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

from .perm import Permutation


@dataclass(frozen=True)
class EvenOddPartition:
    """Even anchors, odd positions in value order, and the value chains."""

    anchors: tuple[int, ...]
    odds_by_value: tuple[int, ...]
    chains: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class _OddInfo:
    position: int
    left_anchor: int | None  # pattern position q-1, None at the left edge
    right_anchor: int | None
    down: tuple[str, int]  # ("anchor", pos) | ("odd", pos) | ("none", 0)
    up: tuple[str, int]


@dataclass(frozen=True)
class _ChainSpec:
    positions: tuple[int, ...]
    down: tuple[str, int]  # value bound below the first element
    up: tuple[str, int]  # value bound above the last element
    sides: tuple[tuple[int | None, int | None], ...]  # anchor neighbors


@dataclass(frozen=True)
class _Analysis:
    anchors: tuple[int, ...]
    anchor_vals: tuple[int, ...]
    value_order: tuple[int, ...]  # anchor slots sorted by pattern value
    room_below: int  # odd values below the lowest anchor value
    room_between: tuple[int, ...]  # odd values between value-consecutive anchors
    room_above: int
    odds: tuple[_OddInfo, ...]  # in increasing pattern value
    chains: tuple[tuple[int, ...], ...]
    chain_specs: tuple[_ChainSpec, ...]
    trailing_odd: bool  # pattern ends on an odd position


@lru_cache(maxsize=4096)
def _analyze(pattern_values: tuple[int, ...]) -> _Analysis:
    pattern = Permutation(pattern_values)
    k = len(pattern)
    anchors = tuple(range(2, k + 1, 2))
    anchor_vals = tuple(pattern(a) for a in anchors)
    value_order = tuple(
        sorted(range(len(anchors)), key=lambda j: anchor_vals[j])
    )
    sorted_vals = sorted(anchor_vals)
    if anchors:
        room_below = sorted_vals[0] - 1
        room_between = tuple(
            b - a - 1 for a, b in zip(sorted_vals, sorted_vals[1:])
        )
        room_above = k - sorted_vals[-1]
    else:
        room_below = k  # the whole pattern is odd positions
        room_between = ()
        room_above = 0

    def classify(pos: int) -> tuple[str, int]:
        return ("odd" if pos % 2 else "anchor", pos)

    odd_positions = sorted(range(1, k + 1, 2), key=pattern)
    odds = []
    for q in odd_positions:
        v = pattern(q)
        down = classify(pattern.position_of(v - 1)) if v > 1 else ("none", 0)
        up = classify(pattern.position_of(v + 1)) if v < k else ("none", 0)
        odds.append(
            _OddInfo(
                position=q,
                left_anchor=q - 1 if q > 1 else None,
                right_anchor=q + 1 if q < k else None,
                down=down,
                up=up,
            )
        )
    chains: list[tuple[int, ...]] = []
    current: list[int] = []
    prev_val = None
    for q in odd_positions:
        v = pattern(q)
        if prev_val is not None and v == prev_val + 1:
            current.append(q)
        else:
            if current:
                chains.append(tuple(current))
            current = [q]
        prev_val = v
    if current:
        chains.append(tuple(current))
    info_at = {o.position: o for o in odds}
    chain_specs = tuple(
        _ChainSpec(
            positions=chain,
            down=info_at[chain[0]].down,
            up=info_at[chain[-1]].up,
            sides=tuple(
                (info_at[q].left_anchor, info_at[q].right_anchor)
                for q in chain
            ),
        )
        for chain in chains
    )
    return _Analysis(
        anchors=anchors,
        anchor_vals=anchor_vals,
        value_order=value_order,
        room_below=room_below,
        room_between=room_between,
        room_above=room_above,
        odds=tuple(odds),
        chains=tuple(chains),
        chain_specs=chain_specs,
        trailing_odd=k % 2 == 1,
    )


def even_odd_partition(pattern: Permutation) -> EvenOddPartition:
    a = _analyze(pattern.values)
    return EvenOddPartition(
        anchors=a.anchors,
        odds_by_value=tuple(o.position for o in a.odds),
        chains=a.chains,
    )


def enumerate_anchor_maps(
    text: Permutation,
    pattern: Permutation,
    *,
    prune: bool = True,
    stats: dict | None = None,
) -> Iterator[dict[int, int]]:
    """Yield candidate maps {even pattern position -> text position}.

    Candidates run in lexicographic order of their position tuples.  The
    images are increasing in position and ordered by value like the anchor
    values (anything else extends to nothing).  With prune=True two room
    tests discard candidates early: consecutive anchor images must leave a
    free position for the odd position between them (plus one before the
    first, and one after the last for ODD pattern lengths), and
    value-consecutive anchor images must leave enough free values for the
    odd values squeezed between them (plus below and above the extremes).
    Both tests only reject candidates with zero extensions, so decisions
    and counts do not depend on prune.

    Stats keys when a dict is passed: candidates_total (index
    subsequences seen), candidates_after_gap (passing the index-room
    test), anchors_valid (also value-ordered and value-roomy = yielded).
    """
    n, k = len(text), len(pattern)
    a = _analyze(pattern.values)
    e = len(a.anchors)
    if stats is not None:
        stats.setdefault("candidates_total", 0)
        stats.setdefault("candidates_after_gap", 0)
        stats.setdefault("anchors_valid", 0)
    if k > n:
        return
    for combo in itertools.combinations(range(1, n + 1), e):
        if stats is not None:
            stats["candidates_total"] += 1
        if prune and e:
            if combo[0] < 2:
                continue
            if any(b - c < 2 for c, b in zip(combo, combo[1:])):
                continue
            if a.trailing_odd and combo[-1] > n - 1:
                continue
        if stats is not None:
            stats["candidates_after_gap"] += 1
        vals = tuple(text(x) for x in combo)
        ordered = all(
            vals[s] < vals[t]
            for s, t in zip(a.value_order, a.value_order[1:])
        )
        if not ordered:
            continue
        if prune and e:
            sorted_vals = sorted(vals)
            if sorted_vals[0] - 1 < a.room_below:
                continue
            if n - sorted_vals[-1] < a.room_above:
                continue
            if any(
                hi - lo - 1 < need
                for (lo, hi), need in zip(
                    zip(sorted_vals, sorted_vals[1:]), a.room_between
                )
            ):
                continue
        if stats is not None:
            stats["anchors_valid"] += 1
        yield dict(zip(a.anchors, combo))


def _odd_box(
    info: _OddInfo,
    text: Permutation,
    anchor_map: Mapping[int, int],
    placed: Mapping[int, int],
) -> tuple[int, int, int, int]:
    """(x_lo, x_hi, y_lo, y_hi), all exclusive bounds."""
    n = len(text)
    x_lo = anchor_map[info.left_anchor] if info.left_anchor else 0
    x_hi = anchor_map[info.right_anchor] if info.right_anchor else n + 1
    kind, pos = info.down
    if kind == "anchor":
        y_lo = text(anchor_map[pos])
    elif kind == "odd":
        y_lo = text(placed[pos])
    else:
        y_lo = 0
    kind, pos = info.up
    if kind == "anchor":
        y_hi = text(anchor_map[pos])
    else:
        # an odd up-neighbor is placed later and imposes its bound then
        y_hi = n + 1
    return x_lo, x_hi, y_lo, y_hi


def extend_greedy(
    text: Permutation,
    pattern: Permutation,
    anchor_map: Mapping[int, int],
) -> dict[int, int] | None:
    """Complete an anchor map to a full occurrence, or report failure.

    Odd positions are placed in increasing pattern value, each taking the
    lowest-value text point in its box; taking anything higher only shrinks
    later boxes, so failure here means no completion exists.
    """
    a = _analyze(pattern.values)
    result = dict(anchor_map)
    placed: dict[int, int] = {}
    for info in a.odds:
        x_lo, x_hi, y_lo, y_hi = _odd_box(info, text, anchor_map, placed)
        pick = None
        for v in range(y_lo + 1, y_hi):
            x = text.position_of(v)
            if x_lo < x < x_hi:
                pick = x
                break
        if pick is None:
            return None
        placed[info.position] = pick
        result[info.position] = pick
    assert len(set(result.values())) == len(pattern)
    return result


def evenodd_contains(
    text: Permutation,
    pattern: Permutation,
    *,
    prune: bool = True,
    stats: dict | None = None,
) -> bool:
    """Decision: some anchor candidate extends greedily."""
    if stats is not None:
        stats.setdefault("extensions_tried", 0)
    for anchor_map in enumerate_anchor_maps(
        text, pattern, prune=prune, stats=stats
    ):
        if stats is not None:
            stats["extensions_tried"] += 1
        if extend_greedy(text, pattern, anchor_map) is not None:
            return True
    return False


def _count_chain(
    spec: _ChainSpec,
    text: Permutation,
    anchor_map: Mapping[int, int],
) -> int:
    """Sweep text points by increasing value; prefix sums count the ways to
    place the chain's positions on value-increasing points inside their
    boxes.  Only the chain ends carry outside value bounds."""
    n = len(text)
    kind, pos = spec.down
    y_lo = text(anchor_map[pos]) if kind == "anchor" else 0
    kind, pos = spec.up
    y_hi = text(anchor_map[pos]) if kind == "anchor" else n + 1
    intervals = [
        (
            anchor_map[left] if left else 0,
            anchor_map[right] if right else n + 1,
        )
        for left, right in spec.sides
    ]
    r = len(spec.positions)
    prefix = [0] * (r + 1)  # prefix[t]: placements of the first t elements
    total = 0
    for v in range(y_lo + 1, n + 1):
        x = text.position_of(v)
        cur = [0] * (r + 1)
        for t in range(r, 0, -1):
            lo, hi = intervals[t - 1]
            if lo < x < hi:
                cur[t] = prefix[t - 1] if t > 1 else 1
        if v < y_hi:
            total += cur[r]
        for t in range(1, r + 1):
            prefix[t] += cur[t]
    return total


def evenodd_count(
    text: Permutation,
    pattern: Permutation,
    *,
    prune: bool = True,
    stats: dict | None = None,
) -> int:
    """Occurrence count: per anchor candidate, chain counts multiply."""
    a = _analyze(pattern.values)
    total = 0
    for anchor_map in enumerate_anchor_maps(
        text, pattern, prune=prune, stats=stats
    ):
        product = 1
        for spec in a.chain_specs:
            product *= _count_chain(spec, text, anchor_map)
            if product == 0:
                break
        total += product
    return total
