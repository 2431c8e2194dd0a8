"""Occurrence search by dynamic programming over a nice tree decomposition.

The constraint graph of a pattern (its incidence graph) gets a tree
decomposition; partial assignments of text positions to the pattern
positions in a bag are table keys.  Introduce steps filter candidate
positions with precomputed bitmasks (one bit per text position), so the
inner loop is a few AND operations however the constraints look.

Strip guessing trades constraint edges for domain restrictions: split the
text into s contiguous strips, guess which pattern positions start a new
strip, and drop the position-order component of the constraint entering
each guessed position.  Cross-strip position order then follows from the
domains alone, so every satisfying assignment is still a genuine
occurrence, while the constraint graph loses edges and can decompose
better.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from .csp import CspConstraint, CspInstance, build_csp, relax_constraint
from .perm import Permutation, incidence_graph
from .treewidth import (
    Graph,
    NiceDecomposition,
    TreeDecomposition,
    make_nice,
    min_fill_decomposition,
    validate_decomposition,
)


# -- per-text position masks --------------------------------------------------


class TextMasks:
    """Bitmask views of a text: bit a-1 stands for text position a."""

    __slots__ = ("n", "full", "before", "after", "lower", "higher")

    def __init__(self, text: Permutation):
        n = len(text)
        tv = text.values
        self.n = n
        self.full = (1 << n) - 1
        self.before = [0] * (n + 1)
        self.after = [0] * (n + 1)
        self.lower = [0] * (n + 1)
        self.higher = [0] * (n + 1)
        by_value = [0] * (n + 2)
        running = 0
        # lower[x] needs value ranks: positions sorted by text value
        order = sorted(range(1, n + 1), key=lambda i: tv[i - 1])
        for i in order:
            by_value[tv[i - 1]] = running
            running |= 1 << (i - 1)
        for x in range(1, n + 1):
            bit = 1 << (x - 1)
            self.before[x] = bit - 1
            self.after[x] = self.full & ~bit & ~(bit - 1)
            self.lower[x] = by_value[tv[x - 1]]
            self.higher[x] = self.full & ~bit & ~by_value[tv[x - 1]]


def _constraint_mask(masks: TextMasks, c: CspConstraint, new_is_u: bool, x: int) -> int:
    """Positions allowed for the newly introduced endpoint of c, given the
    other endpoint sits at text position x."""
    m = masks.full
    if c.enforce_index:
        m &= masks.before[x] if new_is_u else masks.after[x]
    if c.enforce_value:
        want_lower = c.value_ascending if new_is_u else not c.value_ascending
        m &= masks.lower[x] if want_lower else masks.higher[x]
    return m


# -- compiled plans -----------------------------------------------------------


class _Plan:
    """A nice decomposition flattened into executable steps."""

    __slots__ = ("steps", "width")

    def __init__(self, nice: NiceDecomposition, constraints: tuple[CspConstraint, ...]):
        incident: dict[int, list[CspConstraint]] = {}
        for c in constraints:
            if c.enforce_index or c.enforce_value:
                incident.setdefault(c.u, []).append(c)
                incident.setdefault(c.w, []).append(c)
        steps = []
        for node in nice.nodes:
            if node.kind == "leaf":
                steps.append(("leaf",))
            elif node.kind == "introduce":
                v = node.var
                child_bag = nice.nodes[node.children[0]].bag
                pos = node.bag.index(v)
                checks = []
                for c in incident.get(v, ()):
                    other = c.w if c.u == v else c.u
                    if other in child_bag:
                        checks.append((child_bag.index(other), c, c.u == v))
                steps.append(("introduce", node.children[0], v, pos, tuple(checks)))
            elif node.kind == "forget":
                child_bag = nice.nodes[node.children[0]].bag
                steps.append(("forget", node.children[0], child_bag.index(node.var)))
            else:
                steps.append(("join", node.children[0], node.children[1]))
        self.steps = steps
        self.width = nice.width


def _execute(
    plan: _Plan,
    masks: TextMasks,
    domain_masks: dict[int, int],
    counting: bool,
) -> int | bool:
    """Run the plan; tables map bag keys to counts (or just hold keys)."""
    tables: list = [None] * len(plan.steps)
    for i, step in enumerate(plan.steps):
        kind = step[0]
        if kind == "leaf":
            tables[i] = {(): 1} if counting else {()}
        elif kind == "introduce":
            _, child, v, pos, checks = step
            base = domain_masks[v]
            out: dict | set = {} if counting else set()
            child_table = tables[child]
            items = (
                child_table.items()
                if counting
                else ((key, 1) for key in child_table)
            )
            for key, cnt in items:
                m = base
                for other_pos, c, new_is_u in checks:
                    m &= _constraint_mask(masks, c, new_is_u, key[other_pos])
                    if not m:
                        break
                while m:
                    low = m & -m
                    a = low.bit_length()
                    m ^= low
                    new_key = key[:pos] + (a,) + key[pos:]
                    if counting:
                        out[new_key] = cnt
                    else:
                        out.add(new_key)
            tables[i] = out
        elif kind == "forget":
            _, child, pos = step
            child_table = tables[child]
            if counting:
                out = {}
                for key, cnt in child_table.items():
                    nk = key[:pos] + key[pos + 1:]
                    out[nk] = out.get(nk, 0) + cnt
            else:
                out = {key[:pos] + key[pos + 1:] for key in child_table}
            tables[i] = out
        else:
            _, left, right = step
            lt, rt = tables[left], tables[right]
            if counting:
                if len(lt) > len(rt):
                    lt, rt = rt, lt
                out = {}
                for key, c1 in lt.items():
                    c2 = rt.get(key)
                    if c2:
                        out[key] = c1 * c2
            else:
                out = lt & rt
            tables[i] = out
        # each table feeds exactly one parent: free children right away
        if kind in ("introduce", "forget"):
            tables[step[1]] = None
        elif kind == "join":
            tables[step[1]] = None
            tables[step[2]] = None
    root = tables[-1]
    if counting:
        return root.get((), 0)
    return () in root


# -- public solvers -----------------------------------------------------------


@lru_cache(maxsize=4096)
def _pattern_plan(pattern_values: tuple[int, ...]) -> _Plan:
    pattern = Permutation(pattern_values)
    k = len(pattern)
    edges = incidence_graph(pattern).edge_set()
    g = Graph.from_edges(edges, vertices=range(1, k + 1))
    nice = make_nice(min_fill_decomposition(g))
    inst = build_csp(Permutation.identity(max(k, 1)), pattern)
    return _Plan(nice, inst.constraints)


def pattern_decomposition(pattern: Permutation) -> TreeDecomposition:
    """Min-fill tree decomposition of the pattern's constraint graph."""
    k = len(pattern)
    g = Graph.from_edges(
        incidence_graph(pattern).edge_set(), vertices=range(1, k + 1)
    )
    return min_fill_decomposition(g)


def _plan_for(
    pattern: Permutation, decomposition: TreeDecomposition | None
) -> _Plan:
    if decomposition is None:
        return _pattern_plan(pattern.values)
    k = len(pattern)
    g = Graph.from_edges(
        incidence_graph(pattern).edge_set(), vertices=range(1, k + 1)
    )
    if not validate_decomposition(g, decomposition):
        raise ValueError("decomposition does not fit the pattern's constraint graph")
    inst_constraints = build_csp(Permutation.identity(k), pattern).constraints
    return _Plan(make_nice(decomposition), inst_constraints)


def solve_decision(
    text: Permutation,
    pattern: Permutation,
    *,
    decomposition: TreeDecomposition | None = None,
) -> bool:
    """Does the text contain the pattern?  DP over a nice decomposition."""
    if len(pattern) > len(text):
        return False
    plan = _plan_for(pattern, decomposition)
    masks = TextMasks(text)
    domains = {v: masks.full for v in range(1, len(pattern) + 1)}
    return _execute(plan, masks, domains, counting=False)


def solve_count(
    text: Permutation,
    pattern: Permutation,
    *,
    decomposition: TreeDecomposition | None = None,
) -> int:
    """Number of occurrences, computed like solve_decision with counts."""
    if len(pattern) > len(text):
        return 0
    plan = _plan_for(pattern, decomposition)
    masks = TextMasks(text)
    domains = {v: masks.full for v in range(1, len(pattern) + 1)}
    return _execute(plan, masks, domains, counting=True)


def solve_csp_decision(inst: CspInstance) -> bool:
    """Decision DP for an arbitrary instance (used by strip guessing)."""
    g = Graph.from_edges(
        inst.constraint_graph_edges(), vertices=inst.variables
    )
    nice = make_nice(min_fill_decomposition(g))
    plan = _Plan(nice, inst.constraints)
    masks = TextMasks(inst.text)
    domain_masks = {}
    for v, dom in inst.domains.items():
        m = 0
        for a in dom:
            m |= 1 << (a - 1)
        domain_masks[v] = m
    if any(m == 0 for m in domain_masks.values()):
        return False
    return _execute(plan, masks, domain_masks, counting=False)


# -- strip guessing -----------------------------------------------------------


def strip_bounds(n: int, s: int) -> list[tuple[int, int]]:
    """Split positions 1..n into s contiguous strips; the first n mod s
    strips take the extra position."""
    if not 1 <= s <= n:
        raise ValueError(f"strip count {s} outside 1..{n}")
    base, extra = divmod(n, s)
    bounds = []
    lo = 1
    for j in range(s):
        hi = lo + base + (1 if j < extra else 0) - 1
        bounds.append((lo, hi))
        lo = hi + 1
    assert bounds[-1][1] == n
    return bounds


def default_strip_count(n: int) -> int:
    return max(1, round(n ** 0.25))


def strip_reduced_constraints(
    pattern: Permutation, starters: tuple[int, ...]
) -> tuple[CspConstraint, ...]:
    """Constraints left after dropping the position component of the edge
    entering each strip starter (position 1 never has an entering edge).

    The dropped position order is re-imposed by the strip domains; an edge
    that owed its existence to position adjacency alone disappears, one
    that is also value-adjacent keeps its value component.
    """
    base = build_csp(Permutation.identity(len(pattern)), pattern).constraints
    drop_at = set(starters) - {1}
    constraints = []
    for c in base:
        if c.index_adjacent and c.w in drop_at and c.u == c.w - 1:
            c = relax_constraint(c, drop_index=True)
            if not c.value_adjacent:
                c = relax_constraint(c, drop_value=True)
        if c.enforce_index or c.enforce_value:
            constraints.append(c)
    return tuple(constraints)


@lru_cache(maxsize=4096)
def _strip_plan(
    pattern_values: tuple[int, ...], starters: tuple[int, ...]
) -> _Plan:
    pattern = Permutation(pattern_values)
    k = len(pattern)
    constraints = strip_reduced_constraints(pattern, starters)
    g = Graph.from_edges(
        ((c.u, c.w) for c in constraints), vertices=range(1, k + 1)
    )
    nice = make_nice(min_fill_decomposition(g))
    return _Plan(nice, constraints)


def solve_strips(
    text: Permutation,
    pattern: Permutation,
    *,
    strips: int | None = None,
    stats: dict | None = None,
) -> bool:
    """Decision via strip guessing.

    Every occurrence assigns its positions to contiguous text strips in a
    monotone way; guessing the pattern positions that land first in each
    used strip (always including position 1) restricts every domain to one
    strip and lets the entering position-order constraints go.
    """
    n, k = len(text), len(pattern)
    s = default_strip_count(n) if strips is None else strips
    if not 1 <= s <= n:
        raise ValueError(f"strip count {s} outside 1..{n}")
    if stats is not None:
        stats["strips"] = s
        stats["guesses"] = 0
    if k > n:
        return False
    bounds = strip_bounds(n, s)
    masks = TextMasks(text)
    strip_masks = []
    for lo, hi in bounds:
        m = 0
        for a in range(lo, hi + 1):
            m |= 1 << (a - 1)
        strip_masks.append(m)

    others = list(range(2, k + 1))
    for t in range(1, min(k, s) + 1):
        for rest in itertools.combinations(others, t - 1):
            starters = (1,) + rest
            plan = _strip_plan(pattern.values, starters)
            for strip_choice in itertools.combinations(range(s), t):
                if stats is not None:
                    stats["guesses"] += 1
                domain_masks = {}
                block = 0
                for v in range(1, k + 1):
                    if block + 1 < t and v >= starters[block + 1]:
                        block += 1
                    domain_masks[v] = strip_masks[strip_choice[block]]
                if _execute(plan, masks, domain_masks, counting=False):
                    return True
    return False
