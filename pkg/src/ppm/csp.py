"""Occurrence search as a binary CSP over text positions.

Variables are the 1-based pattern positions, domains are sets of text
positions, and there is one constraint per incidence-graph edge.  A full
assignment satisfying every constraint is exactly an occurrence: images are
then strictly monotone along both the position path and the value path,
which forces injectivity and order isomorphism.

Each constraint also remembers which adjacency produced it and which of the
two order components is enforced; solvers that relax constraints (strip
guessing) drop single components without losing the other.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

from .perm import Permutation, incidence_graph


@dataclass(frozen=True)
class CspConstraint:
    u: int  # smaller pattern position
    w: int  # larger pattern position
    index_adjacent: bool  # w == u + 1
    value_adjacent: bool  # pattern values differ by one
    enforce_index: bool  # require image(u) < image(w)
    enforce_value: bool  # require text value order to match the pattern's
    value_ascending: bool  # pattern(u) < pattern(w)

    def holds(self, text: Permutation, a: int, b: int) -> bool:
        """Check the enforced components for images u -> a, w -> b."""
        if self.enforce_index and not a < b:
            return False
        if self.enforce_value:
            if a == b:
                return False
            if (text(a) < text(b)) != self.value_ascending:
                return False
        return True


class CspInstance:
    """A text, a pattern, per-variable domains, and edge constraints."""

    __slots__ = ("text", "pattern", "domains", "constraints", "_by_pair")

    def __init__(
        self,
        text: Permutation,
        pattern: Permutation,
        domains: Mapping[int, tuple[int, ...]],
        constraints: tuple[CspConstraint, ...],
    ):
        self.text = text
        self.pattern = pattern
        self.domains = {v: tuple(domains[v]) for v in sorted(domains)}
        self.constraints = constraints
        self._by_pair = {(c.u, c.w): c for c in constraints}

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(self.domains)

    def constraint_for(self, i: int, j: int) -> CspConstraint | None:
        key = (i, j) if i < j else (j, i)
        return self._by_pair.get(key)

    def constraint_graph_edges(self) -> tuple[tuple[int, int], ...]:
        """Edges that still enforce something, for decomposition purposes."""
        return tuple(
            (c.u, c.w)
            for c in self.constraints
            if c.enforce_index or c.enforce_value
        )


def build_csp(text: Permutation, pattern: Permutation) -> CspInstance:
    """Full-domain instance with one two-component constraint per edge."""
    n = len(text)
    full = tuple(range(1, n + 1))
    domains = {i: full for i in range(1, len(pattern) + 1)}
    constraints = tuple(
        CspConstraint(
            u=e.u,
            w=e.w,
            index_adjacent=e.index_adjacent,
            value_adjacent=e.value_adjacent,
            enforce_index=True,
            enforce_value=True,
            value_ascending=pattern(e.u) < pattern(e.w),
        )
        for e in incidence_graph(pattern).edges
    )
    return CspInstance(text, pattern, domains, constraints)


def constraint_satisfied(
    inst: CspInstance, i: int, j: int, a: int, b: int
) -> bool:
    """Do images i -> a, j -> b satisfy the constraint on edge (i, j)?

    Raises if (i, j) is not a constrained pair.  For a freshly built
    instance this requires both the position order and the value order of
    the images to match the pattern's.
    """
    c = inst.constraint_for(i, j)
    if c is None:
        raise ValueError(f"no constraint between {i} and {j}")
    if i > j:
        i, j, a, b = j, i, b, a
    return c.holds(inst.text, a, b)


def assign_and_simplify(
    inst: CspInstance, assignment: Mapping[int, int]
) -> CspInstance:
    """Pin variables to text positions and filter neighboring domains.

    Assigned variables end up with singleton domains; every domain of a
    variable constrained against an assigned one keeps only the values
    consistent with the pin.  Pins must be distinct text positions inside
    the current domains.  If two pinned variables already violate their
    constraint, every domain comes back empty: the instance has no
    solutions and says so plainly.
    """
    for var, val in assignment.items():
        if var not in inst.domains:
            raise ValueError(f"unknown variable {var}")
        if val not in inst.domains[var]:
            raise ValueError(f"text position {val} not in domain of {var}")
    vals = list(assignment.values())
    if len(set(vals)) != len(vals):
        raise ValueError("assignment reuses a text position")

    conflict = any(
        not c.holds(inst.text, assignment[c.u], assignment[c.w])
        for c in inst.constraints
        if c.u in assignment and c.w in assignment
    )

    domains: dict[int, tuple[int, ...]] = {}
    for var, dom in inst.domains.items():
        if conflict:
            domains[var] = ()
            continue
        if var in assignment:
            domains[var] = (assignment[var],)
            continue
        keep = dom
        for c in inst.constraints:
            if c.u == var and c.w in assignment:
                b = assignment[c.w]
                keep = tuple(a for a in keep if c.holds(inst.text, a, b))
            elif c.w == var and c.u in assignment:
                a = assignment[c.u]
                keep = tuple(b for b in keep if c.holds(inst.text, a, b))
        domains[var] = keep
    return CspInstance(inst.text, inst.pattern, domains, inst.constraints)


def relax_constraint(
    c: CspConstraint, *, drop_index: bool = False, drop_value: bool = False
) -> CspConstraint:
    """Copy of c with components switched off."""
    return replace(
        c,
        enforce_index=c.enforce_index and not drop_index,
        enforce_value=c.enforce_value and not drop_value,
    )
