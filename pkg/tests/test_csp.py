import pytest

from ppm.perm import Permutation, incidence_graph
from ppm.csp import (
    assign_and_simplify,
    build_csp,
    constraint_satisfied,
    relax_constraint,
)

TAU = Permutation([1, 5, 4, 6, 3, 7, 8, 2])


def test_build_csp_mirrors_incidence_graph():
    pat = Permutation([2, 3, 1])
    inst = build_csp(TAU, pat)
    assert inst.variables == (1, 2, 3)
    assert all(inst.domains[v] == tuple(range(1, 9)) for v in inst.variables)
    got = {(c.u, c.w): (c.index_adjacent, c.value_adjacent) for c in inst.constraints}
    expect = {
        (e.u, e.w): (e.index_adjacent, e.value_adjacent)
        for e in incidence_graph(pat).edges
    }
    assert got == expect
    assert all(c.enforce_index and c.enforce_value for c in inst.constraints)


def test_constraint_graph_equals_incidence_graph_for_fresh_instances():
    for vals in [(1,), (2, 1), (3, 1, 4, 2), (2, 4, 1, 5, 3), (1, 2, 3, 4, 5, 6)]:
        pat = Permutation(vals)
        inst = build_csp(Permutation.identity(7), pat)
        assert set(inst.constraint_graph_edges()) == set(
            incidence_graph(pat).edge_set()
        )


def test_constraint_satisfied_checks_both_orders():
    pat = Permutation([2, 3, 1])
    inst = build_csp(TAU, pat)
    # edge (1, 2): positions ascending and values ascending (2 < 3)
    assert constraint_satisfied(inst, 1, 2, 2, 4)  # tau: 5 < 6
    assert not constraint_satisfied(inst, 1, 2, 4, 2)  # position order broken
    assert not constraint_satisfied(inst, 1, 2, 2, 3)  # tau: 5 > 4
    # swapped argument order refers to the same constraint
    assert constraint_satisfied(inst, 2, 1, 4, 2)
    # edge (1, 3): values descending (2 > 1)
    assert constraint_satisfied(inst, 1, 3, 2, 5)  # tau: 5 > 3
    assert not constraint_satisfied(inst, 1, 3, 2, 4)  # tau: 5 < 6
    with pytest.raises(ValueError):
        constraint_satisfied(inst, 1, 1, 2, 2)
    # same image twice can never satisfy a value constraint
    assert not constraint_satisfied(inst, 1, 2, 4, 4)


def test_full_assignments_match_occurrences():
    """Satisfying full assignments are exactly the oracle's occurrences.

    This is the point of the whole reduction: the edge constraints alone,
    over ALL position tuples (not only increasing ones), carve out exactly
    the occurrence set.
    """
    import itertools

    from ppm.oracle import occurrences

    text = Permutation([3, 1, 4, 2, 5])
    for pvals in [(1, 2), (2, 1), (2, 3, 1), (1, 3, 2), (2, 1, 3), (1,)]:
        pat = Permutation(pvals)
        inst = build_csp(text, pat)
        k = len(pat)
        sols = {
            images
            for images in itertools.product(range(1, len(text) + 1), repeat=k)
            if all(
                c.holds(text, images[c.u - 1], images[c.w - 1])
                for c in inst.constraints
            )
        }
        assert sols == set(occurrences(text, pat))


def test_assign_and_simplify_filters_domains():
    pat = Permutation([2, 3, 1])
    inst = build_csp(TAU, pat)
    pinned = assign_and_simplify(inst, {1: 2})  # image (2, 5)
    assert pinned.domains[1] == (2,)
    # var 2 must sit right of position 2 with a larger value
    assert pinned.domains[2] == (4, 6, 7)
    # var 3: right of position 2 (both orders are enforced on every edge)
    # with a value below 5
    assert pinned.domains[3] == (3, 5, 8)


def test_assign_and_simplify_rejects_bad_pins():
    inst = build_csp(TAU, Permutation([2, 3, 1]))
    with pytest.raises(ValueError):
        assign_and_simplify(inst, {9: 1})
    with pytest.raises(ValueError):
        assign_and_simplify(inst, {1: 99})
    with pytest.raises(ValueError):
        assign_and_simplify(inst, {1: 2, 2: 2})


def test_assign_and_simplify_conflict_empties_domains():
    # positions 1, 2 of the text carry values 2 > 1: constraint violated,
    # so the instance reports zero solutions through empty domains
    inst = build_csp(Permutation([2, 1]), Permutation([1, 2]))
    out = assign_and_simplify(inst, {1: 1, 2: 2})
    assert out.domains == {1: (), 2: ()}
    inst3 = build_csp(Permutation([2, 1, 3]), Permutation([1, 2, 3]))
    out3 = assign_and_simplify(inst3, {1: 1, 2: 2})
    assert all(dom == () for dom in out3.domains.values())


def test_assign_and_simplify_chains():
    inst = build_csp(Permutation.identity(5), Permutation.identity(3))
    step1 = assign_and_simplify(inst, {1: 2})
    step2 = assign_and_simplify(step1, {2: 3})
    assert step2.domains == {1: (2,), 2: (3,), 3: (4, 5)}


def test_relax_constraint():
    inst = build_csp(TAU, Permutation([2, 3, 1]))
    c = inst.constraint_for(1, 2)
    dropped = relax_constraint(c, drop_index=True)
    assert not dropped.enforce_index and dropped.enforce_value
    # position order no longer matters, ascending values still do:
    # tau(2)=5 < tau(4)=6, so (2,4) holds and, despite the wrong position
    # order now being allowed, (4,2) still fails on values
    assert dropped.holds(TAU, 2, 4)
    assert not dropped.holds(TAU, 4, 2)
    # the full constraint rejected (4, 2) on position order already
    assert not c.holds(TAU, 4, 2)
    both = relax_constraint(c, drop_index=True, drop_value=True)
    assert both.holds(TAU, 8, 1)
