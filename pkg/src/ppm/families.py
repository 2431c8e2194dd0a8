"""Generators for extremal pattern families, with checkable certificates.

Two constructions matter here.  ``gen_grid_two_track`` emits a 2-increasing
permutation of length 2k² whose incidence graph contains a k x 2k grid as a
subgraph, pinning the treewidth of the graph at k or more despite the degree
bound.  ``gen_three_track`` embeds the union of the position paths of a whole
split sequence into the incidence graph of a single 3-increasing host, so the
host width is within a log factor of the width of an arbitrary target
permutation's incidence graph.

Both emit a :class:`MinorCertificate`: branch sets of host positions plus the
adjacencies they must witness, checkable against the host with no knowledge
of how it was built.  The module also carries the split-sequence factoriser
the second construction rests on and two detectors for monotone pattern
classes.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Hashable, Mapping, Optional

from .perm import IncidenceGraph, Permutation, incidence_graph, lis_lds

__all__ = [
    "MinorCertificate",
    "SplitSequence",
    "TrackGraph",
    "detect_2_monotone",
    "detect_t_monotone",
    "gen_grid_two_track",
    "gen_three_track",
    "split_decomposition",
    "track_partition",
]


@dataclass(frozen=True)
class TrackGraph:
    """A host permutation with its positions partitioned into tracks.

    Every track is increasing in position and in value at once, so both
    the position path and the value path of the host visit each track in
    track order.  A host admits t tracks exactly when it is t-increasing.
    """

    host: Permutation
    tracks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.host)
        flat = sorted(pos for track in self.tracks for pos in track)
        if flat != list(range(1, n + 1)):
            raise ValueError("tracks must partition the positions 1..n")
        for track in self.tracks:
            for a, b in zip(track, track[1:]):
                if not (a < b and self.host(a) < self.host(b)):
                    raise ValueError(f"track {track} is not increasing")

    @property
    def t(self) -> int:
        return len(self.tracks)

    @property
    def graph(self) -> IncidenceGraph:
        return incidence_graph(self.host)


def track_partition(perm: Permutation) -> TrackGraph:
    """Partition into the minimum number of increasing tracks.

    Greedy patience placement: each position joins the track with the
    largest last value still below its own, so the track count equals
    the longest decreasing subsequence.
    """
    tails: list[int] = []  # ascending last values, one per track
    owner: list[int] = []  # track index per tail slot
    tracks: list[list[int]] = []
    for pos in range(1, len(perm) + 1):
        v = perm(pos)
        slot = bisect_left(tails, v) - 1
        if slot < 0:
            tails.insert(0, v)
            owner.insert(0, len(tracks))
            tracks.append([pos])
        else:
            tracks[owner[slot]].append(pos)
            tails[slot] = v
    return TrackGraph(perm, tuple(tuple(t) for t in tracks))


@dataclass(frozen=True)
class MinorCertificate:
    """Branch sets plus the adjacencies they must witness in a host.

    ``branch_sets`` maps every minor vertex to the host positions that
    contract to it; ``required_adjacencies`` lists the minor edges.  The
    certificate passes when the branch sets are disjoint, each induces a
    connected subgraph of the host incidence graph, and every required
    adjacency has a host edge running between its two branch sets.
    """

    branch_sets: Mapping[Hashable, tuple[int, ...]]
    required_adjacencies: tuple[tuple[Hashable, Hashable], ...]

    def validate(self, host: Permutation) -> bool:
        g = incidence_graph(host)
        n = len(host)
        seen: set[int] = set()
        for positions in self.branch_sets.values():
            for pos in positions:
                if not 1 <= pos <= n or pos in seen:
                    return False
                seen.add(pos)
        for positions in self.branch_sets.values():
            members = set(positions)
            reached = {positions[0]}
            stack = [positions[0]]
            while stack:
                cur = stack.pop()
                for nb in g.adjacency[cur]:
                    if nb in members and nb not in reached:
                        reached.add(nb)
                        stack.append(nb)
            if reached != members:
                return False
        edges = g.edge_set()
        for a, b in self.required_adjacencies:
            if a not in self.branch_sets or b not in self.branch_sets:
                return False
            side_a = set(self.branch_sets[a])
            if not any(
                (min(u, w), max(u, w)) in edges
                for u in side_a
                for w in self.branch_sets[b]
            ):
                return False
        return True


# -- grid-bearing 2-track host ---------------------------------------------

# The host is assembled from two interleavings of the tracks
# x_1..x_{k²} and y_1..y_{k²}: the position order is a sequence of pairs
# {x_m, y_m}, the value order is a run of x_1..x_k, then units pairing
# y_u with x_{u+k}, then the leftover top y's.  Pair and unit
# orientations decide which track-consecutive edges appear at the seams;
# the grid needs, for every index m not divisible by k, the edges
# x_m~x_{m+1} and y_m~y_{m+1}, plus x_m~y_m everywhere (inside pairs)
# and y_m~x_{m+k} everywhere (inside units).  For even k the straight
# alternation covers everything; for odd k the residue of m mod k
# decides which interleaving takes which seam.


def _grid_orientations(k: int) -> tuple[list[bool], list[bool]]:
    """Pair/unit orientation tables (True = x first, resp. y first)."""
    kk = k * k
    pair_x_first: list[Optional[bool]] = [None] * (kk + 2)
    unit_y_first: list[Optional[bool]] = [None] * (kk - k + 2)

    def claim(table: list[Optional[bool]], idx: int, val: bool) -> None:
        if table[idx] is not None and table[idx] != val:
            raise AssertionError("conflicting seam orientations")
        table[idx] = val

    if k % 2 == 0:
        for m in range(1, kk + 1):
            pair_x_first[m] = m % 2 == 1
        for u in range(1, kk - k + 1):
            unit_y_first[u] = u % 2 == 1
    else:
        for m in range(1, kk):
            r = m % k
            if r == 0:
                continue
            if r % 2 == 1:
                if m > k:  # seam must supply x_m~x_{m+1}
                    claim(pair_x_first, m, False)
                    claim(pair_x_first, m + 1, True)
                # seam in the unit chain supplies y_m~y_{m+1}
                if m <= kk - k - 1:
                    claim(unit_y_first, m, False)
                    claim(unit_y_first, m + 1, True)
            else:
                if m <= kk - k - 1:  # seam must supply y_m~y_{m+1}
                    claim(pair_x_first, m, True)
                    claim(pair_x_first, m + 1, False)
                # seam in the unit chain supplies x_m~x_{m+1}
                if m > k:
                    claim(unit_y_first, m - k, True)
                    claim(unit_y_first, m - k + 1, False)
        for m in range(1, kk + 1):
            if pair_x_first[m] is None:
                pair_x_first[m] = True
        for u in range(1, kk - k + 1):
            if unit_y_first[u] is None:
                unit_y_first[u] = False
    return pair_x_first, unit_y_first  # type: ignore[return-value]


def gen_grid_two_track(k: int) -> tuple[Permutation, MinorCertificate]:
    """2-increasing host of length 2k² containing a k x 2k grid.

    The certificate's branch sets are singletons: grid vertex (i, j)
    sits at one host position, odd columns on the x track and even
    columns on the y track, and all grid adjacencies are host edges.
    """
    if k < 2:
        raise ValueError(f"grid construction needs k >= 2, got {k}")
    kk = k * k
    pair_x_first, unit_y_first = _grid_orientations(k)

    position_order: list[tuple[str, int]] = []
    for m in range(1, kk + 1):
        if pair_x_first[m]:
            position_order += [("x", m), ("y", m)]
        else:
            position_order += [("y", m), ("x", m)]

    value_order: list[tuple[str, int]] = [("x", m) for m in range(1, k + 1)]
    for u in range(1, kk - k + 1):
        if unit_y_first[u]:
            value_order += [("y", u), ("x", u + k)]
        else:
            value_order += [("x", u + k), ("y", u)]
    value_order += [("y", m) for m in range(kk - k + 1, kk + 1)]

    pos = {v: i for i, v in enumerate(position_order, start=1)}
    val = {v: i for i, v in enumerate(value_order, start=1)}
    values = [0] * (2 * kk)
    for v, p in pos.items():
        values[p - 1] = val[v]
    host = Permutation(values)

    branch_sets: dict[Hashable, tuple[int, ...]] = {}
    for i in range(1, k + 1):
        for j in range(1, 2 * k + 1):
            if j % 2 == 1:
                vertex = ("x", (j // 2) * k + i)
            else:
                vertex = ("y", (j // 2 - 1) * k + i)
            branch_sets[(i, j)] = (pos[vertex],)
    required: list[tuple[Hashable, Hashable]] = []
    for i in range(1, k + 1):
        for j in range(1, 2 * k + 1):
            if i < k:
                required.append(((i, j), (i + 1, j)))
            if j < 2 * k:
                required.append(((i, j), (i, j + 1)))
    return host, MinorCertificate(branch_sets, tuple(required))


# -- split sequences --------------------------------------------------------


def _single_descent(perm: Permutation) -> Optional[int]:
    """The unique descent position, or None if not exactly one."""
    descents = [
        i for i in range(1, len(perm)) if perm(i) > perm(i + 1)
    ]
    return descents[0] if len(descents) == 1 else None


@dataclass(frozen=True)
class SplitSequence:
    """A factorisation id = d_1, d_2, ..., d_m = target by front-moves.

    Every step permutation moves a subsequence of the previous stage to
    the front: its one-line form is two increasing runs meeting at the
    recorded split point, and stage i+1 equals stage i composed with
    step i.
    """

    base_length: int
    steps: tuple[Permutation, ...]
    split_points: tuple[int, ...]
    stages: tuple[Permutation, ...]

    def __post_init__(self) -> None:
        if len(self.steps) != len(self.split_points):
            raise ValueError("one split point per step")
        if len(self.stages) != len(self.steps) + 1:
            raise ValueError("stages must be one longer than steps")
        if self.stages[0] != Permutation.identity(self.base_length):
            raise ValueError("stages must start at the identity")
        for i, (sigma, p) in enumerate(zip(self.steps, self.split_points)):
            if len(sigma) != self.base_length:
                raise ValueError("step length mismatch")
            if _single_descent(sigma) != p:
                raise ValueError(
                    f"step {i + 1} is not a front-move with point {p}"
                )
            if self.stages[i].compose(sigma) != self.stages[i + 1]:
                raise ValueError(f"stage {i + 2} does not follow its step")

    @property
    def target(self) -> Permutation:
        return self.stages[-1]


def split_decomposition(perm: Permutation) -> SplitSequence:
    """Factor a permutation into at most ceil(log2 n) front-moves.

    Pass j moves the values whose target position has bit j clear to
    the front of the running sequence, keeping relative order; after
    all passes the sequence reads the target one-line form.  Passes
    that would not move anything are dropped.
    """
    n = len(perm)
    offset = {v: perm.position_of(v) - 1 for v in range(1, n + 1)}
    order = list(range(1, n + 1))
    target = list(perm)
    stages = [Permutation.identity(n)]
    steps: list[Permutation] = []
    points: list[int] = []
    for bit in range((n - 1).bit_length()):
        if order == target:
            break
        front = [v for v in order if not (offset[v] >> bit) & 1]
        back = [v for v in order if (offset[v] >> bit) & 1]
        reordered = front + back
        if reordered == order:
            continue
        slot = {v: i for i, v in enumerate(order, start=1)}
        sigma = Permutation(slot[v] for v in reordered)
        descent = _single_descent(sigma)
        assert descent is not None
        steps.append(sigma)
        points.append(descent)
        order = reordered
        stages.append(Permutation(order))
    assert stages[-1] == perm
    return SplitSequence(n, tuple(steps), tuple(points), tuple(stages))


# -- 3-track host embedding a whole split sequence --------------------------


def gen_three_track(perm: Permutation) -> tuple[Permutation, MinorCertificate]:
    """3-increasing host whose incidence graph holds all stage paths.

    Stage rows x_{i,1..n} are chained through carrier levels: the
    carrier successor of x_{i,j} is the level-i carrier at the slot the
    step permutation maps to j, and carriers feed x_{i+1,j}.  The
    position order threads carriers between row neighbours; the value
    order threads them one row later.  Following the carrier successor
    from x_{1,c} collects the branch set of colour c; the required
    adjacencies are the consecutive pairs of every stage's one-line
    form, and each is witnessed inside the value order.
    """
    n = len(perm)
    seq = split_decomposition(perm)
    m = len(seq.stages)

    inverse_steps = [sigma.inverse() for sigma in seq.steps]

    def carrier_successor(vertex: tuple[str, int, int]) -> tuple[str, int, int]:
        kind, i, j = vertex
        if kind == "x":
            return ("c", i, inverse_steps[i - 1](j))
        return ("x", i + 1, j)

    position_order: list[tuple[str, int, int]] = []
    for i in range(1, m):
        for j in range(1, n + 1):
            position_order.append(("x", i, j))
            position_order.append(carrier_successor(("x", i, j)))
    position_order += [("x", m, j) for j in range(1, n + 1)]

    value_order: list[tuple[str, int, int]] = [
        ("x", 1, j) for j in range(1, n + 1)
    ]
    for i in range(2, m + 1):
        for j in range(1, n + 1):
            value_order.append(("x", i, j))
            value_order.append(("c", i - 1, j))

    pos = {v: i for i, v in enumerate(position_order, start=1)}
    val = {v: i for i, v in enumerate(value_order, start=1)}
    values = [0] * len(position_order)
    for v, p in pos.items():
        values[p - 1] = val[v]
    host = Permutation(values)

    branch_sets: dict[Hashable, tuple[int, ...]] = {}
    for colour in range(1, n + 1):
        vertex = ("x", 1, colour)
        members = [pos[vertex]]
        for _ in range(2 * m - 2):
            vertex = carrier_successor(vertex)
            members.append(pos[vertex])
        branch_sets[colour] = tuple(members)

    required: set[frozenset[int]] = set()
    for stage in seq.stages:
        for j in range(1, n):
            required.add(frozenset((stage(j), stage(j + 1))))
    adjacency = tuple(tuple(sorted(e)) for e in sorted(required, key=sorted))
    return host, MinorCertificate(branch_sets, adjacency)


# -- monotone class detectors ------------------------------------------------


def detect_t_monotone(
    perm: Permutation, t: int, direction: str = "increasing"
) -> bool:
    """True iff the permutation splits into t monotone runs one way.

    ``increasing`` asks for t increasing subsequences (longest
    decreasing subsequence at most t), ``decreasing`` for the mirror.
    """
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    lis, lds = lis_lds(perm)
    if direction == "increasing":
        return lds <= t
    if direction == "decreasing":
        return lis <= t
    raise ValueError(f"unknown direction {direction!r}")


def detect_2_monotone(
    perm: Permutation,
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Split positions into one increasing and one decreasing run.

    Scans left to right keeping, for either placement of the current
    position, the most permissive frontier of the other run: the
    largest pending decreasing value when the current position went to
    the increasing run, and vice versa.  Larger (resp. smaller)
    frontiers dominate, so one value per side suffices.  Returns the
    (increasing positions, decreasing positions) pair, or None.
    """
    n = len(perm)
    high = n + 1
    # state per position: (frontier of the other run, previous side)
    on_inc: list[Optional[tuple[int, Optional[str]]]] = [None] * (n + 1)
    on_dec: list[Optional[tuple[int, Optional[str]]]] = [None] * (n + 1)
    on_inc[1] = (high, None)
    on_dec[1] = (0, None)
    for t in range(2, n + 1):
        v, u = perm(t), perm(t - 1)
        best: Optional[tuple[int, Optional[str]]] = None
        if v > u and on_inc[t - 1] is not None:
            best = (on_inc[t - 1][0], "inc")
        if on_dec[t - 1] is not None and v > on_dec[t - 1][0]:
            if best is None or u > best[0]:
                best = (u, "dec")
        on_inc[t] = best
        best = None
        if v < u and on_dec[t - 1] is not None:
            best = (on_dec[t - 1][0], "dec")
        if on_inc[t - 1] is not None and v < on_inc[t - 1][0]:
            if best is None or u < best[0]:
                best = (u, "inc")
        on_dec[t] = best
    if on_inc[n] is not None:
        side = "inc"
    elif on_dec[n] is not None:
        side = "dec"
    else:
        return None
    sides = [""] * (n + 1)
    for t in range(n, 0, -1):
        sides[t] = side
        state = on_inc[t] if side == "inc" else on_dec[t]
        assert state is not None
        if t > 1:
            assert state[1] is not None
            side = state[1]
    increasing = tuple(t for t in range(1, n + 1) if sides[t] == "inc")
    decreasing = tuple(t for t in range(1, n + 1) if sides[t] == "dec")
    return increasing, decreasing
