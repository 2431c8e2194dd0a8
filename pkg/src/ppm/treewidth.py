"""Tree decompositions: greedy min-fill, exact width search, nice form.

The exact search runs iterative deepening over the target width using the
elimination-order characterization: an order is good for width w iff each
vertex, at its turn, sees at most w remaining vertices through the already
eliminated ones.  States are bitmasks of eliminated vertices with failed
states memoized per width, which keeps graphs up to ~18 vertices practical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

Vertex = Hashable


class Graph:
    """Tiny undirected simple graph with sortable vertices."""

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[tuple[Vertex, Vertex]]):
        vs = set(vertices)
        adj: dict[Vertex, set[Vertex]] = {v: set() for v in vs}
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop at {a!r}")
            if a not in adj or b not in adj:
                raise ValueError(f"edge ({a!r}, {b!r}) uses unknown vertex")
            adj[a].add(b)
            adj[b].add(a)
        self.vertices: tuple[Vertex, ...] = tuple(sorted(vs))
        self.adj: dict[Vertex, frozenset] = {v: frozenset(ns) for v, ns in adj.items()}

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[Vertex, Vertex]], vertices=()) -> "Graph":
        edges = list(edges)
        vs = set(vertices)
        for a, b in edges:
            vs.add(a)
            vs.add(b)
        return cls(vs, edges)

    def edge_set(self) -> frozenset[tuple[Vertex, Vertex]]:
        return frozenset(
            (a, b) for a in self.vertices for b in self.adj[a] if a < b
        )

    def degree(self, v: Vertex) -> int:
        return len(self.adj[v])

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset, ...]
    tree_edges: tuple[tuple[int, int], ...]  # 0-based bag indices

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbors(self) -> dict[int, list[int]]:
        ns: dict[int, list[int]] = {i: [] for i in range(len(self.bags))}
        for a, b in self.tree_edges:
            ns[a].append(b)
            ns[b].append(a)
        return ns


def validate_decomposition(g: Graph, td: TreeDecomposition) -> bool:
    """Vertex cover, edge cover, connected occurrence subtrees, tree shape."""
    k = len(td.bags)
    if k == 0:
        return len(g) == 0
    for a, b in td.tree_edges:
        if not (0 <= a < k and 0 <= b < k):
            return False
    # a tree: connected with k-1 edges
    if len(td.tree_edges) != k - 1:
        return False
    ns = td.neighbors()
    seen = {0}
    stack = [0]
    while stack:
        cur = stack.pop()
        for nb in ns[cur]:
            if nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if len(seen) != k:
        return False
    union: set = set()
    for b in td.bags:
        union |= b
    if union != set(g.vertices):
        return False
    edges = g.edge_set()
    for a, b in edges:
        if not any(a in bag and b in bag for bag in td.bags):
            return False
    for v in g.vertices:
        holding = [i for i, bag in enumerate(td.bags) if v in bag]
        root = holding[0]
        seen_v = {root}
        stack = [root]
        while stack:
            cur = stack.pop()
            for nb in ns[cur]:
                if nb not in seen_v and v in td.bags[nb]:
                    seen_v.add(nb)
                    stack.append(nb)
        if len(seen_v) != len(holding):
            return False
    return True


def td_from_elimination_order(g: Graph, order: Sequence[Vertex]) -> TreeDecomposition:
    """Decomposition whose bags are the fill-in neighborhoods of the order."""
    assert sorted(order) == list(g.vertices)
    work = {v: set(g.adj[v]) for v in g.vertices}
    pos = {v: i for i, v in enumerate(order)}
    bags: list[frozenset] = []
    for v in order:
        nbrs = work[v]
        bags.append(frozenset(nbrs | {v}))
        for a in nbrs:
            work[a] |= nbrs - {a}
            work[a].discard(v)
        del work[v]
    edges = []
    for i, v in enumerate(order[:-1]):
        later = [u for u in bags[i] if u != v]
        parent = min((pos[u] for u in later), default=i + 1)
        edges.append((i, parent))
    return TreeDecomposition(tuple(bags), tuple(edges))


def min_fill_decomposition(g: Graph) -> TreeDecomposition:
    """Greedy elimination by fewest fill edges, ties to the lowest vertex."""
    if len(g) == 0:
        return TreeDecomposition((frozenset(),), ())
    work = {v: set(g.adj[v]) for v in g.vertices}
    order: list[Vertex] = []
    remaining = set(g.vertices)
    while remaining:
        best = None
        best_fill = None
        for v in sorted(remaining):
            nbrs = work[v]
            fill = sum(
                1
                for a in nbrs
                for b in nbrs
                if a < b and b not in work[a]
            )
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
        order.append(best)
        nbrs = work[best]
        for a in nbrs:
            work[a] |= nbrs - {a}
            work[a].discard(best)
        del work[best]
        remaining.discard(best)
    return td_from_elimination_order(g, order)


def _degeneracy(adj_masks: list[int], n: int) -> int:
    alive = (1 << n) - 1
    best = 0
    while alive:
        min_v = -1
        min_d = n + 1
        m = alive
        while m:
            low = m & -m
            v = low.bit_length() - 1
            d = (adj_masks[v] & alive).bit_count()
            if d < min_d:
                min_d, min_v = d, v
            m ^= low
        best = max(best, min_d)
        alive &= ~(1 << min_v)
    return best


def exact_treewidth(
    g: Graph, vertex_limit: int = 16
) -> tuple[int, TreeDecomposition]:
    """Exact treewidth with a witness decomposition.

    Iterative deepening over the width; raises for graphs larger than
    vertex_limit (the state space is exponential in the vertex count).
    """
    n = len(g)
    if n > vertex_limit:
        raise ValueError(f"{n} vertices exceed vertex_limit={vertex_limit}")
    if n == 0:
        return 0, TreeDecomposition((frozenset(),), ())
    verts = list(g.vertices)
    index = {v: i for i, v in enumerate(verts)}
    adj = [0] * n
    for v in verts:
        for u in g.adj[v]:
            adj[index[v]] |= 1 << index[u]

    full = (1 << n) - 1

    def seen_through(mask: int, v: int) -> int:
        """Vertices outside mask+v adjacent to v's component inside mask."""
        comp = 1 << v
        frontier = adj[v]
        while True:
            inside = frontier & mask & ~comp
            if not inside:
                break
            comp |= inside
            m = inside
            while m:
                low = m & -m
                frontier |= adj[low.bit_length() - 1]
                m ^= low
        return frontier & ~mask & ~(1 << v)

    def search(w: int) -> list[int] | None:
        dead: set[int] = set()

        def go(mask: int) -> list[int] | None:
            remaining = full & ~mask
            count = remaining.bit_count()
            if count == 0:
                return []
            if count <= w + 1:
                out = []
                m = remaining
                while m:
                    low = m & -m
                    out.append(low.bit_length() - 1)
                    m ^= low
                return out
            if mask in dead:
                return None
            cands = []
            m = remaining
            while m:
                low = m & -m
                v = low.bit_length() - 1
                q = seen_through(mask, v).bit_count()
                if q <= w:
                    cands.append((q, v))
                m ^= low
            for _, v in sorted(cands):
                rest = go(mask | (1 << v))
                if rest is not None:
                    return [v] + rest
            dead.add(mask)
            return None

        return go(0)

    lb = _degeneracy(adj, n)
    for w in range(lb, n):
        picked = search(w)
        if picked is not None:
            order = [verts[i] for i in picked]
            td = td_from_elimination_order(g, order)
            assert td.width <= w
            return w, td
    raise AssertionError("unreachable: width n-1 always works")


# -- nice decompositions -----------------------------------------------------


@dataclass(frozen=True)
class NiceNode:
    kind: str  # "leaf" | "introduce" | "forget" | "join"
    bag: tuple  # sorted vertices
    var: Hashable | None  # the introduced/forgotten vertex
    children: tuple[int, ...]  # indices of earlier nodes


@dataclass(frozen=True)
class NiceDecomposition:
    """Postorder list of leaf/introduce/forget/join nodes, empty-bag root."""

    nodes: tuple[NiceNode, ...]

    @property
    def width(self) -> int:
        return max((len(nd.bag) for nd in self.nodes), default=0) - 1

    @property
    def root(self) -> int:
        return len(self.nodes) - 1


def make_nice(td: TreeDecomposition) -> NiceDecomposition:
    """Normalize a decomposition: empty leaves and root, unary introduces
    and forgets, binary joins with equal bags."""
    nodes: list[NiceNode] = []

    def emit(kind, bag, var=None, children=()) -> int:
        nodes.append(NiceNode(kind, tuple(sorted(bag)), var, tuple(children)))
        return len(nodes) - 1

    def build_up_to(bag: frozenset) -> int:
        """Fresh leaf chain introducing every vertex of bag."""
        cur = emit("leaf", ())
        have: set = set()
        for v in sorted(bag):
            have.add(v)
            cur = emit("introduce", set(have), v, (cur,))
        return cur

    def morph(node: int, src: frozenset, dst: frozenset) -> int:
        cur = node
        have = set(src)
        for v in sorted(src - dst):
            have.discard(v)
            cur = emit("forget", set(have), v, (cur,))
        for v in sorted(dst - src):
            have.add(v)
            cur = emit("introduce", set(have), v, (cur,))
        return cur

    ns = td.neighbors()

    def build(t: int, parent: int) -> int:
        kids = [c for c in ns[t] if c != parent]
        built = [morph(build(c, t), td.bags[c], td.bags[t]) for c in kids]
        if not built:
            return build_up_to(td.bags[t])
        while len(built) > 1:
            right = built.pop()
            left = built.pop()
            built.append(emit("join", td.bags[t], None, (left, right)))
        return built[0]

    top = build(0, -1)
    morph(top, td.bags[0], frozenset())
    return NiceDecomposition(tuple(nodes))


def dump_decomposition(td: TreeDecomposition) -> str:
    """Text form: tree edges (1-based bag ids), then one bag per line."""
    lines = ["# tree edges (bag ids)"]
    for a, b in td.tree_edges:
        lines.append(f"{a + 1} {b + 1}")
    lines.append("# bags, one per line")
    for bag in td.bags:
        lines.append(" ".join(str(v) for v in sorted(bag)))
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str) -> TreeDecomposition:
    """Inverse of dump_decomposition (vertices parsed as ints)."""
    edges: list[tuple[int, int]] = []
    bags: list[frozenset] = []
    section = 0
    for raw in text.splitlines():
        line = raw.strip()
        if line.startswith("#"):
            section += 1
            continue
        if section <= 1:
            if not line:
                continue
            a, b = line.split()
            edges.append((int(a) - 1, int(b) - 1))
        else:
            bags.append(frozenset(int(v) for v in line.split()))
    return TreeDecomposition(tuple(bags), tuple(edges))
