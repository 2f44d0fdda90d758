"""Connected multigraphs with a fixed edge orientation, closed walks, and
the binary cycle space Z_1(graph; GF(2)).

Walks are edge-id sequences with explicit directions (never vertex
sequences): loops and parallel edges make vertex sequences ambiguous.
GF(2) vectors are dense bitsets over the edge list, one bit per edge in
input order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable

VertexId = Hashable
EdgeId = Hashable

FORWARD = 1
BACKWARD = -1


class GraphError(ValueError):
    pass


class WalkError(ValueError):
    pass


class Multigraph:
    """Connected multigraph; loops and parallel edges allowed.

    Edges are (edge id, tail, head) triples; the given order is preserved
    and used for all deterministic choices (spanning tree, bit layout).
    Instances are immutable by convention.
    """

    def __init__(self, vertices: Iterable[VertexId], edges: Iterable[tuple]):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        vset = set(self.vertices)
        self.edges = tuple((eid, tail, head) for eid, tail, head in edges)
        seen = set()
        for eid, tail, head in self.edges:
            if eid in seen:
                raise GraphError(f"duplicate edge id {eid!r}")
            seen.add(eid)
            if tail not in vset or head not in vset:
                raise GraphError(f"edge {eid!r} has endpoint outside the vertex set")
        self._index = {e[0]: i for i, e in enumerate(self.edges)}
        self._ends = {eid: (tail, head) for eid, tail, head in self.edges}
        adj: dict[VertexId, list] = {v: [] for v in self.vertices}
        for eid, tail, head in self.edges:
            adj[tail].append((eid, FORWARD, head))
            if head != tail:
                adj[head].append((eid, BACKWARD, tail))
        self._adj = adj
        if not self.vertices:
            raise GraphError("empty vertex set")
        if not self._is_connected():
            raise GraphError("graph is not connected")

    def _is_connected(self) -> bool:
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for _, _, w in self._adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_ids(self) -> tuple:
        return tuple(e[0] for e in self.edges)

    def endpoints(self, eid: EdgeId) -> tuple:
        try:
            return self._ends[eid]
        except KeyError:
            raise GraphError(f"unknown edge id {eid!r}") from None

    def edge_index(self, eid: EdgeId) -> int:
        try:
            return self._index[eid]
        except KeyError:
            raise GraphError(f"unknown edge id {eid!r}") from None

    def incident(self, v: VertexId):
        return self._adj[v]

    def __eq__(self, other):
        return (isinstance(other, Multigraph)
                and self.vertices == other.vertices and self.edges == other.edges)

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"Multigraph({self.n_vertices} vertices, {self.n_edges} edges)"


@dataclass(frozen=True)
class Walk:
    start: VertexId
    steps: tuple[tuple[EdgeId, int], ...]

    def __post_init__(self):
        steps = tuple((eid, int(d)) for eid, d in self.steps)
        for eid, d in steps:
            if d not in (FORWARD, BACKWARD):
                raise WalkError(f"step on edge {eid!r} has direction {d}, want +1/-1")
        object.__setattr__(self, "steps", steps)

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class BinaryVector:
    """Element of GF(2)^edges as a bitmask aligned with a graph's edge order."""

    n_edges: int
    bits: int

    def __xor__(self, other: "BinaryVector") -> "BinaryVector":
        if self.n_edges != other.n_edges:
            raise ValueError("binary vectors over different edge sets")
        return BinaryVector(self.n_edges, self.bits ^ other.bits)

    def is_zero(self) -> bool:
        return self.bits == 0

    def weight(self) -> int:
        return bin(self.bits).count("1")


def support_ids(g: Multigraph, bv: BinaryVector) -> tuple:
    return tuple(eid for i, (eid, _, _) in enumerate(g.edges) if bv.bits >> i & 1)


@dataclass(frozen=True)
class CycleBasisCandidate:
    """A family of closed walks proposed as cyclic orientations of a binary
    cycle basis."""

    walks: tuple[Walk, ...]

    def __len__(self):
        return len(self.walks)


def walk_vertices(g: Multigraph, w: Walk) -> list:
    """Vertex sequence visited by the walk; validates step consistency."""
    if w.start not in set(g.vertices):
        raise WalkError(f"walk starts at unknown vertex {w.start!r}")
    at = w.start
    out = [at]
    for eid, d in w.steps:
        tail, head = g.endpoints(eid)
        if d == FORWARD:
            if at != tail:
                raise WalkError(f"step {eid!r} forward expects to stand at {tail!r}, not {at!r}")
            at = head
        else:
            if at != head:
                raise WalkError(f"step {eid!r} backward expects to stand at {head!r}, not {at!r}")
            at = tail
        out.append(at)
    return out


def walk_end(g: Multigraph, w: Walk) -> VertexId:
    return walk_vertices(g, w)[-1]


def is_closed(g: Multigraph, w: Walk) -> bool:
    return walk_end(g, w) == w.start


def require_closed(g: Multigraph, w: Walk):
    if not is_closed(g, w):
        raise WalkError("walk is not closed")


def reverse_walk(g: Multigraph, w: Walk) -> Walk:
    end = walk_end(g, w)
    return Walk(end, tuple((eid, -d) for eid, d in reversed(w.steps)))


def concat_walks(g: Multigraph, a: Walk, b: Walk) -> Walk:
    if walk_end(g, a) != b.start:
        raise WalkError("walks do not share an endpoint for concatenation")
    return Walk(a.start, a.steps + b.steps)


def spanning_tree(g: Multigraph, edge_order=None) -> tuple:
    """Edge ids of a spanning tree, chosen greedily in edge input order
    (or in the explicitly supplied order).  Deterministic."""
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    order = g.edge_ids() if edge_order is None else tuple(edge_order)
    if set(order) != set(g.edge_ids()):
        raise GraphError("edge_order must be a permutation of the edge ids")
    tree = []
    for eid in order:
        tail, head = g.endpoints(eid)
        rt, rh = find(tail), find(head)
        if rt != rh:
            parent[rt] = rh
            tree.append(eid)
    # connectivity is a construction invariant, so the tree always spans
    return tuple(tree)


def is_spanning_tree(g: Multigraph, tree: Iterable) -> bool:
    tree = tuple(tree)
    if len(tree) != g.n_vertices - 1 or len(set(tree)) != len(tree):
        return False
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for eid in tree:
        if eid not in set(g.edge_ids()):
            return False
        tail, head = g.endpoints(eid)
        rt, rh = find(tail), find(head)
        if rt == rh:
            return False
        parent[rt] = rh
    return True


def tree_adjacency(g: Multigraph, tree: Iterable) -> dict:
    tset = set(tree)
    adj: dict[VertexId, list] = {v: [] for v in g.vertices}
    for eid, tail, head in g.edges:
        if eid in tset:
            adj[tail].append((eid, FORWARD, head))
            adj[head].append((eid, BACKWARD, tail))
    return adj


def tree_path(g: Multigraph, tree: Iterable, u: VertexId, v: VertexId) -> tuple:
    """Steps of the unique tree path from u to v (BFS over tree edges)."""
    adj = tree_adjacency(g, tree)
    prev: dict[VertexId, tuple] = {u: None}
    queue = [u]
    qi = 0
    while qi < len(queue):
        w = queue[qi]
        qi += 1
        if w == v:
            break
        for eid, d, x in adj[w]:
            if x not in prev:
                prev[x] = (w, eid, d)
                queue.append(x)
    if v not in prev:
        raise GraphError("tree does not connect the requested vertices")
    steps = []
    at = v
    while prev[at] is not None:
        w, eid, d = prev[at]
        steps.append((eid, d))
        at = w
    steps.reverse()
    return tuple(steps)


def fundamental_circles(g: Multigraph, tree=None) -> tuple[Walk, ...]:
    """One closed walk per non-tree edge: the edge forward, then the tree
    path from its head back to its tail."""
    if tree is None:
        tree = spanning_tree(g)
    if not is_spanning_tree(g, tree):
        raise GraphError("supplied edge set is not a spanning tree")
    tset = set(tree)
    circles = []
    for eid, tail, head in g.edges:
        if eid in tset:
            continue
        back = tree_path(g, tree, head, tail)
        circles.append(Walk(tail, ((eid, FORWARD),) + back))
    return tuple(circles)


def binary_image(g: Multigraph, w: Walk) -> BinaryVector:
    """Reduce a closed walk mod 2: bit e is set iff edge e is traversed an
    odd number of times."""
    require_closed(g, w)
    bits = 0
    for eid, _ in w.steps:
        bits ^= 1 << g.edge_index(eid)
    return BinaryVector(g.n_edges, bits)


def cycle_rank(g: Multigraph) -> int:
    return g.n_edges - g.n_vertices + 1


def gf2_rank(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for bits in vectors:
        while bits:
            low = bits & -bits
            if low in pivots:
                bits ^= pivots[low]
            else:
                pivots[low] = bits
                break
    return len(pivots)


@dataclass(frozen=True)
class BasisReport:
    is_basis: bool
    candidate_count: int
    gf2_rank: int
    cycle_rank: int


def is_binary_cycle_basis(g: Multigraph, cand: CycleBasisCandidate) -> BasisReport:
    """Do the binary images of the candidate walks form a basis of the
    binary cycle space?"""
    images = [binary_image(g, w) for w in cand.walks]
    rk = gf2_rank(bv.bits for bv in images)
    cr = cycle_rank(g)
    ok = rk == cr and len(images) == cr
    return BasisReport(ok, len(images), rk, cr)


# --- serialization ----------------------------------------------------------

def graph_to_json(g: Multigraph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": eid, "tail": tail, "head": head} for eid, tail, head in g.edges],
    }


def graph_from_json(data: dict) -> Multigraph:
    try:
        vertices = data["vertices"]
        edges = [(e["id"], e["tail"], e["head"]) for e in data["edges"]]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph JSON: missing {exc}") from None
    return Multigraph(vertices, edges)


def walk_to_json(w: Walk) -> dict:
    return {"start": w.start, "steps": [{"edge": eid, "dir": d} for eid, d in w.steps]}


def walk_from_json(data: dict) -> Walk:
    try:
        return Walk(data["start"], tuple((s["edge"], s["dir"]) for s in data["steps"]))
    except (KeyError, TypeError) as exc:
        raise WalkError(f"malformed walk JSON: missing {exc}") from None


def to_dot(g: Multigraph, name: str = "G") -> str:
    lines = [f"digraph {name} {{"]
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for eid, tail, head in g.edges:
        lines.append(f'  "{tail}" -> "{head}" [label="{eid}"];')
    lines.append("}")
    return "\n".join(lines)
