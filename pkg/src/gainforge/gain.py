"""Gain graphs over an abelian GroupSpec: walk gains, balance decision with
witness/potentials, switching, and the essential gain group.

The balance machinery is generic over a tiny ops object so the same code
serves additive GroupSpec gains, multiplicative nonzero rationals (facet
gain graphs), and additive rational vectors (reciprocal coboundaries).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import abelian, lattice
from .abelian import GroupElement, GroupSpec, SpecMismatch
from .graph import (FORWARD, Multigraph, Walk, fundamental_circles, require_closed,
                    spanning_tree, tree_adjacency)


class ElementOps:
    """Additive ops for GroupSpec elements."""

    def __init__(self, spec: GroupSpec):
        self.spec = spec

    def identity(self):
        return abelian.zero(self.spec)

    def add(self, a, b):
        return abelian.add(a, b)

    def neg(self, a):
        return abelian.negate(a)

    def is_identity(self, a) -> bool:
        return abelian.is_identity(a)


class RationalMulOps:
    """Multiplicative ops for nonzero exact rationals (the Q* gain group)."""

    def identity(self):
        return Fraction(1)

    def add(self, a, b):
        return Fraction(a) * Fraction(b)

    def neg(self, a):
        a = Fraction(a)
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        return 1 / a

    def is_identity(self, a) -> bool:
        return Fraction(a) == 1


class VectorOps:
    """Additive ops for rational vectors of a fixed dimension."""

    def __init__(self, dim: int):
        self.dim = dim

    def identity(self):
        return (Fraction(0),) * self.dim

    def add(self, a, b):
        return tuple(Fraction(x) + Fraction(y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-Fraction(x) for x in a)

    def is_identity(self, a) -> bool:
        return all(Fraction(x) == 0 for x in a)


class GainGraph:
    """A connected multigraph with one GroupElement per edge (gain in the
    fixed orientation; a backward traversal contributes the inverse)."""

    def __init__(self, graph: Multigraph, spec: GroupSpec, gains: Mapping):
        self.graph = graph
        self.spec = spec
        missing = [eid for eid in graph.edge_ids() if eid not in gains]
        if missing:
            raise SpecMismatch(f"edges without a gain: {missing}")
        fixed = {}
        for eid in graph.edge_ids():
            gval = gains[eid]
            if not isinstance(gval, GroupElement):
                raise SpecMismatch(f"gain of edge {eid!r} is not a GroupElement")
            if gval.spec != spec:
                raise SpecMismatch(f"gain of edge {eid!r} does not conform to spec {spec}")
            fixed[eid] = gval
        self.gains = fixed

    def __repr__(self):
        return f"GainGraph({self.graph!r} over {self.spec})"


@dataclass(frozen=True)
class BalanceReport:
    balanced: bool
    witness: Walk | None
    potentials: dict | None


def walk_value(graph: Multigraph, gains: Mapping, ops, w: Walk):
    """Composite of edge gains along a walk (backward steps inverted)."""
    from .graph import walk_vertices
    walk_vertices(graph, w)  # validates consistency with the graph
    acc = ops.identity()
    for eid, d in w.steps:
        gval = gains[eid]
        acc = ops.add(acc, gval if d == FORWARD else ops.neg(gval))
    return acc


def walk_gain(gg: GainGraph, w: Walk) -> GroupElement:
    return walk_value(gg.graph, gg.gains, ElementOps(gg.spec), w)


def balance(graph: Multigraph, gains: Mapping, ops, tree=None, root=None) -> BalanceReport:
    """Decide balance by tree potentials.

    Potentials theta are propagated from the root with theta(root) =
    identity; the graph is balanced iff every edge satisfies
    gain(e) = theta(head) - theta(tail) (in ops terms).  The first
    violating non-tree edge, in edge input order, yields the fundamental
    circle returned as witness.
    """
    if tree is None:
        tree = spanning_tree(graph)
    if root is None:
        root = graph.vertices[0]
    adj = tree_adjacency(graph, tree)
    theta = {root: ops.identity()}
    stack = [root]
    while stack:
        v = stack.pop()
        for eid, d, w in adj[v]:
            if w not in theta:
                gval = gains[eid]
                theta[w] = ops.add(theta[v], gval if d == FORWARD else ops.neg(gval))
                stack.append(w)
    tset = set(tree)
    from .graph import tree_path
    for eid, tail, head in graph.edges:
        expected = ops.add(theta[head], ops.neg(theta[tail]))
        if gains[eid] != expected:
            if eid in tset:  # cannot happen: tree edges define theta
                raise AssertionError("tree edge violates its own potential")
            back = tree_path(graph, tree, head, tail)
            witness = Walk(tail, ((eid, FORWARD),) + back)
            return BalanceReport(False, witness, None)
    return BalanceReport(True, None, theta)


def is_balanced(gg: GainGraph, tree=None, root=None) -> BalanceReport:
    return balance(gg.graph, gg.gains, ElementOps(gg.spec), tree=tree, root=root)


def switch(gg: GainGraph, sigma: Mapping) -> GainGraph:
    """Switching by vertex potentials: g(e) -> -sigma(tail) + g(e) + sigma(head).
    Closed-walk gains are unchanged."""
    for v in gg.graph.vertices:
        if v not in sigma:
            raise SpecMismatch(f"switching function missing vertex {v!r}")
        if sigma[v].spec != gg.spec:
            raise SpecMismatch(f"switching value at {v!r} does not conform to spec")
    new_gains = {}
    for eid, tail, head in gg.graph.edges:
        new_gains[eid] = abelian.add(
            abelian.add(abelian.negate(sigma[tail]), gg.gains[eid]), sigma[head])
    return GainGraph(gg.graph, gg.spec, new_gains)


def fundamental_circle_gains(gg: GainGraph, tree=None) -> tuple[GroupElement, ...]:
    circles = fundamental_circles(gg.graph, tree)
    return tuple(walk_gain(gg, c) for c in circles)


@dataclass(frozen=True)
class EssentialGainGroup:
    """Structure of the subgroup of G generated by fundamental-circle gains.

    free_rank/torsion_orders are None when the spec has dyadic summands
    (the image need not be finitely generated); the generators are always
    reported.
    """

    generators: tuple[GroupElement, ...]
    free_rank: int | None
    torsion_orders: tuple[int, ...] | None

    @property
    def trivial(self) -> bool | None:
        if self.free_rank is None:
            return all(abelian.is_identity(g) for g in self.generators) or None
        return self.free_rank == 0 and not self.torsion_orders


def essential_gain_group(gg: GainGraph) -> EssentialGainGroup:
    gains = fundamental_circle_gains(gg)
    gens = []
    for g in gains:
        if not abelian.is_identity(g) and g not in gens:
            gens.append(g)
    gens = tuple(gens)
    spec = gg.spec
    if spec.dyadic_rank > 0:
        return EssentialGainGroup(gens, None, None)

    # embed G = Z^r + sum Z_ni as Z^(r+k) modulo torsion relations and
    # compute <gains> as L1/L2 with L1 = <lifts + relations>, L2 = <relations>
    r, orders = spec.free_rank, spec.torsion_orders
    m = r + len(orders)
    lifts = [list(g.free_part) + list(g.torsion_part) for g in gens]
    relations = [[orders[i] if j == r + i else 0 for j in range(m)]
                 for i in range(len(orders))]
    if m == 0:
        return EssentialGainGroup(gens, 0, ())
    l1 = lattice.IntMatrix.from_rows(lifts + relations, m)
    basis = lattice.hermite_normal_form(l1)
    coeff_rows = []
    for rel in relations:
        ok, coeffs = lattice.membership(basis, rel)
        if not ok:  # relations generate a sublattice of L1 by construction
            raise AssertionError("torsion relation escaped its own lattice")
        coeff_rows.append(list(coeffs))
    cmat = (lattice.IntMatrix.from_rows(coeff_rows, basis.rows)
            if coeff_rows else lattice.IntMatrix.zeros(0, basis.rows))
    free_rank, torsion = lattice.quotient_structure(basis.rows, cmat)
    return EssentialGainGroup(gens, free_rank, tuple(torsion))


# --- serialization ----------------------------------------------------------

def gaingraph_to_json(gg: GainGraph) -> dict:
    return {
        "group": abelian.format_spec(gg.spec),
        "vertices": list(gg.graph.vertices),
        "edges": [
            {"id": eid, "tail": tail, "head": head,
             "gain": abelian.element_to_json(gg.gains[eid])}
            for eid, tail, head in gg.graph.edges
        ],
    }


def gaingraph_from_json(data: dict) -> GainGraph:
    try:
        spec = abelian.parse_spec(data["group"])
        vertices = data["vertices"]
        edges = [(e["id"], e["tail"], e["head"]) for e in data["edges"]]
        gains = {e["id"]: abelian.element_from_json(spec, e["gain"]) for e in data["edges"]}
    except (KeyError, TypeError) as exc:
        raise SpecMismatch(f"malformed gain-graph JSON: missing {exc}") from None
    return GainGraph(Multigraph(vertices, edges), spec, gains)


def balance_report_to_json(rep: BalanceReport) -> dict:
    from .graph import walk_to_json
    out: dict = {"balanced": rep.balanced}
    out["witness"] = walk_to_json(rep.witness) if rep.witness is not None else None
    if rep.potentials is not None:
        out["potentials"] = {str(v): abelian.element_to_json(x)
                             for v, x in rep.potentials.items()}
    else:
        out["potentials"] = None
    return out
