"""PL-realized cell complexes in exact rational arithmetic: dual graphs with
exact facet normals, the multiplicative facet gain graph, reciprocal
diagrams, and the lifting (C^0 spline) space.

Conventions
-----------
Only interior facets (shared by exactly two top cells) and interior ridges
(shared by exactly three, i.e. simple) appear in the data; boundary faces
of a patch generate no constraints.  "Generic" and "non-degenerate" are
exact rank/sign conditions, never tolerance checks.  Normals are exact and
unnormalized; rescaling them is a switching of the facet gain graph and
does not change any of the derived geometry (see the gauge tests).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import qlinalg
from .gain import RationalMulOps, VectorOps, balance
from .graph import GraphError, Multigraph, Walk, to_dot
from .states import propagate_scalar


class PlGeomError(ValueError):
    pass


class NonSimpleRidge(PlGeomError):
    pass


class DegenerateRidge(PlGeomError):
    pass


class UnbalancedFacetGains(PlGeomError):
    def __init__(self, witness: Walk):
        super().__init__("facet gain graph is unbalanced")
        self.witness = witness


class RidgeBalanceViolation(PlGeomError):
    def __init__(self, ridge_id, residual):
        super().__init__(f"vector gains around ridge {ridge_id!r} do not cancel: {residual}")
        self.ridge_id = ridge_id
        self.residual = residual


class GenerationGateFailed(PlGeomError):
    def __init__(self, report: "GenerationGateReport"):
        super().__init__(
            "binary cycle generation gate failed "
            f"(ridge circles span dual cycles: {report.gate_ridge_circles}, "
            f"facet generators span facet cycles: {report.gate_facet_generators})")
        self.report = report


class NoSharpLifting(PlGeomError):
    def __init__(self, flat_facets):
        super().__init__(f"no sharp lifting: fold vanishes identically on facets {flat_facets}")
        self.flat_facets = flat_facets


@dataclass(frozen=True)
class Facet:
    cells: tuple[str, str]
    vertices: tuple[str, ...]


@dataclass(frozen=True)
class Ridge:
    facets: tuple[str, ...]
    cells: tuple[str, ...]


class CellComplexRealization:
    """A finite PL-realized d-complex with exact rational vertex coordinates
    and explicit interior facets and ridges.  Validated on construction."""

    def __init__(self, dim: int, vertices: dict, cells: dict, facets: dict, ridges: dict):
        self.dim = int(dim)
        self.vertices = {vid: tuple(Fraction(x) for x in coords)
                         for vid, coords in vertices.items()}
        self.cells = {cid: tuple(vs) for cid, vs in cells.items()}
        self.facets = {fid: f if isinstance(f, Facet) else Facet(tuple(f[0]), tuple(f[1]))
                       for fid, f in facets.items()}
        self.ridges = {rid: r if isinstance(r, Ridge) else Ridge(tuple(r[0]), tuple(r[1]))
                       for rid, r in ridges.items()}
        self._validate()

    def _validate(self):
        d = self.dim
        if d < 2:
            raise PlGeomError(f"dimension {d} < 2")
        for vid, coords in self.vertices.items():
            if len(coords) != d:
                raise PlGeomError(f"vertex {vid!r} has {len(coords)} coordinates, want {d}")
        if not self.cells:
            raise PlGeomError("complex has no cells")
        for cid, vs in self.cells.items():
            if not vs:
                raise PlGeomError(f"cell {cid!r} has no vertices")
            for vid in vs:
                if vid not in self.vertices:
                    raise PlGeomError(f"cell {cid!r} references unknown vertex {vid!r}")
        for fid, f in self.facets.items():
            if len(f.cells) != 2 or f.cells[0] == f.cells[1]:
                raise PlGeomError(f"facet {fid!r} must join two distinct cells")
            for cid in f.cells:
                if cid not in self.cells:
                    raise PlGeomError(f"facet {fid!r} references unknown cell {cid!r}")
                missing = set(f.vertices) - set(self.cells[cid])
                if missing:
                    raise PlGeomError(
                        f"facet {fid!r} has vertices {sorted(missing)} not in cell {cid!r}")
            for vid in f.vertices:
                if vid not in self.vertices:
                    raise PlGeomError(f"facet {fid!r} references unknown vertex {vid!r}")
            if len(self._facet_tangents(fid)) != d - 1:
                raise PlGeomError(f"facet {fid!r} does not span a {d - 1}-flat exactly")
        for rid, r in self.ridges.items():
            if len(r.cells) != 3 or len(set(r.cells)) != 3:
                raise NonSimpleRidge(f"ridge {rid!r} must have exactly 3 distinct cells")
            if len(r.facets) != 3 or len(set(r.facets)) != 3:
                raise NonSimpleRidge(f"ridge {rid!r} must have exactly 3 distinct facets")
            pairs = set()
            for fid in r.facets:
                if fid not in self.facets:
                    raise PlGeomError(f"ridge {rid!r} references unknown facet {fid!r}")
                pair = frozenset(self.facets[fid].cells)
                if not pair <= set(r.cells):
                    raise PlGeomError(
                        f"ridge {rid!r}: facet {fid!r} joins cells outside the ridge star")
                pairs.add(pair)
            want = {frozenset(p) for p in itertools.combinations(sorted(r.cells), 2)}
            if pairs != want:
                raise NonSimpleRidge(
                    f"ridge {rid!r}: facets do not realize the 3 cell pairs of its star")
            for fa, fb in itertools.combinations(r.facets, 2):
                if self._coplanar_facets(fa, fb):
                    raise PlGeomError(
                        f"adjacent facets {fa!r}, {fb!r} at ridge {rid!r} are coplanar "
                        "(realization is not generic)")
        # the dual adjacency must be connected (strong connectivity of the patch)
        cells = list(self.cells)
        parent = {c: c for c in cells}

        def find(c):
            while parent[c] != c:
                parent[c] = parent[parent[c]]
                c = parent[c]
            return c

        for f in self.facets.values():
            parent[find(f.cells[0])] = find(f.cells[1])
        if len({find(c) for c in cells}) != 1:
            raise PlGeomError("dual graph of the complex is not connected")

    def _facet_tangents(self, fid: str) -> list[tuple[Fraction, ...]]:
        """A basis (d-1 vectors) of the facet's direction space."""
        vs = self.facets[fid].vertices
        anchor = self.vertices[vs[0]]
        diffs = [tuple(a - b for a, b in zip(self.vertices[v], anchor)) for v in vs[1:]]
        keep = qlinalg.independent_subset(diffs, self.dim)
        return [diffs[i] for i in keep]

    def _coplanar_facets(self, fa: str, fb: str) -> bool:
        base = self.facets[fa].vertices
        anchor = self.vertices[base[0]]
        span = self._facet_tangents(fa)
        r0 = len(span)
        for v in self.facets[fb].vertices:
            diff = tuple(a - b for a, b in zip(self.vertices[v], anchor))
            if qlinalg.rank(span + [diff], self.dim) != r0:
                return False
        return True

    def cell_centroid(self, cid: str) -> tuple[Fraction, ...]:
        vs = self.cells[cid]
        n = len(vs)
        return tuple(sum((self.vertices[v][i] for v in vs), Fraction(0)) / n
                     for i in range(self.dim))

    def __repr__(self):
        return (f"CellComplexRealization(d={self.dim}, {len(self.cells)} cells, "
                f"{len(self.facets)} facets, {len(self.ridges)} ridges)")


# --- dual graph and exact facet normals -------------------------------------

def _primitive(vec) -> tuple[int, ...]:
    import math
    fracs = [Fraction(x) for x in vec]
    lcm = 1
    for q in fracs:
        lcm = lcm * q.denominator // math.gcd(lcm, q.denominator)
    ints = [int(q * lcm) for q in fracs]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return tuple(x // max(g, 1) for x in ints)


def dual_graph(M: CellComplexRealization):
    """(adjacency multigraph of the d-cells, facet id -> exact normal).

    Edge ids are the facet ids, oriented as stored; the normal points from
    the first cell of the pair toward the second (decided by centroids) and
    the reversed orientation carries the negated normal.
    """
    normals = {}
    for fid, f in M.facets.items():
        rows = M._facet_tangents(fid)
        kern = qlinalg.kernel_basis(rows, M.dim)
        if len(kern) != 1:
            raise PlGeomError(f"facet {fid!r} has a degenerate span")
        n = _primitive(kern[0])
        ci, cj = f.cells
        shift = tuple(a - b for a, b in zip(M.cell_centroid(cj), M.cell_centroid(ci)))
        s = qlinalg.dot(n, shift)
        if s == 0:
            raise PlGeomError(f"cannot orient facet {fid!r}: cell centroids project equal")
        if s < 0:
            n = tuple(-x for x in n)
        normals[fid] = tuple(Fraction(x) for x in n)
    g = Multigraph(list(M.cells), [(fid, f.cells[0], f.cells[1])
                                   for fid, f in M.facets.items()])
    return g, normals


def _check_normals(M: CellComplexRealization, normals: dict):
    for fid in M.facets:
        if fid not in normals:
            raise PlGeomError(f"no normal supplied for facet {fid!r}")
        n = tuple(Fraction(x) for x in normals[fid])
        if len(n) != M.dim or all(x == 0 for x in n):
            raise PlGeomError(f"normal for facet {fid!r} is zero or has wrong dimension")
        for t in M._facet_tangents(fid):
            if qlinalg.dot(n, t) != 0:
                raise PlGeomError(f"supplied vector for facet {fid!r} is not normal to it")


def _oriented_normal(M, normals, fid, a, b):
    n = normals[fid]
    if M.facets[fid].cells == (a, b):
        return n
    return tuple(-x for x in n)


# --- facet gain graph --------------------------------------------------------

@dataclass(frozen=True)
class FacetGainGraph:
    graph: Multigraph
    gains: dict  # edge id -> nonzero Fraction, multiplicative
    ridge_edges: dict  # ridge id -> the three edge ids of its triangle


def _ridge_frame(M: CellComplexRealization, rid: str):
    """Sorted cells (c1, c2, c3) of a ridge and the facets joining each pair."""
    r = M.ridges[rid]
    c1, c2, c3 = sorted(r.cells)
    by_pair = {frozenset(M.facets[fid].cells): fid for fid in r.facets}
    return (c1, c2, c3,
            by_pair[frozenset((c1, c2))],
            by_pair[frozenset((c2, c3))],
            by_pair[frozenset((c3, c1))])


def _facet_graph_edges(M: CellComplexRealization):
    """The combinatorial facet graph: one triangle of directed edges per ridge."""
    edges = []
    ridge_edges = {}
    for rid in M.ridges:
        _, _, _, f12, f23, f31 = _ridge_frame(M, rid)
        ids = (f"{rid}.0", f"{rid}.1", f"{rid}.2")
        edges += [(ids[0], f12, f23), (ids[1], f23, f31), (ids[2], f31, f12)]
        ridge_edges[rid] = ids
    return edges, ridge_edges


def ridge_dependency(M: CellComplexRealization, rid: str, normals: dict):
    """The unique-up-to-scale dependency a12*n(c1,c2) + a23*n(c2,c3) +
    a31*n(c3,c1) = 0 around a simple ridge; all coefficients nonzero."""
    c1, c2, c3, f12, f23, f31 = _ridge_frame(M, rid)
    cols = [_oriented_normal(M, normals, f12, c1, c2),
            _oriented_normal(M, normals, f23, c2, c3),
            _oriented_normal(M, normals, f31, c3, c1)]
    rows = [[cols[j][i] for j in range(3)] for i in range(M.dim)]
    kern = qlinalg.kernel_basis(rows, 3)
    if len(kern) != 1:
        raise DegenerateRidge(
            f"ridge {rid!r}: normals admit a {len(kern)}-dimensional dependency, want 1")
    alpha = kern[0]
    if any(a == 0 for a in alpha):
        raise DegenerateRidge(f"ridge {rid!r}: dependency has a vanishing coefficient")
    return alpha


def facet_gain_graph(M: CellComplexRealization, normals: dict | None = None) -> FacetGainGraph:
    """Vertices are facets, edges are the ridge triangles; the gain of an
    edge is the ratio of dependency coefficients, so every ridge triangle
    has gain product 1."""
    if normals is None:
        _, normals = dual_graph(M)
    else:
        _check_normals(M, normals)
    edges, ridge_edges = _facet_graph_edges(M)
    gains = {}
    for rid in M.ridges:
        a12, a23, a31 = ridge_dependency(M, rid, normals)
        e0, e1, e2 = ridge_edges[rid]
        gains[e0] = a23 / a12
        gains[e1] = a31 / a23
        gains[e2] = a12 / a31
    try:
        g = Multigraph(list(M.facets), edges)
    except GraphError as exc:
        raise PlGeomError(f"facet graph: {exc}") from None
    return FacetGainGraph(g, gains, ridge_edges)


# --- generation gate ---------------------------------------------------------

@dataclass(frozen=True)
class GenerationGateReport:
    ridge_circle_rank: int
    dual_cycle_rank: int
    facet_generator_rank: int
    facet_cycle_rank: int

    @property
    def gate_ridge_circles(self) -> bool:
        return self.ridge_circle_rank == self.dual_cycle_rank

    @property
    def gate_facet_generators(self) -> bool:
        return self.facet_generator_rank == self.facet_cycle_rank

    @property
    def passed(self) -> bool:
        return self.gate_ridge_circles and self.gate_facet_generators


def _components(vertices, edge_pairs) -> int:
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in edge_pairs:
        parent[find(a)] = find(b)
    return len({find(v) for v in vertices})


def _gf2_rank(vectors) -> int:
    pivots = {}
    for bits in vectors:
        while bits:
            low = bits & -bits
            if low in pivots:
                bits ^= pivots[low]
            else:
                pivots[low] = bits
                break
    return len(pivots)


def _subgraph_cycle_vectors(vertices, edges, edge_bit):
    """Fundamental cycles of an (arbitrary, possibly disconnected) subgraph,
    as bitmasks in the ambient edge indexing."""
    parent = {v: v for v in vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    forest_adj = {v: [] for v in vertices}
    chords = []
    for eid, a, b in edges:
        ra, rb = find(a), find(b)
        if ra == rb:
            chords.append((eid, a, b))
        else:
            parent[ra] = rb
            forest_adj[a].append((eid, b))
            forest_adj[b].append((eid, a))
    out = []
    for eid, a, b in chords:
        # path a -> b in the forest
        prev = {a: None}
        queue = [a]
        qi = 0
        while qi < len(queue):
            v = queue[qi]
            qi += 1
            if v == b:
                break
            for peid, w in forest_adj[v]:
                if w not in prev:
                    prev[w] = (v, peid)
                    queue.append(w)
        bits = edge_bit[eid]
        at = b
        while prev[at] is not None:
            v, peid = prev[at]
            bits ^= edge_bit[peid]
            at = v
        out.append(bits)
    return out


def generation_gate(M: CellComplexRealization) -> GenerationGateReport:
    """Check over GF(2) that (a) ridge circles span the cycle space of the
    dual graph and (b) ridge triangles plus per-cell boundary cycles span
    the cycle space of the facet graph."""
    g, _ = dual_graph(M)
    ridge_vecs = []
    for rid in M.ridges:
        bits = 0
        for fid in M.ridges[rid].facets:
            bits |= 1 << g.edge_index(fid)
        ridge_vecs.append(bits)
    from .graph import cycle_rank
    rank_a = _gf2_rank(ridge_vecs)
    cr_dual = cycle_rank(g)

    phi_edges, ridge_edges = _facet_graph_edges(M)
    phi_vertices = list(M.facets)
    edge_bit = {eid: 1 << i for i, (eid, _, _) in enumerate(phi_edges)}
    comp = _components(phi_vertices, [(a, b) for _, a, b in phi_edges]) if phi_vertices else 0
    cr_phi = len(phi_edges) - len(phi_vertices) + comp
    gens = []
    for rid, (e0, e1, e2) in ridge_edges.items():
        gens.append(edge_bit[e0] | edge_bit[e1] | edge_bit[e2])
    for cid in M.cells:
        mine = {fid for fid, f in M.facets.items() if cid in f.cells}
        sub_edges = [(eid, a, b) for eid, a, b in phi_edges if a in mine and b in mine]
        gens.extend(_subgraph_cycle_vectors(sorted(mine), sub_edges, edge_bit))
    rank_b = _gf2_rank(gens)
    return GenerationGateReport(rank_a, cr_dual, rank_b, cr_phi)


# --- reciprocals -------------------------------------------------------------

@dataclass(frozen=True)
class Reciprocal:
    points: dict  # cell id -> rational d-vector


def reciprocal_deltas(M: CellComplexRealization, rec: Reciprocal) -> dict:
    """Facet id -> edge vector r(second cell) - r(first cell)."""
    return {fid: qlinalg.vec_sub(rec.points[f.cells[1]], rec.points[f.cells[0]])
            for fid, f in M.facets.items()}


def _vector_gains_from_state(M, normals, state) -> dict:
    return {fid: qlinalg.vec_scale(state[fid], normals[fid]) for fid in M.facets}


def _check_ridge_balance(M, h):
    for rid in M.ridges:
        c1, c2, c3, f12, f23, f31 = _ridge_frame(M, rid)
        total = (Fraction(0),) * M.dim
        for fid, pair in ((f12, (c1, c2)), (f23, (c2, c3)), (f31, (c3, c1))):
            v = h[fid] if M.facets[fid].cells == pair else qlinalg.vec_scale(-1, h[fid])
            total = qlinalg.vec_add(total, v)
        if not qlinalg.is_zero_vec(total):
            raise RidgeBalanceViolation(rid, total)


def reciprocal(M: CellComplexRealization, seed, normals: dict | None = None,
               skip_gate: bool = False) -> Reciprocal:
    """Construct a reciprocal diagram from a nonzero rational seed.

    Propagates a scalar satisfied state on the facet gain graph, turns it
    into vector gains state*normal on the dual graph, verifies the exact
    ridge cancellation, and propagates the reciprocal points from the
    origin.  Fails loudly when the facet gains are unbalanced or the
    generation gate does not certify the construction.
    """
    seed = Fraction(seed)
    if seed == 0:
        raise PlGeomError("reciprocal seed must be a nonzero rational")
    if normals is None:
        _, normals = dual_graph(M)
    else:
        _check_normals(M, normals)
    fgg = facet_gain_graph(M, normals)
    rep = balance(fgg.graph, fgg.gains, RationalMulOps())
    if not rep.balanced:
        raise UnbalancedFacetGains(rep.witness)
    gate = generation_gate(M)
    if not gate.passed and not skip_gate:
        raise GenerationGateFailed(gate)

    if M.facets:
        root_facet = fgg.graph.vertices[0]
        state = propagate_scalar(fgg.graph, fgg.gains, root_facet, seed)
    else:
        state = {}
    h = _vector_gains_from_state(M, normals, state)
    _check_ridge_balance(M, h)

    g, _ = dual_graph(M)
    rep2 = balance(g, h, VectorOps(M.dim))
    if not rep2.balanced:
        raise PlGeomError(
            "vector gains on the dual graph are unbalanced although every ridge "
            "cancels; the generation gate was bypassed on an invalid instance")
    points = rep2.potentials  # root cell sits at the origin
    rec = Reciprocal(dict(points))
    for fid, delta in reciprocal_deltas(M, rec).items():
        if qlinalg.is_zero_vec(delta):
            raise PlGeomError(f"reciprocal is degenerate: edge of facet {fid!r} collapsed")
        for t in M._facet_tangents(fid):
            if qlinalg.dot(delta, t) != 0:
                raise PlGeomError(f"reciprocal edge of facet {fid!r} is not perpendicular")
    return rec


def _rec_rows(M: CellComplexRealization):
    """Constraint rows of the reciprocal system over the flattened points."""
    cells = list(M.cells)
    pos = {c: i for i, c in enumerate(cells)}
    d = M.dim
    n = d * len(cells)
    rows = []
    for fid, f in M.facets.items():
        ci, cj = f.cells
        for t in M._facet_tangents(fid):
            row = [Fraction(0)] * n
            for x in range(d):
                row[pos[cj] * d + x] += t[x]
                row[pos[ci] * d + x] -= t[x]
            rows.append(row)
    return rows, cells


def rec_dimension(M: CellComplexRealization) -> int:
    """Dimension of the space of reciprocals modulo translations."""
    rows, cells = _rec_rows(M)
    n = M.dim * len(cells)
    return n - qlinalg.rank(rows, n) - M.dim


def reciprocal_in_rec_kernel(M: CellComplexRealization, rec: Reciprocal) -> bool:
    rows, cells = _rec_rows(M)
    flat = [x for c in cells for x in rec.points[c]]
    return all(qlinalg.dot(row, flat) == 0 for row in rows)


# --- liftings ----------------------------------------------------------------

@dataclass(frozen=True)
class Lifting:
    """Cell id -> affine function on d-space, as d+1 coefficients (a, b)
    with f(x) = a.x + b."""

    functions: dict

    def value(self, cid: str, point) -> Fraction:
        coeffs = self.functions[cid]
        return qlinalg.dot(coeffs[:-1], point) + coeffs[-1]


@dataclass(frozen=True)
class LiftingSpace:
    dimension: int
    basis: tuple[Lifting, ...]


def _lift_rows(M: CellComplexRealization):
    cells = list(M.cells)
    pos = {c: i for i, c in enumerate(cells)}
    k = M.dim + 1
    n = k * len(cells)
    rows = []
    for fid, f in M.facets.items():
        ci, cj = f.cells
        for vid in f.vertices:
            row = [Fraction(0)] * n
            coords = list(M.vertices[vid]) + [Fraction(1)]
            for x in range(k):
                row[pos[ci] * k + x] += coords[x]
                row[pos[cj] * k + x] -= coords[x]
            rows.append(row)
    return rows, cells


def lifting_space(M: CellComplexRealization) -> LiftingSpace:
    """Exact kernel of the facet-agreement system: all liftings of M."""
    rows, cells = _lift_rows(M)
    k = M.dim + 1
    basis = []
    for vec in qlinalg.kernel_basis(rows, k * len(cells)):
        basis.append(Lifting({c: tuple(vec[i * k:(i + 1) * k]) for i, c in enumerate(cells)}))
    return LiftingSpace(len(basis), tuple(basis))


def lifting_violation(M: CellComplexRealization, L: Lifting):
    """First (facet, vertex) where the two cells' functions disagree, or None."""
    for fid, f in M.facets.items():
        ci, cj = f.cells
        for vid in f.vertices:
            p = M.vertices[vid]
            if L.value(ci, p) != L.value(cj, p):
                return fid, vid
    return None


def is_sharp(M: CellComplexRealization, L: Lifting) -> bool:
    return all(L.functions[f.cells[0]] != L.functions[f.cells[1]]
               for f in M.facets.values())


def sharp_lifting(M: CellComplexRealization, max_coeff: int = 8) -> Lifting:
    """A lifting whose adjacent cells lie on different hyperplanes, found by
    deterministic enumeration of small integer combinations of the kernel
    basis (so acceptance runs are reproducible)."""
    space = lifting_space(M)
    k = len(space.basis)
    cells = list(M.cells)
    folds = {}
    flat_facets = []
    for fid, f in M.facets.items():
        ci, cj = f.cells
        per_basis = [qlinalg.vec_sub(b.functions[ci], b.functions[cj]) for b in space.basis]
        folds[fid] = per_basis
        if all(qlinalg.is_zero_vec(v) for v in per_basis):
            flat_facets.append(fid)
    if flat_facets:
        raise NoSharpLifting(flat_facets)
    def fold_of(lam, per_basis):
        return tuple(sum((c * v[x] for c, v in zip(lam, per_basis) if c), Fraction(0))
                     for x in range(M.dim + 1))

    for bound in range(1, max_coeff + 1):
        for lam in itertools.product(range(-bound, bound + 1), repeat=k):
            if max((abs(c) for c in lam), default=0) != bound:
                continue
            if all(not qlinalg.is_zero_vec(fold_of(lam, per)) for per in folds.values()):
                funcs = {}
                for c in cells:
                    acc = (Fraction(0),) * (M.dim + 1)
                    for coef, b in zip(lam, space.basis):
                        if coef:
                            acc = qlinalg.vec_add(acc, qlinalg.vec_scale(coef, b.functions[c]))
                    funcs[c] = acc
                return Lifting(funcs)
    raise PlGeomError(f"sharp-lifting search exhausted coefficients up to {max_coeff}")


def is_locally_convex(M: CellComplexRealization, L: Lifting) -> bool:
    """Non-strict local convexity in the bends-upward convention: crossing
    any facet into its second cell never decreases the lifted surface."""
    bad = lifting_violation(M, L)
    if bad is not None:
        raise PlGeomError(f"not a lifting: facet {bad[0]!r} disagrees at vertex {bad[1]!r}")
    for fid, f in M.facets.items():
        ci, cj = f.cells
        pj = M.cell_centroid(cj)
        if L.value(cj, pj) - L.value(ci, pj) < 0:
            return False
        pi = M.cell_centroid(ci)
        if L.value(ci, pi) - L.value(cj, pi) < 0:
            return False
    return True


def lifting_from_reciprocal(M: CellComplexRealization, rec: Reciprocal) -> Lifting:
    """Maxwell's construction: gains h(F) = e_F . (x - c_F) with e_F the
    reciprocal edge of facet F and c_F a point on F, propagated to affine
    functions from a zero root."""
    d = M.dim
    gains = {}
    for fid, f in M.facets.items():
        e = qlinalg.vec_sub(rec.points[f.cells[1]], rec.points[f.cells[0]])
        anchor = M.vertices[f.vertices[0]]
        gains[fid] = tuple(e) + (-qlinalg.dot(e, anchor),)
    g, _ = dual_graph(M)
    rep = balance(g, gains, VectorOps(d + 1))
    if not rep.balanced:
        raise PlGeomError("reciprocal-induced affine gains are unbalanced")
    L = Lifting({c: tuple(rep.potentials[c]) for c in M.cells})
    bad = lifting_violation(M, L)
    if bad is not None:
        raise PlGeomError(f"propagated lifting disagrees on facet {bad[0]!r} at {bad[1]!r}")
    return L


# --- builders ----------------------------------------------------------------

_HEX_OFFSETS = ((2, 0), (1, 1), (-1, 1), (-2, 0), (-1, -1), (1, -1))
_HEX_NEIGHBORS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


def hex_patch(rings: int) -> CellComplexRealization:
    """A patch of the hexagonal tiling with `rings` rings around a central
    cell, realized with exact integer coordinates (an affine image of the
    regular tiling; regular hexagons would need irrational coordinates).
    Interior vertices meet exactly 3 cells, so all ridges are simple.
    """
    if rings < 0:
        raise ValueError("rings must be nonnegative")
    axials = [(q, r) for q in range(-rings, rings + 1) for r in range(-rings, rings + 1)
              if max(abs(q), abs(r), abs(q + r)) <= rings]
    centers = {a: (3 * a[0], a[0] + 2 * a[1]) for a in axials}
    vertices: dict[str, tuple] = {}
    cells: dict[str, tuple] = {}
    corner_cells: dict[str, list] = {}
    cell_id = {a: f"c{a[0]},{a[1]}" for a in axials}
    for a in axials:
        cx, cy = centers[a]
        ring = []
        for ox, oy in _HEX_OFFSETS:
            x, y = cx + ox, cy + oy
            vid = f"v{x},{y}"
            vertices[vid] = (Fraction(x), Fraction(y))
            ring.append(vid)
            corner_cells.setdefault(vid, []).append(cell_id[a])
        cells[cell_id[a]] = tuple(ring)
    facets: dict[str, Facet] = {}
    pair_to_facet = {}
    for a in axials:
        for dq, dr in _HEX_NEIGHBORS:
            b = (a[0] + dq, a[1] + dr)
            if b not in centers or not (a < b):
                continue
            shared = sorted(set(cells[cell_id[a]]) & set(cells[cell_id[b]]))
            if len(shared) != 2:
                raise AssertionError("adjacent hexagons must share exactly one edge")
            fid = f"f{cell_id[a]}|{cell_id[b]}"
            facets[fid] = Facet((cell_id[a], cell_id[b]), tuple(shared))
            pair_to_facet[frozenset((cell_id[a], cell_id[b]))] = fid
    ridges: dict[str, Ridge] = {}
    for vid, incident in corner_cells.items():
        if len(incident) != 3:
            continue
        cs = tuple(sorted(incident))
        fs = tuple(pair_to_facet[frozenset(p)] for p in itertools.combinations(cs, 2))
        ridges[f"r{vid}"] = Ridge(fs, cs)
    return CellComplexRealization(2, vertices, cells, facets, ridges)


def two_cell_patch(d: int) -> CellComplexRealization:
    """Two axis-aligned unit boxes sharing a facet (no ridges)."""
    if d < 2:
        raise ValueError("dimension must be >= 2")

    def corners(lo):
        pts = [tuple(lo[i] + delta[i] for i in range(d))
               for delta in itertools.product((0, 1), repeat=d)]
        if d == 2:  # cyclic order, so the cell is a polygon
            pts = [pts[0], pts[2], pts[3], pts[1]]
        return pts

    def vid(p):
        return "v" + "_".join(str(x) for x in p)

    vertices = {}
    cells = {}
    for cid, lo in (("c1", (0,) * d), ("c2", (1,) + (0,) * (d - 1))):
        pts = corners(lo)
        for p in pts:
            vertices[vid(p)] = tuple(Fraction(x) for x in p)
        cells[cid] = tuple(vid(p) for p in pts)
    shared = [p for p in itertools.product((0, 1), repeat=d) if p[0] == 1]
    shared = [tuple(p) for p in shared]
    facets = {"f12": Facet(("c1", "c2"), tuple(vid(p) for p in shared))}
    return CellComplexRealization(d, vertices, cells, facets, {})


def ridge_star_3d() -> CellComplexRealization:
    """Three triangular prisms around a common interior edge: the simple
    star of a ridge in dimension 3."""
    o = (0, 0)
    ps = {"P1": (3, 0), "P2": (-1, 2), "P3": (-1, -3)}

    def vid(tag, z):
        return f"v{tag}{z}"

    vertices = {}
    for tag, (x, y) in {"O": o, **ps}.items():
        for z in (0, 1):
            vertices[vid(tag, z)] = (Fraction(x), Fraction(y), Fraction(z))

    def prism(a, b):
        return tuple(vid(t, z) for z in (0, 1) for t in ("O", a, b))

    cells = {"c1": prism("P1", "P2"), "c2": prism("P2", "P3"), "c3": prism("P3", "P1")}
    facets = {
        "f12": Facet(("c1", "c2"), (vid("O", 0), vid("P2", 0), vid("P2", 1), vid("O", 1))),
        "f23": Facet(("c2", "c3"), (vid("O", 0), vid("P3", 0), vid("P3", 1), vid("O", 1))),
        "f31": Facet(("c3", "c1"), (vid("O", 0), vid("P1", 0), vid("P1", 1), vid("O", 1))),
    }
    ridges = {"r0": Ridge(("f12", "f23", "f31"), ("c1", "c2", "c3"))}
    return CellComplexRealization(3, vertices, cells, facets, ridges)


def delete_cell(M: CellComplexRealization, cid: str) -> CellComplexRealization:
    """The complex with one cell removed; facets and ridges touching it are
    dropped (their faces become boundary)."""
    if cid not in M.cells:
        raise PlGeomError(f"unknown cell {cid!r}")
    cells = {c: vs for c, vs in M.cells.items() if c != cid}
    facets = {fid: f for fid, f in M.facets.items() if cid not in f.cells}
    ridges = {rid: r for rid, r in M.ridges.items() if cid not in r.cells}
    return CellComplexRealization(M.dim, M.vertices, cells, facets, ridges)


# --- serialization and exports -----------------------------------------------

def complex_to_json(M: CellComplexRealization) -> dict:
    return {
        "dim": M.dim,
        "vertices": {vid: [str(x) for x in coords] for vid, coords in M.vertices.items()},
        "cells": {cid: list(vs) for cid, vs in M.cells.items()},
        "facets": {fid: {"cells": list(f.cells), "vertices": list(f.vertices)}
                   for fid, f in M.facets.items()},
        "ridges": {rid: {"facets": list(r.facets), "cells": list(r.cells)}
                   for rid, r in M.ridges.items()},
    }


def complex_from_json(data: dict) -> CellComplexRealization:
    try:
        dim = data["dim"]
        vertices = {vid: [Fraction(str(x)) for x in coords]
                    for vid, coords in data["vertices"].items()}
        cells = data["cells"]
        facets = {fid: Facet(tuple(f["cells"]), tuple(f["vertices"]))
                  for fid, f in data.get("facets", {}).items()}
        ridges = {rid: Ridge(tuple(r["facets"]), tuple(r["cells"]))
                  for rid, r in data.get("ridges", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise PlGeomError(f"malformed complex JSON: {exc}") from None
    return CellComplexRealization(dim, vertices, cells, facets, ridges)


def lifting_to_json(M: CellComplexRealization, L: Lifting) -> dict:
    return {cid: [str(x) for x in L.functions[cid]] for cid in M.cells}


def reciprocal_to_json(M: CellComplexRealization, rec: Reciprocal) -> dict:
    return {cid: [str(x) for x in rec.points[cid]] for cid in M.cells}


def lifting_to_obj(M: CellComplexRealization, L: Lifting) -> str:
    """OBJ mesh of the lifted surface.  d=2: one polygon per cell at its
    lifted height (cells keep their own copies of shared vertices so sharp
    folds render correctly).  d=3: the facet polygons, projected to
    (x1, x2, lifted value)."""
    lines = ["# gainforge lifting"]
    faces = []
    idx = 0
    if M.dim == 2:
        polys = [(cid, M.cells[cid], cid) for cid in M.cells]
    elif M.dim == 3:
        polys = [(fid, M.facets[fid].vertices, M.facets[fid].cells[0]) for fid in M.facets]
    else:
        raise PlGeomError("OBJ export supports dimensions 2 and 3 only")
    for _, vids, via_cell in polys:
        face = []
        for vid in vids:
            p = M.vertices[vid]
            z = L.value(via_cell, p)
            lines.append(f"v {float(p[0])} {float(p[1])} {float(z)}")
            idx += 1
            face.append(idx)
        faces.append("f " + " ".join(str(i) for i in face))
    lines.extend(faces)
    return "\n".join(lines) + "\n"


def reciprocal_to_obj(M: CellComplexRealization, rec: Reciprocal) -> str:
    """OBJ line set of the reciprocal diagram (z = 0 for planar input)."""
    if M.dim not in (2, 3):
        raise PlGeomError("OBJ export supports dimensions 2 and 3 only")
    lines = ["# gainforge reciprocal"]
    order = list(M.cells)
    pos = {c: i + 1 for i, c in enumerate(order)}
    for c in order:
        p = rec.points[c]
        coords = [float(x) for x in p] + [0.0] * (3 - M.dim)
        lines.append("v " + " ".join(str(x) for x in coords))
    for f in M.facets.values():
        lines.append(f"l {pos[f.cells[0]]} {pos[f.cells[1]]}")
    return "\n".join(lines) + "\n"


def dual_graph_dot(M: CellComplexRealization) -> str:
    g, _ = dual_graph(M)
    return to_dot(g, "dual")


def facet_graph_dot(M: CellComplexRealization) -> str:
    return to_dot(facet_gain_graph(M).graph, "facets")
