"""The Binary Cycle Test with its group-theoretic validity gates, the wheel
counterexample family, and randomized oracles/generators.

The test itself is one-sided: it can certify balance (for gain groups
without odd torsion on finite graphs) but never certifies unbalance; every
failed precondition is reported as a diagnostic verdict rather than an
exception.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

from . import abelian, lattice
from .abelian import GroupSpec, has_nontrivial_inf_2_divisible, has_odd_torsion
from .gain import GainGraph, is_balanced, walk_gain
from .graph import (BACKWARD, FORWARD, CycleBasisCandidate, Multigraph, Walk,
                    fundamental_circles, is_binary_cycle_basis, require_closed,
                    reverse_walk, spanning_tree, tree_path)
from .lattice import IntMatrix


class BctOutcome(Enum):
    BALANCED_BY_THEOREM = "BalancedByTheorem"
    NOT_A_BASIS = "NotABasis"
    UNBALANCED_WALK = "UnbalancedWalk"
    GATE_FAILED_ODD_TORSION = "GateFailedOddTorsion"
    # reserved for gate combinations that only arise on infinite graphs,
    # which this library does not represent
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class BctVerdict:
    outcome: BctOutcome
    witness: Walk | None
    candidate_count: int
    candidate_rank: int | None
    cycle_rank: int
    odd_torsion: bool
    inf_two_divisible: bool
    theorem: str | None
    note: str | None = None


def binary_cycle_test(gg: GainGraph, cand: CycleBasisCandidate) -> BctVerdict:
    """Run the test: all candidate walks must have identity gain, their
    binary images must form a cycle-space basis, and the gain group must
    pass the no-odd-torsion gate; only then is balance concluded."""
    spec = gg.spec
    odd = has_odd_torsion(spec)
    i2d = has_nontrivial_inf_2_divisible(spec)
    from .graph import cycle_rank
    cr = cycle_rank(gg.graph)

    for w in cand.walks:
        require_closed(gg.graph, w)
    for w in cand.walks:
        if not abelian.is_identity(walk_gain(gg, w)):
            return BctVerdict(BctOutcome.UNBALANCED_WALK, w, len(cand.walks), None, cr,
                              odd, i2d, None, "a candidate walk has nonidentity gain")
    rep = is_binary_cycle_basis(gg.graph, cand)
    if not rep.is_basis:
        return BctVerdict(BctOutcome.NOT_A_BASIS, None, rep.candidate_count, rep.gf2_rank,
                          rep.cycle_rank, odd, i2d, None,
                          "binary images do not form a basis of the cycle space")
    if odd:
        return BctVerdict(BctOutcome.GATE_FAILED_ODD_TORSION, None, rep.candidate_count,
                          rep.gf2_rank, rep.cycle_rank, odd, i2d, None,
                          "gain group has odd torsion; the test is not valid for it")
    verdict = BctVerdict(BctOutcome.BALANCED_BY_THEOREM, None, rep.candidate_count,
                         rep.gf2_rank, rep.cycle_rank, odd, i2d,
                         "finite graph + no odd torsion",
                         "graph is finite, so the 2-divisibility gate is not needed")
    # soundness cross-check, active in test builds (python -O disables it)
    assert is_balanced(gg).balanced, "test concluded balance but the graph is unbalanced"
    return verdict


@dataclass(frozen=True)
class GateReport:
    odd_torsion: bool
    inf_two_divisible: bool
    finite_graph_theorem_applies: bool
    no_inf_2_divisible_theorem_applies: bool

    @property
    def test_valid(self) -> bool:
        return self.finite_graph_theorem_applies or self.no_inf_2_divisible_theorem_applies


def gate_report(spec: GroupSpec, graph_finite: bool = True) -> GateReport:
    """Which validity theorem (finite graph / no infinitely 2-divisible
    elements) would validate the test for this gain group?"""
    odd = has_odd_torsion(spec)
    i2d = has_nontrivial_inf_2_divisible(spec)
    return GateReport(
        odd_torsion=odd,
        inf_two_divisible=i2d,
        finite_graph_theorem_applies=graph_finite and not odd,
        no_inf_2_divisible_theorem_applies=not odd and not i2d,
    )


# --- the wheel counterexample family ---------------------------------------

def wheel_counterexample(k: int) -> tuple[GainGraph, CycleBasisCandidate]:
    """The wheel W_{2k} over Z_{2k-1}: spokes gain 0, rim edges gain 1.

    The 2k Hamiltonian circles (2k-1 consecutive rim edges closed through
    two spokes) all have gain 0 and their binary images form a basis, yet
    the outer rim circle has gain 1, so the graph is unbalanced.  Rim edges
    are listed first so the direct balance check surfaces the rim circle as
    its witness.
    """
    if k < 2:
        raise ValueError("wheel counterexample needs k >= 2")
    n = 2 * k
    spec = GroupSpec(0, (n - 1,), 0)
    one = abelian.element(spec, torsion=(1,))
    zero = abelian.zero(spec)
    vertices = ["hub"] + [f"r{i}" for i in range(n)]
    edges = [(f"rim{i}", f"r{i}", f"r{(i + 1) % n}") for i in range(n)]
    edges += [(f"spoke{i}", "hub", f"r{i}") for i in range(n)]
    gains = {f"rim{i}": one for i in range(n)}
    gains.update({f"spoke{i}": zero for i in range(n)})
    gg = GainGraph(Multigraph(vertices, edges), spec, gains)

    walks = []
    for i in range(n):
        steps = [(f"spoke{i}", FORWARD)]
        steps += [(f"rim{(i + j) % n}", FORWARD) for j in range(n - 1)]
        steps.append((f"spoke{(i - 1) % n}", BACKWARD))
        walks.append(Walk("hub", tuple(steps)))
    return gg, CycleBasisCandidate(tuple(walks))


def rim_circle(k: int) -> Walk:
    """The unbalanced outer circle of wheel_counterexample(k)."""
    n = 2 * k
    return Walk("r0", tuple((f"rim{i}", FORWARD) for i in range(n)))


# --- brute-force oracle for the free-abelian kernel lemma -------------------

def lemma_free_abelian_oracle(seed: int, max_rank: int = 4, max_entry: int = 3) -> bool:
    """One randomized trial of the kernel-extension property.

    Build A = Z^r, a subgroup L of full rank mod 2, a homomorphism h from A
    to Z^s + Z_{2^t} that kills L, and a subgroup K whose generators y all
    satisfy l*y in L for some l >= 1 (so K/(L^K) is torsion).  Return True
    iff h kills every generator of K.  A False return would indicate an
    implementation bug, not a counterexample.
    """
    rng = random.Random(seed)
    r = rng.randint(1, max_rank)
    while True:
        lmat = IntMatrix.from_rows(
            [[rng.randint(-max_entry, max_entry) for _ in range(r)] for _ in range(r)], r)
        if lattice.mod2_rank(lmat) == r:
            break
    _, d, v = lattice.smith_normal_form(lmat)
    ds = [d.entries[i][i] for i in range(r)]  # full rank: all >= 1

    s = rng.randint(0, 2)
    t = rng.randint(1, 3)
    mod = 2 ** t
    # h factors through A/L = sum Z_{d_i}; in SNF coordinates send the i-th
    # generator to an element of order dividing d_i in Z_{2^t}
    gs = []
    for di in ds:
        v2 = (di & -di).bit_length() - 1
        gs.append((rng.randrange(mod) * 2 ** (t - min(v2, t))) % mod)

    def h(x):
        y = [sum(x[i] * v.entries[i][j] for i in range(r)) for j in range(r)]
        return ((0,) * s, sum(yj * gj for yj, gj in zip(y, gs)) % mod)

    zero = ((0,) * s, 0)
    for row in lmat.entries:
        if h(row) != zero:
            raise AssertionError("constructed homomorphism does not kill L")

    vinv = lattice.inverse_unimodular(v)
    ok = True
    for _ in range(rng.randint(1, 4)):
        ell = rng.randint(1, 8)
        yprime = [rng.randint(-3, 3) * (di // math.gcd(di, ell)) for di in ds]
        y = tuple(sum(yprime[i] * vinv.entries[i][j] for i in range(r)) for j in range(r))
        inside, _ = lattice.membership(lmat, [ell * c for c in y])
        if not inside:
            raise AssertionError("K generator failed its defining property l*y in L")
        ok = ok and h(y) == zero
    return ok


# --- randomized instance generators (fuzz suites) ---------------------------

def random_connected_graph(rng: random.Random, max_vertices: int = 10,
                           max_edges: int = 20) -> Multigraph:
    """Random connected multigraph (loops and parallel edges allowed)."""
    nv = rng.randint(2, max_vertices)
    vertices = [f"v{i}" for i in range(nv)]
    edges = []
    for i in range(1, nv):
        edges.append((f"e{len(edges)}", f"v{rng.randrange(i)}", f"v{i}"))
    extra = rng.randint(0, max(0, max_edges - len(edges)))
    for _ in range(extra):
        a, b = rng.randrange(nv), rng.randrange(nv)
        edges.append((f"e{len(edges)}", f"v{a}", f"v{b}"))
    rng.shuffle(edges)
    edges = [(f"e{i}", t, h) for i, (_, t, h) in enumerate(edges)]
    return Multigraph(vertices, edges)


def random_no_odd_torsion_spec(rng: random.Random) -> GroupSpec:
    """Draw from {Z^r (r<=3), Z_{2^k} (k<=3), mixed}."""
    kind = rng.randrange(3)
    if kind == 0:
        return GroupSpec(rng.randint(1, 3), (), 0)
    if kind == 1:
        return GroupSpec(0, (2 ** rng.randint(1, 3),), 0)
    torsion = tuple(2 ** rng.randint(1, 3) for _ in range(rng.randint(1, 2)))
    return GroupSpec(rng.randint(0, 2), torsion, 0)


def random_spec(rng: random.Random) -> GroupSpec:
    """Any supported gain group shape, odd torsion included."""
    free = rng.randint(0, 2)
    torsion = tuple(rng.choice([2, 3, 4, 5, 6, 8]) for _ in range(rng.randint(0, 2)))
    if free == 0 and not torsion:
        free = 1
    return GroupSpec(free, torsion, 0)


def random_element(rng: random.Random, spec: GroupSpec) -> abelian.GroupElement:
    from fractions import Fraction
    free = tuple(rng.randint(-4, 4) for _ in range(spec.free_rank))
    tors = tuple(rng.randrange(n) for n in spec.torsion_orders)
    dyad = tuple(Fraction(rng.randint(-8, 8), 2 ** rng.randint(0, 3))
                 for _ in range(spec.dyadic_rank))
    return abelian.element(spec, free, tors, dyad)


def coboundary_gains(rng: random.Random, g: Multigraph, spec: GroupSpec) -> GainGraph:
    """Gains of the form theta(head) - theta(tail): balanced by construction."""
    theta = {v: random_element(rng, spec) for v in g.vertices}
    gains = {eid: abelian.sub(theta[head], theta[tail]) for eid, tail, head in g.edges}
    return GainGraph(g, spec, gains)


def random_gains(rng: random.Random, g: Multigraph, spec: GroupSpec) -> GainGraph:
    return GainGraph(g, spec, {eid: random_element(rng, spec) for eid in g.edge_ids()})


def _random_invertible_gf2(rng: random.Random, m: int) -> list[int]:
    from .graph import gf2_rank
    while True:
        rows = [rng.randrange(1, 1 << m) for _ in range(m)]
        if gf2_rank(rows) == m:
            return rows


def random_candidate(rng: random.Random, g: Multigraph) -> CycleBasisCandidate:
    """A random cycle-space basis candidate: XOR-combinations of the
    fundamental circles, realized as closed walks by conjugating each circle
    to a common base point (the conjugation paths traverse their edges an
    even number of times, exercising the even-multiplicity padding rule)."""
    tree = spanning_tree(g)
    circles = fundamental_circles(g, tree)
    m = len(circles)
    if m == 0:
        return CycleBasisCandidate(())
    tmat = _random_invertible_gf2(rng, m)
    root = g.vertices[rng.randrange(g.n_vertices)]
    walks = []
    for bits in tmat:
        steps: list[tuple] = []
        for j in range(m):
            if not bits >> j & 1:
                continue
            circle = circles[j]
            if rng.random() < 0.5:
                circle = reverse_walk(g, circle)
            go = tree_path(g, tree, root, circle.start)
            steps.extend(go)
            steps.extend(circle.steps)
            steps.extend((eid, -d) for eid, d in reversed(go))
        if rng.random() < 0.3 and g.incident(root):
            eid, d, _ = rng.choice(g.incident(root))
            steps.extend([(eid, d), (eid, -d)])
        walks.append(Walk(root, tuple(steps)))
    return CycleBasisCandidate(tuple(walks))


# --- serialization ----------------------------------------------------------

def verdict_to_json(v: BctVerdict) -> dict:
    from .graph import walk_to_json
    return {
        "outcome": v.outcome.value,
        "witness": walk_to_json(v.witness) if v.witness is not None else None,
        "candidate_count": v.candidate_count,
        "candidate_rank": v.candidate_rank,
        "cycle_rank": v.cycle_rank,
        "odd_torsion": v.odd_torsion,
        "inf_two_divisible": v.inf_two_divisible,
        "theorem": v.theorem,
        "note": v.note,
    }


def gate_report_to_json(rep: GateReport) -> dict:
    return {
        "odd_torsion": rep.odd_torsion,
        "inf_two_divisible": rep.inf_two_divisible,
        "finite_graph_theorem_applies": rep.finite_graph_theorem_applies,
        "no_inf_2_divisible_theorem_applies": rep.no_inf_2_divisible_theorem_applies,
        "test_valid": rep.test_valid,
    }
