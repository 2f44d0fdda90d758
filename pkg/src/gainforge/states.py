"""Permutation gain graphs: satisfied states under a closed enumeration of
fixed-point-free actions, plus dimension counting for satisfied-pair spaces.

A state assigns a quality to every vertex; it is satisfied when
state(head) = state(tail) acted on by the edge gain, for every edge.  For
the actions here (right regular, translation of rational vectors, scalar
multiplication on the rational line) the action is the group operation of
the quality domain itself, so propagation reuses the balance machinery.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Mapping

from . import abelian, qlinalg
from .gain import ElementOps, GainGraph, RationalMulOps, VectorOps, balance
from .graph import Multigraph, Walk


class ActionKind(Enum):
    RIGHT_REGULAR = "regular"
    TRANSLATION = "translation"
    SCALAR = "scalar"


@dataclass(frozen=True)
class ActionSpec:
    """One of the supported quality/action pairs.

    RIGHT_REGULAR: Q = G, acting on itself by addition.
    TRANSLATION:   G = Q = rational vectors of dimension `dim`.
    SCALAR:        G = nonzero rationals acting on the rational line by
                   multiplication; fixed-point free on nonzero qualities
                   only, so seeds must be nonzero.
    """

    kind: ActionKind
    dim: int = 0

    @property
    def fixed_point_free(self) -> bool:
        return self.kind in (ActionKind.RIGHT_REGULAR, ActionKind.TRANSLATION)

    @property
    def fixed_point_free_on_nonzero(self) -> bool:
        return True


def right_regular() -> ActionSpec:
    return ActionSpec(ActionKind.RIGHT_REGULAR)


def translation(dim: int) -> ActionSpec:
    return ActionSpec(ActionKind.TRANSLATION, dim)


def scalar_on_line() -> ActionSpec:
    return ActionSpec(ActionKind.SCALAR)


class UnbalancedInput(ValueError):
    """Propagation was asked on an unbalanced gain graph; carries the
    balance witness (a closed walk with nonidentity gain)."""

    def __init__(self, witness: Walk):
        super().__init__("gain graph is unbalanced; no satisfied state exists")
        self.witness = witness


class ZeroSeedWithScalarAction(ValueError):
    pass


def element_to_vector(el: abelian.GroupElement) -> tuple[Fraction, ...]:
    """Flatten a torsion-free element into a rational vector."""
    if el.spec.torsion_orders:
        raise ValueError("torsion elements have no vector interpretation")
    return tuple(Fraction(x) for x in el.free_part) + tuple(el.dyadic_part)


def _translation_setup(gg: GainGraph, act: ActionSpec):
    spec = gg.spec
    if spec.torsion_orders:
        raise ValueError("translation action needs a torsion-free gain group")
    dim = spec.free_rank + spec.dyadic_rank
    if act.dim != dim:
        raise ValueError(f"action dimension {act.dim} != gain vector dimension {dim}")
    gains = {eid: element_to_vector(g) for eid, g in gg.gains.items()}
    return gains, VectorOps(dim)


def _setup(gg: GainGraph, act: ActionSpec):
    if act.kind == ActionKind.RIGHT_REGULAR:
        return gg.gains, ElementOps(gg.spec)
    if act.kind == ActionKind.TRANSLATION:
        return _translation_setup(gg, act)
    raise ValueError(
        "the scalar action applies to multiplicative rational gain maps, "
        "not GroupSpec gain graphs; use propagate_scalar")


def propagate_values(graph: Multigraph, gains: Mapping, ops, root, seed) -> dict:
    """The unique satisfied state with state(root) = seed, or raise
    UnbalancedInput with the balance witness."""
    rep = balance(graph, gains, ops)
    if not rep.balanced:
        raise UnbalancedInput(rep.witness)
    theta = rep.potentials
    base = theta[root]
    # re-anchor so the root gets exactly the seed
    return {v: ops.add(seed, ops.add(theta[v], ops.neg(base))) for v in graph.vertices}


def propagate_state(gg: GainGraph, act: ActionSpec, root, seed) -> dict:
    gains, ops = _setup(gg, act)
    if act.kind == ActionKind.RIGHT_REGULAR:
        if not isinstance(seed, abelian.GroupElement) or seed.spec != gg.spec:
            raise ValueError("seed must be a group element of the gain group")
    else:
        seed = tuple(Fraction(x) for x in seed)
        if len(seed) != act.dim:
            raise ValueError(f"seed has dimension {len(seed)}, action wants {act.dim}")
    return propagate_values(gg.graph, gains, ops, root, seed)


def propagate_scalar(graph: Multigraph, gains: Mapping, root, seed) -> dict:
    """Satisfied state for a multiplicative nonzero-rational gain map."""
    seed = Fraction(seed)
    if seed == 0:
        raise ZeroSeedWithScalarAction("scalar action is only fixed-point free away from 0")
    return propagate_values(graph, gains, RationalMulOps(), root, seed)


def propagate_vector(graph: Multigraph, gains: Mapping, dim: int, root, seed) -> dict:
    seed = tuple(Fraction(x) for x in seed)
    return propagate_values(graph, gains, VectorOps(dim), root, seed)


@dataclass(frozen=True)
class SatisfactionReport:
    satisfied: bool
    violated_edge: object | None


def satisfied_violation(graph: Multigraph, gains: Mapping, ops, state: Mapping):
    """First edge (in input order) violating state(head) = state(tail)*gain,
    or None."""
    for v in graph.vertices:
        if v not in state:
            raise ValueError(f"state is missing vertex {v!r}")
    for eid, tail, head in graph.edges:
        if state[head] != ops.add(state[tail], gains[eid]):
            return eid
    return None


def is_satisfied(gg: GainGraph, act: ActionSpec, state: Mapping) -> SatisfactionReport:
    gains, ops = _setup(gg, act)
    bad = satisfied_violation(gg.graph, gains, ops, state)
    return SatisfactionReport(bad is None, bad)


@dataclass(frozen=True)
class SatisfiedPair:
    gains: dict
    state: dict


@dataclass(frozen=True)
class SatSpace:
    dimension: int
    pairs: tuple[SatisfiedPair, ...]


def sat_dimension(gg, act: ActionSpec, basis_gain_maps) -> SatSpace:
    """Dimension of the satisfied-pair space over a subspace of balanced
    vector gain maps: dim Q + |basis|, realized constructively.

    Each basis gain map (edge -> rational vector) must be balanced and the
    family linearly independent over the rationals.  The emitted pairs are
    each basis map with its zero-seeded satisfied state, plus the constant
    states paired with the zero gain map.
    """
    if act.kind != ActionKind.TRANSLATION:
        raise ValueError("sat_dimension is defined for the translation action")
    graph = gg.graph if isinstance(gg, GainGraph) else gg
    d = act.dim
    ops = VectorOps(d)
    root = graph.vertices[0]
    eids = graph.edge_ids()

    flat = []
    for idx, gains in enumerate(basis_gain_maps):
        rep = balance(graph, gains, ops)
        if not rep.balanced:
            raise UnbalancedInput(rep.witness)
        flat.append([Fraction(x) for eid in eids for x in gains[eid]])
    if flat and qlinalg.rank(flat, d * len(eids)) != len(flat):
        raise ValueError("basis gain maps are linearly dependent over the rationals")

    pairs = []
    zero = ops.identity()
    for gains in basis_gain_maps:
        state = propagate_values(graph, gains, ops, root, zero)
        pairs.append(SatisfiedPair(dict(gains), state))
    zero_map = {eid: zero for eid in eids}
    for i in range(d):
        unit = tuple(Fraction(int(j == i)) for j in range(d))
        pairs.append(SatisfiedPair(zero_map, {v: unit for v in graph.vertices}))
    return SatSpace(d + len(flat), tuple(pairs))
