"""Exact arithmetic for gain groups of the form Z^r + Z_n1 + ... + Z_nk + Z[1/2]^m.

Elements are kept in a canonical form (torsion residues reduced, dyadic
parts as Fractions with power-of-two denominators) so equality is
structural.  Everything here is immutable and side-effect free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


class SpecMismatch(ValueError):
    """Two elements (or an element and a spec) do not belong together."""


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GroupSpec:
    """Shape of a group Z^free_rank + sum Z_n + (Z[1/2])^dyadic_rank."""

    free_rank: int = 0
    torsion_orders: tuple[int, ...] = ()
    dyadic_rank: int = 0

    def __post_init__(self):
        if self.free_rank < 0 or self.dyadic_rank < 0:
            raise ValueError("ranks must be nonnegative")
        object.__setattr__(self, "torsion_orders", tuple(int(n) for n in self.torsion_orders))
        for n in self.torsion_orders:
            if n < 2:
                raise ValueError(f"torsion order {n} < 2")

    def __str__(self):
        return format_spec(self)


@dataclass(frozen=True)
class GroupElement:
    spec: GroupSpec
    free_part: tuple[int, ...] = ()
    torsion_part: tuple[int, ...] = ()
    dyadic_part: tuple[Fraction, ...] = ()

    def __post_init__(self):
        spec = self.spec
        free = tuple(int(x) for x in self.free_part)
        tors = tuple(int(x) for x in self.torsion_part)
        dyad = tuple(Fraction(x) for x in self.dyadic_part)
        if len(free) != spec.free_rank:
            raise SpecMismatch(f"free part has length {len(free)}, spec wants {spec.free_rank}")
        if len(tors) != len(spec.torsion_orders):
            raise SpecMismatch(
                f"torsion part has length {len(tors)}, spec wants {len(spec.torsion_orders)}")
        if len(dyad) != spec.dyadic_rank:
            raise SpecMismatch(f"dyadic part has length {len(dyad)}, spec wants {spec.dyadic_rank}")
        tors = tuple(x % n for x, n in zip(tors, spec.torsion_orders))
        for q in dyad:
            if not _is_pow2(q.denominator):
                raise ValueError(f"dyadic coordinate {q} has non power-of-2 denominator")
        object.__setattr__(self, "free_part", free)
        object.__setattr__(self, "torsion_part", tors)
        object.__setattr__(self, "dyadic_part", dyad)

    # operator sugar; the module-level functions are the primary API
    def __add__(self, other):
        return add(self, other)

    def __neg__(self):
        return negate(self)

    def __rmul__(self, k):
        return scale(k, self)


def zero(spec: GroupSpec) -> GroupElement:
    return GroupElement(
        spec,
        (0,) * spec.free_rank,
        (0,) * len(spec.torsion_orders),
        (Fraction(0),) * spec.dyadic_rank,
    )


def element(spec: GroupSpec, free=(), torsion=(), dyadic=()) -> GroupElement:
    return GroupElement(spec, tuple(free), tuple(torsion), tuple(Fraction(q) for q in dyadic))


def _require_same_spec(a: GroupElement, b: GroupElement):
    if a.spec != b.spec:
        raise SpecMismatch(f"elements live in different groups: {a.spec} vs {b.spec}")


def add(a: GroupElement, b: GroupElement) -> GroupElement:
    _require_same_spec(a, b)
    return GroupElement(
        a.spec,
        tuple(x + y for x, y in zip(a.free_part, b.free_part)),
        tuple(x + y for x, y in zip(a.torsion_part, b.torsion_part)),
        tuple(x + y for x, y in zip(a.dyadic_part, b.dyadic_part)),
    )


def negate(a: GroupElement) -> GroupElement:
    return GroupElement(
        a.spec,
        tuple(-x for x in a.free_part),
        tuple(-x for x in a.torsion_part),
        tuple(-x for x in a.dyadic_part),
    )


def sub(a: GroupElement, b: GroupElement) -> GroupElement:
    return add(a, negate(b))


def scale(k: int, a: GroupElement) -> GroupElement:
    k = int(k)
    return GroupElement(
        a.spec,
        tuple(k * x for x in a.free_part),
        tuple(k * x for x in a.torsion_part),
        tuple(k * x for x in a.dyadic_part),
    )


def is_identity(a: GroupElement) -> bool:
    return (
        all(x == 0 for x in a.free_part)
        and all(x == 0 for x in a.torsion_part)
        and all(x == 0 for x in a.dyadic_part)
    )


def has_odd_torsion(spec: GroupSpec) -> bool:
    """True iff some torsion summand Z_n has an element of odd prime order,
    i.e. some n is not a power of two."""
    return any(not _is_pow2(n) for n in spec.torsion_orders)


def has_nontrivial_inf_2_divisible(spec: GroupSpec) -> bool:
    """True iff the group contains a nonzero infinitely 2-divisible element.

    In Z only 0 is infinitely 2-divisible; in Z_n the infinitely 2-divisible
    elements form the subgroup of order odd_part(n); in Z[1/2] every element
    qualifies.
    """
    return has_odd_torsion(spec) or spec.dyadic_rank > 0


def element_order(a: GroupElement):
    """Least k >= 1 with k*a = 0, or the string "infinite"."""
    if any(x != 0 for x in a.free_part) or any(x != 0 for x in a.dyadic_part):
        return "infinite"
    order = 1
    for x, n in zip(a.torsion_part, a.spec.torsion_orders):
        k = n // math.gcd(n, x)
        order = order * k // math.gcd(order, k)
    return order


# --- spec string syntax: "Z^r * Z_n1 * ... * Z_nk * D^m" ------------------

def parse_spec(text: str) -> GroupSpec:
    """Parse a group spec string.  "Z" means Z^1, "D" means one dyadic
    summand; "1" (or an empty string) is the trivial group."""
    text = text.strip()
    if text in ("", "1"):
        return GroupSpec()
    free = 0
    torsion: list[int] = []
    dyadic = 0
    for raw in text.split("*"):
        f = raw.strip()
        if not f:
            raise ValueError(f"empty factor in group spec {text!r}")
        try:
            if f == "Z":
                free += 1
            elif f == "D":
                dyadic += 1
            elif f.startswith("Z^"):
                free += int(f[2:])
            elif f.startswith("D^"):
                dyadic += int(f[2:])
            elif f.startswith("Z_"):
                torsion.append(int(f[2:]))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"cannot parse group factor {f!r} in {text!r}") from None
    return GroupSpec(free, tuple(torsion), dyadic)


def format_spec(spec: GroupSpec) -> str:
    parts = []
    if spec.free_rank == 1:
        parts.append("Z")
    elif spec.free_rank > 1:
        parts.append(f"Z^{spec.free_rank}")
    parts.extend(f"Z_{n}" for n in spec.torsion_orders)
    if spec.dyadic_rank == 1:
        parts.append("D")
    elif spec.dyadic_rank > 1:
        parts.append(f"D^{spec.dyadic_rank}")
    return " * ".join(parts) if parts else "1"


# --- element serialization: flat array, dyadic coords as "p/q" ------------

def element_to_json(a: GroupElement) -> list:
    out: list = list(a.free_part) + list(a.torsion_part)
    out.extend(f"{q.numerator}/{q.denominator}" for q in a.dyadic_part)
    return out


def element_from_json(spec: GroupSpec, arr) -> GroupElement:
    want = spec.free_rank + len(spec.torsion_orders) + spec.dyadic_rank
    if len(arr) != want:
        raise SpecMismatch(f"element array has {len(arr)} entries, spec {spec} wants {want}")
    r, k = spec.free_rank, len(spec.torsion_orders)
    free = tuple(int(x) for x in arr[:r])
    tors = tuple(int(x) for x in arr[r:r + k])
    dyad = tuple(Fraction(str(x)) for x in arr[r + k:])
    return GroupElement(spec, free, tors, dyad)
