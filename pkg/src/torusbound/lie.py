"""Weyl-group orders and Euler characteristics of homogeneous spaces.

For an equal-rank pair H < G, chi(G/H) = |W(G)| / |W(H)|.  Grassmannians are
computed both by their closed formula and by the Weyl quotient, and the two
must agree.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .exactnum import DomainError

FAMILIES = ("A", "B", "C", "D", "T")

# not derivable from the classical families; chi(F4/Spin(9)) = 1152/384
CAYLEY_PLANE_CHI = 3


class ConsistencyError(RuntimeError):
    """Closed-form and Weyl-quotient Euler characteristics disagree."""


@dataclass(frozen=True)
class Simple:
    """One factor: a classical family of given rank, or a torus factor ``T``."""

    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        if self.family == "T":
            if self.rank < 0:
                raise DomainError("torus rank must be >= 0")
        elif self.rank < 1:
            raise DomainError(f"{self.family}_{self.rank}: rank must be >= 1")
        elif self.family == "D" and self.rank < 2:
            raise DomainError("D_1 is a torus factor; use T:1")


@dataclass(frozen=True)
class GroupDescriptor:
    factors: tuple[Simple, ...]

    @classmethod
    def of(cls, *factors: tuple[str, int]) -> "GroupDescriptor":
        return cls(tuple(Simple(f, r) for f, r in factors))

    @classmethod
    def parse(cls, text: str) -> "GroupDescriptor":
        """Parse ``FAM:RANK[,FAM:RANK...]``, e.g. ``B:2,T:1``."""
        factors = []
        for part in text.split(","):
            m = re.fullmatch(r"\s*([ABCDT])\s*:\s*(\d+)\s*", part)
            if not m:
                raise DomainError(f"bad group factor {part!r}; expected FAM:RANK")
            factors.append(Simple(m.group(1), int(m.group(2))))
        return cls(tuple(factors))

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)


def _simple_order(s: Simple) -> int:
    k = s.rank
    if s.family == "A":
        return math.factorial(k + 1)
    if s.family in ("B", "C"):
        return 2 ** k * math.factorial(k)
    if s.family == "D":
        return 2 ** (k - 1) * math.factorial(k)
    return 1


def weyl_order(g: GroupDescriptor | Simple) -> int:
    if isinstance(g, Simple):
        return _simple_order(g)
    return math.prod(_simple_order(f) for f in g.factors)


def special_orthogonal(k: int) -> GroupDescriptor:
    """Root-system type of SO(k): D_j for k = 2j >= 4, B_j for k = 2j+1 >= 3."""
    if k < 0:
        raise DomainError("SO(k) needs k >= 0")
    if k <= 1:
        return GroupDescriptor(())
    if k == 2:
        return GroupDescriptor.of(("T", 1))
    if k % 2:
        return GroupDescriptor.of(("B", k // 2))
    return GroupDescriptor.of(("D", k // 2))


def _product(*groups: GroupDescriptor) -> GroupDescriptor:
    return GroupDescriptor(tuple(f for g in groups for f in g.factors))


# ---------------------------------------------------------------------------
# Spaces


@dataclass(frozen=True)
class Sphere:
    d: int


@dataclass(frozen=True)
class ComplexProjective:
    m: int


@dataclass(frozen=True)
class QuaternionicProjective:
    m: int


@dataclass(frozen=True)
class CayleyPlane:
    pass


@dataclass(frozen=True)
class RealGrassmannian:
    """SO(p + m) / SO(p) x SO(m), for p in {2, 3}."""

    p: int
    m: int


@dataclass(frozen=True)
class Product:
    factors: tuple["Space", ...]


Space = Union[Sphere, ComplexProjective, QuaternionicProjective, CayleyPlane, RealGrassmannian, Product]


def _validate(s: Space) -> None:
    if isinstance(s, Sphere) and s.d < 0:
        raise DomainError("sphere dimension must be >= 0")
    if isinstance(s, (ComplexProjective, QuaternionicProjective)) and s.m < 0:
        raise DomainError("projective dimension must be >= 0")
    if isinstance(s, RealGrassmannian):
        if s.p not in (2, 3):
            raise DomainError(f"real Grassmannians are supported for p in {{2, 3}}, got p = {s.p}")
        if s.m < 1:
            raise DomainError("Grassmannian needs m >= 1")
        if s.p == 3 and s.m % 2:
            raise DomainError("SO(3+m)/SO(3)xSO(m) is only covered for even m")


def dimension(s: Space) -> int:
    _validate(s)
    if isinstance(s, Sphere):
        return s.d
    if isinstance(s, ComplexProjective):
        return 2 * s.m
    if isinstance(s, QuaternionicProjective):
        return 4 * s.m
    if isinstance(s, CayleyPlane):
        return 16
    if isinstance(s, RealGrassmannian):
        return s.p * s.m
    return sum(dimension(f) for f in s.factors)


def grassmannian_closed_form(p: int, m: int) -> int:
    """m + 2 for even m (p = 2, 3); m + 1 for odd m (p = 2)."""
    _validate(RealGrassmannian(p, m))
    return m + 2 if m % 2 == 0 else m + 1


def grassmannian_weyl_quotient(p: int, m: int) -> int:
    g = special_orthogonal(p + m)
    h = _product(special_orthogonal(p), special_orthogonal(m))
    if g.rank != h.rank:
        raise DomainError(f"SO({p + m}) and SO({p})xSO({m}) differ in rank")
    q, rem = divmod(weyl_order(g), weyl_order(h))
    if rem:
        raise ConsistencyError(f"|W(G)| not divisible by |W(H)| for p={p}, m={m}")
    return q


def weyl_quotient(s: Space) -> int | None:
    """Euler characteristic from Weyl-group orders, where an equal-rank model is known."""
    _validate(s)
    if isinstance(s, Sphere):
        if s.d % 2:
            return None
        if s.d == 0:
            return 2
        return weyl_order(special_orthogonal(s.d + 1)) // weyl_order(special_orthogonal(s.d))
    if isinstance(s, ComplexProjective):
        # SU(m+1) / S(U(1) x U(m))
        h = GroupDescriptor.of(("A", s.m - 1)) if s.m >= 2 else GroupDescriptor(())
        return weyl_order(GroupDescriptor.of(("A", s.m))) // weyl_order(h) if s.m >= 1 else 1
    if isinstance(s, QuaternionicProjective):
        if s.m == 0:
            return 1
        # Sp(m+1) / Sp(1) x Sp(m)
        g = GroupDescriptor.of(("C", s.m + 1))
        h = GroupDescriptor.of(("C", 1), ("C", s.m))
        return weyl_order(g) // weyl_order(h)
    if isinstance(s, RealGrassmannian):
        return grassmannian_weyl_quotient(s.p, s.m)
    if isinstance(s, Product):
        parts = [weyl_quotient(f) for f in s.factors]
        return None if any(p is None for p in parts) else math.prod(parts)
    return None


def euler_characteristic(s: Space) -> int:
    _validate(s)
    if isinstance(s, Sphere):
        return 2 if s.d % 2 == 0 else 0
    if isinstance(s, (ComplexProjective, QuaternionicProjective)):
        return s.m + 1
    if isinstance(s, CayleyPlane):
        return CAYLEY_PLANE_CHI
    if isinstance(s, RealGrassmannian):
        closed = grassmannian_closed_form(s.p, s.m)
        weyl = grassmannian_weyl_quotient(s.p, s.m)
        if closed != weyl:
            raise ConsistencyError(
                f"chi(SO({s.p + s.m})/SO({s.p})xSO({s.m})): formula {closed} != Weyl quotient {weyl}"
            )
        return closed
    return math.prod(euler_characteristic(f) for f in s.factors)


_TOKEN = re.compile(r"(S|CP|HP|GR):(\d+)(?::(\d+))?|CaP2")


def parse_space(text: str) -> Space:
    """Parse ``S:2``, ``CP:5``, ``HP:3``, ``CaP2``, ``GR:2:4``; products joined by ``x``."""
    parts = [p.strip() for p in text.split("x")]
    spaces = []
    for part in parts:
        m = _TOKEN.fullmatch(part)
        if not m:
            raise DomainError(f"bad space descriptor {part!r}")
        kind = m.group(1)
        if kind is None:
            spaces.append(CayleyPlane())
            continue
        a = int(m.group(2))
        if kind == "GR":
            if m.group(3) is None:
                raise DomainError("Grassmannian needs GR:p:m")
            spaces.append(RealGrassmannian(a, int(m.group(3))))
        elif m.group(3) is not None:
            raise DomainError(f"unexpected second parameter in {part!r}")
        else:
            spaces.append({"S": Sphere, "CP": ComplexProjective, "HP": QuaternionicProjective}[kind](a))
    for sp in spaces:
        _validate(sp)
    return spaces[0] if len(spaces) == 1 else Product(tuple(spaces))


def describe(s: Space) -> str:
    if isinstance(s, Sphere):
        return f"S^{s.d}"
    if isinstance(s, ComplexProjective):
        return f"CP^{s.m}"
    if isinstance(s, QuaternionicProjective):
        return f"HP^{s.m}"
    if isinstance(s, CayleyPlane):
        return "CaP^2"
    if isinstance(s, RealGrassmannian):
        return f"SO({s.p + s.m})/SO({s.p})xSO({s.m})"
    return " x ".join(describe(f) for f in s.factors)
