"""Membership tests for the standard Melnikov formations of finite groups."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Union

from . import catalog
from .groups import FiniteGroup, GroupError, derived_subgroup, is_prime, normal_subgroups
from .homs import enumerate_homs, quotient

GroupDescriptor = Union[str, FiniteGroup]

KINDS = ("all", "p_group", "solvable", "composition_factors_in")


@dataclass(frozen=True)
class FormationSpec:
    kind: str
    p: int | None = None
    factors: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GroupError(f"unknown formation kind {self.kind!r}")
        if self.kind == "p_group" and (self.p is None or not is_prime(self.p)):
            raise GroupError(f"p_group formation needs a prime p, got {self.p}")

    @classmethod
    def all(cls) -> "FormationSpec":
        return cls("all")

    @classmethod
    def p_group(cls, p: int) -> "FormationSpec":
        return cls("p_group", p=p)

    @classmethod
    def solvable(cls) -> "FormationSpec":
        return cls("solvable")

    @classmethod
    def composition_factors_in(cls, factors: Sequence[GroupDescriptor]) -> "FormationSpec":
        return cls("composition_factors_in", factors=tuple(factors))


def is_p_group(group: FiniteGroup, p: int) -> bool:
    n = group.order
    while n % p == 0:
        n //= p
    return n == 1


def is_solvable(group: FiniteGroup) -> bool:
    cur = group
    while cur.order > 1:
        d = derived_subgroup(cur)
        if d.order == cur.order:
            return False
        cur = d.group
    return True


def composition_factors(group: FiniteGroup) -> list[FiniteGroup]:
    """Factors of a composition series, top first.

    Each step divides out the largest proper normal subgroup, which is
    automatically maximal normal.
    """
    factors = []
    cur = group
    while cur.order > 1:
        proper = [n for n in normal_subgroups(cur) if n.order < cur.order]
        top = proper[-1]
        factors.append(quotient(cur, top)[0])
        cur = top.group
    return factors


def isomorphic(a: FiniteGroup, b: FiniteGroup) -> bool:
    if a.fingerprint() != b.fingerprint():
        return False
    return next(enumerate_homs(a, b, surjective_only=True), None) is not None


def _resolve(desc: GroupDescriptor) -> FiniteGroup:
    return catalog.get(desc) if isinstance(desc, str) else desc


def formation_member(group: FiniteGroup, spec: FormationSpec) -> bool:
    if spec.kind == "all":
        return True
    if spec.kind == "p_group":
        return is_p_group(group, spec.p)
    if spec.kind == "solvable":
        return is_solvable(group)
    allowed = [_resolve(d) for d in spec.factors]
    for f in composition_factors(group):
        # fingerprints first; the isomorphism search only runs on a match
        if not any(f.fingerprint() == a.fingerprint() and isomorphic(f, a) for a in allowed):
            return False
    return True
