"""Non-abelian 1-cocycles and their correspondence with sections of ``A ⋊ Q -> Q``.

A cocycle satisfies ``x(q1 q2) = x(q1) * act(q1, x(q2))``. It corresponds to
the section ``q -> (x(q), q)`` of the semidirect product, and conversely
``x(q) = s(q) q^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .constructions import GroupAction, SemidirectProduct, semidirect_product
from .groups import GroupError, Subgroup
from .homs import GroupHom


@dataclass(frozen=True, eq=False)
class Cocycle:
    action: GroupAction
    values: tuple[int, ...]

    def __call__(self, q: int) -> int:
        return self.values[q]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cocycle) and other.action is self.action
                and other.values == self.values)

    def __hash__(self) -> int:
        return hash((id(self.action), self.values))

    def verify(self) -> None:
        Q, A, act = self.action.actor, self.action.space, self.action.act
        x = np.array(self.values, dtype=np.int64)
        if x.shape != (Q.order,):
            raise GroupError("cocycle table has the wrong length")
        lhs = x[Q.mul]
        rhs = A.mul[x[:, None], act[np.arange(Q.order)[:, None], x[None, :]]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            q1, q2 = bad[0]
            raise GroupError(f"cocycle relation fails at ({int(q1)}, {int(q2)})")


def enumerate_cocycles(action: GroupAction) -> Iterator[Cocycle]:
    """All cocycles, ordered lexicographically by their values on the actor's generators.

    Values on generators are chosen by backtracking; the relation
    ``x(s g) = x(s) act(s, x(g))`` propagates them to the generated subgroup
    and rejects clashing assignments.
    """
    Q, A = action.actor, action.space
    qmul, amul = Q.table, A.table
    act = action.act.tolist()
    gens = list(Q.generators)
    x = [-1] * Q.order
    x[0] = 0
    known = [0]

    def extend(k: int, val: int) -> list[int] | None:
        g = gens[k]
        active = gens[:k + 1]
        added: list[int] = []
        ok = True

        def put(s: int, h: int) -> bool:
            y = qmul[s][h]
            v = amul[x[s]][act[s][x[h]]]
            cur = x[y]
            if cur == -1:
                x[y] = v
                added.append(y)
                return True
            return cur == v

        # the generator itself enters via s = identity
        x[g] = val
        added.append(g)
        for s in list(known):
            if not put(s, g):
                ok = False
                break
        i = 0
        while ok and i < len(added):
            s = added[i]
            i += 1
            for h in active:
                if not put(s, h):
                    ok = False
                    break
        if not ok:
            for y in added:
                x[y] = -1
            return None
        return added

    def search(k: int) -> Iterator[Cocycle]:
        if k == len(gens):
            yield Cocycle(action, tuple(x))
            return
        g = gens[k]
        if x[g] != -1:
            yield from search(k + 1)
            return
        for val in range(A.order):
            added = extend(k, val)
            if added is None:
                continue
            known.extend(added)
            yield from search(k + 1)
            del known[len(known) - len(added):]
            for y in added:
                x[y] = -1

    yield from search(0)


def cocycle_to_section(x: Cocycle, sd: SemidirectProduct | None = None) -> GroupHom:
    """``q -> (x(q), q)`` as a homomorphism ``Q -> A ⋊ Q``."""
    if sd is None:
        sd = semidirect_product(x.action)
    if sd.action is not x.action:
        raise GroupError("semidirect product built from a different action")
    Q = x.action.actor
    images = [sd.index_of(a, q) for q, a in enumerate(x.values)]
    s = GroupHom(Q, sd.group, images)
    if not np.array_equal(sd.quot.map[s.map], np.arange(Q.order)):
        raise GroupError("not a section")  # pragma: no cover - forced by construction
    return s


def section_to_cocycle(section: GroupHom, sd: SemidirectProduct) -> Cocycle:
    """``x(q) = s(q) q^-1``, read off the ``A`` coordinate of ``s(q)``."""
    Q = sd.action.actor
    if section.source is not Q or section.target is not sd.group:
        raise GroupError("section must be a map Q -> A ⋊ Q")
    if not np.array_equal(sd.quot.map[section.map], np.arange(Q.order)):
        raise GroupError("map is not a section of the quotient")
    G = sd.group
    values = []
    for q in range(Q.order):
        y = G.table[section(q)][G.inv_list[sd.index_of(0, q)]]
        a, one = sd.components(y)
        assert one == 0
        values.append(a)
    out = Cocycle(sd.action, tuple(values))
    out.verify()
    return out


def cohomologous(x: Cocycle, y: Cocycle) -> bool:
    """Whether ``y(q) = a^-1 x(q) act(q, a)`` for some ``a``."""
    if x.action is not y.action:
        raise GroupError("cocycles for different actions")
    return twisting_element(x, y) is not None


def twisting_element(x: Cocycle, y: Cocycle) -> int | None:
    A, act = x.action.space, x.action.act
    xs = np.array(x.values)
    ys = np.array(y.values)
    qs = np.arange(len(xs))
    for a in range(A.order):
        if np.array_equal(A.mul[A.mul[A.inv[a], xs], act[qs, a]], ys):
            return a
    return None


def cohomology_classes(cocycles: list[Cocycle]) -> list[list[Cocycle]]:
    classes: list[list[Cocycle]] = []
    for z in cocycles:
        for cls in classes:
            if cohomologous(cls[0], z):
                cls.append(z)
                break
        else:
            classes.append([z])
    return classes


def restrict_cocycle(x: Cocycle, sub: Subgroup, sub_action: GroupAction | None = None) -> Cocycle:
    if sub_action is None:
        sub_action = x.action.restrict(sub)
    return Cocycle(sub_action, tuple(x.values[m] for m in sub.members))


@dataclass
class RestrictionReport:
    surjective: bool
    witness: object  # unextendable sub-cocycle, or {sub-cocycle values: extension values}
    count_full: int
    count_sub: int
    classes_full: int | None = None
    classes_sub: int | None = None


def restriction_surjective(action: GroupAction, sub: Subgroup, level: str = "cocycle") -> RestrictionReport:
    """Is every cocycle of ``sub`` on ``A`` the restriction of one of the actor?

    ``level="class"`` asks the same up to cohomology: every class of ``sub``
    must contain a restricted cocycle.
    """
    if sub.parent is not action.actor:
        raise GroupError("subgroup of a different group")
    if level not in ("cocycle", "class"):
        raise GroupError(f"unknown level {level!r}")
    sub_action = action.restrict(sub)
    full = list(enumerate_cocycles(action))
    local = list(enumerate_cocycles(sub_action))
    extension = {}
    for z in full:
        r = restrict_cocycle(z, sub, sub_action)
        extension.setdefault(r.values, z.values)
    report = RestrictionReport(True, None, len(full), len(local))
    if level == "cocycle":
        for c in local:
            if c.values not in extension:
                report.surjective = False
                report.witness = c
                return report
        report.witness = {c.values: extension[c.values] for c in local}
        return report
    restricted = [Cocycle(sub_action, v) for v in extension]
    classes = cohomology_classes(local)
    report.classes_sub = len(classes)
    report.classes_full = len(cohomology_classes(full))
    hit = {}
    for cls in classes:
        rep = next((r for r in restricted if any(r == c for c in cls)), None)
        if rep is None:
            report.surjective = False
            report.witness = cls[0]
            return report
        hit[cls[0].values] = extension[rep.values]
    report.witness = hit
    return report
