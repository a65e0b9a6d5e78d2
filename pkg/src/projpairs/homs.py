"""Group homomorphisms and the constrained homomorphism search."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .groups import FiniteGroup, GroupError, Subgroup


class GroupHom:
    """A homomorphism stored as a total element map ``source -> target``."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images, *, check: bool = True):
        m = np.array(images, dtype=np.int64)
        if m.shape != (source.order,):
            raise GroupError(f"map must have {source.order} entries, got shape {m.shape}")
        m.setflags(write=False)
        self.source = source
        self.target = target
        self.map = m
        if check:
            self.verify()

    def verify(self) -> None:
        m, t = self.map, self.target
        if m.min() < 0 or m.max() >= t.order:
            raise GroupError("image index out of range")
        if m[0] != 0:
            raise GroupError("identity is not mapped to the identity")
        # checking x*g for generators g is enough: every element is a positive word
        for g in self.source.generators:
            if not np.array_equal(m[self.source.mul[:, g]], t.mul[m, m[g]]):
                raise GroupError("map is not a homomorphism")

    @classmethod
    def from_generator_images(cls, source: FiniteGroup, target: FiniteGroup,
                              images: Sequence[int]) -> "GroupHom":
        """Extend generator images along the source's spanning tree, then verify."""
        if len(images) != len(source.generators):
            raise GroupError(f"expected {len(source.generators)} generator images, got {len(images)}")
        for y in images:
            if not 0 <= int(y) < target.order:
                raise GroupError(f"image {y} out of range")
        order, parent, gen_of = source._tree
        m = [0] * source.order
        tab = target.table
        for x in order[1:]:
            m[x] = tab[m[parent[x]]][int(images[gen_of[x]])]
        return cls(source, target, m)

    def __call__(self, x: int) -> int:
        return int(self.map[x])

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupHom) and other.source is self.source
                and other.target is self.target and np.array_equal(other.map, self.map))

    def __hash__(self) -> int:
        return hash((id(self.source), id(self.target), self.map.tobytes()))

    def __repr__(self) -> str:
        return f"GroupHom({self.source!r} -> {self.target!r})"

    @property
    def gen_images(self) -> list[int]:
        return [int(self.map[g]) for g in self.source.generators]

    @cached_property
    def kernel(self) -> Subgroup:
        return Subgroup(self.source, tuple(np.nonzero(self.map == 0)[0].tolist()))

    @cached_property
    def image(self) -> Subgroup:
        return Subgroup(self.target, tuple(np.unique(self.map).tolist()))

    @property
    def is_surjective(self) -> bool:
        return self.image.order == self.target.order

    @property
    def is_injective(self) -> bool:
        return self.kernel.order == 1

    def image_of(self, sub: Subgroup) -> Subgroup:
        return Subgroup(self.target, tuple(np.unique(self.map[sub.array]).tolist()))

    def preimage(self, sub: Subgroup) -> Subgroup:
        return Subgroup(self.source, tuple(np.nonzero(sub.mask[self.map])[0].tolist()))

    def restrict(self, sub: Subgroup) -> "GroupHom":
        """Restriction to ``sub`` (as ``sub.group -> target``)."""
        if sub.parent is not self.source:
            raise GroupError("restriction to a subgroup of a different group")
        return GroupHom(sub.group, self.target, self.map[sub.array], check=False)

    def corestrict(self, sub: Subgroup) -> "GroupHom":
        """The same map viewed as ``source -> sub.group``."""
        if sub.parent is not self.target:
            raise GroupError("corestriction to a subgroup of a different group")
        loc = sub.local_index[self.map]
        if np.any(loc < 0):
            raise GroupError("image not contained in the subgroup")
        return GroupHom(self.source, sub.group, loc, check=False)

    def then(self, after: "GroupHom") -> "GroupHom":
        """``after o self``."""
        return compose(after, self)


def compose(after: GroupHom, before: GroupHom) -> GroupHom:
    if before.target is not after.source:
        raise GroupError("cannot compose: target/source mismatch")
    return GroupHom(before.source, after.target, after.map[before.map], check=False)


def identity_hom(group: FiniteGroup) -> GroupHom:
    return GroupHom(group, group, np.arange(group.order), check=False)


def trivial_hom(source: FiniteGroup, target: FiniteGroup) -> GroupHom:
    return GroupHom(source, target, np.zeros(source.order, dtype=np.int64), check=False)


def inclusion(sub: Subgroup) -> GroupHom:
    return GroupHom(sub.group, sub.parent, sub.array, check=False)


def quotient(group: FiniteGroup, normal: Subgroup, *, name: str = "") -> tuple[FiniteGroup, GroupHom]:
    """``group/normal`` with cosets numbered by their least element."""
    if normal.parent is not group:
        raise GroupError("normal subgroup of a different group")
    n = group.order
    label = np.full(n, -1, dtype=np.int64)
    reps = []
    for x in range(n):
        if label[x] < 0:
            label[group.mul[x, normal.array]] = len(reps)
            reps.append(x)
    reps = np.array(reps, dtype=np.int64)
    table = label[group.mul[np.ix_(reps, reps)]]
    # well-definedness check doubles as a normality check
    for g in group.generators:
        if not np.array_equal(label[group.mul[:, g]], table[label, label[g]]):
            raise GroupError("subgroup is not normal")
    gens = list(dict.fromkeys(int(label[g]) for g in group.generators if label[g] != 0))
    q = FiniteGroup(table, gens, name=name or (f"{group.name}/N" if group.name else ""),
                    meta={"kind": "quotient"}, validate=False)
    return q, GroupHom(group, q, label, check=False)


@dataclass
class HomConstraints:
    """Side conditions for :func:`enumerate_homs`.

    ``commuting = (after, equals)`` demands ``after o theta == equals``;
    ``image_in = (domain, sub)`` demands ``theta(domain) <= sub`` (domain
    ``None`` means the whole source); ``restriction = (sub, hom)`` demands
    ``theta`` agrees with ``hom: sub.group -> target``; ``pin`` lists
    ``(source element, target element)`` pairs.
    """

    commuting: tuple[GroupHom, GroupHom] | None = None
    image_in: tuple[Subgroup | None, Subgroup] | None = None
    restriction: tuple[Subgroup, GroupHom] | None = None
    pin: Sequence[tuple[int, int]] = field(default_factory=tuple)

    def check_compatible(self, source: FiniteGroup, target: FiniteGroup) -> None:
        if self.commuting is not None:
            after, equals = self.commuting
            if after.source is not target or equals.source is not source:
                raise GroupError("commuting constraint does not match search source/target")
            if after.target is not equals.target:
                raise GroupError("commuting constraint maps into different groups")
        if self.image_in is not None:
            dom, sub = self.image_in
            if (dom is not None and dom.parent is not source) or sub.parent is not target:
                raise GroupError("image_in constraint does not match search source/target")
        if self.restriction is not None:
            sub, hom = self.restriction
            if sub.parent is not source or hom.source is not sub.group or hom.target is not target:
                raise GroupError("restriction constraint does not match search source/target")
        for x, y in self.pin:
            if not (0 <= x < source.order and 0 <= y < target.order):
                raise GroupError(f"pin ({x}, {y}) out of range")


class _Compiled:
    """Per-element admissibility, flattened to plain lists for the search loop."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, c: HomConstraints | None):
        ns = source.order
        self.ok = True
        self.fixed = [-1] * ns
        self.fiber_of = None
        self.after = None
        self.dom = None
        self.allowed_target = None
        if c is None:
            return
        c.check_compatible(source, target)
        if c.commuting is not None:
            after, equals = c.commuting
            self.after = after.map.tolist()
            self.fiber_of = equals.map.tolist()
        if c.image_in is not None:
            dom, sub = c.image_in
            self.dom = [True] * ns if dom is None else dom.mask.tolist()
            self.allowed_target = sub.mask.tolist()
        fixes = []
        if c.restriction is not None:
            sub, hom = c.restriction
            fixes.extend(zip(sub.members, hom.map.tolist()))
        fixes.extend(c.pin)
        for x, y in fixes:
            x, y = int(x), int(y)
            if self.fixed[x] not in (-1, y):
                self.ok = False
            self.fixed[x] = y

    def admissible(self, x: int, y: int) -> bool:
        f = self.fixed[x]
        if f >= 0 and f != y:
            return False
        if self.after is not None and self.after[y] != self.fiber_of[x]:
            return False
        if self.dom is not None and self.dom[x] and not self.allowed_target[y]:
            return False
        return True


def enumerate_homs(source: FiniteGroup, target: FiniteGroup,
                   constraints: HomConstraints | None = None,
                   surjective_only: bool = False) -> Iterator[GroupHom]:
    """Yield every homomorphism ``source -> target`` meeting the constraints.

    Backtracks over images of ``source.generators`` in increasing target
    index, so the output is lexicographic in the generator-image tuple. Each
    partial assignment is propagated to the subgroup it generates; a clash
    between two derivations of the same element, or an inadmissible image,
    prunes the branch.
    """
    comp = _Compiled(source, target, constraints)
    if not comp.ok:
        return
    smul, tmul = source.table, target.table
    sord = source.element_orders.tolist()
    tord = target.element_orders.tolist()
    gens = list(source.generators)
    ns = source.order
    phi = [-1] * ns
    if not comp.admissible(0, 0):
        return
    phi[0] = 0
    known = [0]

    cands = []
    for g in gens:
        cands.append([y for y in range(target.order)
                      if sord[g] % tord[y] == 0 and comp.admissible(g, y)])

    def extend(k: int, pg: int) -> list[int] | None:
        # assign gens[k] -> pg and propagate through the generated subgroup
        g = gens[k]
        active = gens[:k + 1]
        added: list[int] = []
        ok = True
        for x in list(known):
            y = smul[x][g]
            img = tmul[phi[x]][pg]
            cur = phi[y]
            if cur == -1:
                if not comp.admissible(y, img):
                    ok = False
                    break
                phi[y] = img
                added.append(y)
            elif cur != img:
                ok = False
                break
        i = 0
        while ok and i < len(added):
            x = added[i]
            i += 1
            px = phi[x]
            row = smul[x]
            for h in active:
                y = row[h]
                img = tmul[px][phi[h]]
                cur = phi[y]
                if cur == -1:
                    if not comp.admissible(y, img):
                        ok = False
                        break
                    phi[y] = img
                    added.append(y)
                elif cur != img:
                    ok = False
                    break
        if not ok:
            for y in added:
                phi[y] = -1
            return None
        return added

    def search(k: int) -> Iterator[GroupHom]:
        if k == len(gens):
            if surjective_only and len(set(phi)) != target.order:
                return
            yield GroupHom(source, target, list(phi), check=False)
            return
        g = gens[k]
        if phi[g] != -1:
            # already determined by earlier generators
            yield from search(k + 1)
            return
        for y in cands[k]:
            added = extend(k, y)
            if added is None:
                continue
            known.extend(added)
            yield from search(k + 1)
            del known[len(known) - len(added):]
            for x in added:
                phi[x] = -1

    yield from search(0)


def first_hom(source: FiniteGroup, target: FiniteGroup,
              constraints: HomConstraints | None = None,
              surjective_only: bool = False) -> GroupHom | None:
    return next(enumerate_homs(source, target, constraints, surjective_only), None)


def sections_of(epi: GroupHom) -> Iterator[GroupHom]:
    """All homomorphisms ``s`` with ``epi o s == id``."""
    if not epi.is_surjective:
        raise GroupError("sections requested for a non-surjective map")
    return enumerate_homs(epi.target, epi.source,
                          HomConstraints(commuting=(epi, identity_hom(epi.target))))
