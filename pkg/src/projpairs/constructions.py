"""Product constructions: direct, fiber, semidirect and wreath products,
fiber powers, and lifting through a cartesian square.

Product elements use a mixed-radix index over component indices, so the
identity (all components 0) is always element 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .groups import (FiniteGroup, GroupError, Subgroup, _greedy_generators, check_cap)
from .homs import GroupHom, identity_hom


@dataclass(frozen=True, eq=False)
class DirectProduct:
    group: FiniteGroup
    inj_left: GroupHom
    inj_right: GroupHom
    proj_left: GroupHom
    proj_right: GroupHom


def direct_product(G: FiniteGroup, H: FiniteGroup) -> DirectProduct:
    nG, nH = G.order, H.order
    check_cap(nG * nH, "direct product")
    idx = np.arange(nG * nH)
    gi, hi = idx // nH, idx % nH
    table = G.mul[gi[:, None], gi[None, :]] * nH + H.mul[hi[:, None], hi[None, :]]
    gens = [g * nH for g in G.generators] + list(H.generators)
    name = f"{G.name}x{H.name}" if G.name and H.name else ""
    P = FiniteGroup(table, gens, name=name, validate=False,
                    meta={"construction": "direct_product", "operands": [G.name, H.name]})
    return DirectProduct(
        P,
        GroupHom(G, P, np.arange(nG) * nH, check=False),
        GroupHom(H, P, np.arange(nH), check=False),
        GroupHom(P, G, gi, check=False),
        GroupHom(P, H, hi, check=False),
    )


@dataclass(frozen=True, eq=False)
class FiberProduct:
    """``total = {(h, x) : left_map(h) == right_map(x)}``.

    ``pairs[i]`` holds the two components of element ``i``.
    """

    total: FiniteGroup
    left_proj: GroupHom
    right_proj: GroupHom
    left_map: GroupHom
    right_map: GroupHom
    pairs: np.ndarray

    @property
    def over(self) -> FiniteGroup:
        return self.left_map.target

    @cached_property
    def _lookup(self) -> np.ndarray:
        look = np.full((self.left_map.source.order, self.right_map.source.order), -1, dtype=np.int64)
        look[self.pairs[:, 0], self.pairs[:, 1]] = np.arange(self.total.order)
        return look

    def index_of(self, left: int, right: int) -> int:
        """Index of the pair, or -1 when it is not in the fiber product."""
        return int(self._lookup[left, right])

    def subgroup_of_pairs(self, left_sub: Subgroup, right_sub: Subgroup) -> Subgroup:
        """``total ∩ (left_sub x right_sub)``."""
        keep = left_sub.mask[self.pairs[:, 0]] & right_sub.mask[self.pairs[:, 1]]
        return Subgroup(self.total, tuple(np.nonzero(keep)[0].tolist()))


def fiber_product(beta: GroupHom, alpha: GroupHom, *, name: str = "") -> FiberProduct:
    """Pullback of ``beta: H -> A`` and ``alpha: G -> A``."""
    if beta.target is not alpha.target:
        raise GroupError("fiber product of maps with different targets")
    H, G = beta.source, alpha.source
    same = beta.map[:, None] == alpha.map[None, :]
    hs, gs = np.nonzero(same)
    n = len(hs)
    check_cap(n, "fiber product")
    look = np.full((H.order, G.order), -1, dtype=np.int64)
    look[hs, gs] = np.arange(n)
    table = look[H.mul[hs[:, None], hs[None, :]], G.mul[gs[:, None], gs[None, :]]]
    total = FiniteGroup(table, _greedy_generators(table), name=name, validate=False,
                        meta={"construction": "fiber_product", "operands": [H.name, G.name]})
    pairs = np.stack([hs, gs], axis=1)
    pairs.setflags(write=False)
    return FiberProduct(
        total,
        GroupHom(total, H, hs, check=False),
        GroupHom(total, G, gs, check=False),
        beta, alpha, pairs,
    )


class LiftError(GroupError):
    """``fiber_lift`` found an element whose two images do not match over the base."""

    def __init__(self, message: str, witness: int):
        super().__init__(message)
        self.witness = witness


def fiber_lift(theta_bar: GroupHom, mu: GroupHom, square: FiberProduct,
               onto: GroupHom | None = None) -> GroupHom:
    """The unique ``theta`` with ``left_proj o theta = theta_bar`` and
    ``right_proj o theta = mu``.

    ``onto`` optionally identifies ``square.total`` with the group the caller
    actually wants to land in (an isomorphism ``square.total -> H``).
    """
    if theta_bar.target is not square.left_proj.target or mu.target is not square.right_proj.target:
        raise GroupError("maps do not land in the two corners of the square")
    if theta_bar.source is not mu.source:
        raise GroupError("maps have different sources")
    idx = square._lookup[theta_bar.map, mu.map]
    bad = np.nonzero(idx < 0)[0]
    if len(bad):
        lam = int(bad[0])
        raise LiftError(f"element {lam} maps to incompatible corners "
                        f"({int(theta_bar.map[lam])}, {int(mu.map[lam])})", lam)
    theta = GroupHom(mu.source, square.total, idx, check=False)
    if onto is not None:
        theta = theta.then(onto)
    return theta


@dataclass(frozen=True, eq=False)
class GroupAction:
    """``actor`` acting on ``space`` by automorphisms: ``act[q, a]``."""

    actor: FiniteGroup
    space: FiniteGroup
    act: np.ndarray

    def __post_init__(self):
        a = np.array(self.act, dtype=np.int64)
        if a.shape != (self.actor.order, self.space.order):
            raise GroupError("action table has the wrong shape")
        a.setflags(write=False)
        object.__setattr__(self, "act", a)

    def validate(self) -> None:
        Q, A, act = self.actor, self.space, self.act
        if not np.array_equal(act[0], np.arange(A.order)):
            raise GroupError("identity does not act trivially")
        for q in range(Q.order):
            if not np.array_equal(np.sort(act[q]), np.arange(A.order)):
                raise GroupError(f"element {q} does not act by a bijection")
            if not np.array_equal(act[q][A.mul], A.mul[act[q][:, None], act[q][None, :]]):
                raise GroupError(f"element {q} does not act by an automorphism")
        # act(q1 q2, a) = act(q1, act(q2, a)); generators suffice
        for g in Q.generators:
            if not np.array_equal(act[Q.mul[:, g]], act[:, act[g]]):
                raise GroupError("action is not compatible with the actor's multiplication")

    @classmethod
    def from_generator_images(cls, actor: FiniteGroup, space: FiniteGroup,
                              images: Sequence[Sequence[int]], validate: bool = True) -> "GroupAction":
        if len(images) != len(actor.generators):
            raise GroupError("one permutation of the space is needed per actor generator")
        perms = [np.array(p, dtype=np.int64) for p in images]
        for p in perms:
            if p.shape != (space.order,) or not np.array_equal(np.sort(p), np.arange(space.order)):
                raise GroupError("generator image is not a permutation of the space")
        order, parent, gen_of = actor._tree
        act = np.empty((actor.order, space.order), dtype=np.int64)
        act[0] = np.arange(space.order)
        for q in order[1:]:
            act[q] = act[parent[q]][perms[gen_of[q]]]
        out = cls(actor, space, act)
        if validate:
            out.validate()
        return out

    @classmethod
    def trivial(cls, actor: FiniteGroup, space: FiniteGroup) -> "GroupAction":
        return cls(actor, space, np.tile(np.arange(space.order), (actor.order, 1)))

    @classmethod
    def by_conjugation(cls, acting: Subgroup, normal: Subgroup) -> "GroupAction":
        """``q . a = q a q^-1`` for ``q`` in ``acting``, ``a`` in ``normal``."""
        G = acting.parent
        if normal.parent is not G:
            raise GroupError("subgroups of different groups")
        q = acting.array
        conj = G.mul[G.mul[q[:, None], normal.array[None, :]], G.inv[q][:, None]]
        loc = normal.local_index[conj]
        if np.any(loc < 0):
            raise GroupError("acting subgroup does not normalise the space")
        out = cls(acting.group, normal.group, loc)
        out.validate()
        return out

    def restrict(self, sub: Subgroup) -> "GroupAction":
        if sub.parent is not self.actor:
            raise GroupError("restriction to a subgroup of a different group")
        return GroupAction(sub.group, self.space, self.act[sub.array])


@dataclass(frozen=True, eq=False)
class SemidirectProduct:
    """``space ⋊ actor``; element ``(a, q)`` has index ``a * |Q| + q``."""

    group: FiniteGroup
    embed_A: GroupHom
    embed_Q: GroupHom
    quot: GroupHom
    action: GroupAction

    def index_of(self, a: int, q: int) -> int:
        return a * self.action.actor.order + q

    def components(self, x: int) -> tuple[int, int]:
        nQ = self.action.actor.order
        return x // nQ, x % nQ


def semidirect_product(action: GroupAction, *, name: str = "") -> SemidirectProduct:
    """Product rule ``(a, q)(a', q') = (a * act(q, a'), q q')``."""
    A, Q, act = action.space, action.actor, action.act
    nA, nQ = A.order, Q.order
    check_cap(nA * nQ, "semidirect product")
    idx = np.arange(nA * nQ)
    ai, qi = idx // nQ, idx % nQ
    table = A.mul[ai[:, None], act[qi[:, None], ai[None, :]]] * nQ + Q.mul[qi[:, None], qi[None, :]]
    gens = [a * nQ for a in A.generators] + list(Q.generators)
    G = FiniteGroup(table, gens, name=name, validate=False,
                    meta={"construction": "semidirect_product", "operands": [A.name, Q.name]})
    return SemidirectProduct(
        G,
        GroupHom(A, G, np.arange(nA) * nQ, check=False),
        GroupHom(Q, G, np.arange(nQ), check=False),
        GroupHom(G, Q, qi, check=False),
        action,
    )


@dataclass(frozen=True, eq=False)
class WreathProduct:
    """``A ≀ G = A^G ⋊ G`` under the translation action ``(g.f)(x) = f(g^-1 x)``."""

    group: FiniteGroup
    base: FiniteGroup
    base_embed: GroupHom
    top_quot: GroupHom
    coord_embed: GroupHom
    top_embed: GroupHom
    semidirect: SemidirectProduct

    def coordinate_subgroup(self, g: int) -> Subgroup:
        """``A^g``: base functions supported on the single point ``g``."""
        A = self.coord_embed.source
        top = self.top_quot.target
        nA = A.order
        weight = nA ** (top.order - 1 - g)
        members = sorted(self.semidirect.index_of(a * weight, 0) for a in range(nA))
        return Subgroup(self.group, tuple(members))


def direct_power(A: FiniteGroup, m: int) -> tuple[FiniteGroup, np.ndarray]:
    """``A^m`` with coordinate 0 most significant; also returns the coordinate array."""
    nA = A.order
    n = nA ** m
    check_cap(n, "direct power")
    idx = np.arange(n)
    coords = np.stack([(idx // nA ** (m - 1 - i)) % nA for i in range(m)], axis=1) if m else \
        np.zeros((1, 0), dtype=np.int64)
    weights = np.array([nA ** (m - 1 - i) for i in range(m)], dtype=np.int64)
    table = np.zeros((n, n), dtype=np.int64)
    for i in range(m):
        c = coords[:, i]
        table += A.mul[c[:, None], c[None, :]] * weights[i]
    gens = [a * weights[i] for i in range(m) for a in A.generators]
    P = FiniteGroup(table, gens, validate=False)
    return P, coords


def wreath_product(A: FiniteGroup, G: FiniteGroup) -> WreathProduct:
    nA, nG = A.order, G.order
    check_cap(nA ** nG * nG, f"wreath product {A.name}≀{G.name}")
    base, coords = direct_power(A, nG)
    weights = np.array([nA ** (nG - 1 - i) for i in range(nG)], dtype=np.int64)
    act = np.empty((nG, base.order), dtype=np.int64)
    for g in range(nG):
        # (g.f)(x) = f(g^-1 x)
        src = G.mul[G.inv[g], np.arange(nG)]
        act[g] = coords[:, src] @ weights
    action = GroupAction(G, base, act)
    name = f"{A.name}wr{G.name}" if A.name and G.name else ""
    sd = semidirect_product(action, name=name)
    sd.group.meta.update({"construction": "wreath_product", "operands": [A.name, G.name]})
    coord = GroupHom(A, sd.group, np.arange(nA) * weights[0] * nG, check=False)
    return WreathProduct(sd.group, base, sd.embed_A, sd.quot, coord, sd.embed_Q, sd)


@dataclass(frozen=True, eq=False)
class FiberPower:
    """``n``-fold fiber product of ``base: H -> B`` with itself."""

    base: GroupHom
    n: int
    total: FiniteGroup
    projections: list
    beta_hat: GroupHom
    tuples: np.ndarray


def fiber_power(beta: GroupHom, n: int) -> FiberPower:
    if n < 1:
        raise GroupError("fiber power needs n >= 1")
    H, B = beta.source, beta.target
    fibers = [np.nonzero(beta.map == b)[0] for b in range(B.order)]
    size = sum(len(f) ** n for f in fibers)
    check_cap(size, "fiber power")
    if n == 1:
        tuples = np.arange(H.order)[:, None]
    else:
        blocks = []
        for f in fibers:
            if len(f) == 0:
                continue
            grid = np.stack(np.meshgrid(*([f] * n), indexing="ij"), axis=-1).reshape(-1, n)
            blocks.append(grid)
        tuples = np.concatenate(blocks)
        order = np.lexsort(tuples.T[::-1])
        tuples = tuples[order]
    nH = H.order
    if nH ** n >= 2 ** 62:
        raise GroupError("fiber power index space too large")
    weights = np.array([nH ** (n - 1 - i) for i in range(n)], dtype=np.int64)
    codes = tuples @ weights
    table_codes = np.zeros((size, size), dtype=np.int64)
    for i in range(n):
        c = tuples[:, i]
        table_codes += H.mul[c[:, None], c[None, :]] * weights[i]
    table = np.searchsorted(codes, table_codes)
    if n == 1:
        gens = list(H.generators)
    else:
        gens = _greedy_generators(table)
    total = FiniteGroup(table, gens, validate=False,
                        meta={"construction": "fiber_power", "n": n, "operands": [H.name, B.name]})
    tuples.setflags(write=False)
    projections = [GroupHom(total, H, tuples[:, i], check=False) for i in range(n)]
    beta_hat = projections[0].then(beta)
    return FiberPower(beta, n, total, projections, beta_hat, tuples)


def identity_square(group: FiniteGroup) -> FiberProduct:
    """The trivial cartesian square ``group x_group group`` (the diagonal)."""
    ident = identity_hom(group)
    return fiber_product(ident, ident)
