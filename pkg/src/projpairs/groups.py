"""Finite groups stored as dense multiplication tables.

Elements are the integers ``0 .. order-1`` and ``0`` is always the identity.
Permutation groups are enumerated breadth-first over generator words, so the
element numbering is reproducible across runs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

DEFAULT_ORDER_CAP = 5000
_order_cap = DEFAULT_ORDER_CAP


class GroupError(ValueError):
    """Invalid group data or a violated precondition."""


class CapExceeded(GroupError):
    """A construction would exceed the configured order cap."""


def order_cap() -> int:
    return _order_cap


def set_order_cap(cap: int | None) -> None:
    """Set the global order cap; ``None`` restores the default."""
    global _order_cap
    _order_cap = DEFAULT_ORDER_CAP if cap is None else int(cap)


def check_cap(order: int, what: str = "group") -> None:
    if order > _order_cap:
        raise CapExceeded(f"{what} would have order {order}, above the cap {_order_cap}")


class FiniteGroup:
    """A finite group given by its full multiplication table.

    ``mul[a, b]`` is the index of ``a*b``. ``generators`` must generate the
    whole group (it is empty only for the trivial group).
    """

    def __init__(self, mul, generators: Iterable[int], *, name: str = "",
                 labels: Sequence[str] | None = None, meta: dict | None = None,
                 validate: bool = True):
        mul = np.array(mul, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square matrix")
        n = mul.shape[0]
        check_cap(n, name or "table group")
        mul.setflags(write=False)
        self.mul = mul
        self.order = n
        self.generators = tuple(int(g) for g in generators)
        self.name = name
        self.labels = list(labels) if labels is not None else None
        self.meta = dict(meta or {})
        if validate:
            self._validate()
        rows, cols = np.nonzero(mul == 0)
        inv = np.empty(n, dtype=np.int64)
        inv[rows] = cols
        inv.setflags(write=False)
        self.inv = inv

    def _validate(self) -> None:
        self._validate_latin()
        mul, n = self.mul, self.order
        for g in self.generators:
            if not 0 <= g < n:
                raise GroupError(f"generator {g} out of range")
        if len(self._bfs_order) != n:
            raise GroupError("generators do not generate the whole table")
        # Light's test: checking the generators suffices once they generate.
        for g in self.generators:
            if not np.array_equal(mul[mul[:, g], :], mul[:, mul[g, :]]):
                raise GroupError("multiplication table is not associative")

    def _validate_latin(self) -> None:
        mul, n = self.mul, self.order
        if mul.min() < 0 or mul.max() >= n:
            raise GroupError("table entries out of range")
        ar = np.arange(n)
        if not (np.array_equal(mul[0], ar) and np.array_equal(mul[:, 0], ar)):
            raise GroupError("element 0 is not a two-sided identity")
        if not (np.all(np.sort(mul, axis=1) == ar) and np.all(np.sort(mul, axis=0) == ar[:, None])):
            raise GroupError("table is not a Latin square (missing inverses)")

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    @cached_property
    def table(self) -> list[list[int]]:
        """The table as nested lists (faster than numpy for scalar lookups)."""
        return self.mul.tolist()

    @cached_property
    def inv_list(self) -> list[int]:
        return self.inv.tolist()

    @cached_property
    def _tree(self) -> tuple[list[int], list[int], list[int]]:
        # breadth-first spanning tree: element = parent * generators[gen_of]
        n = self.order
        parent = [-1] * n
        gen_of = [-1] * n
        seen = [False] * n
        seen[0] = True
        order = [0]
        queue = deque([0])
        tab = self.table
        while queue:
            x = queue.popleft()
            row = tab[x]
            for k, g in enumerate(self.generators):
                y = row[g]
                if not seen[y]:
                    seen[y] = True
                    parent[y] = x
                    gen_of[y] = k
                    order.append(y)
                    queue.append(y)
        return order, parent, gen_of

    @property
    def _bfs_order(self) -> list[int]:
        return self._tree[0]

    def word_of(self, x: int) -> list[int]:
        """A shortest positive word (0-based generator positions) for ``x``."""
        _, parent, gen_of = self._tree
        word = []
        while x != 0:
            word.append(gen_of[x])
            x = parent[x]
        return word[::-1]

    def evaluate(self, word: Iterable[int]) -> int:
        """Evaluate a word of 0-based generator positions; ``~k`` is the inverse of generator k."""
        x = 0
        tab = self.table
        for k in word:
            g = self.generators[k] if k >= 0 else self.inv_list[self.generators[~k]]
            x = tab[x][g]
        return x

    def power(self, x: int, k: int) -> int:
        tab = self.table
        y = 0
        for _ in range(k):
            y = tab[y][x]
        return y

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        orders = np.zeros(n, dtype=np.int64)
        cur = np.arange(n)
        k = 1
        ar = np.arange(n)
        while np.any(orders == 0):
            hit = (cur == 0) & (orders == 0)
            orders[hit] = k
            cur = self.mul[cur, ar]
            k += 1
        orders.setflags(write=False)
        return orders

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.element_orders))

    def fingerprint(self) -> tuple[int, bool, int]:
        return (self.order, self.is_abelian, self.exponent)

    def label(self, x: int) -> str:
        if self.labels is not None:
            return self.labels[x]
        return str(x)

    def conjugate(self, x: int, by: int) -> int:
        """``by^-1 * x * by``."""
        tab = self.table
        return tab[tab[self.inv_list[by]][x]][by]

    def conjugate_set(self, members: np.ndarray, by: int) -> np.ndarray:
        return self.mul[self.mul[self.inv[by], members], by]

    @cached_property
    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(range(self.order)), self.generators)

    @cached_property
    def trivial_subgroup(self) -> "Subgroup":
        return Subgroup(self, (0,), ())


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of ``parent`` given by its sorted member indices."""

    parent: FiniteGroup
    members: tuple[int, ...]
    gens: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.members or self.members[0] != 0:
            raise GroupError("subgroup must contain the identity")

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subgroup) and other.parent is self.parent
                and other.members == self.members)

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent!r})"

    @property
    def order(self) -> int:
        return len(self.members)

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.members)] = True
        m.setflags(write=False)
        return m

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.members, dtype=np.int64)

    @cached_property
    def local_index(self) -> np.ndarray:
        """Ambient index -> position in ``members`` (``-1`` outside)."""
        loc = np.full(self.parent.order, -1, dtype=np.int64)
        loc[self.array] = np.arange(self.order)
        return loc

    @cached_property
    def group(self) -> FiniteGroup:
        """The subgroup as a standalone group; element i is ``members[i]``.

        The whole group is returned as the parent object itself.
        """
        if self.order == self.parent.order:
            return self.parent
        m = self.array
        table = self.local_index[self.parent.mul[np.ix_(m, m)]]
        if self.gens is not None:
            gens = [int(self.local_index[g]) for g in self.gens if g != 0]
        else:
            gens = _greedy_generators(table)
        name = f"sub({self.parent.name})" if self.parent.name else ""
        return FiniteGroup(table, gens, name=name, validate=False)

    def is_subset(self, other: "Subgroup") -> bool:
        return bool(np.all(other.mask[self.array]))

    def is_normal(self) -> bool:
        return is_normal(self.parent, self)


@dataclass(frozen=True)
class FinitePair:
    """An ambient group together with a distinguished subgroup."""

    ambient: FiniteGroup
    distinguished: Subgroup

    def __post_init__(self):
        if self.distinguished.parent is not self.ambient:
            raise GroupError("distinguished subgroup does not live in the ambient group")


def _closure_mask(tab: list[list[int]], n: int, seed: Iterable[int]) -> list[bool]:
    seed = sorted(set(int(s) for s in seed if s != 0))
    inside = [False] * n
    inside[0] = True
    queue = [0]
    for x in queue:
        row = tab[x]
        for s in seed:
            y = row[s]
            if not inside[y]:
                inside[y] = True
                queue.append(y)
    return inside


def _greedy_generators(table) -> list[int]:
    """A small generating set: scan elements by decreasing order."""
    tab = table.tolist() if isinstance(table, np.ndarray) else table
    n = len(tab)
    if n == 1:
        return []
    g = FiniteGroup(table, range(n), validate=False)
    g._validate_latin()
    ords = g.element_orders
    candidates = sorted(range(1, n), key=lambda x: (-int(ords[x]), x))
    gens: list[int] = []
    inside = [False] * n
    inside[0] = True
    size = 1
    for x in candidates:
        if inside[x]:
            continue
        gens.append(x)
        inside = _closure_mask(tab, n, gens)
        size = sum(inside)
        if size == n:
            break
    return gens


def subgroup_closure(group: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    """Smallest subgroup of ``group`` containing ``seed``."""
    seed = [int(s) for s in seed]
    for s in seed:
        if not 0 <= s < group.order:
            raise GroupError(f"element {s} out of range")
    inside = _closure_mask(group.table, group.order, seed)
    members = tuple(i for i, b in enumerate(inside) if b)
    gens = tuple(dict.fromkeys(s for s in seed if s != 0))
    return Subgroup(group, members, gens)


def subgroup_from_members(group: FiniteGroup, members: Iterable[int], check: bool = True) -> Subgroup:
    members = tuple(sorted(set(int(m) for m in members)))
    sub = Subgroup(group, members)
    if check:
        m = sub.array
        prod = group.mul[np.ix_(m, m)]
        if not (np.all(sub.mask[prod]) and np.all(sub.mask[group.inv[m]])):
            raise GroupError("member set is not closed under the group operations")
    return sub


def is_normal(group: FiniteGroup, sub: Subgroup) -> bool:
    m = sub.array
    for g in group.generators:
        if not np.all(sub.mask[group.conjugate_set(m, g)]):
            return False
    return True


def normal_closure(group: FiniteGroup, seed: Iterable[int]) -> Subgroup:
    seed = set(int(s) for s in seed)
    while True:
        sub = subgroup_closure(group, seed)
        grown = set(sub.members)
        for g in group.generators:
            grown.update(group.conjugate_set(sub.array, g).tolist())
        if len(grown) == sub.order:
            return sub
        seed = grown


def normal_core(group: FiniteGroup, sub: Subgroup) -> Subgroup:
    """Intersection of all conjugates of ``sub``; the largest normal subgroup inside it."""
    mask = sub.mask.copy()
    for x in range(group.order):
        conj = np.zeros(group.order, dtype=bool)
        conj[group.conjugate_set(sub.array, x)] = True
        mask &= conj
    return Subgroup(group, tuple(np.nonzero(mask)[0].tolist()))


def conjugacy_classes(group: FiniteGroup) -> list[list[int]]:
    """Conjugacy classes, ordered by least element."""
    n = group.order
    seen = np.zeros(n, dtype=bool)
    classes = []
    mul, inv = group.mul, group.inv
    for x in range(n):
        if seen[x]:
            continue
        cls = np.unique(mul[mul[inv, x], np.arange(n)])
        seen[cls] = True
        classes.append(cls.tolist())
    return classes


def _join_normal(group: FiniteGroup, a: Subgroup, b: Subgroup) -> Subgroup:
    prod = np.unique(group.mul[np.ix_(a.array, b.array)])
    return Subgroup(group, tuple(prod.tolist()))


def normal_subgroups(group: FiniteGroup) -> list[Subgroup]:
    """All normal subgroups, as joins of normal closures of conjugacy classes.

    Sorted by (order, members).
    """
    cached = group.__dict__.get("_normal_subgroups")
    if cached is not None:
        return list(cached)
    atoms = []
    seen_atoms = set()
    for cls in conjugacy_classes(group):
        if cls == [0]:
            continue
        nc = normal_closure(group, cls)
        if nc.members not in seen_atoms:
            seen_atoms.add(nc.members)
            atoms.append(nc)
    found = {group.trivial_subgroup.members: group.trivial_subgroup}
    frontier = [group.trivial_subgroup]
    while frontier:
        nxt = []
        for sub in frontier:
            for atom in atoms:
                if atom.is_subset(sub):
                    continue
                j = _join_normal(group, sub, atom)
                if j.members not in found:
                    found[j.members] = j
                    nxt.append(j)
        frontier = nxt
    result = sorted(found.values(), key=lambda s: (s.order, s.members))
    group.__dict__["_normal_subgroups"] = result
    return list(result)


def is_simple(group: FiniteGroup) -> bool:
    return group.order > 1 and len(normal_subgroups(group)) == 2


def derived_subgroup(group: FiniteGroup) -> Subgroup:
    mul, inv = group.mul, group.inv
    a = np.arange(group.order)
    comm = mul[mul[inv[a][:, None], inv[a][None, :]], mul[a[:, None], a[None, :]]]
    return normal_closure(group, np.unique(comm).tolist())


def intersection(a: Subgroup, b: Subgroup) -> Subgroup:
    if a.parent is not b.parent:
        raise GroupError("subgroups of different groups")
    return Subgroup(a.parent, tuple(np.nonzero(a.mask & b.mask)[0].tolist()))


def product_set(a: Subgroup, b: Subgroup) -> np.ndarray:
    """Sorted array of the set ``a*b``."""
    return np.unique(a.parent.mul[np.ix_(a.array, b.array)])


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def sylow_subgroup(group: FiniteGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown one factor of p at a time.

    At each step the first element (in element order) that normalizes the
    current p-subgroup P, lies outside it, and has its p-th power in P is
    adjoined.
    """
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    target = 1
    n = group.order
    while n % p == 0:
        n //= p
        target *= p
    sub = group.trivial_subgroup
    while sub.order < target:
        m = sub.array
        for g in range(group.order):
            if sub.mask[g]:
                continue
            if not sub.mask[group.power(g, p)]:
                continue
            if np.all(sub.mask[group.conjugate_set(m, g)]):
                gens = (sub.gens or ()) + (g,)
                sub = subgroup_closure(group, list(sub.members) + [g])
                sub = Subgroup(group, sub.members, gens)
                break
        else:  # pragma: no cover - impossible by Sylow theory
            raise GroupError("failed to extend p-subgroup")
    return sub


def from_permutations(generators: Sequence[Sequence[int]], degree: int, *, name: str = "",
                      meta: dict | None = None) -> FiniteGroup:
    """Enumerate the group generated by permutations given as image lists.

    The product ``x*y`` applies ``x`` first, then ``y``.
    """
    perms = []
    for g in generators:
        arr = tuple(int(v) for v in g)
        if len(arr) != degree or sorted(arr) != list(range(degree)):
            raise GroupError(f"not a permutation of {degree} points: {list(g)}")
        perms.append(arr)
    ident = tuple(range(degree))
    index = {ident: 0}
    elements = [ident]
    right: list[list[int]] = [[] for _ in perms]
    parent = [-1]
    gen_of = [-1]
    queue = 0
    cap = order_cap()
    while queue < len(elements):
        x = elements[queue]
        for k, g in enumerate(perms):
            y = tuple(g[v] for v in x)
            j = index.get(y)
            if j is None:
                j = len(elements)
                if j >= cap:
                    raise CapExceeded(f"{name or 'permutation group'} exceeds the order cap {cap}")
                index[y] = j
                elements.append(y)
                parent.append(queue)
                gen_of.append(k)
            right[k].append(j)
        queue += 1
    n = len(elements)
    right_arr = [np.array(r, dtype=np.int64) for r in right]
    mul = np.empty((n, n), dtype=np.int64)
    mul[:, 0] = np.arange(n)
    for j in range(1, n):
        mul[:, j] = right_arr[gen_of[j]][mul[:, parent[j]]]
    listed = [index[p] for p in perms]
    gens = list(dict.fromkeys(g for g in listed if g != 0))
    labels = [_cycle_string(e) for e in elements]
    meta = dict(meta or {})
    meta.setdefault("kind", "permutation")
    meta.setdefault("degree", degree)
    meta["points"] = [list(e) for e in elements]
    meta["generator_elements"] = listed
    return FiniteGroup(mul, gens, name=name, labels=labels, meta=meta, validate=False)


def cycles_to_images(cycles: Sequence[Sequence[int]], degree: int) -> list[int]:
    img = list(range(degree))
    seen = set()
    for cyc in cycles:
        for a in cyc:
            if not 0 <= a < degree:
                raise GroupError(f"point {a} outside 0..{degree - 1}")
            if a in seen:
                raise GroupError(f"point {a} repeated in cycle list {cycles}")
            seen.add(a)
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]] if cyc else []):
            img[a] = b
    return img


def _cycle_string(perm: Sequence[int]) -> str:
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc = [start]
        seen.add(start)
        x = perm[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = perm[x]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def build_group(spec) -> FiniteGroup:
    """Build a group from a spec dict.

    ``{"kind": "permutation", "degree": d, "generators": [cycle lists]}`` or
    ``{"kind": "table", "table": matrix}``.
    """
    kind = spec.get("kind")
    name = spec.get("name", "")
    if kind == "permutation":
        degree = int(spec["degree"])
        gens = [cycles_to_images(c, degree) for c in spec.get("generators", [])]
        return from_permutations(gens, degree, name=name)
    if kind == "table":
        table = spec["table"]
        rows = [list(r) for r in table]
        if any(len(r) != len(rows) for r in rows):
            raise GroupError("table is not square")
        gens = spec.get("generators")
        if gens is None:
            gens = _greedy_generators(np.array(rows, dtype=np.int64))
        listed = [int(g) for g in gens]
        if any(not 0 <= g < len(rows) for g in listed):
            raise GroupError("generator index out of range")
        meta = dict(spec.get("meta") or {})
        meta["generator_elements"] = listed
        return FiniteGroup(rows, dict.fromkeys(g for g in listed if g != 0), name=name, meta=meta)
    raise GroupError(f"unknown group kind {kind!r}")
