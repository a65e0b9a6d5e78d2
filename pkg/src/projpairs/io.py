"""JSON file formats.

Every file carries ``"format_version": 1``. A group reference is a catalog
name, a path (relative to the referring file), or an inline group object.
Elements are written either as an integer index or as a word: a list of
1-based positions in the group's listed generators, negative for inverses.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from . import catalog
from .constructions import GroupAction
from .groups import (CapExceeded, FiniteGroup, check_cap, FinitePair, GroupError, Subgroup, build_group,
                     subgroup_closure)
from .homs import GroupHom, HomConstraints, first_hom

FORMAT_VERSION = 1


class InputError(GroupError):
    """Malformed input; ``path`` points into the offending file."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def _at(path: str, key) -> str:
    return f"{path}[{key}]" if isinstance(key, int) else f"{path}.{key}"


def _get(obj: dict, key: str, path: str):
    if not isinstance(obj, dict):
        raise InputError(path, "expected an object")
    if key not in obj:
        raise InputError(_at(path, key), "missing field")
    return obj[key]


def _int(v, path: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(path, f"expected an integer, got {v!r}")
    return v


def _list(v, path: str) -> list:
    if not isinstance(v, list):
        raise InputError(path, f"expected a list, got {type(v).__name__}")
    return v


@dataclass
class Loader:
    """Resolves group references, sharing one object per file or catalog name."""

    base: Path = Path(".")
    _groups: dict = field(default_factory=dict)

    def read(self, path: str | Path) -> dict:
        p = Path(path)
        try:
            data = json.loads(p.read_text())
        except FileNotFoundError:
            raise InputError(str(p), "file not found") from None
        except json.JSONDecodeError as exc:
            raise InputError(str(p), f"invalid JSON: {exc.msg} at line {exc.lineno}") from None
        self.base = p.parent
        check_version(data, "$")
        return data

    def group(self, ref, path: str) -> FiniteGroup:
        if isinstance(ref, dict):
            key = ("inline", json.dumps(ref, sort_keys=True))
            if key not in self._groups:
                self._groups[key] = _build(ref, path)
            return self._groups[key]
        if not isinstance(ref, str):
            raise InputError(path, "group reference must be a name, a path or an object")
        if catalog.is_catalog_name(ref):
            g = catalog.get(ref)
            check_cap(g.order, ref)  # catalog groups are cached, so re-check
            return g
        p = (self.base / ref).resolve()
        key = ("file", str(p))
        if key not in self._groups:
            try:
                data = json.loads(p.read_text())
            except FileNotFoundError:
                raise InputError(path, f"{ref!r} is neither a catalog name nor a file") from None
            except json.JSONDecodeError as exc:
                raise InputError(path, f"{ref}: invalid JSON: {exc.msg}") from None
            check_version(data, path)
            self._groups[key] = _build(data, path)
        return self._groups[key]


def check_version(data, path: str) -> None:
    if not isinstance(data, dict):
        raise InputError(path, "expected a JSON object")
    v = data.get("format_version")
    if v != FORMAT_VERSION:
        raise InputError(_at(path, "format_version"), f"expected {FORMAT_VERSION}, got {v!r}")


def _build(spec: dict, path: str) -> FiniteGroup:
    try:
        return build_group(spec)
    except (KeyError, TypeError) as exc:
        raise InputError(path, f"malformed group: {exc}") from None
    except (InputError, CapExceeded):
        raise
    except GroupError as exc:
        raise InputError(path, str(exc)) from None


def listed_generators(group: FiniteGroup) -> list[int]:
    return list(group.meta.get("generator_elements", group.generators))


def element(group: FiniteGroup, value, path: str) -> int:
    if isinstance(value, list):
        gens = listed_generators(group)
        x = 0
        for i, k in enumerate(value):
            k = _int(k, _at(path, i))
            if k == 0 or abs(k) > len(gens):
                raise InputError(_at(path, i), f"generator {k} out of range 1..{len(gens)}")
            g = gens[k - 1] if k > 0 else int(group.inv[gens[-k - 1]])
            x = int(group.mul[x, g])
        return x
    x = _int(value, path)
    if not 0 <= x < group.order:
        raise InputError(path, f"element {x} out of range for a group of order {group.order}")
    return x


def word(group: FiniteGroup, x: int) -> list[int]:
    """A shortest positive word for ``x`` in the listed generators (1-based)."""
    gens = listed_generators(group)
    pos = {g: i + 1 for i, g in reversed(list(enumerate(gens)))}
    return [pos[group.generators[k]] for k in group.word_of(int(x))]


def subgroup(group: FiniteGroup, words, path: str) -> Subgroup:
    words = _list(words, path)
    return subgroup_closure(group, [element(group, w, _at(path, i)) for i, w in enumerate(words)])


def hom_from_assignment(source: FiniteGroup, target: FiniteGroup, pins: list[tuple[int, int]],
                        path: str) -> GroupHom:
    """The unique homomorphism with the given values on a generating set."""
    if subgroup_closure(source, [s for s, _ in pins]).order != source.order:
        raise InputError(path, "the assigned elements do not generate the source")
    h = first_hom(source, target, HomConstraints(pin=pins))
    if h is None:
        raise InputError(path, "generator images do not extend to a homomorphism")
    return h


def hom(source: FiniteGroup, target: FiniteGroup, obj, path: str,
        domain: list[int] | None = None) -> GroupHom:
    """``{"gen_images": [...]}``: one target element per listed generator of the source.

    ``domain`` overrides the generating elements (used for maps out of a subgroup).
    """
    images = _list(_get(obj, "gen_images", path), _at(path, "gen_images"))
    gens = listed_generators(source) if domain is None else domain
    if len(images) != len(gens):
        raise InputError(_at(path, "gen_images"), f"expected {len(gens)} images, got {len(images)}")
    pins = [(g, element(target, v, _at(_at(path, "gen_images"), i)))
            for i, (g, v) in enumerate(zip(gens, images))]
    return hom_from_assignment(source, target, pins, _at(path, "gen_images"))


def hom_to_json(h: GroupHom, domain: list[int] | None = None) -> dict:
    h.verify()
    gens = listed_generators(h.source) if domain is None else domain
    images = [h(g) for g in gens]
    out = {"gen_images": [word(h.target, y) for y in images]}
    if h.target.labels is not None:
        out["labels"] = [h.target.labels[y] for y in images]
    return out


@dataclass
class PairData:
    pair: FinitePair
    words: list  # the distinguished generators as written
    elements: list[int]  # and as elements of the ambient group

    def gm_domain(self) -> list[int]:
        """The distinguished generators as elements of ``Gm.group``."""
        return [int(self.pair.distinguished.local_index[x]) for x in self.elements]


def pair(loader: Loader, obj, path: str) -> PairData:
    L = loader.group(_get(obj, "ambient", path), _at(path, "ambient"))
    words = _list(_get(obj, "distinguished", path), _at(path, "distinguished"))
    elems = [element(L, w, _at(_at(path, "distinguished"), i)) for i, w in enumerate(words)]
    return PairData(FinitePair(L, subgroup_closure(L, elems)), words, elems)


def load_pair_file(path) -> tuple[Loader, PairData]:
    loader = Loader()
    data = loader.read(path)
    if "pair" in data:
        return loader, pair(loader, data["pair"], "$.pair")
    return loader, pair(loader, data, "$")


@dataclass
class DepData:
    dep: Any
    pair: PairData
    loader: Loader


def load_dep(path) -> DepData:
    from .dep import DoubleEmbeddingProblem
    loader = Loader()
    data = loader.read(path)
    pd = pair(loader, _get(data, "pair", "$"), "$.pair")
    H = loader.group(_get(data, "H", "$"), "$.H")
    B = loader.group(_get(data, "B", "$"), "$.B")
    G = subgroup(H, _get(data, "G", "$"), "$.G")
    A = subgroup(B, _get(data, "A", "$"), "$.A")
    beta = hom(H, B, _get(data, "beta", "$"), "$.beta")
    nu = hom(pd.pair.ambient, B, _get(data, "nu", "$"), "$.nu")
    dep = DoubleEmbeddingProblem(pd.pair, H, B, G, A, beta, nu, name=str(data.get("name", "")))
    return DepData(dep, pd, loader)


def load_theta(dd: DepData, path) -> GroupHom:
    data = dd.loader.read(path)
    return hom(dd.dep.L, dd.dep.H, _get(data, "theta", "$"), "$.theta")


def load_eta(dd: DepData, path) -> GroupHom:
    """``eta`` is written as images in ``H`` of the pair's distinguished generators."""
    data = dd.loader.read(path)
    dep = dd.dep
    obj = _get(data, "eta", "$")
    images = _list(_get(obj, "gen_images", "$.eta"), "$.eta.gen_images")
    if len(images) != len(dd.pair.elements):
        raise InputError("$.eta.gen_images",
                         f"expected {len(dd.pair.elements)} images, got {len(images)}")
    pins = []
    for i, v in enumerate(images):
        y = element(dep.H, v, f"$.eta.gen_images[{i}]")
        if not dep.G.mask[y]:
            raise InputError(f"$.eta.gen_images[{i}]", "image is not in G")
        pins.append((dd.pair.gm_domain()[i], int(dep.G.local_index[y])))
    return hom_from_assignment(dep.Gm.group, dep.G.group, pins, "$.eta.gen_images")


def eta_to_json(dd: DepData, eta: GroupHom) -> dict:
    dep = dd.dep
    ys = [int(dep.G.array[eta(x)]) for x in dd.pair.gm_domain()]
    out = {"gen_images": [word(dep.H, y) for y in ys]}
    if dep.H.labels is not None:
        out["labels"] = [dep.H.labels[y] for y in ys]
    return out


def load_action(path) -> GroupAction:
    loader = Loader()
    data = loader.read(path)
    Q = loader.group(_get(data, "actor", "$"), "$.actor")
    A = loader.group(_get(data, "space", "$"), "$.space")
    act = _get(data, "act", "$")
    if act == "trivial":
        return GroupAction.trivial(Q, A)
    perms = _list(_get(act, "gen_images", "$.act"), "$.act.gen_images")
    gens = listed_generators(Q)
    if len(perms) != len(gens):
        raise InputError("$.act.gen_images", f"expected {len(gens)} permutations, got {len(perms)}")
    for i, p in enumerate(perms):
        p = _list(p, f"$.act.gen_images[{i}]")
        if sorted(x if isinstance(x, int) else -1 for x in p) != list(range(A.order)):
            raise InputError(f"$.act.gen_images[{i}]", "not a permutation of the space")
    # images are given per listed generator; rebuild along the actor's own generators
    by_elem = {g: np.array(p, dtype=np.int64) for g, p in zip(gens, perms)}
    try:
        action = GroupAction.from_generator_images(Q, A, [by_elem[g] for g in Q.generators])
    except GroupError as exc:
        raise InputError("$.act.gen_images", str(exc)) from None
    for g, p in by_elem.items():
        if not np.array_equal(action.act[g], p):
            raise InputError("$.act.gen_images", "images of repeated generators disagree")
    return action


def group_to_json(group: FiniteGroup) -> dict:
    """Table format with provenance in ``meta``."""
    meta = {k: v for k, v in group.meta.items() if k not in ("points", "generator_elements")}
    return {
        "format_version": FORMAT_VERSION,
        "name": group.name,
        "kind": "table",
        "table": group.mul.tolist(),
        "generators": listed_generators(group),
        "meta": meta,
    }


def group_ref(group: FiniteGroup):
    if group.meta.get("catalog") and catalog.is_catalog_name(group.meta["catalog"]):
        return group.meta["catalog"]
    return group_to_json(group)


def subgroup_to_json(sub: Subgroup) -> list:
    from .groups import _greedy_generators
    gens = list(sub.gens) if sub.gens else [int(sub.array[i]) for i in _greedy_generators(sub.group.mul)]
    return [word(sub.parent, g) for g in gens]


def dep_to_json(dep) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "name": dep.name,
        "pair": {"ambient": group_ref(dep.L), "distinguished": subgroup_to_json(dep.Gm)},
        "H": group_ref(dep.H),
        "B": group_ref(dep.B),
        "G": subgroup_to_json(dep.G),
        "A": subgroup_to_json(dep.A),
        "beta": hom_to_json(dep.beta),
        "nu": hom_to_json(dep.nu),
    }


def dumps(obj) -> str:
    """Deterministic serialization: sorted keys, fixed separators."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_default) + "\n"


def _default(o):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not serializable: {type(o).__name__}")
