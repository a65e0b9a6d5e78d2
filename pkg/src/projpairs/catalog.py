"""Built-in small groups, all realised as permutation groups."""

from __future__ import annotations

from functools import lru_cache

from .groups import FiniteGroup, GroupError, cycles_to_images, from_permutations


def _cyclic(n: int):
    return n, [[list(range(n))]] if n > 1 else []


def _symmetric(n: int):
    return n, [[[0, 1]], [list(range(n))]]


_DEFINITIONS = {
    "C1": (1, []),
    "V4": (4, [[[0, 1], [2, 3]], [[0, 2], [1, 3]]]),
    "A4": (4, [[[0, 1, 2]], [[1, 2, 3]]]),
    "A5": (5, [[[0, 1, 2, 3, 4]], [[0, 1, 2]]]),
    "D4": (4, [[[0, 1, 2, 3]], [[1, 3]]]),
    "D6": (6, [[[0, 1, 2, 3, 4, 5]], [[1, 5], [2, 4]]]),
    # regular representation of the quaternions
    "Q8": (8, [[[0, 1, 3, 6], [2, 5, 7, 4]], [[0, 2, 3, 7], [1, 4, 6, 5]]]),
}
for _n in range(2, 13):
    _DEFINITIONS[f"C{_n}"] = _cyclic(_n)
for _n in range(3, 6):
    _DEFINITIONS[f"S{_n}"] = _symmetric(_n)

CATALOG_NAMES = tuple(
    [f"C{n}" for n in range(2, 13)] + ["S3", "S4", "S5", "A4", "A5", "D4", "D6", "Q8", "V4"]
)


def catalog_spec(name: str) -> dict:
    if name not in _DEFINITIONS:
        raise GroupError(f"unknown catalog group {name!r}")
    degree, gens = _DEFINITIONS[name]
    return {"name": name, "kind": "permutation", "degree": degree, "generators": gens}


@lru_cache(maxsize=None)
def get(name: str) -> FiniteGroup:
    """A catalog group by name (cached, so repeated lookups share one object)."""
    spec = catalog_spec(name)
    perms = [cycles_to_images(c, spec["degree"]) for c in spec["generators"]]
    return from_permutations(perms, spec["degree"], name=name, meta={"catalog": name})


def is_catalog_name(name: str) -> bool:
    return name in _DEFINITIONS


def small_catalog(max_order: int) -> list[FiniteGroup]:
    return [g for g in map(get, CATALOG_NAMES) if g.order <= max_order]


def trivial_group() -> FiniteGroup:
    return get("C1")
