"""Finite Kripke models for implicational minimal logic.

Truth sets are bitmasks over worlds; ``i`` satisfies ``a -> b`` when no
world above ``i`` satisfies ``a`` but not ``b``.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .formula import Formula, atoms, subformulas

__all__ = [
    "KripkeModel", "ModelError", "satisfies", "valid_in", "find_countermodel",
    "random_model", "load_model", "dump_model", "model_to_json", "model_from_json",
]


class ModelError(ValueError):
    pass


def _closure(k: int, pairs: Iterable[tuple[int, int]]) -> list[int]:
    """Reflexive-transitive closure as up-set bitmasks."""
    up = [1 << i for i in range(k)]
    for i, j in pairs:
        if not (0 <= i < k and 0 <= j < k):
            raise ModelError(f"order pair {(i, j)} mentions an unknown world")
        up[i] |= 1 << j
    changed = True
    while changed:
        changed = False
        for i in range(k):
            acc = up[i]
            for j in range(k):
                if acc >> j & 1:
                    acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    return up


@dataclass(frozen=True, eq=False)
class KripkeModel:
    """Worlds ``0..k-1``; ``up[i]`` is the bitmask of worlds ``j`` with ``i <= j``."""

    up: tuple[int, ...]
    valuation: tuple[frozenset[str], ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def build(cls, worlds: int, order: Iterable[tuple[int, int]] = (),
              valuation: Mapping[int, Iterable[str]] | None = None) -> KripkeModel:
        """Close ``order`` reflexively and transitively, then validate."""
        if worlds < 1:
            raise ModelError("a model needs at least one world")
        up = _closure(worlds, order)
        valuation = valuation or {}
        for w in valuation:
            if not 0 <= int(w) < worlds:
                raise ModelError(f"valuation mentions unknown world {w}")
        val = tuple(frozenset(valuation.get(i, valuation.get(str(i), ()))) for i in range(worlds))
        return cls(tuple(up), val)

    def __post_init__(self):
        k = len(self.up)
        if k < 1 or len(self.valuation) != k:
            raise ModelError("inconsistent world count")
        for i in range(k):
            if not self.up[i] >> i & 1:
                raise ModelError(f"order is not reflexive at world {i}")
            for j in range(k):
                if self.up[i] >> j & 1:
                    if (self.up[i] | self.up[j]) != self.up[i]:
                        raise ModelError("order is not transitive")
                    if i != j and self.up[j] >> i & 1:
                        raise ModelError(f"order is not antisymmetric at {i}, {j}")
                    if not self.valuation[i] <= self.valuation[j]:
                        raise ModelError(f"valuation not monotone from world {i} to {j}")

    @property
    def size(self) -> int:
        return len(self.up)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def order_pairs(self) -> list[tuple[int, int]]:
        """The strict order, as a list of pairs."""
        return [(i, j) for i in range(self.size) for j in range(self.size)
                if i != j and self.leq(i, j)]

    def truth_set(self, f: Formula) -> int:
        cache = self._cache
        if f in cache:
            return cache[f]
        k = self.size
        for g in subformulas(f):
            if g in cache:
                continue
            if g.is_atom:
                mask = 0
                for i in range(k):
                    if g.name in self.valuation[i]:
                        mask |= 1 << i
            else:
                bad = cache[g.ant] & ~cache[g.cons]
                mask = 0
                for i in range(k):
                    if not self.up[i] & bad:
                        mask |= 1 << i
            cache[g] = mask
        return cache[f]

    def __eq__(self, other):
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return self.up == other.up and self.valuation == other.valuation

    def __hash__(self):
        return hash((self.up, self.valuation))

    def describe(self) -> str:
        lines = [f"{self.size} world(s)"]
        for i in range(self.size):
            above = [j for j in range(self.size) if j != i and self.leq(i, j)]
            val = "{" + ", ".join(sorted(self.valuation[i])) + "}"
            lines.append(f"  w{i}: V = {val}" + (f", below {above}" if above else ""))
        return "\n".join(lines)


def satisfies(m: KripkeModel, w: int, f: Formula) -> bool:
    if not isinstance(w, int) or not 0 <= w < m.size:
        raise ModelError(f"unknown world {w!r}")
    return bool(m.truth_set(f) >> w & 1)


def valid_in(m: KripkeModel, f: Formula) -> bool:
    full = (1 << m.size) - 1
    return m.truth_set(f) == full


# ---------------------------------------------------------------- search

def _rooted_orders(k: int) -> list[tuple[int, ...]]:
    """Partial orders on ``0..k-1`` with least element 0, one per isomorphism class.

    Every order produced is compatible with the index order, so world 0 is
    the root and edges only point to higher indices.
    """
    pairs = [(i, j) for i in range(1, k) for j in range(i + 1, k)]
    seen = set()
    out = []
    for bits in itertools.product((0, 1), repeat=len(pairs)):
        chosen = [p for p, b in zip(pairs, bits) if b]
        up = _closure(k, [(0, j) for j in range(1, k)] + chosen)
        key = _canonical(up)
        if key not in seen:
            seen.add(key)
            out.append(tuple(up))
    return out


def _canonical(up: list[int]) -> tuple:
    k = len(up)
    best = None
    for perm in itertools.permutations(range(1, k)):
        p = (0,) + perm
        rel = tuple(sorted((p[i], p[j]) for i in range(k) for j in range(k) if up[i] >> j & 1))
        if best is None or rel < best:
            best = rel
    return best


def _upsets(up: tuple[int, ...]) -> list[int]:
    k = len(up)
    out = []
    for mask in range(1 << k):
        if all(up[i] & ~mask == 0 for i in range(k) if mask >> i & 1):
            out.append(mask)
    return out


def find_countermodel(f: Formula, max_worlds: int = 3) -> KripkeModel | None:
    """Smallest rooted model (up to ``max_worlds``) where ``f`` fails at world 0.

    Enumeration order: world count, then order shape, then valuations with
    atoms in sorted order. ``None`` only means no such model within the bound.
    """
    names = atoms(f)
    for k in range(1, max_worlds + 1):
        for up in _rooted_orders(k):
            ups = _upsets(up)
            for choice in itertools.product(ups, repeat=len(names)):
                val = tuple(
                    frozenset(n for n, mask in zip(names, choice) if mask >> i & 1)
                    for i in range(k)
                )
                m = KripkeModel(up, val)
                if not m.truth_set(f) & 1:
                    assert not valid_in(m, f)
                    return m
    return None


def random_model(seed, world_count: int, atom_pool: Iterable[str] = ("A", "B", "C"),
                 edge_prob: float = 0.4, atom_prob: float = 0.3) -> KripkeModel:
    """Random partial order (a random DAG over the index order, closed) with an
    upward-closed random valuation."""
    if world_count < 1:
        raise ModelError("world_count must be at least 1")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    pool = list(atom_pool)
    pairs = [(i, j) for i in range(world_count) for j in range(i + 1, world_count)
             if rng.random() < edge_prob]
    up = _closure(world_count, pairs)
    seeds = [{a for a in pool if rng.random() < atom_prob} for _ in range(world_count)]
    val = [set() for _ in range(world_count)]
    for i in range(world_count):
        for j in range(world_count):
            if up[i] >> j & 1:
                val[j] |= seeds[i]
    return KripkeModel(tuple(up), tuple(frozenset(v) for v in val))


# ---------------------------------------------------------------- files

def model_to_json(m: KripkeModel) -> dict:
    return {
        "worlds": m.size,
        "order": [list(p) for p in m.order_pairs()],
        "valuation": {str(i): sorted(v) for i, v in enumerate(m.valuation)},
    }


def model_from_json(data: Mapping) -> KripkeModel:
    try:
        k = int(data["worlds"])
        order = [(int(i), int(j)) for i, j in data.get("order", [])]
        valuation = {int(w): list(v) for w, v in data.get("valuation", {}).items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed model file: {exc}") from exc
    return KripkeModel.build(k, order, valuation)


def dump_model(m: KripkeModel, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_json(m), fh, indent=2)


def load_model(path) -> KripkeModel:
    with open(path) as fh:
        return model_from_json(json.load(fh))
