"""Independent reference implementations used only by the tests.

They are deliberately naive: recursion straight from the definitions, no
bitmasks, no interning tricks, no shared code with the package beyond the
formula constructors.
"""
from __future__ import annotations

from functools import lru_cache

from mimpl.formula import Atom, Imp


def arrows_in_text(text: str) -> int:
    return text.count("->")


def atoms_in_text(text: str) -> int:
    return sum(1 for tok in text.replace("(", " ").replace(")", " ").replace("->", " ").split())


def forces(worlds, leq, val, w, f) -> bool:
    """Kripke forcing from the textbook clause; ``leq(i, j)`` and ``val[w]`` a set."""
    if isinstance(f, Atom):
        return f.name in val[w]
    return all(not forces(worlds, leq, val, v, f.ant) or forces(worlds, leq, val, v, f.cons)
               for v in worlds if leq(w, v))


def normal_usages(goal, cap: int):
    """All per-formula usage multisets (as sorted tuples) of normal proofs of
    ``goal`` staying within ``cap`` uses of every formula.

    Plain recursion over (goal, context, remaining allowance). Every leaf use
    consumes allowance, so the recursion is well founded.
    """

    @lru_cache(maxsize=None)
    def solve(g, ctx: frozenset, rem: tuple) -> frozenset:
        # rem: sorted tuple of (formula_text, remaining)
        out = set()
        if isinstance(g, Imp):
            out |= solve(g.cons, ctx | {g.ant}, rem)
        budget = dict(rem)
        for h in ctx:
            key = str(h)
            if budget.get(key, cap) < 1:
                continue
            ants = []
            t = h
            while True:
                if t is g:
                    out |= spend_chain(tuple(ants), ctx, _take(rem, key))
                if isinstance(t, Atom):
                    break
                ants.append(t.ant)
                t = t.cons
        return frozenset(out)

    @lru_cache(maxsize=None)
    def spend_chain(ants, ctx, rem) -> frozenset:
        if not ants:
            return frozenset({rem})
        out = set()
        for r in solve(ants[0], ctx, rem):
            out |= spend_chain(ants[1:], ctx, r)
        return frozenset(out)

    def _take(rem, key):
        d = dict(rem)
        d[key] = d.get(key, cap) - 1
        return tuple(sorted(d.items()))

    return solve(goal, frozenset(), ())


def has_normal_proof(goal, cap: int) -> bool:
    return bool(normal_usages(goal, cap))
