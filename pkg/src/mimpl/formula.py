"""Implicational formulas, their text syntax and the chi/xi/phi family.

Formulas are hash-consed: two structurally equal formulas are the same
Python object, so equality and hashing are by identity and large formulas
with repeated subterms (``xi(n)`` has exponential tree size) are stored as
small DAGs.
"""
from __future__ import annotations

import random
import re
import threading
import weakref
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

__all__ = [
    "Formula", "Atom", "Imp", "ParseError", "Size",
    "parse", "to_text", "imp", "chi", "xi", "phi", "substitute",
    "shift_substitution", "size", "atoms", "subformulas", "recognize",
    "random_formula",
]

ATOM_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")

_table: weakref.WeakValueDictionary = weakref.WeakValueDictionary()
_lock = threading.Lock()


class Formula:
    __slots__ = ()

    is_atom = False

    def __str__(self) -> str:
        return to_text(self)

    def __repr__(self) -> str:
        return f"parse({to_text(self)!r})"

    def __setattr__(self, key, value):
        raise AttributeError("formulas are immutable")

    def __rshift__(self, other: Formula) -> Formula:
        return Imp(self, other)


class Atom(Formula):
    __slots__ = ("name", "_text", "__weakref__")

    is_atom = True

    def __new__(cls, name: str) -> Atom:
        if not isinstance(name, str) or not ATOM_RE.fullmatch(name):
            raise ValueError(f"bad atom name: {name!r}")
        key = ("atom", name)
        with _lock:
            obj = _table.get(key)
            if obj is None:
                obj = object.__new__(cls)
                object.__setattr__(obj, "name", name)
                object.__setattr__(obj, "_text", name)
                _table[key] = obj
        return obj

    def __reduce__(self):
        return (Atom, (self.name,))


class Imp(Formula):
    __slots__ = ("ant", "cons", "_text", "__weakref__")

    def __new__(cls, ant: Formula, cons: Formula) -> Imp:
        if not isinstance(ant, Formula) or not isinstance(cons, Formula):
            raise TypeError("Imp expects two formulas")
        key = (ant, cons)
        with _lock:
            obj = _table.get(key)
            if obj is None:
                obj = object.__new__(cls)
                object.__setattr__(obj, "ant", ant)
                object.__setattr__(obj, "cons", cons)
                object.__setattr__(obj, "_text", None)
                _table[key] = obj
        return obj

    def __reduce__(self):
        return (Imp, (self.ant, self.cons))


def imp(*parts: Formula) -> Formula:
    """Right-nested implication ``imp(a, b, c) == a -> (b -> c)``."""
    if not parts:
        raise ValueError("imp needs at least one formula")
    result = parts[-1]
    for p in reversed(parts[:-1]):
        result = Imp(p, result)
    return result


# ---------------------------------------------------------------- syntax

class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_TOKEN_RE = re.compile(r"\s*(?:(->|→)|([()])|([A-Za-z][A-Za-z0-9_]*)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # trailing whitespace only
            break
        arrow, paren, name, bad = m.groups()
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if bad is not None:
            raise ParseError(f"unexpected character {bad!r}", start)
        if arrow:
            tokens.append(("->", arrow, start))
        elif paren:
            tokens.append((paren, paren, start))
        else:
            tokens.append(("atom", name, start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str):
        tok = self.tokens[self.i]
        if tok[0] != kind:
            what = "end of input" if tok[0] == "eof" else repr(tok[1])
            raise ParseError(f"expected {kind!r}, found {what}", tok[2])
        self.i += 1
        return tok

    def formula(self) -> Formula:
        # iterative over the right spine so long chains do not recurse
        spine = [self.primary()]
        while self.peek()[0] == "->":
            self.i += 1
            spine.append(self.primary())
        return imp(*spine)

    def primary(self) -> Formula:
        kind, value, pos = self.peek()
        if kind == "atom":
            self.i += 1
            return Atom(value)
        if kind == "(":
            self.i += 1
            f = self.formula()
            self.take(")")
            return f
        if kind == "eof":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {value!r}", pos)


def parse(text: str) -> Formula:
    """Parse ``text``; ``->`` (or ``→``) associates to the right."""
    p = _Parser(text)
    if p.peek()[0] == "eof":
        raise ParseError("empty formula", 0)
    f = p.formula()
    kind, value, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {value!r}", pos)
    return f


def to_text(f: Formula) -> str:
    """Print with parentheses only around implication antecedents."""
    if f._text is not None:
        return f._text
    # post-order over the DAG, caching text on each node
    stack = [f]
    while stack:
        g = stack[-1]
        if g._text is not None:
            stack.pop()
            continue
        pending = [h for h in (g.ant, g.cons) if h._text is None]
        if pending:
            stack.extend(pending)
            continue
        a = g.ant._text
        if not g.ant.is_atom:
            a = f"({a})"
        object.__setattr__(g, "_text", f"{a}->{g.cons._text}")
        stack.pop()
    return f._text


# ---------------------------------------------------------------- family

C = Atom("C")


def chi(x: Formula, y: Formula) -> Formula:
    """``(((x -> y) -> x) -> x) -> y``"""
    return Imp(Imp(Imp(Imp(x, y), x), x), y)


def D(i: int) -> Atom:
    return Atom(f"D{i}")


@lru_cache(maxsize=None)
def xi(i: int) -> Formula:
    if not isinstance(i, int) or i < 1:
        raise ValueError(f"xi needs a positive index, got {i!r}")
    f = chi(D(1), C)
    for k in range(2, i + 1):
        f = chi(D(k), f)
    return f


@lru_cache(maxsize=None)
def phi(n: int) -> Formula:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"phi needs a positive index, got {n!r}")
    return Imp(xi(n), C)


def recognize(f: Formula, bound: int = 64) -> str | None:
    """Return ``"xi(k)"`` or ``"phi(k)"`` if ``f`` is that family member."""
    for k in range(1, bound + 1):
        if f is xi(k):
            return f"xi({k})"
        if f is phi(k):
            return f"phi({k})"
    return None


def phi_index(f: Formula, bound: int = 64) -> int | None:
    for k in range(1, bound + 1):
        if f is phi(k):
            return k
    return None


# ---------------------------------------------------------------- substitution

def substitute(f: Formula, s: Mapping[str, Formula], _memo: dict | None = None) -> Formula:
    """Simultaneously replace atoms named in ``s``."""
    if not s:
        return f
    memo = {} if _memo is None else _memo
    stack = [f]
    while stack:
        g = stack[-1]
        if g in memo:
            stack.pop()
            continue
        if g.is_atom:
            memo[g] = s.get(g.name, g)
            stack.pop()
            continue
        pending = [h for h in (g.ant, g.cons) if h not in memo]
        if pending:
            stack.extend(pending)
            continue
        a, c = memo[g.ant], memo[g.cons]
        memo[g] = g if (a is g.ant and c is g.cons) else Imp(a, c)
        stack.pop()
    return memo[f]


def shift_substitution(i: int) -> dict[str, Formula]:
    """``C := xi(1)`` and ``D_k := D_{k+1}`` for ``k = 1..i``."""
    s: dict[str, Formula] = {"C": xi(1)}
    for k in range(1, i + 1):
        s[f"D{k}"] = D(k + 1)
    return s


# ---------------------------------------------------------------- metrics

@dataclass(frozen=True)
class Size:
    atom_occurrences: int
    arrow_count: int
    depth: int


def size(f: Formula) -> Size:
    memo: dict[Formula, tuple[int, int, int]] = {}
    for g in _postorder(f):
        if g.is_atom:
            memo[g] = (1, 0, 0)
        else:
            a, c = memo[g.ant], memo[g.cons]
            memo[g] = (a[0] + c[0], a[1] + c[1] + 1, max(a[2], c[2]) + 1)
    return Size(*memo[f])


def _postorder(f: Formula) -> Iterator[Formula]:
    """Distinct subformulas, children before parents."""
    seen = set()
    stack = [(f, False)]
    while stack:
        g, expanded = stack.pop()
        if g in seen:
            continue
        if expanded or g.is_atom:
            seen.add(g)
            yield g
        else:
            stack.append((g, True))
            stack.append((g.cons, False))
            stack.append((g.ant, False))


def subformulas(f: Formula) -> list[Formula]:
    return list(_postorder(f))


def atoms(f: Formula) -> list[str]:
    return sorted(g.name for g in _postorder(f) if g.is_atom)


def random_formula(rng: random.Random, max_arrows: int, atom_pool=("A", "B", "C")) -> Formula:
    """Uniform-ish random formula with at most ``max_arrows`` implications."""
    n = rng.randint(0, max_arrows)

    def build(k: int) -> Formula:
        if k == 0:
            return Atom(rng.choice(atom_pool))
        left = rng.randint(0, k - 1)
        return Imp(build(left), build(k - 1 - left))

    return build(n)
