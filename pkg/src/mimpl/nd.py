"""Prawitz-style natural deduction proofs for the implicational fragment.

Proofs are immutable trees, but constructions share identical subproofs, so
every traversal here memoizes on node identity and runs in time linear in
the number of *distinct* nodes.
"""
from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Optional, Union

from .formula import Formula, Imp, parse, substitute, to_text

__all__ = [
    "Assume", "Intro", "Elim", "Peirce", "NDProof", "Mode", "Judgement",
    "ProofError", "CensusEntry", "DagStats",
    "check", "is_normal", "assumption_census", "substitute_proof", "relabel",
    "dag_stats", "conclusions", "leaf_count", "uses_peirce",
    "proof_to_json", "proof_from_json", "dump_proof", "load_proof",
]


class Mode(enum.Enum):
    MINIMAL = "minimal"
    CLASSICAL = "classical"


@dataclass(frozen=True)
class Assume:
    formula: Formula
    label: Optional[int] = None


@dataclass(frozen=True)
class Intro:
    """Concludes ``hypothesis -> body``, discharging leaves labelled ``label``.

    ``hypothesis`` may be omitted when at least one leaf is discharged; a
    vacuous discharge must state it.
    """
    label: int
    body: "NDProof"
    hypothesis: Optional[Formula] = None


@dataclass(frozen=True)
class Elim:
    minor: "NDProof"
    major: "NDProof"


@dataclass(frozen=True)
class Peirce:
    """From ``C`` under assumptions ``C -> D`` labelled ``label``, conclude ``C``."""
    label: int
    body: "NDProof"


NDProof = Union[Assume, Intro, Elim, Peirce]


class ProofError(ValueError):
    pass


@dataclass(frozen=True)
class Judgement:
    conclusion: Formula
    open_assumptions: Counter = field(default_factory=Counter)

    def __str__(self):
        if not self.open_assumptions:
            return f"|- {self.conclusion}"
        ctx = ", ".join(f"{f} x{n}" if n > 1 else str(f)
                        for f, n in sorted(self.open_assumptions.items(), key=lambda kv: str(kv[0])))
        return f"{ctx} |- {self.conclusion}"


def _children(p):
    if isinstance(p, Elim):
        return (p.minor, p.major)
    if isinstance(p, (Intro, Peirce)):
        return (p.body,)
    return ()


def _postorder(p):
    """Distinct nodes (by identity), children first."""
    seen = set()
    order = []
    stack = [(p, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in seen:
            continue
        kids = _children(node)
        if expanded or not kids:
            seen.add(id(node))
            order.append(node)
        else:
            stack.append((node, True))
            for k in reversed(kids):
                stack.append((k, False))
    return order


# ---------------------------------------------------------------- checking

@dataclass
class _Info:
    conclusion: Formula
    open: Counter              # (formula, label or None) -> count
    discharged: frozenset      # labels discharged somewhere below


def _analyse(p, mode: Mode) -> dict[int, _Info]:
    info: dict[int, _Info] = {}
    for node in _postorder(p):
        if isinstance(node, Assume):
            if node.label is not None and (not isinstance(node.label, int) or node.label < 1):
                raise ProofError(f"bad label {node.label!r}")
            info[id(node)] = _Info(node.formula, Counter({(node.formula, node.label): 1}), frozenset())
        elif isinstance(node, Elim):
            mi, ma = info[id(node.minor)], info[id(node.major)]
            c = ma.conclusion
            if c.is_atom:
                raise ProofError(f"elimination major premise {c} is not an implication")
            if c.ant is not mi.conclusion:
                raise ProofError(
                    f"elimination mismatch: minor concludes {mi.conclusion}, major needs {c.ant}")
            info[id(node)] = _Info(c.cons, mi.open + ma.open, mi.discharged | ma.discharged)
        elif isinstance(node, (Intro, Peirce)):
            kind = "intro" if isinstance(node, Intro) else "peirce"
            if isinstance(node, Peirce) and mode is not Mode.CLASSICAL:
                raise ProofError("Peirce's rule is not available in minimal mode")
            lab = node.label
            if not isinstance(lab, int) or lab < 1:
                raise ProofError(f"bad {kind} label {lab!r}")
            body = info[id(node.body)]
            if lab in body.discharged:
                raise ProofError(f"label {lab} is discharged twice on one branch")
            hyps = {f for (f, l) in body.open if l == lab}
            rest = Counter({k: n for k, n in body.open.items() if k[1] != lab})
            if len(hyps) > 1:
                raise ProofError(f"label {lab} marks different formulas: "
                                 + ", ".join(sorted(map(str, hyps))))
            if isinstance(node, Intro):
                if hyps:
                    (h,) = hyps
                    if node.hypothesis is not None and node.hypothesis is not h:
                        raise ProofError(f"intro {lab} states {node.hypothesis} but discharges {h}")
                elif node.hypothesis is None:
                    raise ProofError(f"vacuous intro {lab} must state its hypothesis")
                else:
                    h = node.hypothesis
                concl = Imp(h, body.conclusion)
            else:
                for h in hyps:
                    if h.is_atom or h.ant is not body.conclusion:
                        raise ProofError(
                            f"Peirce {lab} discharges {h}, expected {body.conclusion}->D")
                concl = body.conclusion
            info[id(node)] = _Info(concl, rest, body.discharged | {lab})
        else:
            raise ProofError(f"not a proof node: {node!r}")
    return info


def check(p: NDProof, mode: Mode = Mode.MINIMAL, *, allow_open_labels: bool = False) -> Judgement:
    """Validate ``p`` and return its conclusion with the open assumptions.

    Labelled leaves without a discharging ancestor are an error unless
    ``allow_open_labels`` is set (useful for sub-derivations awaiting their
    discharge); they are then reported as open.
    """
    mode = Mode(mode)
    root = _analyse(p, mode)[id(p)]
    open_ = Counter()
    for (f, lab), n in root.open.items():
        if lab is not None and not allow_open_labels:
            raise ProofError(f"label {lab} on {f} has no discharging rule")
        open_[f] += n
    return Judgement(root.conclusion, open_)


def conclusions(p: NDProof, mode: Mode = Mode.CLASSICAL) -> dict[int, Formula]:
    """Conclusion of every node, keyed by ``id(node)``."""
    return {k: v.conclusion for k, v in _analyse(p, Mode(mode)).items()}


def uses_peirce(p: NDProof) -> bool:
    return any(isinstance(n, Peirce) for n in _postorder(p))


def is_normal(p: NDProof) -> bool:
    """No elimination has an introduction as its major premise."""
    nodes = _postorder(p)
    if any(isinstance(n, Peirce) for n in nodes):
        raise ProofError("normality is not defined for proofs using Peirce's rule")
    return not any(isinstance(n, Elim) and isinstance(n.major, Intro) for n in nodes)


# ---------------------------------------------------------------- census

@dataclass
class CensusEntry:
    open_count: int = 0
    discharged_by: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return self.open_count + sum(self.discharged_by.values())


def assumption_census(p: NDProof) -> dict[Formula, CensusEntry]:
    """Leaf occurrences per formula, split by the label that discharges them."""
    open_at: dict[int, Counter] = {}
    closed_at: dict[int, Counter] = {}
    for node in _postorder(p):
        if isinstance(node, Assume):
            open_at[id(node)] = Counter({(node.formula, node.label): 1})
            closed_at[id(node)] = Counter()
        elif isinstance(node, Elim):
            open_at[id(node)] = open_at[id(node.minor)] + open_at[id(node.major)]
            closed_at[id(node)] = closed_at[id(node.minor)] + closed_at[id(node.major)]
        else:
            body_open = open_at[id(node.body)]
            closed = Counter(closed_at[id(node.body)])
            still = Counter()
            for (f, lab), n in body_open.items():
                if lab == node.label:
                    closed[(f, lab)] += n
                else:
                    still[(f, lab)] += n
            open_at[id(node)] = still
            closed_at[id(node)] = closed
    census: dict[Formula, CensusEntry] = {}
    for (f, _lab), n in open_at[id(p)].items():
        census.setdefault(f, CensusEntry()).open_count += n
    for (f, lab), n in closed_at[id(p)].items():
        entry = census.setdefault(f, CensusEntry())
        entry.discharged_by[lab] = entry.discharged_by.get(lab, 0) + n
    return census


def leaf_count(p: NDProof) -> int:
    counts: dict[int, int] = {}
    for node in _postorder(p):
        kids = _children(node)
        counts[id(node)] = 1 if not kids else sum(counts[id(k)] for k in kids)
    return counts[id(p)]


# ---------------------------------------------------------------- transformations

def _rebuild(p: NDProof, leaf, intro, peirce) -> NDProof:
    """Bottom-up map preserving sharing; unchanged subtrees are reused."""
    out: dict[int, NDProof] = {}
    for node in _postorder(p):
        if isinstance(node, Assume):
            new = leaf(node)
        elif isinstance(node, Elim):
            mi, ma = out[id(node.minor)], out[id(node.major)]
            new = node if (mi is node.minor and ma is node.major) else Elim(mi, ma)
        elif isinstance(node, Intro):
            new = intro(node, out[id(node.body)])
        else:
            new = peirce(node, out[id(node.body)])
        out[id(node)] = new
    return out[id(p)]


def substitute_proof(p: NDProof, s: Mapping[str, Formula]) -> NDProof:
    """Apply an atomic substitution to every formula in ``p``."""
    if not s:
        return p
    memo: dict = {}

    def sub(f):
        return substitute(f, s, memo)

    def leaf(n):
        g = sub(n.formula)
        return n if g is n.formula else Assume(g, n.label)

    def intro(n, body):
        h = None if n.hypothesis is None else sub(n.hypothesis)
        if body is n.body and h is n.hypothesis:
            return n
        return Intro(n.label, body, h)

    def peirce(n, body):
        return n if body is n.body else Peirce(n.label, body)

    return _rebuild(p, leaf, intro, peirce)


def relabel(p: NDProof, mapping: Mapping[int, Optional[int]]) -> NDProof:
    """Rename labels on leaves and discharging rules; ``None`` unlabels a leaf."""
    def leaf(n):
        if n.label in mapping:
            return Assume(n.formula, mapping[n.label])
        return n

    def intro(n, body):
        lab = mapping.get(n.label, n.label)
        if body is n.body and lab == n.label:
            return n
        return Intro(lab, body, n.hypothesis)

    def peirce(n, body):
        lab = mapping.get(n.label, n.label)
        if body is n.body and lab == n.label:
            return n
        return Peirce(lab, body)

    return _rebuild(p, leaf, intro, peirce)


# ---------------------------------------------------------------- sharing

@dataclass(frozen=True)
class DagStats:
    tree_nodes: int
    distinct_subproofs: int


def structural_keys(p: NDProof) -> dict[int, int]:
    """Map ``id(node)`` to an integer naming its structural class."""
    table: dict[tuple, int] = {}
    keys: dict[int, int] = {}
    for node in _postorder(p):
        if isinstance(node, Assume):
            k = ("assume", node.formula, node.label)
        elif isinstance(node, Elim):
            k = ("elim", keys[id(node.minor)], keys[id(node.major)])
        elif isinstance(node, Intro):
            k = ("intro", node.label, node.hypothesis, keys[id(node.body)])
        else:
            k = ("peirce", node.label, keys[id(node.body)])
        keys[id(node)] = table.setdefault(k, len(table))
    return keys


def dag_stats(p: NDProof) -> DagStats:
    sizes: dict[int, int] = {}
    for node in _postorder(p):
        sizes[id(node)] = 1 + sum(sizes[id(k)] for k in _children(node))
    classes = set(structural_keys(p).values())
    return DagStats(tree_nodes=sizes[id(p)], distinct_subproofs=len(classes))


# ---------------------------------------------------------------- files

def proof_to_json(p: NDProof) -> dict:
    if isinstance(p, Assume):
        d = {"kind": "assume", "formula": to_text(p.formula)}
        if p.label is not None:
            d["label"] = p.label
        return d
    if isinstance(p, Intro):
        d = {"kind": "intro", "label": p.label}
        if p.hypothesis is not None:
            d["hypothesis"] = to_text(p.hypothesis)
        d["body"] = proof_to_json(p.body)
        return d
    if isinstance(p, Elim):
        return {"kind": "elim", "minor": proof_to_json(p.minor), "major": proof_to_json(p.major)}
    if isinstance(p, Peirce):
        return {"kind": "peirce", "label": p.label, "body": proof_to_json(p.body)}
    raise TypeError(f"not a proof node: {p!r}")


def proof_from_json(d: Mapping) -> NDProof:
    formulas: dict[str, Formula] = {}

    def f(text):
        if text not in formulas:
            formulas[text] = parse(text)
        return formulas[text]

    def build(d):
        try:
            kind = d["kind"]
            if kind == "assume":
                return Assume(f(d["formula"]), d.get("label"))
            if kind == "intro":
                h = d.get("hypothesis")
                return Intro(int(d["label"]), build(d["body"]), None if h is None else f(h))
            if kind == "elim":
                return Elim(build(d["minor"]), build(d["major"]))
            if kind == "peirce":
                return Peirce(int(d["label"]), build(d["body"]))
        except (KeyError, TypeError) as exc:
            raise ProofError(f"malformed proof node: {exc}") from exc
        raise ProofError(f"unknown proof node kind {kind!r}")

    return build(d)


def dump_proof(p: NDProof, path) -> None:
    with open(path, "w") as fh:
        json.dump(proof_to_json(p), fh)


def load_proof(path) -> NDProof:
    with open(path) as fh:
        return proof_from_json(json.load(fh))
