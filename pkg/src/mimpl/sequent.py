"""Backward proof search in a bracketed sequent calculus, with counter-models.

Sequents are ``Xi |- gamma [Delta]``. The bracket is bookkeeping: it never
decides whether a rule applies, so search works on ``(Xi, gamma)`` and the
bracket is filled in when a proof or a failed branch is written out.

Two left rules exist. The weak one consumes its principal implication and
drops the bracket in the second premise; it always terminates but is
incomplete. The strong one keeps the principal formula (implicit
contraction) and needs loop checking on the current branch.
"""
from __future__ import annotations

import enum
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Optional, Union

from .formula import Formula, Imp, parse, to_text
from .kripke import KripkeModel, valid_in

__all__ = [
    "Rule", "Variant", "Sequent", "SequentProof", "TraceNode", "Attempt", "FailureTrace",
    "SearchLimits", "SequentProofError", "Branch", "CountermodelResult",
    "prove", "check_sequent_proof", "validate_sequent_proof", "extract_countermodel",
    "failed_branches", "parse_sequent", "sequent_formula",
    "sequent_proof_to_json", "sequent_proof_from_json", "trace_summary",
]

UNCERTIFIED = "failed search, no counter-model certified"


class Rule(enum.Enum):
    AXIOM = "axiom"
    RIGHT = "right"
    LEFT_WEAK = "left_weak"
    LEFT_STRONG = "left_strong"


class Variant(enum.Enum):
    WEAK = "weak"
    STRONG = "strong"


def _key(f: Formula) -> str:
    return to_text(f)


@dataclass(frozen=True)
class Sequent:
    left: tuple[Formula, ...]
    focus: Formula
    bracket: tuple[Formula, ...] = ()

    def __str__(self):
        lhs = ", ".join(map(to_text, self.left))
        s = f"{lhs} |- {to_text(self.focus)}" if lhs else f"|- {to_text(self.focus)}"
        if self.bracket:
            s += " [" + ", ".join(map(to_text, self.bracket)) + "]"
        return s


def parse_sequent(text: str) -> Sequent:
    """Parse ``Gamma |- gamma [Delta]``; a bare formula means ``|- formula``."""
    if "|-" not in text:
        return Sequent((), parse(text))
    lhs, rhs = text.split("|-", 1)
    left = tuple(parse(part) for part in lhs.split(",")) if lhs.strip() else ()
    bracket: tuple = ()
    rhs = rhs.strip()
    if rhs.endswith("]"):
        if "[" not in rhs:
            raise ValueError(f"unbalanced bracket in sequent {text!r}")
        rhs, inner = rhs[:-1].split("[", 1)
        bracket = tuple(parse(part) for part in inner.split(",")) if inner.strip() else ()
    return Sequent(left, parse(rhs.strip().rstrip(",")), bracket)


def sequent_formula(s: Sequent) -> Formula:
    """``l1 -> ... -> lk -> focus``, falsified exactly where the sequent is."""
    f = s.focus
    for g in reversed(s.left):
        f = Imp(g, f)
    return f


@dataclass(frozen=True)
class SequentProof:
    rule: Rule
    sequent: Sequent
    principal: Optional[Formula] = None
    premises: tuple["SequentProof", ...] = ()

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


# ---------------------------------------------------------------- search

@dataclass(eq=False)
class Attempt:
    rule: Rule
    principal: Optional[Formula]
    premises: list["TraceNode"]
    status: str = "failed"


@dataclass(eq=False)
class TraceNode:
    """One explored ``(left, focus)`` pair. ``status`` is ``proved``,
    ``failed``, ``loop`` (pruned by the branch history) or ``truncated``."""
    left: tuple[Formula, ...]
    focus: Formula
    status: str = "failed"
    attempts: list[Attempt] = field(default_factory=list)


@dataclass
class FailureTrace:
    sequent: Sequent
    variant: Variant
    root: TraceNode
    exhausted: bool
    nodes: int

    def __str__(self):
        state = "exhaustive" if self.exhausted else "truncated"
        return f"no {self.variant.value} proof of {self.sequent} ({state}, {self.nodes} nodes)"


@dataclass(frozen=True)
class SearchLimits:
    node_cap: Optional[int] = 200_000
    time_cap: Optional[float] = None


_INF = float("inf")


class _Search:
    def __init__(self, variant: Variant, limits: SearchLimits):
        self.variant = variant
        self.limits = limits
        self.memo: dict = {}
        self.stack: dict = {}
        self.nodes = 0
        self.out_of_budget = False
        self.started = time.monotonic()

    def norm(self, left) -> tuple:
        if self.variant is Variant.STRONG:
            left = set(left)
        return tuple(sorted(left, key=_key))

    def over_budget(self) -> bool:
        if self.out_of_budget:
            return True
        lim = self.limits
        if lim.node_cap is not None and self.nodes >= lim.node_cap:
            self.out_of_budget = True
        elif lim.time_cap is not None and time.monotonic() - self.started > lim.time_cap:
            self.out_of_budget = True
        return self.out_of_budget

    def premises(self, left: tuple, focus: Formula, h: Formula):
        if self.variant is Variant.WEAK:
            rest = list(left)
            rest.remove(h)
            return [(rest, h.ant), (rest + [h.cons], focus)]
        return [(list(left), h.ant), (list(left) + [h.cons], focus)]

    def run(self, left, focus, depth: int = 0) -> tuple[TraceNode, float]:
        left = self.norm(left)
        key = (left, focus)
        hit = self.memo.get(key)
        if hit is not None:
            return hit, _INF
        if key in self.stack:
            return TraceNode(left, focus, "loop"), self.stack[key]
        if self.over_budget():
            return TraceNode(left, focus, "truncated"), _INF
        self.nodes += 1
        node = TraceNode(left, focus)
        low = _INF
        if focus.is_atom and focus in left:
            node.attempts.append(Attempt(Rule.AXIOM, focus, [], "proved"))
            node.status = "proved"
            self.memo[key] = node
            return node, _INF
        if self.variant is Variant.STRONG:
            self.stack[key] = depth
        options = []
        if not focus.is_atom:
            options.append((Rule.RIGHT, None, [(list(left) + [focus.ant], focus.cons)]))
        rule = Rule.LEFT_WEAK if self.variant is Variant.WEAK else Rule.LEFT_STRONG
        for h in dict.fromkeys(g for g in left if not g.is_atom):
            options.append((rule, h, self.premises(left, focus, h)))
        for r, principal, prem in options:
            att = Attempt(r, principal, [])
            node.attempts.append(att)
            statuses = []
            for pl, pf in prem:
                child, child_low = self.run(pl, pf, depth + 1)
                low = min(low, child_low)
                att.premises.append(child)
                statuses.append(child.status)
            if all(s == "proved" for s in statuses):
                att.status = "proved"
                node.status = "proved"
                break
            if any(s in ("failed", "loop") for s in statuses):
                att.status = "failed"
            else:
                att.status = "truncated"
        self.stack.pop(key, None)
        if node.status != "proved":
            node.status = "truncated" if any(a.status == "truncated" for a in node.attempts) else "failed"
        if node.status == "proved" or (node.status == "failed" and low >= depth):
            self.memo[key] = node
        return node, (low if low < depth else _INF)


def _materialize(node: TraceNode, seq: Sequent) -> SequentProof:
    att = next(a for a in node.attempts if a.status == "proved")
    left, focus, br = list(seq.left), seq.focus, seq.bracket
    if att.rule is Rule.AXIOM:
        return SequentProof(Rule.AXIOM, seq, focus)
    if att.rule is Rule.RIGHT:
        prem = Sequent(tuple(left + [focus.ant]), focus.cons, br)
        return SequentProof(Rule.RIGHT, seq, focus, (_materialize(att.premises[0], prem),))
    h = att.principal
    p1, p2 = _left_premises(att.rule, seq, h)
    return SequentProof(att.rule, seq, h, (_materialize(att.premises[0], p1), _materialize(att.premises[1], p2)))


def _left_premises(rule: Rule, seq: Sequent, h: Formula) -> tuple[Sequent, Sequent]:
    left = list(seq.left)
    if rule is Rule.LEFT_WEAK:
        left.remove(h)
    p1 = Sequent(tuple(left), h.ant, (seq.focus,) + seq.bracket)
    p2 = Sequent(tuple(left + [h.cons]), seq.focus, ())
    return p1, p2


def prove(s: Union[Sequent, Formula], variant: Variant = Variant.STRONG,
          limits: SearchLimits | None = None) -> Union[SequentProof, FailureTrace]:
    """Backward search; a checked proof, or the explored failure trace."""
    if isinstance(s, Formula):
        s = Sequent((), s)
    variant = Variant(variant)
    search = _Search(variant, limits or SearchLimits())
    root, _ = search.run(s.left, s.focus)
    if root.status == "proved":
        proof = _materialize(root, s)
        validate_sequent_proof(proof)
        return proof
    return FailureTrace(s, variant, root, root.status == "failed", search.nodes)


# ---------------------------------------------------------------- checking

class SequentProofError(ValueError):
    def __init__(self, message: str, node: SequentProof):
        super().__init__(f"{message} at {node.sequent}")
        self.node = node


def _same(a, b) -> bool:
    return Counter(a) == Counter(b)


def validate_sequent_proof(p: SequentProof) -> None:
    """Raise ``SequentProofError`` naming the first node off its rule schema."""
    stack = [p]
    while stack:
        n = stack.pop()
        s = n.sequent
        if n.rule is Rule.AXIOM:
            if n.premises or not s.focus.is_atom or s.focus not in s.left:
                raise SequentProofError("bad axiom", n)
            continue
        if n.rule is Rule.RIGHT:
            if s.focus.is_atom or len(n.premises) != 1:
                raise SequentProofError("bad ->-right", n)
            q = n.premises[0].sequent
            if not (_same(q.left, s.left + (s.focus.ant,)) and q.focus is s.focus.cons
                    and q.bracket == s.bracket):
                raise SequentProofError("->-right premise does not match", n)
        elif n.rule in (Rule.LEFT_WEAK, Rule.LEFT_STRONG):
            h = n.principal
            if h is None or h.is_atom or h not in s.left or len(n.premises) != 2:
                raise SequentProofError("bad ->-left principal", n)
            want1, want2 = _left_premises(n.rule, s, h)
            q1, q2 = n.premises[0].sequent, n.premises[1].sequent
            if not (_same(q1.left, want1.left) and q1.focus is want1.focus and q1.bracket == want1.bracket):
                raise SequentProofError("->-left first premise does not match", n)
            if not (_same(q2.left, want2.left) and q2.focus is want2.focus and q2.bracket == want2.bracket):
                raise SequentProofError("->-left second premise does not match", n)
        else:
            raise SequentProofError(f"unknown rule {n.rule!r}", n)
        stack.extend(n.premises)


def check_sequent_proof(p: SequentProof) -> bool:
    try:
        validate_sequent_proof(p)
    except SequentProofError:
        return False
    return True


# ---------------------------------------------------------------- counter-models

@dataclass
class Branch:
    """A root-to-leaf path through failed nodes, as written sequents."""
    steps: list[tuple[Sequent, Optional[Rule]]]

    @property
    def leaf(self) -> Sequent:
        return self.steps[-1][0]

    def right_snapshots(self) -> list[tuple[Formula, ...]]:
        """Left context of each ->-right premise along the branch."""
        out = []
        for (s, r), (nxt, _) in zip(self.steps, self.steps[1:]):
            if r is Rule.RIGHT:
                out.append(nxt.left)
        return out

    def world_valuations(self, at_end: bool) -> list[frozenset[str]]:
        segments: list[list[Sequent]] = [[]]
        for i, (s, r) in enumerate(self.steps):
            segments[-1].append(s)
            if r is Rule.RIGHT and i + 1 < len(self.steps):
                segments.append([])
        vals = []
        for seg in segments:
            s = seg[-1] if at_end else seg[0]
            vals.append(frozenset(f.name for f in s.left if f.is_atom))
        return vals


def failed_branches(t: FailureTrace, limit: int = 10_000) -> Iterator[Branch]:
    """Failed branches in canonical order; second ->-left premises first."""
    count = 0

    def walk(node: TraceNode, seq: Sequent, steps):
        nonlocal count
        if count >= limit or node.status == "proved":
            return
        failed = [a for a in node.attempts if a.status == "failed"]
        if not failed:
            count += 1
            yield Branch(steps + [(seq, None)])
            return
        for att in failed:
            if att.rule is Rule.RIGHT:
                nxt = Sequent(seq.left + (seq.focus.ant,), seq.focus.cons, seq.bracket)
                pairs = [(att.premises[0], nxt)]
            else:
                p1, p2 = _left_premises(att.rule, seq, att.principal)
                pairs = [(att.premises[1], p2), (att.premises[0], p1)]
            for child, child_seq in pairs:
                if child.status in ("failed", "loop"):
                    yield from walk(child, child_seq, steps + [(seq, att.rule)])

    yield from walk(t.root, t.sequent, [])


def _chain(vals: list[frozenset[str]]) -> KripkeModel:
    k = len(vals)
    return KripkeModel.build(k, [(i, i + 1) for i in range(k - 1)], dict(enumerate(vals)))


def _dedupe(vals):
    out = []
    for v in vals:
        if not out or out[-1] != v:
            out.append(v)
    return out


@dataclass
class CountermodelResult:
    model: Optional[KripkeModel]
    verified: bool
    branches_tried: int
    branch: Optional[Branch] = None

    @property
    def verdict(self) -> str:
        return "counter-model verified" if self.verified else UNCERTIFIED


def extract_countermodel(t: FailureTrace, branch_limit: int = 10_000) -> CountermodelResult:
    """Build chain models from failed branches and keep the first one that
    really falsifies the root sequent."""
    if not t.exhausted:
        raise ValueError("counter-model extraction needs an exhaustive failure trace")
    target = sequent_formula(t.sequent)
    tried = 0
    for branch in failed_branches(t, branch_limit):
        tried += 1
        start, end = branch.world_valuations(False), branch.world_valuations(True)
        candidates = []
        for vals in (_dedupe(start), _dedupe(end), start, end):
            if vals not in candidates:
                candidates.append(vals)
        for vals in candidates:
            m = _chain(vals)
            if not valid_in(m, target):
                return CountermodelResult(m, True, tried, branch)
    return CountermodelResult(None, False, tried)


# ---------------------------------------------------------------- files

def sequent_proof_to_json(p: SequentProof) -> dict:
    return {
        "rule": p.rule.value,
        "sequent": str(p.sequent),
        "principal": None if p.principal is None else to_text(p.principal),
        "premises": [sequent_proof_to_json(q) for q in p.premises],
    }


def sequent_proof_from_json(d: Mapping) -> SequentProof:
    try:
        principal = d.get("principal")
        return SequentProof(
            Rule(d["rule"]),
            parse_sequent(d["sequent"]),
            None if principal is None else parse(principal),
            tuple(sequent_proof_from_json(q) for q in d.get("premises", [])),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed sequent proof: {exc}") from exc


def trace_summary(t: FailureTrace, max_depth: int = 6) -> dict:
    """JSON-ready view of the top of a failure trace."""
    def node(n: TraceNode, depth):
        d = {"left": [to_text(f) for f in n.left], "focus": to_text(n.focus), "status": n.status}
        if depth < max_depth and n.attempts:
            d["attempts"] = [
                {"rule": a.rule.value,
                 "principal": None if a.principal is None else to_text(a.principal),
                 "status": a.status,
                 "premises": [node(c, depth + 1) for c in a.premises]}
                for a in n.attempts
            ]
        return d

    return {"sequent": str(t.sequent), "variant": t.variant.value, "exhausted": t.exhausted,
            "nodes": t.nodes, "tree": node(t.root, 0)}
