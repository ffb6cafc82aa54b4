"""Budgeted exhaustive search for normal natural deduction proofs.

Normal proofs are searched goal-first: an implication goal may be
introduced, and any goal may be reached by an elimination chain from a
hypothesis ``d1 -> ... -> dk -> goal`` whose antecedents become subgoals.

A search state is ``(goal, hypotheses in scope)``. Its value is the set of
minimal usage vectors (leaf count per hypothesis formula, each within the
cap) of the normal proofs it admits, kept as an antichain with one witness
proof per vector. States can depend on themselves through elimination
subgoals, so the values are computed as a least fixpoint: repeated passes
in which a state still being expanded contributes its previous value,
until a pass changes nothing or the root gets a proof.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .formula import Formula, to_text
from .nd import Assume, Elim, Intro, Mode, NDProof, assumption_census, check, is_normal

__all__ = ["SearchBudget", "SearchResult", "MinCountResult", "search_normal", "min_assumption_count"]


@dataclass(frozen=True)
class SearchBudget:
    per_formula_assumption_cap: int
    node_cap: Optional[int] = None
    time_cap: Optional[float] = None  # seconds

    def __post_init__(self):
        for name in ("per_formula_assumption_cap", "node_cap"):
            v = getattr(self, name)
            if v is not None and v < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.time_cap is not None and self.time_cap <= 0:
            raise ValueError("time_cap must be positive")


@dataclass
class SearchResult:
    proof: Optional[NDProof]
    exhausted: bool
    nodes: int
    elapsed: float
    passes: int = 0

    @property
    def found(self) -> bool:
        return self.proof is not None

    @property
    def outcome(self) -> str:
        if self.proof is not None:
            return "found"
        return "refuted" if self.exhausted else "truncated"


class _Truncated(Exception):
    pass


# proof skeletons built during search; labels are assigned afterwards
# ("hyp", f) | ("intro", f, body) | ("elim", minor, major)

def _add_minimal(front: list, usage: tuple, proof) -> bool:
    """Insert into an antichain of minimal vectors; True if it was added."""
    for u, _ in front:
        if all(a <= b for a, b in zip(u, usage)):
            return False
    front[:] = [(u, p) for u, p in front if not all(a >= b for a, b in zip(u, usage))]
    front.append((usage, proof))
    return True


class _Searcher:
    def __init__(self, goal: Formula, budget: SearchBudget):
        self.goal = goal
        self.budget = budget
        self.cap = budget.per_formula_assumption_cap
        self.hyps = self._hypothesis_universe(goal)
        self.index = {f: i for i, f in enumerate(self.hyps)}
        n = len(self.hyps)
        self.units = [tuple(int(j == i) for j in range(n)) for i in range(n)]
        # chains[i][g] = antecedents d1..dk with hyps[i] = d1 -> ... -> dk -> g
        self.chains: list[dict[Formula, tuple]] = []
        for h in self.hyps:
            table = {h: ()}
            ants = []
            g = h
            while not g.is_atom:
                ants.append(g.ant)
                g = g.cons
                table[g] = tuple(ants)
            self.chains.append(table)
        self.memo: dict = {}
        self.done: set = set()
        self.active: set = set()
        self.changed = False
        self.nodes = 0
        self.ops = 0
        self.passes = 0
        self.started = time.monotonic()

    @staticmethod
    def _hypothesis_universe(goal):
        """Formulas that can ever be introduced as hypotheses, in canonical order."""
        goals, hyps = {goal}, set()
        work = [("goal", goal)]
        while work:
            kind, f = work.pop()
            if kind == "goal":
                if not f.is_atom and f.ant not in hyps:
                    hyps.add(f.ant)
                    work.append(("hyp", f.ant))
                if not f.is_atom and f.cons not in goals:
                    goals.add(f.cons)
                    work.append(("goal", f.cons))
            else:
                g = f
                while not g.is_atom:
                    if g.ant not in goals:
                        goals.add(g.ant)
                        work.append(("goal", g.ant))
                    g = g.cons
        return sorted(hyps, key=to_text)

    def tick(self):
        self.nodes += 1
        if self.budget.node_cap is not None and self.nodes > self.budget.node_cap:
            raise _Truncated
        self.check_time()

    def check_time(self):
        self.ops += 1
        if self.budget.time_cap is not None and self.ops % 512 == 0:
            if time.monotonic() - self.started > self.budget.time_cap:
                raise _Truncated

    def run(self) -> list:
        while True:
            self.passes += 1
            self.done = set()
            self.changed = False
            front = self.solve(self.goal, 0)
            if front or not self.changed:
                return front

    def solve(self, goal: Formula, ctx: int) -> list:
        key = (goal, ctx)
        if key in self.done or key in self.active:
            return self.memo.get(key, [])
        self.tick()
        self.active.add(key)
        front = list(self.memo.get(key, []))
        grew = False
        if not goal.is_atom:
            nctx = ctx | (1 << self.index[goal.ant])
            for u, body in self.solve(goal.cons, nctx):
                grew |= _add_minimal(front, u, ("intro", goal.ant, body))
        for i, h in enumerate(self.hyps):
            if not ctx >> i & 1:
                continue
            ants = self.chains[i].get(goal)
            if ants is None:
                continue
            partial = [(self.units[i], ("hyp", h))]
            for sub in ants:
                options = self.solve(sub, ctx)
                nxt: list = []
                for acc, proof in partial:
                    for u, p in options:
                        self.check_time()
                        s = tuple(a + b for a, b in zip(acc, u))
                        if max(s) <= self.cap:
                            _add_minimal(nxt, s, ("elim", p, proof))
                partial = nxt
                if not partial:
                    break
            for u, proof in partial:
                grew |= _add_minimal(front, u, proof)
        self.active.discard(key)
        self.done.add(key)
        if grew:
            self.changed = True
        self.memo[key] = front
        return front


def _materialize(skel) -> NDProof:
    counter = [0]

    def build(s, env):
        kind = s[0]
        if kind == "hyp":
            return Assume(s[1], env[s[1]])
        if kind == "elim":
            return Elim(build(s[1], env), build(s[2], env))
        counter[0] += 1
        lab = counter[0]
        return Intro(lab, build(s[2], {**env, s[1]: lab}), hypothesis=s[1])

    return build(skel, {})


def search_normal(goal: Formula, budget: SearchBudget) -> SearchResult:
    """Look for a normal proof of ``goal`` using each formula at most
    ``budget.per_formula_assumption_cap`` times.

    ``exhausted`` is False when a node or time cap stopped the search early.
    """
    s = _Searcher(goal, budget)
    try:
        front = s.run()
    except _Truncated:
        return SearchResult(None, False, s.nodes, time.monotonic() - s.started, s.passes)
    elapsed = time.monotonic() - s.started
    if not front:
        return SearchResult(None, True, s.nodes, elapsed, s.passes)
    proof = _materialize(front[0][1])
    _validate(proof, goal, s.cap)
    return SearchResult(proof, True, s.nodes, elapsed, s.passes)


def _validate(proof: NDProof, goal: Formula, cap: int) -> None:
    j = check(proof, Mode.MINIMAL)
    if j.conclusion is not goal or j.open_assumptions:
        raise AssertionError(f"search produced a proof of {j}, wanted |- {goal}")
    if not is_normal(proof):
        raise AssertionError("search produced a non-normal proof")
    for f, entry in assumption_census(proof).items():
        if entry.total > cap:
            raise AssertionError(f"search used {f} {entry.total} times, cap {cap}")


@dataclass
class MinCountResult:
    count: Optional[int]
    exhausted: bool
    trials: list = field(default_factory=list)  # SearchResult per cap tried


def min_assumption_count(goal: Formula, cap_limit: int, budget: SearchBudget | None = None) -> MinCountResult:
    """Smallest per-formula cap admitting a normal proof, trying caps 1..cap_limit.

    ``exhausted`` is False if some smaller cap was only refuted by a
    truncated search, in which case ``count`` is an upper bound.
    """
    trials = []
    exhaustive = True
    for b in range(1, cap_limit + 1):
        kw = {} if budget is None else {"node_cap": budget.node_cap, "time_cap": budget.time_cap}
        res = search_normal(goal, SearchBudget(b, **kw))
        trials.append(res)
        if res.found:
            return MinCountResult(b, exhaustive, trials)
        exhaustive = exhaustive and res.exhausted
    return MinCountResult(None, exhaustive, trials)
