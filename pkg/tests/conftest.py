import random
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mimpl import nd
from mimpl.formula import Atom, Imp, random_formula
from mimpl.kripke import random_model

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ATOMS = ("A", "B", "C")


def formulas(max_depth: int = 4, pool=ATOMS):
    return st.recursive(st.sampled_from(pool).map(Atom),
                        lambda inner: st.builds(Imp, inner, inner),
                        max_leaves=2 ** max_depth)


def models(max_worlds: int = 4, pool=ATOMS):
    return st.builds(lambda seed, k: random_model(seed, k, pool),
                     st.integers(0, 2 ** 32), st.integers(1, max_worlds))


def random_proof(rng: random.Random, depth: int = 4):
    """A random minimal-logic proof, possibly with detours and open leaves.

    Built top-down from a goal so that every elimination matches. Labels
    come from a per-proof counter so discharges never clash.
    """
    counter = [0]

    def fresh():
        counter[0] += 1
        return counter[0]

    def build(goal, env, d):
        choices = ["leaf"]
        if d > 0:
            choices += ["elim", "detour"]
            if isinstance(goal, Imp):
                choices += ["intro", "intro"]
        kind = rng.choice(choices)
        if kind == "leaf":
            lab = env.get(goal) if rng.random() < 0.7 else None
            return nd.Assume(goal, lab)
        if kind == "intro":
            lab = fresh()
            body = build(goal.cons, {**env, goal.ant: lab}, d - 1)
            return nd.Intro(lab, body, hypothesis=goal.ant)
        a = random_formula(rng, 2)
        major = build(Imp(a, goal), env, d - 1)
        if kind == "detour":
            lab = fresh()
            major = nd.Intro(lab, build(goal, {**env, a: lab}, d - 1), hypothesis=a)
        return nd.Elim(build(a, env, d - 1), major)

    return build(random_formula(rng, 3), {}, depth)


@pytest.fixture
def rng():
    return random.Random(12345)


# one summary line per acceptance criterion
ACCEPTANCE: dict = {}


def record(criterion: str, ok: bool, detail: str = "") -> None:
    ACCEPTANCE[criterion] = (ok and ACCEPTANCE.get(criterion, (True, ""))[0], detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE, key=lambda s: int(s.split()[0])):
        ok, detail = ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
