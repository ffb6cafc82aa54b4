import json
import random
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_proof
from mimpl import nd
from mimpl.formula import Atom, Imp, parse, substitute
from mimpl.kripke import random_model, satisfies
from mimpl.nd import Assume, Elim, Intro, Mode, Peirce, ProofError

A, B = Atom("A"), Atom("B")


def identity():
    return Intro(1, Assume(A, 1))


def test_identity():
    j = nd.check(identity())
    assert j.conclusion is parse("A->A") and not j.open_assumptions
    assert nd.is_normal(identity())


def test_open_assumptions_counted():
    p = Elim(Assume(A), Assume(Imp(A, B)))
    j = nd.check(p)
    assert j.conclusion is B
    assert j.open_assumptions == Counter({A: 1, Imp(A, B): 1})


def test_vacuous_intro_needs_hypothesis():
    with pytest.raises(ProofError):
        nd.check(Intro(1, Assume(A)))
    j = nd.check(Intro(1, Assume(A), hypothesis=B))
    assert j.conclusion is Imp(B, A)


@pytest.mark.parametrize("bad", [
    Elim(Assume(B), Assume(Imp(A, B))),                         # minor mismatch
    Elim(Assume(A), Assume(B)),                                 # major not an implication
    Intro(1, Elim(Assume(A, 1), Assume(Imp(B, A), 1))),         # one label, two formulas
    Intro(1, Intro(1, Assume(A, 1))),                           # nested rediscard
    Intro(1, Assume(A, 1), hypothesis=B),                       # hypothesis disagrees
])
def test_rejects(bad):
    with pytest.raises(ProofError):
        nd.check(bad)


def test_unbound_label_rejected_unless_allowed():
    p = Assume(A, 7)
    with pytest.raises(ProofError):
        nd.check(p)
    assert nd.check(p, allow_open_labels=True).open_assumptions == Counter({A: 1})


def test_peirce_only_classical():
    pp = Intro(1, Peirce(2, Elim(Assume(Imp(A, B), 2), Assume(parse("(A->B)->A"), 1))))
    with pytest.raises(ProofError):
        nd.check(pp, Mode.MINIMAL)
    assert nd.check(pp, Mode.CLASSICAL).conclusion is parse("((A->B)->A)->A")
    with pytest.raises(ProofError):
        nd.is_normal(pp)


def test_detour_is_not_normal():
    p = Elim(Assume(A), Intro(1, Assume(A, 1)))
    assert nd.check(p).conclusion is A
    assert not nd.is_normal(p)


def test_census_split_by_discharger():
    body = Elim(Assume(A, 1), Elim(Assume(A, 1), Assume(parse("A->A->B"), 2)))
    p = Intro(2, Intro(1, body))
    c = nd.assumption_census(p)
    assert c[A].discharged_by == {1: 2} and c[A].open_count == 0
    assert c[parse("A->A->B")].total == 1


def test_census_counts_tree_occurrences_of_shared_nodes():
    leaf = Assume(A, 1)
    p = Intro(1, Elim(leaf, Elim(leaf, Assume(parse("A->A->B")))))
    assert nd.assumption_census(p)[A].discharged_by == {1: 2}
    assert nd.leaf_count(p) == 3


def test_relabel():
    p = nd.relabel(identity(), {1: 9})
    assert p.label == 9 and p.body.label == 9
    assert nd.check(p).conclusion is parse("A->A")


def test_json_roundtrip(tmp_path):
    p = Intro(3, Assume(A), hypothesis=B)
    assert nd.proof_from_json(json.loads(json.dumps(nd.proof_to_json(p)))) == p
    nd.dump_proof(identity(), tmp_path / "p.json")
    assert nd.load_proof(tmp_path / "p.json") == identity()


def test_json_rejects_unknown_kind():
    with pytest.raises(ProofError):
        nd.proof_from_json({"kind": "cut"})


def test_dag_stats_counts_structure_not_objects():
    p = Elim(Assume(A), Assume(Imp(A, A)))
    q = Elim(p, Assume(Imp(A, A)))
    s = nd.dag_stats(q)
    assert s.tree_nodes == 5
    assert s.distinct_subproofs == 4


def test_deep_proof_no_recursion_limit():
    p = Assume(A, 1)
    for k in range(2, 5001):
        p = Intro(k, p, hypothesis=B)
    p = Intro(1, p)
    assert nd.dag_stats(p).tree_nodes == 5001
    nd.check(p)


def _proofs(n, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        p = random_proof(rng)
        nd.check(p)
        out.append(p)
    return out


def _sub(rng):
    from mimpl.formula import random_formula
    return {a: random_formula(rng, 2) for a in "ABC" if rng.random() < 0.6}


def test_fact_on_random_proofs():
    """Substitution keeps proofs checkable, maps the judgement, and keeps normal ones normal."""
    rng = random.Random(99)
    for p in _proofs(500, 7):
        s = _sub(rng)
        q = nd.substitute_proof(p, s)
        j, k = nd.check(p), nd.check(q)
        assert k.conclusion is substitute(j.conclusion, s)
        want = Counter()
        for f, c in j.open_assumptions.items():
            want[substitute(f, s)] += c
        assert k.open_assumptions == want
        assert nd.is_normal(q) == nd.is_normal(p)


@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_soundness_on_random_models(seed, mseed):
    p = random_proof(random.Random(seed))
    j = nd.check(p)
    m = random_model(mseed, 4)
    for w in range(m.size):
        if all(satisfies(m, w, g) for g in j.open_assumptions):
            assert satisfies(m, w, j.conclusion)


@given(st.integers(0, 10 ** 6))
def test_json_roundtrip_random(seed):
    p = random_proof(random.Random(seed))
    q = nd.proof_from_json(json.loads(json.dumps(nd.proof_to_json(p))))
    assert nd.check(q) == nd.check(p)
    assert nd.dag_stats(q).tree_nodes == nd.dag_stats(p).tree_nodes
