import random

from dpp.automata import ProductGraph, TargetAutomaton, reachable_states
from dpp.corpus import corpus
from dpp.hypothesis import (
    HypState, HypothesisAutomaton, HypothesisSearch, compute_core_K, extended_process_automaton,
    hyp_successors,
)
from dpp.model import BAR_READ, INPUT, OUTPUT, SPAWN, WRITE, Action, ExtWord, ResourceLimit, filter_project
from dpp.oracle import ExploreBounds, enumerate_ext
from dpp.solver import levelwise_cores
from dpp.words import core_of, is_subword, lift_insert, preceq

from conftest import spec_of

i1, o2, o3 = Action(INPUT, "x", "1"), Action(OUTPUT, "x", "2"), Action(OUTPUT, "x", "3")
ENUM = ExploreBounds(max_children_per_node=3, max_steps=30, max_states=200_000)


def test_barred_read_extends_B(ex1):
    L = [ExtWord("p", (i1, o2))]
    r = HypState("q2", ("1",), frozenset({ExtWord("p", ())}))
    succ = hyp_successors(r, ex1, L)
    want = HypState("q2", ("1",), frozenset({ExtWord("p", ()), ExtWord("p", (i1,))}))
    assert (Action(BAR_READ, "x", "1"), want) in succ


def test_barred_read_needs_parent_value(ex1):
    L = [ExtWord("p", (i1, o2))]
    r = HypState("q2", ("2",), frozenset({ExtWord("p", ())}))
    assert not [a for a, _ in hyp_successors(r, ex1, L) if a.kind == BAR_READ]


def test_spawn_blocked_outside_pref(ex1):
    r = HypState("q", ("init",), frozenset())
    assert not [a for a, _ in hyp_successors(r, ex1, []) if a.kind == SPAWN]
    assert [a for a, _ in hyp_successors(r, ex1, [ExtWord("p", ())]) if a.kind == SPAWN]


def test_example1_root_writes_under_level1(ex1):
    L1 = levelwise_cores(ex1, upto=1)[1]
    search = HypothesisSearch(ex1, L1, consistent=True)
    w = search.witness("q", [TargetAutomaton(ex1.globals, "#")], [0])
    assert w is not None and w.labels[-1] == Action(WRITE, "g0", "#")
    L0 = levelwise_cores(ex1, upto=0)[0]
    assert HypothesisSearch(ex1, frozenset(), consistent=True).witness(
        "q", [TargetAutomaton(ex1.globals, "#")], [0]) is None
    assert ExtWord("q", (Action(WRITE, "g0", "#"),)) in compute_core_K(ex1, L0, "q")


def test_core_of_ruleless_head():
    s = spec_of(["q --spawn(p)--> q"])
    assert compute_core_K(s, frozenset(), "p") == [ExtWord("p", ())]


def _brute_core(spec, head, depth, n):
    return set(core_of(enumerate_ext(spec, head, depth, n, ENUM)))


def test_example1_level0_core_vs_enumeration(ex1):
    for head in ("p", "q"):
        got = set(compute_core_K(ex1, frozenset(), head))
        assert max(len(w.body) for w in got) <= 4
        assert got == _brute_core(ex1, head, 0, 4)
    assert set(compute_core_K(ex1, frozenset(), "p")) == {
        ExtWord("p", ()), ExtWord("p", (i1,)), ExtWord("p", (i1, o2)), ExtWord("p", (i1, o3)),
        ExtWord("p", (i1, o2, i1, o3)), ExtWord("p", (i1, o3, i1, o2))}


def test_level0_cores_vs_enumeration_on_corpus():
    """Short core words equal the core of enumerated short depth-0 behaviors."""
    n = 4
    for s in corpus(31, "general", 40):
        for head in s.heads:
            got = {w for w in compute_core_K(s, frozenset(), head) if len(w.body) <= n}
            assert got == _brute_core(s, head, 0, n)


def test_level1_cores_vs_enumeration_on_corpus():
    n = 3
    for s in corpus(32, "general", 25):
        L0 = levelwise_cores(s, upto=0)[0]
        for head in s.heads:
            got = {w for w in compute_core_K(s, L0, head) if len(w.body) <= n}
            assert got == _brute_core(s, head, 1, n)


def test_consistent_core_is_subset_up_to_domination(ex1):
    plain = compute_core_K(ex1, frozenset(), "q")
    cons = compute_core_K(ex1, frozenset(), "q", restrict_consistent=True)
    for w in cons:
        assert any(preceq(u, w) for u in plain)


def _targets(spec, L, full_subsets=False, keep_leaves=False):
    search = HypothesisSearch(spec, L, consistent=True, full_subsets=full_subsets)
    if keep_leaves:
        search.hyp = HypothesisAutomaton(spec, L, full_subsets, keep_leaves=True)
        search.factors[0] = search.hyp
    w = search.witness(spec.init, [TargetAutomaton(spec.globals, spec.target)], [0])
    return w is not None


def test_max_B_matches_subset_choice():
    for s in corpus(33, "general", 25):
        for L in levelwise_cores(s, upto=2).levels:
            base = _targets(s, L)
            assert _targets(s, L, full_subsets=True) == base
            assert _targets(s, L, keep_leaves=True) == base


def _pairs(spec, L):
    hyp = HypothesisAutomaton(spec, L)
    g = ProductGraph(extended_process_automaton(spec), hyp)
    return {(q, lam) for q, (lam, _) in reachable_states(g, (spec.init, hyp.initial()), 50_000)}


def test_core_and_lifted_hypotheses_reach_same_pairs():
    rng = random.Random(34)
    compared = 0
    for s in corpus(34, "general", 25):
        L = levelwise_cores(s, upto=1)[1]
        big = set(L) | {lift_insert(w, rng, rng.randint(1, 2)) for w in L}
        assert set(core_of(big)) == set(L)
        try:
            lifted = _pairs(s, big)
        except ResourceLimit:
            continue
        assert lifted == _pairs(s, L)
        compared += 1
    assert compared >= 20


def _random_hypstates(spec, L, rng, n=6):
    r = HypState(spec.init, spec.lambda_init, frozenset())
    run = []
    out = [(r, ())]
    for _ in range(n):
        succ = hyp_successors(r, spec, L, full_subsets=True)
        if not succ:
            break
        a, r = rng.choice(succ)
        run.append(a)
        out.append((r, tuple(run)))
    return out


def test_monotone_in_hypothesis():
    rng = random.Random(35)
    for s in corpus(35, "general", 25):
        L2 = set(levelwise_cores(s, upto=1)[1])
        L1 = {w for w in L2 if rng.random() < 0.6}
        for r, _ in _random_hypstates(s, L1, rng):
            small = set(hyp_successors(r, s, L1, full_subsets=True))
            large = set(hyp_successors(r, s, L2, full_subsets=True))
            assert small <= large


def test_B_is_subword_of_filtered_run():
    rng = random.Random(36)
    for s in corpus(36, "general", 30):
        L = levelwise_cores(s, upto=1)[1]
        g = frozenset(s.globals)
        for r, run in _random_hypstates(s, L, rng, 10):
            f = filter_project(run, g)
            for w in r.B:
                assert is_subword((Action(SPAWN, None, w.head),) + w.body, f)
