import json
from itertools import permutations

import pytest

from dpp.automata import is_consistent
from dpp.corpus import brute_force_sat, corpus, encode_sat
from dpp.hypothesis import Caps, compute_core_K
from dpp.model import OUTPUT, WRITE, Action, ExtWord, FragmentMismatch, classify, is_target
from dpp.oracle import ExploreBounds, enumerate_ext, explore_multiset, replay_run
from dpp.solver import (
    REACHABLE, RESOURCE, UNREACHABLE, choose_algorithm, export_cd_system, flatten, import_cd_system,
    levelwise_cores, out_levels, out_of, prefix_set, signature_levels, solve, solve_gen_futures,
    solve_general, solve_simple_futures,
)
from dpp.words import preceq, sig

from conftest import spec_of

ENUM = ExploreBounds(max_children_per_node=3, max_steps=30, max_states=200_000)


def _sound(spec, v):
    assert any(is_target(a, spec) for a in v.labels)
    assert is_consistent(v.labels, spec.globals, spec.values, spec.init_value)


def test_example1(ex1):
    v = solve_general(ex1)
    assert v.status == REACHABLE
    assert Action(WRITE, "g0", "#") in v.witness.body
    assert v.levels <= 2
    _sound(ex1, v)
    assert not v.abstract and replay_run(ex1, v.run, ExploreBounds(4, 4, 60, 8, 20_000))


def test_example2(ex2):
    v = solve_general(ex2)
    assert v.status == REACHABLE
    assert v.witness.body[-1] == Action(OUTPUT, "x", "#")
    _sound(ex2, v)
    assert not v.abstract


def test_no_rules_unreachable():
    v = solve_general(spec_of([]))
    assert v.status == UNREACHABLE and v.levels == 0


def test_pushdown_model(pds_model):
    v = solve_general(pds_model)
    assert v.status == REACHABLE
    _sound(pds_model, v)


def test_resource_caps_reported(ex2):
    v = solve_general(ex2, Caps(max_states=5))
    assert v.status == RESOURCE and "states" in v.detail


def test_level0_is_core_under_empty(ex1):
    L0 = levelwise_cores(ex1, upto=0)[0]
    assert set(L0) == {w for h in ex1.heads for w in compute_core_K(ex1, frozenset(), h)}


def test_levels_are_antichains_and_dominate():
    for s in corpus(41, "general", 20):
        lv = levelwise_cores(s, upto=3).levels
        for L in lv:
            for u in L:
                assert not any(w != u and preceq(w, u) for w in L)
        for a, b in zip(lv, lv[1:]):
            assert all(any(preceq(v, u) for v in b) for u in a)


def test_enumerated_behaviors_dominate_levels():
    for s in corpus(42, "general", 20):
        lv = levelwise_cores(s, upto=1).levels
        for k in (0, 1):
            for h in s.heads:
                for w in enumerate_ext(s, h, k, 3, ENUM):
                    assert any(preceq(u, w) for u in lv[k])


def test_stabilization_is_final(ex1, ex2):
    for s in (ex1, ex2):
        c = levelwise_cores(s)
        m = c.stabilized_at
        nxt = levelwise_cores(s, upto=m + 2)
        assert prefix_set(nxt[m + 1]) == prefix_set(c[m]) == prefix_set(nxt[m + 2])


def test_consistent_levels(ex1):
    c = levelwise_cores(ex1, upto=1, consistent=True)
    assert ExtWord("q", (Action(WRITE, "g0", "#"),)) in c[1]


# -- generalized futures -----------------------------------------------------


def test_gen_futures_example2(ex2):
    v = solve_gen_futures(ex2)
    assert v.status == REACHABLE and v.algorithm == "gen-futures"
    assert v.detail  # proviso fails, answer confirmed by the general procedure


def test_gen_futures_signatures_example2(ex2):
    i = lambda v: Action("i", "x", v)
    o = lambda v: Action("o", "x", v)
    listed = {ExtWord("p", (i("0"), o("1"))), ExtWord("p", (i("1"), o("2"))), ExtWord("p", (i("1"), o("0")))}
    lv = signature_levels(ex2)
    for L in (lv[2], lv[lv.stabilized_at]):
        assert {w for w in L if w.head == "p"} and \
            prefix_set(w for w in L if w.head == "p") == prefix_set(listed)
    assert all(sig(w) == w for L in lv.levels for w in L)


def test_gen_futures_rejects_local_writes():
    s = spec_of(["q --w(x,1)--> q"], globals_="")
    with pytest.raises(FragmentMismatch):
        solve_gen_futures(s)


def test_gen_futures_agreement_and_poly_b():
    for s in corpus(43, "gen", 20):
        g = solve_general(s, replay=None).status
        assert solve_gen_futures(s, replay=None).status == g
        assert solve_gen_futures(s, poly_b=True, replay=None).status == g


# -- simple futures ----------------------------------------------------------


def test_out_of_examples():
    o1, o2 = Action(OUTPUT, "x", "1"), Action(OUTPUT, "x", "2")
    assert out_of(ExtWord("p", ())) == {ExtWord("p", ())}
    assert out_of(ExtWord("p", (o1, o2, o1))) == {ExtWord("p", ()), ExtWord("p", (o1,)), ExtWord("p", (o2,))}
    for perm in permutations((o1, o2, o1)):
        assert out_of(ExtWord("p", perm)) == out_of(ExtWord("p", (o1, o2, o1)))
    with pytest.raises(ValueError):
        out_of(ExtWord("p", (Action("i", "x", "1"),)))


def test_sat_examples():
    assert solve_simple_futures(encode_sat(2, [(1, 2), (-1,)])).status == REACHABLE
    assert solve_simple_futures(encode_sat(1, [(1,), (-1,)])).status == UNREACHABLE


def test_sat_guess_mode_and_general():
    import random
    from dpp.corpus import random_3cnf
    rng = random.Random(44)
    for _ in range(10):
        n, cl = random_3cnf(rng, 3, 4)
        s = encode_sat(n, cl)
        want = REACHABLE if brute_force_sat(n, cl) else UNREACHABLE
        assert solve_simple_futures(s, guess=True, replay=None).status == want
        assert solve_general(s, replay=None).status == want


def test_simple_futures_agreement():
    for s in corpus(45, "simple", 20):
        g = solve_general(s, replay=None).status
        assert solve_simple_futures(s, replay=None).status == g
        assert solve_simple_futures(s, guess=True, replay=None).status == g


def test_out_levels_guess_agree():
    for s in corpus(46, "simple", 10):
        assert out_levels(s, upto=3).levels == out_levels(s, upto=3, guess=True).levels


# -- flattening --------------------------------------------------------------


def test_flatten_without_spawns():
    s = spec_of(["q --w(g,#)--> q1"], locals_="")
    f = flatten(s)
    assert [r for r in f.rules if r.label.kind == "spawn"] == [r for r in f.rules if r.src == "init'"]
    assert f.init == "init'"
    assert solve_general(f).status == solve_general(s).status == REACHABLE


def test_flatten_rewrites_spawn():
    s = spec_of(["q --spawn(p)--> q1", "p --w(g,#)--> p"], locals_="")
    f = flatten(s)
    labels = {(r.src, str(r.label), r.dst) for r in f.rules}
    assert ("q", "w(g_sp,@p)", "q1") in labels
    assert ("init'", "spawn(init'')", "q") in labels
    assert ("init''", "r(g_sp,@p)", "p") in labels
    assert set(f.values) == set(s.values) | {"@p"}
    assert solve_general(f).status == solve_general(s).status == REACHABLE


def test_flatten_rejects_locals(ex1):
    with pytest.raises(FragmentMismatch):
        flatten(ex1)


def test_flatten_agreement_and_literal_wakeups():
    for s in corpus(47, "nolocals", 20):
        g = solve_general(s, replay=None).status
        assert solve_general(flatten(s), replay=None).status == g
    for s in corpus(48, "nolocals", 8):
        small = spec_of([f"{r.src} --{r.label}--> {r.dst}" for r in s.rules[:4]], locals_="", init="q0")
        assert solve_general(flatten(small, all_states=True), replay=None).status == \
            solve_general(flatten(small), replay=None).status == solve_general(small, replay=None).status


def _ex1_without_locals():
    return spec_of(["q --spawn(p)--> q1", "q1 --w(g,1)--> q2", "q2 --r(g,2)--> q3", "q3 --r(g,3)--> q4",
                    "q4 --w(g0,#)--> q5", "p --r(g,1)--> p1", "p1 --w(g,2)--> p2", "p1 --w(g,3)--> p2",
                    "p2 --tau--> p"], values="init 1 2 3 #", init_value="init", globals_="g g0",
                   locals_="")


def test_export_leader_contributor():
    s = _ex1_without_locals()
    doc = export_cd_system(flatten(s))
    assert doc["format"] == "dpp-cd/1"
    assert doc["leader"]["init"] == "q" and doc["contributor"]["init"] == "init''"
    assert "g_sp" in doc["globals"]
    back = import_cd_system(json.loads(json.dumps(doc)))
    assert solve_general(back).status == solve_general(flatten(s)).status == solve_general(s).status


def test_export_round_trip_corpus():
    for s in corpus(49, "nolocals", 15):
        f = flatten(s)
        back = import_cd_system(export_cd_system(f))
        assert solve_general(back, replay=None).status == solve_general(f, replay=None).status


def test_export_rejects_non_flat():
    s = spec_of(["q --spawn(p)--> q1", "q1 --spawn(p)--> q"], locals_="")
    with pytest.raises(FragmentMismatch):
        export_cd_system(s)


# -- dispatch and soundness ---------------------------------------------------


def test_choose_algorithm(ex1, ex2):
    assert choose_algorithm(ex1) == "general"
    assert choose_algorithm(ex2) == "general"  # proviso fails
    assert choose_algorithm(encode_sat(1, [(1,)])) == "simple-futures"
    assert choose_algorithm(spec_of(["q --i(x,1)--> q"], globals_="")) == "gen-futures"
    assert choose_algorithm(spec_of([], locals_="")) == "flatten"
    assert solve(encode_sat(1, [(1,)])).algorithm == "simple-futures"


def test_oracle_one_sided():
    b = ExploreBounds(2, 2, 20, 3, 20_000)
    for s in corpus(50, "general", 40):
        v = solve_general(s, replay=None)
        if explore_multiset(s, b).found:
            assert v.status == REACHABLE
        if v.status == REACHABLE:
            _sound(s, v)


def test_replayed_runs_are_valid():
    replayed = 0
    for s in corpus(51, "general", 30):
        v = solve_general(s)
        if v.status == REACHABLE and not v.abstract:
            assert replay_run(s, v.run, ExploreBounds(4, 4, 200, 8, 20_000))
            replayed += 1
    assert replayed > 5
