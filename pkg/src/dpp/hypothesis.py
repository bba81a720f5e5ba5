"""Processes running under a hypothesis about their children.

Instead of simulating subtrees, a node assumes its children behave
according to a finite language ``L`` of spawn-headed external words.  The
node's configuration is ``(state, lambda, B)`` where ``B`` collects the
prefixes of words in ``L`` that children are known to have produced so
far.  A child action ``b`` is possible when some word in ``B`` extends by
``b`` inside pref(L).

Every element of ``B`` that can be extended is extended at once.  Because a
larger ``B`` never disables a move, this yields exactly the label sequences
of the subset-choice semantics while keeping the ``B`` component a
function of the run (``full_subsets=True`` gives the literal variant, used
in differential tests).  Words of ``L`` themselves can never be extended,
so by default they are not stored in ``B`` at all.
"""

import time
from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

from .automata import (
    ConsistencyAutomaton, ExtEqualsAutomaton, FiniteAutomaton, FiniteProduct, LazyFactor,
    NotDominatingAnyAutomaton, PushdownAutomaton, alphabet_extend, nonempty_witness, product_with_finite,
)
from .model import (
    BAR_READ, BAR_WRITE, INPUT, OUTPUT, READ, SPAWN, TAU, WRITE, Action, ExtWord,
    ResourceLimit, ext_letter, ext_project, word_key,
)
from .words import PrefixTrie, minimal_candidates


@dataclass(frozen=True)
class Caps:
    max_levels: int = 50
    max_core_iterations: int = 2_000
    max_states: int = 500_000
    max_candidates: int = 100_000
    max_seconds: float | None = 120.0

    def deadline(self):
        return None if self.max_seconds is None else time.monotonic() + self.max_seconds


class HypState(NamedTuple):
    state: object
    lam: tuple
    B: frozenset


def as_trie(L):
    if isinstance(L, PrefixTrie):
        return L
    for w in L:
        if not isinstance(w, ExtWord):
            raise ValueError(f"hypothesis words must be spawn-headed, got {w!r}")
        for a in w.body:
            if a.kind not in (READ, WRITE, INPUT, OUTPUT):
                raise ValueError(f"hypothesis word {w} carries a non-external action {a}")
    return PrefixTrie(L)


class HypothesisAutomaton(LazyFactor):
    """The finite automaton over ``(lambda, B)`` states; ``B`` holds trie node ids."""

    def __init__(self, spec, L, full_subsets=False, keep_leaves=False):
        self.spec = spec
        self.trie = as_trie(L)
        self.full_subsets = full_subsets
        inner = {n for n, _ in self.trie.child}
        self.keep = None if keep_leaves else inner
        self.globals = frozenset(spec.globals)
        self.pos = {x: i for i, x in enumerate(spec.locals)}
        self._ext = {}

    def initial(self):
        return (self.spec.lambda_init, frozenset())

    def _extensions(self, B, b):
        key = (B, b)
        hit = self._ext.get(key)
        if hit is None:
            child = self.trie.child
            hit = tuple(sorted((n, child[(n, b)]) for n in B if (n, b) in child))
            if self.keep is not None:
                hit = tuple((n, t if t in self.keep else None) for n, t in hit)
            self._ext[key] = hit
        return hit

    def _grow(self, lam, B, b):
        ext = self._extensions(B, b)
        if not ext:
            return ()
        if not self.full_subsets:
            return ((lam, B.union(t for _, t in ext if t is not None)),)
        out = set()
        for k in range(1, len(ext) + 1):
            for pick in combinations(ext, k):
                out.add((lam, B.union(t for _, t in pick if t is not None)))
        return tuple(out)

    def step(self, state, a):
        lam, B = state
        k = a.kind
        if k == TAU:
            return (state,)
        if k == SPAWN:
            node = self.trie.root.get(a.val)
            if node is None:
                return ()
            if self.keep is not None and node not in self.keep:
                return (state,)
            return ((lam, B | {node}),)
        if a.var in self.globals:
            if k in (READ, WRITE):
                return (state,)
            return self._grow(lam, B, ext_letter(a, self.globals))
        if k in (INPUT, OUTPUT):
            return (state,)
        i = self.pos[a.var]
        if k == READ:
            return (state,) if lam[i] == a.val else ()
        if k == WRITE:
            return ((lam[:i] + (a.val,) + lam[i + 1:], B),)
        if k == BAR_READ:
            if lam[i] != a.val:
                return ()
            return self._grow(lam, B, Action(INPUT, a.var, a.val))
        new_lam = lam[:i] + (a.val,) + lam[i + 1:]
        return self._grow(new_lam, B, Action(OUTPUT, a.var, a.val))


def hyp_successors(r, spec, L, full_subsets=False):
    """All moves of a HypState under hypothesis ``L``; ``B`` as a set of words."""
    aut = HypothesisAutomaton(spec, L, full_subsets, keep_leaves=True)
    trie = aut.trie
    B = frozenset(trie.node(w) for w in r.B)
    if None in B:
        raise ValueError("B is not contained in pref(L)")
    out = []
    moves = [(a, q2) for a, q2, _ in spec.successors(r.state)]
    moves += [(a, r.state) for a in spec.barred_alphabet()]
    for a, q2 in moves:
        for lam, B2 in aut.step((r.lam, B), a):
            out.append((a, HypState(q2, lam, frozenset(trie.words[n] for n in B2))))
    return out


def process_automaton(spec):
    """The automaton associated with a process (every state accepting)."""
    alphabet = {r.label for r in spec.rules}
    if spec.kind == "finite":
        states = {spec.init} | {r.src for r in spec.rules} | {r.dst for r in spec.rules}
        states |= set(spec.spawn_targets)
        return FiniteAutomaton(states, alphabet, [(r.src, r.label, r.dst) for r in spec.rules], states)
    controls = {spec.init[0]} | {r.src for r in spec.rules} | {r.dst for r in spec.rules}
    controls |= {t[0] for t in spec.spawn_targets}
    return PushdownAutomaton(controls, spec.stack_alphabet, alphabet, spec.rules, lambda c: True)


def extended_process_automaton(spec):
    return alphabet_extend(process_automaton(spec), spec.barred_alphabet())


def start_config(spec, head, fstate):
    """Start of a product of the process automaton with finite factors."""
    if spec.kind == "finite":
        return (head, fstate)
    control, stack = head
    return ((control, fstate), stack)


class HypothesisSearch:
    """Emptiness queries on A'_S x A_L x (extra finite factors)."""

    def __init__(self, spec, L, consistent=False, caps=Caps(), full_subsets=False):
        self.spec = spec
        self.caps = caps
        self.base = extended_process_automaton(spec)
        self.hyp = HypothesisAutomaton(spec, L, full_subsets)
        self.factors = [self.hyp]
        self.starts = [self.hyp.initial()]
        if consistent:
            c = ConsistencyAutomaton(spec.globals, spec.values, spec.init_value)
            self.factors.append(c)
            self.starts.append(c.initial())

    def witness(self, head, extra=(), extra_starts=(), deadline=None):
        fa = FiniteProduct(self.factors + list(extra))
        aut = product_with_finite(self.base, fa)
        start = start_config(self.spec, head, tuple(self.starts) + tuple(extra_starts))
        return nonempty_witness(aut, start, self.caps.max_states, deadline)


def compute_core_K(spec, L, head, restrict_consistent=False, caps=Caps(), deadline=None,
                   on_word=None):
    """Core of the ext-behaviors of ``head`` running under hypothesis ``L``.

    Repeatedly find some behavior not dominating any word found so far,
    shrink it to a minimal word that is still a behavior, and exclude
    everything above that word.  ``on_word`` sees the list of words found
    so far after each addition.
    """
    search = HypothesisSearch(spec, L, restrict_consistent, caps)
    g = frozenset(spec.globals)
    if deadline is None:
        deadline = caps.deadline()
    found = []
    while True:
        if len(found) >= caps.max_core_iterations:
            raise ResourceLimit(f"more than {caps.max_core_iterations} core words for head {head}")
        nd = NotDominatingAnyAutomaton([b.body for b in found], g)
        w = search.witness(head, [nd], [nd.initial()], deadline)
        if w is None:
            break
        e = ExtWord(head, ext_project(w.labels, g))
        for cand in minimal_candidates(e, caps.max_candidates):
            extra = [nd, ExtEqualsAutomaton(cand.body, g)]
            if search.witness(head, extra, [nd.initial(), 0], deadline) is not None:
                found.append(cand)
                if on_word is not None:
                    on_word(found)
                break
        else:
            raise AssertionError("a behavior has no minimal candidate below it")
    return sorted(found, key=word_key)
