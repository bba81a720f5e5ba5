"""Admissible automata: finite automata and pushdown systems.

Both kinds support the three operations the decision procedure needs:
emptiness with a witness, extension of the alphabet by self-loops, and the
synchronized product with a finite automaton.  Finite automata are searched
breadth-first.  Pushdown systems are decided by pre* saturation of a
P-automaton whose added transitions remember how they arose, so a witness
run can be rebuilt.

Finite factors used in products only need ``step(state, label)`` and
``is_accepting(state)``; letters a factor does not care about are
self-loops.  Such factors are evaluated lazily, so only the reachable part
of a product is ever built.
"""

import time
from collections import deque
from dataclasses import dataclass
from itertools import product as cartesian

from .model import (
    BAR_READ, BAR_WRITE, OUTPUT, READ, WRITE, Action, ResourceLimit, Rule,
    ext_letter, format_state,
)


class AlphabetError(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    labels: tuple
    trace: tuple


# ---------------------------------------------------------------------------
# finite automata


class FiniteAutomaton:
    """Explicit automaton ``(states, alphabet, transitions, accepting)``.

    There is no designated initial state; searches take a start state.
    """

    def __init__(self, states, alphabet, transitions, accepting):
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet)
        self.transitions = tuple(transitions)
        self.accepting = frozenset(accepting)
        self._out = {}
        self._step = {}
        for rid, (s, a, t) in enumerate(self.transitions):
            if s not in self.states or t not in self.states:
                raise ValueError(f"transition {s} -{a}-> {t} uses an undeclared state")
            if a not in self.alphabet:
                raise ValueError(f"transition label {a} not in the alphabet")
            self._out.setdefault(s, []).append((a, t, rid))
            self._step.setdefault((s, a), []).append(t)

    def successors(self, state):
        return self._out.get(state, ())

    def step(self, state, label):
        return self._step.get((state, label), ())

    def is_accepting(self, state):
        return state in self.accepting

    def to_dot(self, name="A"):
        ids = {s: f"s{i}" for i, s in enumerate(sorted(self.states, key=repr))}
        out = [f"digraph {name} {{", "  rankdir=LR;"]
        for s, i in ids.items():
            shape = "doublecircle" if s in self.accepting else "circle"
            out.append(f'  {i} [label="{_dot_escape(s)}", shape={shape}];')
        for s, a, t in self.transitions:
            out.append(f'  {ids[s]} -> {ids[t]} [label="{_dot_escape(a)}"];')
        out.append("}")
        return "\n".join(out)


def _dot_escape(x):
    if isinstance(x, Action):
        x = str(x)
    elif not isinstance(x, str):
        x = format_state(x) if isinstance(x, tuple) and len(x) == 2 and isinstance(x[1], tuple) else repr(x)
    return x.replace('"', '\\"')


class LazyFactor:
    """Base for finite automata given by a step function."""

    alphabet = None

    def step(self, state, label):
        raise NotImplementedError

    def is_accepting(self, state):
        return True

    def materialize(self, start, alphabet):
        """Explicit FiniteAutomaton of the part reachable from ``start``."""
        alphabet = tuple(alphabet)
        seen = {start}
        queue = deque([start])
        trans = []
        while queue:
            s = queue.popleft()
            for a in alphabet:
                for t in self.step(s, a):
                    trans.append((s, a, t))
                    if t not in seen:
                        seen.add(t)
                        queue.append(t)
        return FiniteAutomaton(seen, alphabet, trans, [s for s in seen if self.is_accepting(s)])


class FiniteProduct(LazyFactor):
    """Synchronized product of several finite factors; states are tuples."""

    def __init__(self, factors):
        self.factors = tuple(factors)

    def step(self, state, label):
        options = []
        for f, s in zip(self.factors, state):
            nxt = f.step(s, label)
            if not nxt:
                return ()
            options.append(nxt)
        if all(len(o) == 1 for o in options):
            return (tuple(o[0] for o in options),)
        return tuple(cartesian(*options))

    def is_accepting(self, state):
        return all(f.is_accepting(s) for f, s in zip(self.factors, state))


class ConsistencyAutomaton(LazyFactor):
    """Tracks, per global, whether it is untouched (None) or its last value.

    A read of ``v`` is allowed right after a read or write of ``v``, or as
    the first operation on the variable when ``v`` is the initial value.
    """

    def __init__(self, globals_, values, v_init):
        self.globals = tuple(globals_)
        self.values = tuple(values)
        self.v_init = v_init
        self._pos = {g: i for i, g in enumerate(self.globals)}

    def initial(self):
        return (None,) * len(self.globals)

    def step(self, state, label):
        i = self._pos.get(label.var)
        if i is None or label.kind not in (READ, BAR_READ, WRITE, BAR_WRITE):
            return (state,)
        if label.kind in (READ, BAR_READ):
            cur = state[i]
            if cur != label.val and not (cur is None and label.val == self.v_init):
                return ()
        if state[i] == label.val:
            return (state,)
        return (state[:i] + (label.val,) + state[i + 1:],)


def consistency_automaton(globals_, values, v_init, alphabet=None):
    """Consistency monitor; materialized over ``alphabet`` when one is given."""
    c = ConsistencyAutomaton(globals_, values, v_init)
    if alphabet is None:
        return c
    return c.materialize(c.initial(), alphabet)


def is_consistent(word, globals_, values, v_init):
    c = ConsistencyAutomaton(globals_, values, v_init)
    s = c.initial()
    for a in word:
        nxt = c.step(s, a)
        if not nxt:
            return False
        s = nxt[0]
    return True


class ExtEqualsAutomaton(LazyFactor):
    """Line automaton accepting the words whose ext-projection is ``beta``."""

    def __init__(self, beta, globals_):
        self.beta = tuple(beta)
        self.globals = globals_

    def step(self, i, label):
        e = ext_letter(label, self.globals)
        if e is None:
            return (i,)
        if i < len(self.beta) and self.beta[i] == e:
            return (i + 1,)
        return ()

    def is_accepting(self, i):
        return i == len(self.beta)


def ext_equals_automaton(beta, globals_):
    return ExtEqualsAutomaton(beta, globals_)


_DEAD = "dead"


class NotDominatingAutomaton(LazyFactor):
    """Accepts the words ``a`` with ``beta`` not below ``ext(a)`` in the lift order.

    Lift membership is deterministic: the signature letters of ``beta`` must
    appear in order as first occurrences, and each block of ``beta`` must
    embed greedily into the matching block of the read word.  The state is
    (letters seen, progress in the current block) or dead.
    """

    def __init__(self, beta_body, globals_):
        from .words import canonical_decomposition

        self.letters, self.blocks = canonical_decomposition(tuple(beta_body))
        self.globals = globals_

    def initial(self):
        return (0, 0)

    def step(self, state, label):
        e = ext_letter(label, self.globals)
        if e is None or state == _DEAD:
            return (state,)
        i, j = state
        if i < len(self.letters) and e == self.letters[i]:
            if j == len(self.blocks[i]):
                return ((i + 1, 0),)
            return (_DEAD,)
        if e in self.letters[:i]:
            block = self.blocks[i]
            if j < len(block) and block[j] == e:
                return ((i, j + 1),)
            return (state,)
        return (_DEAD,)

    def in_lift(self, state):
        return state != _DEAD and state[0] == len(self.letters) and state[1] == len(self.blocks[-1])

    def is_accepting(self, state):
        return not self.in_lift(state)


class NotDominatingAnyAutomaton(LazyFactor):
    """Accepts the words dominating none of ``betas``; same language as the
    product of the individual :class:`NotDominatingAutomaton`.

    The state is the signature read so far plus, for each beta whose
    signature still starts with it, the progress in its current block.
    """

    def __init__(self, betas, globals_):
        from .words import canonical_decomposition

        self.decomp = [canonical_decomposition(tuple(b)) for b in betas]
        self.globals = globals_

    def initial(self):
        return ((), tuple((k, 0) for k in range(len(self.decomp))))

    def step(self, state, label):
        e = ext_letter(label, self.globals)
        if e is None:
            return (state,)
        sig, alive = state
        i = len(sig)
        out = []
        if e in sig:
            for k, j in alive:
                block = self.decomp[k][1][i]
                out.append((k, j + 1) if j < len(block) and block[j] == e else (k, j))
            return ((sig, tuple(out)),)
        for k, j in alive:
            letters, blocks = self.decomp[k]
            if i < len(letters) and letters[i] == e and j == len(blocks[i]):
                out.append((k, 0))
        return ((sig + (e,), tuple(out)),)

    def is_accepting(self, state):
        sig, alive = state
        i = len(sig)
        for k, j in alive:
            letters, blocks = self.decomp[k]
            if i == len(letters) and j == len(blocks[i]):
                return False
        return True


def not_dominating_automaton(beta, globals_):
    """N_beta for a body (the spawn head is fixed by the caller's product)."""
    body = beta.body if hasattr(beta, "body") else beta
    return NotDominatingAutomaton(body, globals_)


class TargetAutomaton(LazyFactor):
    """Two states: 1 once a root-level write/output of the target happened."""

    def __init__(self, globals_, target):
        self.globals = globals_
        self.target = target

    def step(self, state, label):
        if state:
            return (1,)
        e = ext_letter(label, self.globals)
        if e is not None and e.val == self.target and e.kind in (WRITE, OUTPUT):
            return (1,)
        return (0,)

    def is_accepting(self, state):
        return state == 1


# ---------------------------------------------------------------------------
# graphs: the left operand of products


class ExtendedGraph:
    """A finite graph with extra self-loop letters on every state."""

    def __init__(self, base, extra):
        self.base = base
        self.extra = tuple(extra)
        self.alphabet = None if base.alphabet is None else base.alphabet | frozenset(extra)

    def successors(self, state):
        out = list(self.base.successors(state))
        out.extend((a, state, None) for a in self.extra)
        return out

    def is_accepting(self, state):
        return self.base.is_accepting(state)


class ProductGraph:
    """Finite graph times a finite factor, explored lazily."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.alphabet = left.alphabet

    def successors(self, state):
        l, r = state
        step = self.right.step
        out = []
        for a, l2, rid in self.left.successors(l):
            for r2 in step(r, a):
                out.append((a, (l2, r2), rid))
        return out

    def is_accepting(self, state):
        return self.left.is_accepting(state[0]) and self.right.is_accepting(state[1])


class PushdownAutomaton:
    """Pushdown system with control-based acceptance.

    Rules are :class:`Rule` tuples ``(id, src, pop, label, dst, push)``
    with ``len(pop) <= 1``; a pop-0 rule applies to every configuration of
    its control, including the empty stack.
    """

    def __init__(self, controls, stack_alphabet, alphabet, rules, accepting):
        self.controls = frozenset(controls)
        self.stack_alphabet = tuple(stack_alphabet)
        self.alphabet = frozenset(alphabet)
        self.rules = tuple(rules)
        self._accepting = accepting
        self._index = {}
        for r in self.rules:
            if len(r.pop) > 1:
                raise ValueError("pop words longer than one symbol")
            self._index.setdefault(r.src, []).append(r)

    def rules_from(self, control):
        return self._index.get(control, ())

    def is_accepting(self, control):
        return self._accepting(control) if callable(self._accepting) else control in self._accepting

    def to_dot(self, name="P"):
        out = [f"digraph {name} {{", "  rankdir=LR;"]
        for c in sorted(self.controls, key=repr):
            shape = "doublecircle" if self.is_accepting(c) else "circle"
            out.append(f'  "{c}" [shape={shape}];')
        for r in self.rules:
            lab = f"{' '.join(r.pop)} / {r.label} / {' '.join(r.push)}"
            out.append(f'  "{r.src}" -> "{r.dst}" [label="{_dot_escape(lab)}"];')
        out.append("}")
        return "\n".join(out)


class ExtendedPushdown:
    def __init__(self, base, extra):
        self.base = base
        self.extra = tuple(extra)
        self.stack_alphabet = base.stack_alphabet
        self.alphabet = None if base.alphabet is None else base.alphabet | frozenset(extra)

    def rules_from(self, control):
        out = list(self.base.rules_from(control))
        out.extend(Rule(None, control, (), a, control, ()) for a in self.extra)
        return out

    def is_accepting(self, control):
        return self.base.is_accepting(control)


class PushdownProduct:
    """Pushdown system times a finite factor; controls become pairs."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        self.stack_alphabet = left.stack_alphabet
        self.alphabet = left.alphabet

    def rules_from(self, control):
        c, f = control
        out = []
        for r in self.left.rules_from(c):
            for f2 in self.right.step(f, r.label):
                out.append(Rule(r.id, control, r.pop, r.label, (r.dst, f2), r.push))
        return out

    def is_accepting(self, control):
        return self.left.is_accepting(control[0]) and self.right.is_accepting(control[1])


def is_pushdown(aut):
    return hasattr(aut, "rules_from")


def alphabet_extend(aut, extra):
    extra = tuple(extra)
    alphabet = getattr(aut, "alphabet", None)
    if alphabet is not None and alphabet & frozenset(extra):
        raise AlphabetError(f"extension overlaps the alphabet: {sorted(map(str, alphabet & frozenset(extra)))}")
    if not extra:
        return aut
    if isinstance(aut, FiniteAutomaton):
        trans = list(aut.transitions) + [(s, a, s) for s in sorted(aut.states, key=repr) for a in extra]
        return FiniteAutomaton(aut.states, aut.alphabet | frozenset(extra), trans, aut.accepting)
    if is_pushdown(aut):
        return ExtendedPushdown(aut, extra)
    return ExtendedGraph(aut, extra)


def product_with_finite(aut, fa):
    a1 = getattr(aut, "alphabet", None)
    a2 = getattr(fa, "alphabet", None)
    if a1 is not None and a2 is not None and a1 != a2:
        raise AlphabetError("product of automata over different alphabets")
    if is_pushdown(aut):
        return PushdownProduct(aut, fa)
    return ProductGraph(aut, fa)


# ---------------------------------------------------------------------------
# emptiness


def check_deadline(deadline):
    if deadline is not None and time.monotonic() > deadline:
        raise ResourceLimit("time limit exceeded")


def nonempty_witness(aut, start, max_states=None, deadline=None):
    """A witness path from ``start`` to acceptance, or None.

    ``start`` is a state for finite automata and a ``(control, stack)``
    configuration for pushdown ones.  ``deadline`` is a ``time.monotonic``
    value after which ResourceLimit is raised.
    """
    check_deadline(deadline)
    if is_pushdown(aut):
        control, stack = start
        sat = Saturation(aut, control, max_states=max_states, deadline=deadline)
        return sat.witness(control, tuple(stack))
    return _bfs(aut, start, max_states, deadline)


def _bfs(aut, start, max_states, deadline=None):
    if aut.is_accepting(start):
        return Witness((), ())
    parent = {start: None}
    queue = deque([start])
    n = 0
    while queue:
        s = queue.popleft()
        n += 1
        if not n & 1023:
            check_deadline(deadline)
        for a, t, rid in aut.successors(s):
            if t in parent:
                continue
            parent[t] = (s, a, rid)
            if aut.is_accepting(t):
                labels, trace = [], []
                cur = t
                while parent[cur] is not None:
                    prev, lab, r = parent[cur]
                    labels.append(lab)
                    trace.append(r)
                    cur = prev
                return Witness(tuple(reversed(labels)), tuple(reversed(trace)))
            if max_states is not None and len(parent) > max_states:
                raise ResourceLimit(f"more than {max_states} product states explored")
            queue.append(t)
    return None


def reachable_states(aut, start, max_states=None):
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for _, t, _ in aut.successors(s):
            if t not in seen:
                seen.add(t)
                if max_states is not None and len(seen) > max_states:
                    raise ResourceLimit(f"more than {max_states} states explored")
                queue.append(t)
    return seen


def replay_witness(aut, start, witness):
    """Check that a witness is a path from ``start`` ending in acceptance."""
    if is_pushdown(aut):
        control, stack = start[0], tuple(start[1])
        if len(witness.trace) != len(witness.labels):
            return False
        for rule, label in zip(witness.trace, witness.labels):
            if rule.src != control or rule.label != label:
                return False
            if rule not in aut.rules_from(control):
                return False
            if rule.pop:
                if not stack or stack[0] != rule.pop[0]:
                    return False
                stack = stack[1:]
            control, stack = rule.dst, rule.push + stack
        return aut.is_accepting(control)
    current = {start}
    for label in witness.labels:
        current = {t for s in current for a, t, _ in aut.successors(s) if a == label}
        if not current:
            return False
    return any(aut.is_accepting(s) for s in current)


# ---------------------------------------------------------------------------
# pre* saturation


class _Final:
    def __repr__(self):
        return "<accept>"


FINAL = _Final()


class Saturation:
    """pre* of the accepting configurations, as an annotated P-automaton.

    The P-automaton has one state per control plus a sink FINAL.  For an
    accepting control ``c`` it initially has ``c -g-> FINAL`` for every
    stack symbol and ``c`` itself is final (empty stack).  Pop-0 rules are
    expanded into one pop-1 rule per stack symbol plus an empty-stack case
    that makes controls final.  Every added transition or final mark stores
    the rule and the path that justified it; those paths only use older
    transitions, which makes witness reconstruction terminate.
    """

    def __init__(self, aut, start_control, max_states=None, deadline=None):
        self.aut = aut
        self.deadline = deadline
        self.gamma = tuple(aut.stack_alphabet)
        self.controls, rules = self._discover(start_control, max_states)
        self.rules = rules
        self.ers = []
        for r in rules:
            if r.pop:
                self.ers.append((r, r.pop[0], r.push))
            else:
                for g in self.gamma:
                    self.ers.append((r, g, r.push + (g,)))
                self.ers.append((r, None, r.push))
        self.trans = {}
        self.tr_ann = {}
        self.final = {}
        self._solve()

    def _discover(self, start, max_states):
        seen = {start}
        queue = deque([start])
        rules = []
        while queue:
            c = queue.popleft()
            for r in self.aut.rules_from(c):
                rules.append(r)
                if r.dst not in seen:
                    seen.add(r.dst)
                    if max_states is not None and len(seen) > max_states:
                        raise ResourceLimit(f"more than {max_states} pushdown controls")
                    queue.append(r.dst)
        return seen, rules

    def _solve(self):
        items = {}
        waiting_t = {}
        waiting_f = {}
        queue = deque()
        trans, tr_ann, final = self.trans, self.tr_ann, self.final
        self.items = items

        def add_item(key, back):
            if key not in items:
                items[key] = back
                queue.append(key)

        def add_trans(s, g, t, ann):
            out = trans.setdefault((s, g), set())
            if t in out:
                return
            out.add(t)
            tr_ann[(s, g, t)] = ann
            for key in list(waiting_t.get((s, g), ())):
                add_item((key[0], key[1] + 1, t), (key, (s, g, t)))

        def add_final(s, ann):
            todo = [(s, ann)]
            while todo:
                s, ann = todo.pop()
                if s in final:
                    continue
                final[s] = ann
                for key in waiting_f.pop(s, ()):
                    todo.append((self.ers[key[0]][0].src, (key[0], key)))

        final[FINAL] = None
        for g in self.gamma:
            trans.setdefault((FINAL, g), set()).add(FINAL)
            tr_ann[(FINAL, g, FINAL)] = None
        for c in self.controls:
            if self.aut.is_accepting(c):
                final[c] = None
                for g in self.gamma:
                    trans.setdefault((c, g), set()).add(FINAL)
                    tr_ann[(c, g, FINAL)] = None
        for e, (r, _, _) in enumerate(self.ers):
            add_item((e, 0, r.dst), None)
        n = 0
        while queue:
            key = queue.popleft()
            n += 1
            if not n & 1023:
                check_deadline(self.deadline)
            e, j, s = key
            rule, pop, word = self.ers[e]
            if j == len(word):
                if pop is not None:
                    add_trans(rule.src, pop, s, (e, key))
                elif s in final:
                    add_final(rule.src, (e, key))
                else:
                    waiting_f.setdefault(s, []).append(key)
                continue
            g = word[j]
            waiting_t.setdefault((s, g), []).append(key)
            for t in list(trans.get((s, g), ())):
                add_item((e, j + 1, t), (key, (s, g, t)))

    def _item_path(self, key):
        path = []
        while True:
            back = self.items[key]
            if back is None:
                break
            key, tr = back
            path.append(tr)
        path.reverse()
        return path

    def accepting_path(self, control, stack):
        """Transitions reading ``stack`` from ``control`` into a final state."""
        start = (control, 0)
        parent = {start: None}
        queue = deque([start])
        while queue:
            s, i = queue.popleft()
            if i == len(stack):
                if s in self.final:
                    path = []
                    cur = (s, i)
                    while parent[cur] is not None:
                        prev, tr = parent[cur]
                        path.append(tr)
                        cur = prev
                    return list(reversed(path))
                continue
            for t in self.trans.get((s, stack[i]), ()):
                node = (t, i + 1)
                if node not in parent:
                    parent[node] = ((s, i), (s, stack[i], t))
                    queue.append(node)
        return None

    def accepts(self, control, stack):
        return self.accepting_path(control, tuple(stack)) is not None

    def witness(self, control, stack, max_steps=1_000_000):
        path = self.accepting_path(control, stack)
        if path is None:
            return None
        labels, trace = [], []
        stack = list(stack)
        for _ in range(max_steps):
            if not path:
                ann = self.final[control]
            else:
                ann = self.tr_ann[path[0]]
            if ann is None:
                return Witness(tuple(labels), tuple(trace))
            e, key = ann
            rule, pop, word = self.ers[e]
            labels.append(rule.label)
            trace.append(rule)
            rest = path[1:] if path else []
            if pop is not None:
                stack = list(word) + stack[1:]
            else:
                stack = list(word) + stack
            control = rule.dst
            path = self._item_path(key) + rest
        raise ResourceLimit("witness reconstruction did not terminate")

    def to_dot(self, name="Pauto"):
        out = [f"digraph {name} {{", "  rankdir=LR;"]
        for s in sorted(set(self.controls) | {FINAL}, key=repr):
            shape = "doublecircle" if s in self.final else "circle"
            out.append(f'  "{_dot_escape(repr(s))}" [shape={shape}];')
        for (s, g), ts in sorted(self.trans.items(), key=repr):
            for t in ts:
                style = "solid" if self.tr_ann.get((s, g, t)) is None else "dashed"
                out.append(f'  "{_dot_escape(repr(s))}" -> "{_dot_escape(repr(t))}" [label="{g}", style={style}];')
        out.append("}")
        return "\n".join(out)


def bounded_pushdown_bfs(aut, start, max_height):
    """Reference search over configurations with stack height at most ``max_height``."""
    start = (start[0], tuple(start[1]))
    if aut.is_accepting(start[0]):
        return Witness((), ())
    parent = {start: None}
    queue = deque([start])
    while queue:
        c, stack = queue.popleft()
        for r in aut.rules_from(c):
            if r.pop:
                if not stack or stack[0] != r.pop[0]:
                    continue
                nxt = (r.dst, r.push + stack[1:])
            else:
                nxt = (r.dst, r.push + stack)
            if len(nxt[1]) > max_height or nxt in parent:
                continue
            parent[nxt] = ((c, stack), r)
            if aut.is_accepting(nxt[0]):
                trace = []
                cur = nxt
                while parent[cur] is not None:
                    prev, rule = parent[cur]
                    trace.append(rule)
                    cur = prev
                trace.reverse()
                return Witness(tuple(r.label for r in trace), tuple(trace))
            queue.append(nxt)
    return None
