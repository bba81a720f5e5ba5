"""Bounded explorers for the multiset and the set semantics.

These are reference semantics, not decision procedures: they enumerate
configuration trees breadth-first within explicit bounds and report the
first consistent run in which the root performs a write or an output of the
target value.

Every step moves a single node of the tree by one of its rules.  At the
parent, a child's input or output on the parent's locals shows up as a
barred read or write, and global operations surface as barred operations
all the way up; anything else a child does is silent (label None) above it.
Delaying silent moves until the child's next visible one gives exactly the
bundled child steps of the multiset semantics, so both reach the same root
behaviors.

A child that has no rules left is dropped from the tree when nothing below
it can ever surface: it has no children, or there are no globals.
"""

import hashlib
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .automata import ConsistencyAutomaton
from .model import (
    BAR_READ, BAR_WRITE, INPUT, OUTPUT, READ, SPAWN, TAU, WRITE, Action,
    ExtWord, ext_project, format_state, is_target,
)


class MTree(NamedTuple):
    state: object
    lam: tuple
    kids: tuple = ()  # sorted tuple of (MTree, multiplicity)

    def __str__(self):
        inner = ", ".join(f"{n}*{k}" for k, n in self.kids)
        return f"({format_state(self.state)}, {list(self.lam)}, [{inner}])"


class STree(NamedTuple):
    state: object
    lam: tuple
    kids: tuple = ()  # sorted tuple of distinct STree

    def __str__(self):
        inner = ", ".join(str(k) for k in self.kids)
        return f"({format_state(self.state)}, {list(self.lam)}, {{{inner}}})"


@dataclass(frozen=True)
class ExploreBounds:
    max_depth: int = 3
    max_children_per_node: int = 3
    max_steps: int = 30
    max_stack_height: int = 4
    max_states: int = 200_000


@dataclass
class ReachReport:
    found: bool
    run: tuple = ()
    stats: dict = field(default_factory=dict)

    @property
    def labels(self):
        return tuple(a for a, _ in self.run if a is not None)

    def trace_lines(self):
        return [f"{'-' if a is None else a}\t{digest(t)}" for a, t in self.run]


def digest(tree):
    return hashlib.sha1(repr(tree).encode()).hexdigest()[:10]


def set_of(t):
    return STree(t.state, t.lam, tuple(sorted({set_of(k) for k, _ in t.kids})))


def stree_leq(s1, s2):
    if s1.state != s2.state or s1.lam != s2.lam:
        return False
    return all(any(stree_leq(a, b) for b in s2.kids) for a in s1.kids)


def depth_of(t):
    kids = [k for k, _ in t.kids] if isinstance(t, MTree) else t.kids
    return 1 + max(depth_of(k) for k in kids) if kids else 0


def _is_external(a, globals_):
    if a.kind in (INPUT, OUTPUT):
        return True
    return a.kind in (READ, WRITE, BAR_READ, BAR_WRITE) and a.var in globals_


def _ms_add(kids, tree, n=1):
    d = dict(kids)
    d[tree] = d.get(tree, 0) + n
    return tuple(sorted(d.items()))


def _ms_remove(kids, tree):
    d = dict(kids)
    if d[tree] == 1:
        del d[tree]
    else:
        d[tree] -= 1
    return tuple(sorted(d.items()))


class _Semantics:
    """Successor relation shared by both explorers; ``multiset`` picks the variant.

    ``successors(t)`` lists ``(label, t2)`` where ``label`` is the action as
    seen at ``t`` or None when a strict descendant moved invisibly.
    """

    def __init__(self, spec, bounds, multiset):
        self.spec = spec
        self.bounds = bounds
        self.multiset = multiset
        self.globals = frozenset(spec.globals)
        self.pos = {x: i for i, x in enumerate(spec.locals)}
        self.tree = MTree if multiset else STree
        self._cache = {}

    def leaf(self, state):
        return self.tree(state, self.spec.lambda_init, ())

    def dead(self, t):
        if self.spec.successors(t.state):
            return False
        return not t.kids or not self.globals

    def _kids_size(self, kids):
        if self.multiset:
            return sum(n for _, n in kids)
        return len(kids)

    def own_steps(self, t, depth):
        spec, b = self.spec, self.bounds
        out = []
        for a, q2, _ in spec.successors(t.state):
            if spec.kind == "pushdown" and len(q2[1]) > b.max_stack_height:
                continue
            k = a.kind
            if k == SPAWN:
                if depth + 1 > b.max_depth:
                    continue
                child = self.leaf(a.val)
                if self.dead(child):
                    out.append((a, self.tree(q2, t.lam, t.kids)))
                elif self.multiset:
                    room = b.max_children_per_node - self._kids_size(t.kids)
                    for n in range(0, room + 1):
                        kids = _ms_add(t.kids, child, n) if n else t.kids
                        out.append((a, MTree(q2, t.lam, kids)))
                else:
                    kids = t.kids if child in t.kids else tuple(sorted(t.kids + (child,)))
                    out.append((a, STree(q2, t.lam, kids)))
            elif k in (READ, WRITE) and a.var in self.pos:
                i = self.pos[a.var]
                if k == READ:
                    if t.lam[i] != a.val:
                        continue
                    lam = t.lam
                else:
                    lam = t.lam[:i] + (a.val,) + t.lam[i + 1:]
                out.append((a, self.tree(q2, lam, t.kids)))
            else:
                # tau, global read/write, input/output of this node
                out.append((a, self.tree(q2, t.lam, t.kids)))
        return out

    def child_steps(self, t, depth):
        out = []
        kids = [k for k, _ in t.kids] if self.multiset else list(t.kids)
        for c in kids:
            for a, c2 in self.successors(c, depth + 1):
                lam = t.lam
                if a is None or not _is_external(a, self.globals):
                    label = None
                elif a.var in self.globals:
                    kind = BAR_READ if a.kind in (READ, BAR_READ) else BAR_WRITE
                    label = Action(kind, a.var, a.val)
                elif a.kind == INPUT:
                    if t.lam[self.pos[a.var]] != a.val:
                        continue
                    label = Action(BAR_READ, a.var, a.val)
                else:
                    i = self.pos[a.var]
                    lam = t.lam[:i] + (a.val,) + t.lam[i + 1:]
                    label = Action(BAR_WRITE, a.var, a.val)
                if self.multiset:
                    new_kids = _ms_remove(t.kids, c)
                    if not self.dead(c2):
                        new_kids = _ms_add(new_kids, c2)
                elif c2 in t.kids or self.dead(c2):
                    new_kids = t.kids
                else:
                    new_kids = tuple(sorted(t.kids + (c2,)))
                out.append((label, self.tree(t.state, lam, new_kids)))
        return out

    def successors(self, t, depth=0):
        key = (t, depth)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = self.own_steps(t, depth) + self.child_steps(t, depth)
        return hit


def mtree_successors(t, spec, bounds=ExploreBounds()):
    return _Semantics(spec, bounds, True).successors(t, 0)


def stree_successors(s, spec, bounds=ExploreBounds()):
    return _Semantics(spec, bounds, False).successors(s, 0)


def _explore(spec, bounds, multiset):
    sem = _Semantics(spec, bounds, multiset)
    cons = ConsistencyAutomaton(spec.globals, spec.values, spec.init_value)
    start = (sem.leaf(spec.init), cons.initial())
    parent = {start: None}
    frontier = [start]
    steps = 0
    truncated = False
    while frontier and steps < bounds.max_steps:
        steps += 1
        nxt = []
        for node in frontier:
            t, cs = node
            for a, t2 in sem.successors(t, 0):
                if not multiset and not set(t.kids) <= set(t2.kids):
                    raise AssertionError("set semantics lost a child")
                moved = cons.step(cs, a) if a is not None else (cs,)
                if not moved:
                    continue
                node2 = (t2, moved[0])
                if a is not None and is_target(a, spec):
                    run = [(a, t2)]
                    cur = node
                    while parent[cur] is not None:
                        prev, lab = parent[cur]
                        run.append((lab, cur[0]))
                        cur = prev
                    run.reverse()
                    return ReachReport(True, tuple(run), {"visited": len(parent), "depth": steps})
                if node2 in parent:
                    continue
                parent[node2] = (node, a)
                if len(parent) >= bounds.max_states:
                    truncated = True
                    break
                nxt.append(node2)
            if truncated:
                break
        if truncated:
            break
        frontier = nxt
    return ReachReport(False, (), {"visited": len(parent), "depth": steps, "frontier": len(frontier),
                                   "truncated": truncated})


def explore_multiset(spec, bounds=ExploreBounds()):
    return _explore(spec, bounds, True)


def explore_set(spec, bounds=ExploreBounds()):
    return _explore(spec, bounds, False)


def replay_run(spec, run, bounds=ExploreBounds(), multiset=True):
    """Check that a run is a path of the chosen semantics, consistent, hitting the target."""
    sem = _Semantics(spec, bounds, multiset)
    cons = ConsistencyAutomaton(spec.globals, spec.values, spec.init_value)
    t, cs = sem.leaf(spec.init), cons.initial()
    for a, t2 in run:
        if (a, t2) not in sem.successors(t, 0):
            return False
        moved = cons.step(cs, a) if a is not None else (cs,)
        if not moved:
            return False
        t, cs = t2, moved[0]
    return bool(run) and run[-1][0] is not None and is_target(run[-1][0], spec)


def enumerate_ext(spec, head, depth, max_len, bounds=ExploreBounds()):
    """Ext-words of runs of ``head`` (as a subtree root) within ``depth``, up to ``max_len`` letters.

    Set semantics; no consistency requirement, as for behaviors of children.
    """
    b = ExploreBounds(depth, bounds.max_children_per_node, bounds.max_steps,
                      bounds.max_stack_height, bounds.max_states)
    sem = _Semantics(spec, b, False)
    g = sem.globals
    start = (sem.leaf(head), ())
    seen = {start}
    queue = deque([start])
    words = {ExtWord(head, ())}
    while queue:
        t, body = queue.popleft()
        for a, t2 in sem.successors(t, 0):
            e = ext_project((a,), g) if a is not None else ()
            nb = body + e
            if len(nb) > max_len:
                continue
            node = (t2, nb)
            if node in seen:
                continue
            seen.add(node)
            if len(seen) > b.max_states:
                raise RuntimeError("ext enumeration exceeded its state bound")
            words.add(ExtWord(head, nb))
            queue.append(node)
    return words


def root_pairs(spec, depth, bounds=ExploreBounds(), consistent=False):
    """All (state, lambda) pairs of the root reachable with set semantics within ``depth``."""
    b = ExploreBounds(depth, bounds.max_children_per_node, bounds.max_steps,
                      bounds.max_stack_height, bounds.max_states)
    sem = _Semantics(spec, b, False)
    cons = ConsistencyAutomaton(spec.globals, spec.values, spec.init_value)
    start = (sem.leaf(spec.init), cons.initial() if consistent else None)
    seen = {start}
    queue = deque([start])
    while queue:
        t, cs = queue.popleft()
        for a, t2 in sem.successors(t, 0):
            if consistent and a is not None:
                moved = cons.step(cs, a)
                if not moved:
                    continue
                node = (t2, moved[0])
            else:
                node = (t2, cs)
            if node not in seen:
                seen.add(node)
                if len(seen) > b.max_states:
                    raise RuntimeError("root enumeration exceeded its state bound")
                queue.append(node)
    return {(t.state, t.lam) for t, _ in seen}


def guided_run(spec, labels, bounds=ExploreBounds(), multiset=True):
    """A concrete run whose visible root labels are exactly ``labels``, or None.

    Silent moves may be interleaved anywhere, and a barred label may repeat:
    several children doing the same thing in one step become consecutive
    single-child steps here.  The search gives up after ``bounds.max_states``
    nodes.
    """
    sem = _Semantics(spec, bounds, multiset)
    labels = tuple(labels)
    start = (sem.leaf(spec.init), 0)
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        t, i = node
        if i == len(labels):
            run = []
            while parent[node] is not None:
                prev, a = parent[node]
                run.append((a, node[0]))
                node = prev
            return tuple(reversed(run))
        for a, t2 in sem.successors(t, 0):
            if a is None or (i and a == labels[i - 1] and a.kind in (BAR_READ, BAR_WRITE)):
                node2 = (t2, i)
            elif a == labels[i]:
                node2 = (t2, i + 1)
            else:
                continue
            if node2 in parent:
                continue
            parent[node2] = (node, a)
            if len(parent) > bounds.max_states:
                return None
            queue.append(node2)
    return None
