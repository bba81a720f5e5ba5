"""Decision procedures for reachability of the target value.

``solve_general`` iterates cores of behaviors level by level: level k
summarizes every subtree of depth at most k as a finite antichain of
external words, and the next level runs each process under that summary.
Once the summaries stop changing, the root is checked for a consistent run
that writes or outputs the target.

The two futures fragments replace cores by coarser summaries (signatures,
and sets of outputs), and processes without locals can be flattened into a
system where only the root spawns, once.
"""

import time
from dataclasses import dataclass, field
from itertools import permutations

from .automata import (
    FiniteProduct, LazyFactor, TargetAutomaton, nonempty_witness, product_with_finite,
    reachable_states,
)
from .hypothesis import (
    Caps, HypothesisAutomaton, HypothesisSearch, compute_core_K, extended_process_automaton,
    start_config,
)
from .model import (
    BAR_READ, BAR_WRITE, INPUT, OUTPUT, READ, SPAWN, TAU, WRITE, Action, ExtWord,
    FragmentMismatch, ProcessSpec, ResourceLimit, Rule, classify, ext_letter, ext_project,
    format_state, is_target, word_key,
)
from .automata import is_consistent
from .oracle import ExploreBounds, guided_run
from .words import sig_body

REACHABLE = "reachable"
UNREACHABLE = "unreachable"
RESOURCE = "resource"


@dataclass
class Verdict:
    status: str
    algorithm: str = "general"
    witness: ExtWord | None = None
    labels: tuple = ()
    levels: int | None = None
    detail: str = ""
    abstract: bool = True
    run: tuple = ()
    timings: dict = field(default_factory=dict)

    @property
    def reachable(self):
        return self.status == REACHABLE

    def to_json(self):
        return {
            "verdict": self.status,
            "algorithm": self.algorithm,
            "witness": str(self.witness) if self.witness is not None else None,
            "labels": [str(a) for a in self.labels],
            "levels": self.levels,
            "detail": self.detail,
            "abstract_witness": self.abstract,
            "run": [[str(a), str(t)] for a, t in self.run],
            "timings": self.timings,
        }


@dataclass
class LevelCores:
    levels: list
    stabilized_at: int | None

    def __getitem__(self, k):
        return self.levels[k]


def _check_witness(spec, labels):
    if not any(is_target(a, spec) for a in labels):
        raise AssertionError("witness misses the target action")
    if not is_consistent(labels, spec.globals, spec.values, spec.init_value):
        raise AssertionError("witness is not consistent")


REPLAY = ExploreBounds(max_depth=4, max_children_per_node=4, max_stack_height=8, max_states=20_000)


def attach_run(spec, verdict, bounds=REPLAY):
    """Try to replay a Reachable verdict's labels as a concrete multiset run.

    Small trees are tried first, up to the depth and width in ``bounds``.
    """
    if verdict.status != REACHABLE or bounds is None:
        return verdict
    lo = 1 if verdict.levels is None else min(verdict.levels + 1, bounds.max_depth)
    for depth in range(lo, bounds.max_depth + 1):
        for width in sorted({min(2, bounds.max_children_per_node), bounds.max_children_per_node}):
            b = ExploreBounds(depth, width, bounds.max_steps, bounds.max_stack_height, bounds.max_states)
            run = guided_run(spec, verdict.labels, b)
            if run is not None:
                verdict.run = run
                verdict.abstract = False
                return verdict
    return verdict


def prefix_set(L):
    return frozenset(ExtWord(w.head, w.body[:i]) for w in L for i in range(len(w.body) + 1))


def reachable_heads(spec, include_init=True):
    """The initial state and the spawn targets the root can ever create.

    Over-approximated on the rule graph (stack contents ignored).  Without
    ``include_init`` the initial state is kept only if it is itself spawned:
    the root's own summary is never consulted otherwise.
    """
    ctrl = (lambda p: p) if spec.kind == "finite" else (lambda p: p[0])
    heads = {spec.init} if include_init else set()
    seen = {ctrl(spec.init)}
    todo = [ctrl(spec.init)]
    while todo:
        c = todo.pop()
        for r in spec.rules_from(c):
            nxt = [r.dst]
            if r.label.kind == SPAWN:
                heads.add(r.label.val)
                nxt.append(ctrl(r.label.val))
            for d in nxt:
                if d not in seen:
                    seen.add(d)
                    todo.append(d)
    return tuple(h for h in spec.heads if h in heads)


def _reachable(spec, L, head, algorithm, levels, t0, caps, hyp=None, deadline=None):
    """Final check: a consistent run of ``head`` under ``L`` reaching the target."""
    search = HypothesisSearch(spec, L, consistent=True, caps=caps)
    if hyp is not None:
        search.hyp = hyp
        search.factors[0] = hyp
    w = search.witness(head, [TargetAutomaton(spec.globals, spec.target)], [0], deadline)
    if w is None:
        return None
    _check_witness(spec, w.labels)
    return Verdict(REACHABLE, algorithm, ExtWord(head, ext_project(w.labels, spec.globals)), w.labels,
                   levels, timings={"total": time.perf_counter() - t0})


# ---------------------------------------------------------------------------
# general procedure


def level_step(spec, L, consistent=False, caps=Caps(), heads=None, deadline=None, on_word=None):
    out = []
    for h in spec.heads if heads is None else heads:
        hook = None if on_word is None else (lambda found, done=tuple(out): on_word(done + tuple(found)))
        out.extend(compute_core_K(spec, L, h, consistent, caps, deadline, hook))
    return frozenset(out)


def levelwise_cores(spec, upto=None, consistent=False, caps=Caps()):
    """L_0, L_1, ... where L_k is the core of the depth-k behaviors of every head.

    With ``consistent`` the k-th entry is restricted to consistent runs
    (computed under the unrestricted L_{k-1}).  Stops at ``upto`` or at the
    first k with L_k = L_{k+1}.
    """
    plain = [level_step(spec, frozenset(), caps=caps)]
    stable = None
    limit = caps.max_levels if upto is None else upto
    while len(plain) <= limit:
        nxt = level_step(spec, plain[-1], caps=caps)
        if prefix_set(nxt) == prefix_set(plain[-1]):
            stable = len(plain) - 1
            if upto is None:
                break
        plain.append(nxt)
    else:
        if upto is None:
            raise ResourceLimit(f"no stabilization within {caps.max_levels} levels")
    if upto is not None:
        plain = plain[:upto + 1]
    if not consistent:
        return LevelCores(plain, stable)
    cons = [level_step(spec, frozenset(), True, caps)]
    cons += [level_step(spec, plain[k - 1], True, caps) for k in range(1, len(plain))]
    return LevelCores(cons, stable)


class _Early(Exception):
    def __init__(self, verdict):
        self.verdict = verdict


def _probe(spec, k, t0, caps, deadline, prev):
    """Hook for level_step: test the target under the words found so far.

    Any set of genuine behaviors is a sound hypothesis, so a hit here is a
    real Reachable.  Probes run after 1, 2, 4, 8, ... words.
    """
    def hook(words):
        n = len(words)
        if n & (n - 1) == 0:
            v = _reachable(spec, frozenset(prev) | frozenset(words), spec.init, "general", k, t0, caps,
                           deadline=deadline)
            if v is not None:
                raise _Early(v)
    return hook


def solve_general(spec, caps=Caps(), replay=REPLAY):
    """Level-wise core fixpoint; Reachable answers are checked at every level.

    While a level is being computed, the target is also probed under the
    part found so far.  ``replay`` bounds the attempt to turn a witness into
    a concrete run (None skips it).
    """
    t0 = time.perf_counter()
    deadline = caps.deadline()
    heads = reachable_heads(spec, include_init=False)
    try:
        L = level_step(spec, frozenset(), caps=caps, heads=heads, deadline=deadline,
                       on_word=_probe(spec, 0, t0, caps, deadline, ()))
        k = 0
        while True:
            v = _reachable(spec, L, spec.init, "general", k, t0, caps, deadline=deadline)
            if v is not None:
                return attach_run(spec, v, replay)
            nxt = level_step(spec, L, caps=caps, heads=heads, deadline=deadline,
                             on_word=_probe(spec, k + 1, t0, caps, deadline, L))
            if prefix_set(nxt) == prefix_set(L):
                return Verdict(UNREACHABLE, "general", levels=k, timings={"total": time.perf_counter() - t0})
            k += 1
            if k > caps.max_levels:
                raise ResourceLimit(f"no stabilization within {caps.max_levels} levels")
            L = nxt
    except _Early as e:
        return attach_run(spec, e.verdict, replay)
    except ResourceLimit as e:
        return Verdict(RESOURCE, "general", detail=str(e), timings={"total": time.perf_counter() - t0})


# ---------------------------------------------------------------------------
# generalized futures: signatures


class NotSignatureAutomaton(LazyFactor):
    """Accepts the words whose ext-projection does not have signature ``beta``."""

    def __init__(self, beta, globals_):
        self.beta = tuple(beta)
        self.globals = globals_

    def step(self, state, a):
        e = ext_letter(a, self.globals)
        if e is None or state == "diff":
            return (state,)
        if e in self.beta[:state]:
            return (state,)
        if state < len(self.beta) and e == self.beta[state]:
            return (state + 1,)
        return ("diff",)

    def is_accepting(self, state):
        return state != len(self.beta)


class BoundedHypothesisAutomaton(HypothesisAutomaton):
    """Subset-choice semantics keeping at most ``bound`` maximal words in B.

    Runs of signature hypotheses only ever need one witness word per
    distinct child action, so capping B this way loses no behavior.
    """

    def __init__(self, spec, L, bound):
        super().__init__(spec, L, full_subsets=True)
        self.bound = bound
        self._parent = {}
        for (n, _), t in self.trie.child.items():
            self._parent[t] = n

    def _grow(self, lam, B, b):
        out = []
        for lam2, B2 in super()._grow(lam, B, b):
            inner = {self._parent[n] for n in B2 if n in self._parent}
            if sum(1 for n in B2 if n in self._parent and n not in inner) <= self.bound:
                out.append((lam2, B2))
        return tuple(out)


def _hyp_factory(spec, poly_b):
    if not poly_b:
        return None
    bound = 2 * len(spec.locals) * len(spec.values)
    return lambda L: BoundedHypothesisAutomaton(spec, L, bound)


def signatures_of_K(spec, L, head, caps=Caps(), poly_b=False, deadline=None):
    """sig of the ext-behaviors of ``head`` under signature hypothesis ``L``."""
    search = HypothesisSearch(spec, L, caps=caps)
    make = _hyp_factory(spec, poly_b)
    if make is not None:
        search.hyp = make(L)
        search.factors[0] = search.hyp
        search.starts[0] = search.hyp.initial()
    g = frozenset(spec.globals)
    found = []
    while True:
        if len(found) >= caps.max_core_iterations:
            raise ResourceLimit(f"more than {caps.max_core_iterations} signatures for head {head}")
        excl = [NotSignatureAutomaton(b.body, g) for b in found]
        w = search.witness(head, excl, [0] * len(excl), deadline)
        if w is None:
            break
        found.append(ExtWord(head, sig_body(ext_project(w.labels, g))))
    return found


def signature_levels(spec, upto=None, caps=Caps(), poly_b=False):
    step = lambda L: frozenset(w for h in spec.heads for w in signatures_of_K(spec, L, h, caps, poly_b))
    levels = [step(frozenset())]
    stable = None
    limit = caps.max_levels if upto is None else upto
    while len(levels) <= limit:
        nxt = step(levels[-1])
        if prefix_set(nxt) == prefix_set(levels[-1]):
            stable = len(levels) - 1
            break
        levels.append(nxt)
    return LevelCores(levels, stable)


def _require(spec, flag, name):
    if not getattr(classify(spec), flag):
        raise FragmentMismatch(f"process is not in the {name} fragment")


def solve_gen_futures(spec, caps=Caps(), poly_b=False, replay=REPLAY):
    """Signature fixpoint for processes without globals and own-local writes.

    Replaying signature runs needs the initial value never to be read or
    written.  When that fails the signature fixpoint still over-approximates,
    so an Unreachable answer stands, while a Reachable one is confirmed by
    the general procedure.
    """
    _require(spec, "generalized_futures", "generalized-futures")
    t0 = time.perf_counter()
    make = _hyp_factory(spec, poly_b)
    deadline = caps.deadline()
    heads = reachable_heads(spec, include_init=False)
    step = lambda L: frozenset(w for h in heads for w in signatures_of_K(spec, L, h, caps, poly_b, deadline))
    try:
        L = step(frozenset())
        k = 0
        while True:
            v = _reachable(spec, L, spec.init, "gen-futures", k, t0, caps,
                           hyp=make(L) if make else None, deadline=deadline)
            if v is not None:
                break
            nxt = step(L)
            if prefix_set(nxt) == prefix_set(L):
                return Verdict(UNREACHABLE, "gen-futures", levels=k, timings={"total": time.perf_counter() - t0})
            k += 1
            if k > caps.max_levels:
                raise ResourceLimit(f"no stabilization within {caps.max_levels} levels")
            L = nxt
    except ResourceLimit as e:
        return Verdict(RESOURCE, "gen-futures", detail=str(e), timings={"total": time.perf_counter() - t0})
    if classify(spec).proviso_ok:
        return attach_run(spec, v, replay)
    confirm = solve_general(spec, caps, replay)
    confirm.algorithm = "gen-futures"
    confirm.detail = ("initial value is read or written; signature answer Reachable "
                      "confirmed by the general procedure")
    confirm.timings["total"] = time.perf_counter() - t0
    return confirm


# ---------------------------------------------------------------------------
# simple futures: output sets


def out_of(w):
    for a in w.body:
        if a.kind != OUTPUT:
            raise ValueError(f"{a} is not an output")
    return {ExtWord(w.head, ())} | {ExtWord(w.head, (a,)) for a in w.body}


class OutHypothesisAutomaton(LazyFactor):
    """States (lambda, spawned heads); a child output is possible if some
    spawned head can produce it according to ``L`` (head -> outputs)."""

    def __init__(self, spec, L):
        self.spec = spec
        self.L = L
        self.pos = {x: i for i, x in enumerate(spec.locals)}

    def initial(self):
        return (self.spec.lambda_init, frozenset())

    def step(self, state, a):
        lam, H = state
        k = a.kind
        if k in (TAU, INPUT, OUTPUT):
            return (state,)
        if k == SPAWN:
            if a.val not in self.L:
                return ()
            return ((lam, H | {a.val}),)
        if a.var not in self.pos:
            return (state,) if k in (READ, WRITE) else ()
        i = self.pos[a.var]
        if k == READ:
            return (state,) if lam[i] == a.val else ()
        if k == WRITE:
            return ((lam[:i] + (a.val,) + lam[i + 1:], H),)
        if k == BAR_WRITE:
            o = Action(OUTPUT, a.var, a.val)
            if any(o in self.L[p] for p in H):
                return ((lam[:i] + (a.val,) + lam[i + 1:], H),)
        return ()


class GuessedOutAutomaton(OutHypothesisAutomaton):
    """Heads must be spawned for the first time in the order of ``seq``."""

    def __init__(self, spec, L, seq):
        super().__init__(spec, L)
        self.seq = tuple(seq)

    def initial(self):
        return (self.spec.lambda_init, 0)

    def step(self, state, a):
        lam, n = state
        if a.kind == SPAWN:
            if a.val in self.seq[:n]:
                return (state,)
            if n < len(self.seq) and a.val == self.seq[n] and a.val in self.L:
                return ((lam, n + 1),)
            return ()
        H = frozenset(self.seq[:n])
        return tuple((lam2, n) for lam2, _ in super().step((lam, H), a))


class _Seen(LazyFactor):
    def __init__(self, label):
        self.label = label

    def step(self, state, a):
        return (1,) if state or a == self.label else (0,)

    def is_accepting(self, state):
        return state == 1


def _outputs_alphabet(spec):
    return sorted({r.label for r in spec.rules if r.label.kind == OUTPUT})


def outputs_of_K(spec, L, head, caps=Caps(), guess=False):
    """The outputs ``head`` can perform when its children follow ``L``."""
    base = extended_process_automaton(spec)
    if guess:
        found = set()
        heads = [h for h in spec.spawn_targets if h in L]
        for o in _outputs_alphabet(spec):
            if _guess_query(spec, base, L, head, heads, o, caps):
                found.add(o)
        return frozenset(found)
    hyp = OutHypothesisAutomaton(spec, L)
    if spec.kind == "finite":
        aut = product_with_finite(base, hyp)
        states = reachable_states(aut, (head, hyp.initial()), caps.max_states)
        return frozenset(a for s in states for a, _, _ in aut.successors(s) if a.kind == OUTPUT)
    found = set()
    for o in _outputs_alphabet(spec):
        aut = product_with_finite(base, FiniteProduct([hyp, _Seen(o)]))
        if nonempty_witness(aut, start_config(spec, head, (hyp.initial(), 0)), caps.max_states):
            found.add(o)
    return frozenset(found)


def _guess_query(spec, base, L, head, heads, o, caps):
    for n in range(len(heads) + 1):
        for seq in permutations(heads, n):
            g = GuessedOutAutomaton(spec, L, seq)
            aut = product_with_finite(base, FiniteProduct([g, _Seen(o)]))
            if nonempty_witness(aut, start_config(spec, head, (g.initial(), 0)), caps.max_states):
                return True
    return False


def out_levels(spec, upto=None, caps=Caps(), guess=False):
    step = lambda L: {h: outputs_of_K(spec, L, h, caps, guess) for h in spec.heads}
    levels = [step({})]
    stable = None
    limit = caps.max_levels if upto is None else upto
    while len(levels) <= limit:
        nxt = step(levels[-1])
        if nxt == levels[-1]:
            stable = len(levels) - 1
            break
        levels.append(nxt)
    return LevelCores(levels, stable)


def solve_simple_futures(spec, caps=Caps(), guess=False, replay=REPLAY):
    _require(spec, "simple_futures", "simple-futures")
    if not classify(spec).proviso_ok:
        raise FragmentMismatch("simple-futures needs the initial value to be neither read nor written")
    t0 = time.perf_counter()
    base = extended_process_automaton(spec)
    heads = reachable_heads(spec, include_init=False)
    try:
        L = {}
        k = 0
        while True:
            hyp = OutHypothesisAutomaton(spec, L)
            aut = product_with_finite(base, FiniteProduct([hyp, TargetAutomaton(spec.globals, spec.target)]))
            w = nonempty_witness(aut, start_config(spec, spec.init, (hyp.initial(), 0)), caps.max_states)
            if w is not None:
                _check_witness(spec, w.labels)
                v = Verdict(REACHABLE, "simple-futures", ExtWord(spec.init, ext_project(w.labels, spec.globals)),
                            w.labels, k, timings={"total": time.perf_counter() - t0})
                return attach_run(spec, v, replay)
            nxt = {h: outputs_of_K(spec, L, h, caps, guess) for h in heads}
            if nxt == L:
                return Verdict(UNREACHABLE, "simple-futures", levels=k, timings={"total": time.perf_counter() - t0})
            k += 1
            if k > caps.max_levels:
                raise ResourceLimit(f"no stabilization within {caps.max_levels} levels")
            L = nxt
    except ResourceLimit as e:
        return Verdict(RESOURCE, "simple-futures", detail=str(e), timings={"total": time.perf_counter() - t0})


# ---------------------------------------------------------------------------
# flattening


def _fresh(name, taken):
    while name in taken:
        name += "'"
    return name


def _spawn_value(p):
    return "@" + format_state(p).replace(" ", "_")


def flatten(spec, all_states=False):
    """flat(S): spawns become writes to a fresh global; the root spawns once.

    Wake-up reads are added for spawn targets only, or for every state with
    ``all_states`` (finite processes).
    """
    if spec.locals:
        raise FragmentMismatch("flattening needs a process without local variables")
    if all_states:
        if spec.kind != "finite":
            raise ValueError("all_states needs a finite process")
        targets = sorted({spec.init} | {r.src for r in spec.rules} | {r.dst for r in spec.rules}
                         | set(spec.spawn_targets), key=format_state)
    else:
        targets = list(spec.spawn_targets)
    taken_values = set(spec.values)
    vals = {}
    for p in targets:
        vals[p] = _fresh(_spawn_value(p), taken_values)
        taken_values.add(vals[p])
    gsp = _fresh("g_sp", set(spec.globals) | set(spec.locals))
    names = {r.src for r in spec.rules} | {r.dst for r in spec.rules} | set(spec.states)
    names |= {spec.init if spec.kind == "finite" else spec.init[0]}
    names |= {p if spec.kind == "finite" else p[0] for p in spec.spawn_targets}
    lead = _fresh("init'", names)
    contrib = _fresh("init''", names | {lead})
    rules = []
    for r in spec.rules:
        if r.label.kind == SPAWN:
            label = Action(WRITE, gsp, vals[r.label.val])
        else:
            label = r.label
        rules.append(Rule(len(rules), r.src, r.pop, label, r.dst, r.push))
    if spec.kind == "finite":
        rules.append(Rule(len(rules), lead, (), Action(SPAWN, None, contrib), spec.init, ()))
        for p in targets:
            rules.append(Rule(len(rules), contrib, (), Action(READ, gsp, vals[p]), p, ()))
        init = lead
    else:
        rules.append(Rule(len(rules), lead, (), Action(SPAWN, None, (contrib, ())), spec.init[0], spec.init[1]))
        for p in targets:
            rules.append(Rule(len(rules), contrib, (), Action(READ, gsp, vals[p]), p[0], p[1]))
        init = (lead, ())
    states = spec.states + (lead, contrib) if spec.states else ()
    return ProcessSpec(
        kind=spec.kind, values=spec.values + tuple(vals[p] for p in targets), init_value=spec.init_value,
        globals=spec.globals + (gsp,), locals=(), target=spec.target, init=init, rules=tuple(rules),
        stack_alphabet=spec.stack_alphabet, states=states,
    )


def export_cd_system(spec):
    """Leader/contributor description of a flattened process."""
    from .fmt import format_rule

    spawns = [r for r in spec.rules if r.label.kind == SPAWN]
    init_control = spec.init if spec.kind == "finite" else spec.init[0]
    if len(spawns) != 1 or spawns[0].src != init_control or spawns[0].pop:
        raise FragmentMismatch("not a flat process: expected exactly one spawn, from the initial state")
    if spec.kind == "pushdown" and spec.init[1]:
        raise FragmentMismatch("not a flat process: initial stack must be empty")
    if any(r.dst == init_control or (r.src == init_control and r is not spawns[0]) for r in spec.rules):
        raise FragmentMismatch("not a flat process: initial state is revisited")
    s = spawns[0]
    leader = s.dst if spec.kind == "finite" else (s.dst, s.push)
    return {
        "format": "dpp-cd/1",
        "kind": spec.kind,
        "values": list(spec.values),
        "init_value": spec.init_value,
        "globals": list(spec.globals),
        "target": spec.target,
        "stack": list(spec.stack_alphabet),
        "leader": {"init": format_state(leader)},
        "contributor": {"init": format_state(s.label.val)},
        "rules": [format_rule(r, spec.kind) for r in spec.rules if r is not s],
    }


def import_cd_system(doc):
    """Rebuild a process whose root is the leader and whose children are contributors."""
    from .fmt import parse_process

    lead = "leader_root"
    lines = [f"kind: {doc['kind']}", f"values: {' '.join(doc['values'])}",
             f"init_value: {doc['init_value']}", f"globals: {' '.join(doc['globals'])}",
             "locals:", f"target: {doc['target']}"]
    if doc["kind"] == "pushdown":
        lines.append(f"stack: {' '.join(doc['stack'])}")
        leader = doc["leader"]["init"]
        control, _, rest = leader.partition("[")
        lines.append(f"init: {lead} []")
        lines.append("rules:")
        lines.append(f"  {lead} --spawn({doc['contributor']['init']})--> {control} [{rest.rstrip(']')}]")
    else:
        lines.append(f"init: {lead}")
        lines.append("rules:")
        lines.append(f"  {lead} --spawn({doc['contributor']['init']})--> {doc['leader']['init']}")
    lines.extend("  " + r for r in doc["rules"])
    return parse_process("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------


ALGORITHMS = ("auto", "general", "gen-futures", "simple-futures", "flatten")


def choose_algorithm(spec):
    tags = classify(spec)
    if tags.simple_futures and tags.proviso_ok:
        return "simple-futures"
    if tags.generalized_futures and tags.proviso_ok:
        return "gen-futures"
    if tags.no_locals:
        return "flatten"
    return "general"


def solve(spec, algorithm="auto", caps=Caps(), replay=REPLAY):
    if algorithm == "auto":
        algorithm = choose_algorithm(spec)
    if algorithm == "general":
        return solve_general(spec, caps, replay)
    if algorithm == "gen-futures":
        return solve_gen_futures(spec, caps, replay=replay)
    if algorithm == "simple-futures":
        return solve_simple_futures(spec, caps, replay=replay)
    if algorithm == "flatten":
        v = solve_general(flatten(spec), caps, replay)
        v.algorithm = "flatten"
        return v
    raise ValueError(f"unknown algorithm {algorithm!r}")


def sorted_words(words):
    return sorted(words, key=word_key)


__all__ = [
    "Verdict", "LevelCores", "solve_general", "levelwise_cores", "solve_gen_futures", "signature_levels",
    "signatures_of_K", "out_of", "solve_simple_futures", "outputs_of_K", "out_levels", "flatten",
    "export_cd_system", "import_cd_system", "solve", "choose_algorithm", "sorted_words",
    "REACHABLE", "UNREACHABLE", "RESOURCE", "attach_run", "prefix_set", "reachable_heads",
]
