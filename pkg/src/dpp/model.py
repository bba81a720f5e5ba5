"""Data model for dynamic parametric processes.

A process is a finite-state or pushdown rewriting system whose transitions
carry action labels.  Sub-processes form a tree: every node can spawn any
number of children, talk to its parent through the parent's local variables
(inputs ``i`` and outputs ``o``), and share global variables with everybody.
"""

from dataclasses import dataclass, field
from typing import NamedTuple

TAU = "tau"
READ = "r"
WRITE = "w"
INPUT = "i"
OUTPUT = "o"
SPAWN = "spawn"
BAR_READ = "rbar"
BAR_WRITE = "wbar"

KINDS = (TAU, READ, WRITE, INPUT, OUTPUT, SPAWN, BAR_READ, BAR_WRITE)

# tie-breaking order: reads < writes < inputs < outputs
_KIND_RANK = {READ: 0, WRITE: 1, INPUT: 2, OUTPUT: 3, BAR_READ: 4, BAR_WRITE: 5, TAU: 6, SPAWN: 7}


class SpecError(ValueError):
    """Raised for malformed or inconsistent process descriptions."""


class ResourceLimit(RuntimeError):
    """A configured cap (states, iterations, levels, candidates) was hit."""


class FragmentMismatch(ValueError):
    """A fragment-specific procedure was applied outside its fragment."""


class Action(NamedTuple):
    kind: str
    var: str | None = None
    val: object = None

    def __str__(self):
        if self.kind == TAU:
            return "tau"
        if self.kind == SPAWN:
            return f"spawn({format_state(self.val)})"
        return f"{self.kind}({self.var},{self.val})"


def action_key(a):
    """Sort key for actions: kind rank, then variable name, then value name."""
    return (_KIND_RANK[a.kind], a.var or "", str(a.val))


def tau():
    return Action(TAU)


def spawn(state):
    return Action(SPAWN, None, state)


def format_state(state):
    if isinstance(state, tuple):
        control, stack = state
        return f"{control}[{' '.join(stack)}]"
    return str(state)


class ExtWord(NamedTuple):
    """A spawn-headed word over external actions."""

    head: object
    body: tuple = ()

    def __str__(self):
        return " ".join([f"spawn({format_state(self.head)})"] + [str(a) for a in self.body])

    def prefixes(self):
        return [ExtWord(self.head, self.body[:n]) for n in range(len(self.body) + 1)]


def word_key(w):
    """Deterministic order on words: head, total length, then lexicographic."""
    return (format_state(w.head), len(w.body), [action_key(a) for a in w.body])


class Rule(NamedTuple):
    id: int
    src: object
    pop: tuple
    label: Action
    dst: object
    push: tuple


@dataclass(frozen=True)
class ProcessSpec:
    """S = <Q, G, X, V, rules, q_init, v_init> plus the target value.

    For the pushdown kind, states are configurations ``(control, stack)``
    with the stack top at index 0, and rules rewrite ``control pop`` into
    ``dst push``.
    """

    kind: str
    values: tuple
    init_value: str
    globals: tuple
    locals: tuple
    target: str
    init: object
    rules: tuple
    stack_alphabet: tuple = ()
    states: tuple = ()
    _index: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        index = {}
        for r in self.rules:
            index.setdefault(r.src, []).append(r)
        object.__setattr__(self, "_index", index)

    # -- variables ------------------------------------------------------
    def is_global(self, var):
        return var in self.globals

    def local_index(self, var):
        return self.locals.index(var)

    @property
    def lambda_init(self):
        return (self.init_value,) * len(self.locals)

    # -- alphabets ------------------------------------------------------
    @property
    def spawn_targets(self):
        return tuple(sorted({r.label.val for r in self.rules if r.label.kind == SPAWN}, key=format_state))

    @property
    def heads(self):
        """Spawn targets plus the initial state, in a fixed order."""
        hs = set(self.spawn_targets)
        hs.add(self.init)
        return tuple(sorted(hs, key=format_state))

    def barred_alphabet(self):
        out = []
        for var in self.locals + self.globals:
            for v in self.values:
                out.append(Action(BAR_READ, var, v))
                out.append(Action(BAR_WRITE, var, v))
        return tuple(out)

    def rules_from(self, src):
        return self._index.get(src, ())

    # -- configurations -------------------------------------------------
    def successors(self, state):
        """Own moves of a single process: list of (label, next state, rule)."""
        if self.kind == "finite":
            return [(r.label, r.dst, r) for r in self.rules_from(state)]
        control, stack = state
        out = []
        for r in self.rules_from(control):
            if r.pop:
                if not stack or stack[0] != r.pop[0]:
                    continue
                rest = stack[1:]
            else:
                rest = stack
            out.append((r.label, (r.dst, r.push + rest), r))
        return out


def ext_letter(a, globals_):
    """ext renaming of one label; None stands for the empty word."""
    k = a.kind
    if k in (READ, BAR_READ):
        return Action(READ, a.var, a.val) if a.var in globals_ else None
    if k in (WRITE, BAR_WRITE):
        return Action(WRITE, a.var, a.val) if a.var in globals_ else None
    if k in (INPUT, OUTPUT):
        return a
    return None


def filter_letter(a, globals_):
    k = a.kind
    if k == SPAWN:
        return a
    if k == BAR_READ:
        return Action(READ if a.var in globals_ else INPUT, a.var, a.val)
    if k == BAR_WRITE:
        return Action(WRITE if a.var in globals_ else OUTPUT, a.var, a.val)
    return None


def ext_project(word, globals_):
    out = []
    for a in word:
        e = ext_letter(a, globals_)
        if e is not None:
            out.append(e)
    return tuple(out)


def filter_project(word, globals_):
    out = []
    for a in word:
        e = filter_letter(a, globals_)
        if e is not None:
            out.append(e)
    return tuple(out)


def is_target(a, spec):
    """Root-level label announcing the target value: w(g,#) or o(x,#) after ext."""
    e = ext_letter(a, spec.globals)
    return e is not None and e.val == spec.target and e.kind in (WRITE, OUTPUT)


@dataclass(frozen=True)
class FragmentTags:
    no_locals: bool
    generalized_futures: bool
    simple_futures: bool
    proviso_ok: bool


def classify(spec):
    labels = [r.label for r in spec.rules]
    own_local_write = any(a.kind == WRITE and a.var in spec.locals for a in labels)
    has_input = any(a.kind == INPUT for a in labels)
    gen = not spec.globals and not own_local_write
    touches_init = any(a.kind in (READ, WRITE, INPUT, OUTPUT) and a.val == spec.init_value for a in labels)
    return FragmentTags(
        no_locals=not spec.locals,
        generalized_futures=gen,
        simple_futures=gen and not has_input,
        proviso_ok=not touches_init,
    )
