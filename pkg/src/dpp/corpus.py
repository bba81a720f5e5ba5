"""Seeded generators for small processes, pushdown systems and 3-CNF formulas."""

import random
from itertools import product

from .automata import PushdownAutomaton
from .model import INPUT, OUTPUT, READ, SPAWN, TAU, WRITE, Action, ProcessSpec, Rule

FRAGMENTS = ("general", "gen", "simple", "nolocals", "pushdown")


def _label(rng, fragment, states, spawn_of, values):
    kinds = [TAU, SPAWN, READ]
    if fragment in ("general", "nolocals", "pushdown"):
        kinds.append(WRITE)
    if fragment != "nolocals":
        kinds.append(OUTPUT)
        if fragment != "simple":
            kinds.append(INPUT)
    k = rng.choice(kinds + [SPAWN, READ])
    if k == TAU:
        return Action(TAU)
    if k == SPAWN:
        return Action(SPAWN, None, spawn_of(rng.choice(states)))
    v = rng.choice(values)
    if k in (INPUT, OUTPUT):
        return Action(k, "x", v)
    if fragment in ("gen", "simple"):
        var = "x"
    elif fragment == "nolocals":
        var = "g"
    else:
        var = rng.choice(["x", "g"])
    return Action(k, var, v)


def random_spec(rng, fragment="general", n_states=None, n_rules=None):
    """A small random process of the given fragment.

    ``gen`` and ``simple`` specs never mention the initial value, so they
    satisfy the futures proviso.
    """
    if fragment not in FRAGMENTS:
        raise ValueError(f"unknown fragment {fragment!r}")
    n_states = n_states or rng.randint(2, 4)
    n_rules = n_rules or rng.randint(3, 8)
    values = ("0", "1", "#")
    used = ("1", "#") if fragment in ("gen", "simple") else values
    states = [f"q{i}" for i in range(n_states)]
    pushdown = fragment == "pushdown"
    stack = ("Z", "A")
    spawn_of = (lambda q: (q, ("Z",))) if pushdown else (lambda q: q)

    rules = []
    for _ in range(n_rules):
        label = _label(rng, fragment, states, spawn_of, used)
        src, dst = rng.choice(states), rng.choice(states)
        pop, push = (), ()
        if pushdown:
            pop = rng.choice([(), ("Z",), ("A",)])
            push = tuple(rng.choice(stack) for _ in range(rng.randint(0, 2)))
        rules.append(Rule(len(rules), src, pop, label, dst, push))
    if rng.random() < 0.8:
        var = "g" if fragment in ("nolocals",) or (fragment in ("general", "pushdown") and rng.random() < 0.5) else "x"
        kind = WRITE if var == "g" else OUTPUT
        i = rng.randrange(len(rules))
        r = rules[i]
        rules[i] = Rule(r.id, r.src, r.pop, Action(kind, var, "#"), r.dst, r.push)

    if fragment in ("gen", "simple"):
        globals_, locals_ = (), ("x",)
    elif fragment == "nolocals":
        globals_, locals_ = ("g",), ()
    else:
        globals_, locals_ = ("g",), ("x",)
    return ProcessSpec(
        kind="pushdown" if pushdown else "finite", values=values, init_value="0", globals=globals_,
        locals=locals_, target="#", init=spawn_of("q0"), rules=tuple(rules),
        stack_alphabet=stack if pushdown else (),
    )


def corpus(seed, fragment, count):
    rng = random.Random(seed)
    return [random_spec(rng, fragment) for _ in range(count)]


def random_pds(rng, letters=("a", "b")):
    """A random pushdown automaton with at most 3 controls, 3 symbols and 8 rules.

    Returns the automaton and a start configuration.
    """
    controls = [f"c{i}" for i in range(rng.randint(1, 3))]
    gamma = ["Z", "A", "B"][:rng.randint(1, 3)]
    rules = []
    for i in range(rng.randint(1, 8)):
        pop = rng.choice([(), (rng.choice(gamma),)])
        push = tuple(rng.choice(gamma) for _ in range(rng.randint(0, 2)))
        label = Action(TAU) if rng.random() < 0.3 else Action(READ, "g", rng.choice(letters))
        rules.append(Rule(i, rng.choice(controls), pop, label, rng.choice(controls), push))
    alphabet = {r.label for r in rules}
    accepting = {rng.choice(controls)}
    aut = PushdownAutomaton(controls, gamma, alphabet, rules, accepting)
    return aut, (controls[0], (gamma[0],))


# -- 3-CNF ------------------------------------------------------------------


def random_3cnf(rng, max_vars=4, max_clauses=6):
    """Clauses are tuples of nonzero ints (DIMACS style)."""
    n = rng.randint(1, max_vars)
    m = rng.randint(1, max_clauses)
    clauses = []
    for _ in range(m):
        k = min(3, n)
        vs = rng.sample(range(1, n + 1), k)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return n, clauses


def brute_force_sat(n, clauses):
    for bits in product((False, True), repeat=n):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def encode_sat(n, clauses):
    """Simple-futures process whose root can output # iff the formula is satisfiable.

    The root picks a truth value for each variable by spawning one of two
    child kinds.  A child for literal l can output ``C_j`` for every clause
    containing l.  The root then has to read ``C_1, ..., C_m`` from its own x
    in order, each value supplied by some spawned child.
    """
    m = len(clauses)
    values = ("init",) + tuple(f"C{j}" for j in range(1, m + 1)) + ("#",)
    rules = []

    def add(src, label, dst):
        rules.append(Rule(len(rules), src, (), label, dst, ()))

    for i in range(1, n + 1):
        for b in (1, 0):
            add(f"a{i - 1}", Action(SPAWN, None, f"lit{i}_{b}"), f"a{i}")
            lit = i if b else -i
            for j, c in enumerate(clauses, 1):
                if lit in c:
                    add(f"lit{i}_{b}", Action(OUTPUT, "x", f"C{j}"), f"lit{i}_{b}")
    for j in range(1, m + 1):
        add(f"a{n}" if j == 1 else f"b{j - 1}", Action(READ, "x", f"C{j}"), f"b{j}")
    add(f"b{m}" if m else f"a{n}", Action(OUTPUT, "x", "#"), "done")
    return ProcessSpec(
        kind="finite", values=values, init_value="init", globals=(), locals=("x",), target="#",
        init="a0", rules=tuple(rules),
    )
