"""Reading and writing the ``.dpp`` process format.

Line format (``//`` starts a comment)::

    kind: finite
    values: init 1 2 #
    init_value: init
    globals: g
    locals: x
    target: #
    init: q
    rules:
      q --spawn(p)--> q1
      q1 --r(x,2)--> q2

Pushdown rules carry optional bracketed pop/push words, e.g.
``p [A] --o(x,1)--> p [B A]``; the initial state and spawn targets then
name a control and a stack, as in ``init: p [Z]`` or ``spawn(p [Z])``.
The same sections are accepted as a JSON object whose ``rules`` entry is a
list of rule strings.
"""

import json
import re

from .model import INPUT, OUTPUT, SPAWN, TAU, Action, ProcessSpec, Rule, SpecError, format_state

SECTIONS = ("kind", "values", "init_value", "globals", "locals", "target", "init", "states", "stack", "rules")

_RULE = re.compile(r"^(?P<lhs>.*?)--(?P<label>.*)-->(?P<rhs>.*)$")
_SIDE = re.compile(r"^\s*(?P<name>[^\s\[\]]+)\s*(?:\[(?P<stack>[^\]]*)\])?\s*$")
_LABEL = re.compile(r"^\s*(?P<kind>r|w|i|o)\(\s*(?P<var>[^,\s()]+)\s*,\s*(?P<val>[^,\s()]+)\s*\)\s*$")
_SPAWN = re.compile(r"^\s*spawn\(\s*(?P<target>[^()]+?)\s*\)\s*$")


def _err(line, msg):
    return SpecError(f"line {line}: {msg}" if line else msg)


def _stack_words(text, line):
    if text is None:
        return None
    words = text.split()
    if words and words[0] in ("pop", "push"):
        words = words[1:]
    return tuple(words)


def _parse_side(text, line, what):
    m = _SIDE.match(text)
    if not m:
        raise _err(line, f"cannot parse {what} {text.strip()!r}")
    return m.group("name"), _stack_words(m.group("stack"), line)


def _parse_label(text, line):
    s = text.strip()
    if s == "tau":
        return Action(TAU)
    m = _LABEL.match(s)
    if m:
        return Action(m.group("kind"), m.group("var"), m.group("val"))
    m = _SPAWN.match(s)
    if m:
        name, stack = _parse_side(m.group("target"), line, "spawn target")
        return Action(SPAWN, None, (name, stack))
    raise _err(line, f"unknown label {s!r}")


def _split_sections(text):
    sections = {}
    rules = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        head = re.match(r"^([a-z_]+)\s*:(.*)$", line)
        if head and head.group(1) in SECTIONS and "--" not in line:
            name, rest = head.group(1), head.group(2).strip()
            if name in sections:
                raise _err(lineno, f"duplicate section {name!r}")
            sections[name] = (rest, lineno)
            current = name
            if name == "rules" and rest:
                raise _err(lineno, "rules start on the next line")
            continue
        if current == "rules":
            rules.append((line, lineno))
        else:
            raise _err(lineno, f"unexpected line {line!r}")
    return sections, rules


def parse_process(text):
    """Parse a process document (line format or JSON) into a validated ProcessSpec."""
    if text.lstrip().startswith("{"):
        return _from_json(text)
    sections, rules = _split_sections(text)
    fields = {k: v for k, (v, _) in sections.items() if k != "rules"}
    lines = {k: ln for k, (_, ln) in sections.items()}
    return _build(fields, rules, lines)


def _from_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"line {e.lineno}: {e.msg}") from None
    fields = {}
    for k, v in doc.items():
        if k not in SECTIONS:
            raise SpecError(f"unknown section {k!r}")
        if k == "rules":
            continue
        fields[k] = " ".join(v) if isinstance(v, list) else str(v)
    rules = [(r, 0) for r in doc.get("rules", [])]
    return _build(fields, rules, {})


def _names(s, what, line):
    items = s.split() if s else []
    seen = set()
    for it in items:
        if it in seen:
            raise _err(line, f"duplicate {what} {it!r}")
        seen.add(it)
    return tuple(items)


def _build(fields, rule_lines, lines):
    for req in ("values", "init_value", "target", "init"):
        if req not in fields:
            raise SpecError(f"missing section {req!r}")
    kind = fields.get("kind", "finite").strip()
    if kind not in ("finite", "pushdown"):
        raise _err(lines.get("kind"), f"unknown kind {kind!r}")
    values = _names(fields["values"], "value", lines.get("values"))
    globals_ = _names(fields.get("globals", ""), "global", lines.get("globals"))
    locals_ = _names(fields.get("locals", ""), "local", lines.get("locals"))
    both = set(globals_) & set(locals_)
    if both:
        raise _err(lines.get("locals"), f"variable declared both global and local: {sorted(both)}")
    init_value = fields["init_value"].strip()
    target = fields["target"].strip()
    if init_value not in values:
        raise _err(lines.get("init_value"), f"init_value {init_value!r} not among values")
    if target not in values:
        raise _err(lines.get("target"), f"target {target!r} not among values")
    states = _names(fields.get("states", ""), "state", lines.get("states"))
    stack = _names(fields.get("stack", ""), "stack symbol", lines.get("stack"))
    if kind == "finite" and stack:
        raise _err(lines.get("stack"), "stack alphabet given for a finite process")

    def check_stack(word, line):
        for s in word:
            if s not in stack:
                raise _err(line, f"undeclared stack symbol {s!r}")

    def state_of(name, word, line, what):
        if kind == "finite":
            if word is not None:
                raise _err(line, f"stack word on {what} of a finite process")
            if states and name not in states:
                raise _err(line, f"undeclared state {name!r}")
            return name
        word = word or ()
        check_stack(word, line)
        if states and name not in states:
            raise _err(line, f"undeclared control {name!r}")
        return (name, word)

    init_name, init_word = _parse_side(fields["init"], lines.get("init"), "init")
    init = state_of(init_name, init_word, lines.get("init"), "init")

    rules = []
    for text, line in rule_lines:
        m = _RULE.match(text)
        if not m:
            raise _err(line, f"cannot parse rule {text!r}")
        src, pop = _parse_side(m.group("lhs"), line, "rule source")
        dst, push = _parse_side(m.group("rhs"), line, "rule target")
        label = _parse_label(m.group("label"), line)
        if label.kind == SPAWN:
            name, word = label.val
            label = Action(SPAWN, None, state_of(name, word, line, "spawn target"))
        else:
            _check_label(label, values, globals_, locals_, line)
        if kind == "finite":
            if pop is not None or push is not None:
                raise _err(line, "pop/push on a finite process rule")
            if states:
                for s in (src, dst):
                    if s not in states:
                        raise _err(line, f"undeclared state {s!r}")
            rules.append(Rule(len(rules), src, (), label, dst, ()))
        else:
            pop, push = pop or (), push or ()
            if len(pop) > 1:
                raise _err(line, "pop words longer than one symbol are not supported")
            check_stack(pop, line)
            check_stack(push, line)
            if states:
                for s in (src, dst):
                    if s not in states:
                        raise _err(line, f"undeclared control {s!r}")
            rules.append(Rule(len(rules), src, pop, label, dst, push))
    return ProcessSpec(
        kind=kind, values=values, init_value=init_value, globals=globals_, locals=locals_,
        target=target, init=init, rules=tuple(rules), stack_alphabet=stack, states=states,
    )


def _check_label(label, values, globals_, locals_, line):
    if label.kind == TAU:
        return
    if label.kind in (INPUT, OUTPUT):
        if label.var not in locals_:
            raise _err(line, f"{label.kind} needs a declared local, got {label.var!r}")
    elif label.var not in locals_ and label.var not in globals_:
        raise _err(line, f"undeclared variable {label.var!r}")
    if label.val not in values:
        raise _err(line, f"undeclared value {label.val!r}")


def load(path):
    with open(path, encoding="utf-8") as fh:
        return parse_process(fh.read())


def format_rule(rule, kind):
    if kind == "finite":
        return f"{rule.src} --{rule.label}--> {rule.dst}"
    pop = f" [{' '.join(rule.pop)}]" if rule.pop else ""
    return f"{rule.src}{pop} --{rule.label}--> {rule.dst} [{' '.join(rule.push)}]"


def format_process(spec):
    """Render a spec back into the line format (parse_process inverts it)."""
    out = [f"kind: {spec.kind}",
           f"values: {' '.join(spec.values)}",
           f"init_value: {spec.init_value}",
           f"globals: {' '.join(spec.globals)}",
           f"locals: {' '.join(spec.locals)}",
           f"target: {spec.target}"]
    if spec.states:
        out.append(f"states: {' '.join(spec.states)}")
    if spec.kind == "pushdown":
        out.append(f"stack: {' '.join(spec.stack_alphabet)}")
    out.append(f"init: {format_state(spec.init)}")
    out.append("rules:")
    out.extend("  " + format_rule(r, spec.kind) for r in spec.rules)
    return "\n".join(out) + "\n"
