"""Command-line front end: ``dpp check|core|oracle|flatten|compare|encode-sat``.

Exit codes: 0 reachable (or nothing to report), 1 unreachable, 2 resource
limits, usage or input errors.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .corpus import FRAGMENTS, corpus, encode_sat
from .fmt import format_process, load
from .hypothesis import Caps, process_automaton
from .model import FragmentMismatch, ResourceLimit, SpecError, word_key
from .oracle import ExploreBounds, explore_multiset, explore_set
from .solver import (
    ALGORITHMS, REACHABLE, RESOURCE, UNREACHABLE, export_cd_system, flatten, levelwise_cores, solve,
    solve_gen_futures, solve_simple_futures,
)

EXIT = {REACHABLE: 0, UNREACHABLE: 1, RESOURCE: 2}

VERDICT_SCHEMA = {
    "type": "object",
    "required": ["verdict", "algorithm", "witness", "labels", "levels", "detail", "abstract_witness", "run", "timings"],
    "properties": {
        "verdict": {"enum": [REACHABLE, UNREACHABLE, RESOURCE]},
        "algorithm": {"enum": list(ALGORITHMS[1:])},
        "witness": {"type": ["string", "null"]},
        "labels": {"type": "array", "items": {"type": "string"}},
        "levels": {"type": ["integer", "null"]},
        "detail": {"type": "string"},
        "abstract_witness": {"type": "boolean"},
        "run": {"type": "array", "items": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2}},
        "timings": {"type": "object", "additionalProperties": {"type": "number"}},
    },
    "additionalProperties": False,
}


def _caps(args):
    return Caps(args.max_levels, args.max_core_iterations, args.max_states, args.max_candidates,
                args.max_seconds if args.max_seconds > 0 else None)


def _bounds(args):
    return ExploreBounds(args.depth, args.children, args.steps, args.stack, args.max_states)


def _add_caps(p):
    d = Caps()
    p.add_argument("--max-levels", type=int, default=d.max_levels)
    p.add_argument("--max-core-iterations", type=int, default=d.max_core_iterations)
    p.add_argument("--max-states", type=int, default=d.max_states)
    p.add_argument("--max-candidates", type=int, default=d.max_candidates)
    p.add_argument("--max-seconds", type=float, default=d.max_seconds, help="time limit; 0 disables it")


def _add_bounds(p):
    d = ExploreBounds()
    p.add_argument("--depth", type=int, default=d.max_depth)
    p.add_argument("--children", type=int, default=d.max_children_per_node)
    p.add_argument("--steps", type=int, default=d.max_steps)
    p.add_argument("--stack", type=int, default=d.max_stack_height)
    p.add_argument("--max-states", type=int, default=d.max_states)


def cmd_check(args, out):
    spec = load(args.file)
    caps = _caps(args)
    if args.dot:
        Path(args.dot).write_text(process_automaton(spec).to_dot() + "\n")
    if args.algorithm == "gen-futures" and args.poly_b:
        v = solve_gen_futures(spec, caps, poly_b=True)
    elif args.algorithm == "simple-futures" and args.guess:
        v = solve_simple_futures(spec, caps, guess=True)
    else:
        v = solve(spec, args.algorithm, caps)
    if args.json:
        json.dump(v.to_json(), out, indent=2)
        out.write("\n")
        return EXIT[v.status]
    head = {REACHABLE: "Reachable", UNREACHABLE: "Unreachable", RESOURCE: "ResourceExceeded"}[v.status]
    extra = f"levels {v.levels}" if v.levels is not None else v.detail
    print(f"{head} ({v.algorithm}{', ' + extra if extra else ''})", file=out)
    if v.status == REACHABLE:
        print(f"witness: {v.witness}", file=out)
        if args.emit_witness:
            print("labels: " + " ".join(str(a) for a in v.labels), file=out)
            if v.abstract:
                print("run: none replayed within default bounds (abstract witness)", file=out)
            else:
                print("run:", file=out)
                for a, t in v.run:
                    print(f"  {'-' if a is None else a}  {t}", file=out)
    if v.status == UNREACHABLE and v.detail:
        print(v.detail, file=out)
    return EXIT[v.status]


def cmd_core(args, out):
    spec = load(args.file)
    cores = levelwise_cores(spec, upto=args.level, consistent=args.consistent, caps=_caps(args))
    if args.level >= len(cores.levels):
        print(f"level {args.level} not computed", file=sys.stderr)
        return 2
    words = sorted(cores[args.level], key=word_key)
    if args.json:
        json.dump({"level": args.level, "words": [str(w) for w in words],
                   "stabilized_at": cores.stabilized_at}, out, indent=2)
        out.write("\n")
    else:
        for w in words:
            print(w, file=out)
    return 0


def cmd_oracle(args, out):
    spec = load(args.file)
    explore = explore_multiset if args.semantics == "multiset" else explore_set
    r = explore(spec, _bounds(args))
    if args.json:
        json.dump({"found": r.found, "labels": [str(a) for a in r.labels], "trace": r.trace_lines(),
                   "stats": r.stats}, out, indent=2)
        out.write("\n")
    elif r.found:
        print("WitnessFound", file=out)
        for line in r.trace_lines():
            print("  " + line, file=out)
    else:
        print(f"NoneWithinBounds {r.stats}", file=out)
    return 0 if r.found else 1


def cmd_flatten(args, out):
    flat = flatten(load(args.file))
    text = json.dumps(export_cd_system(flat), indent=2) + "\n" if args.export_cd else format_process(flat)
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return 0


def _compare_one(job):
    name, spec, algorithm, bounds = job
    try:
        v = solve(spec, algorithm, replay=None).status
    except FragmentMismatch:
        v = solve(spec, "general", replay=None).status
    ms = explore_multiset(spec, bounds).found
    st = explore_set(spec, bounds).found
    ok = (not ms or v == REACHABLE) and ms == st
    return name, v, ms, st, ok


def cmd_compare(args, out):
    bounds = _bounds(args)
    if args.dir:
        files = sorted(Path(args.dir).glob("*.dpp"))[:args.count]
        jobs = [(f.name, load(f), args.algorithm, bounds) for f in files]
    else:
        specs = corpus(args.seed, args.fragment, args.count)
        jobs = [(f"{args.fragment}-{args.seed}-{i}", s, args.algorithm, bounds) for i, s in enumerate(specs)]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_compare_one, jobs))
    else:
        rows = [_compare_one(j) for j in jobs]
    print(f"{'spec':<24} {'solver':<12} {'multiset':<9} {'set':<9} agree", file=out)
    for name, v, ms, st, ok in rows:
        print(f"{name:<24} {v:<12} {str(ms):<9} {str(st):<9} {'yes' if ok else 'NO'}", file=out)
    bad = sum(1 for r in rows if not r[4])
    print(f"{len(rows) - bad}/{len(rows)} agree", file=out)
    return 0 if not bad else 1


def read_dimacs(text):
    n, clauses, cur = 0, [], []
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "c%":
            continue
        if line.startswith("p"):
            n = int(line.split()[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(lit)
                n = max(n, abs(lit))
    if cur:
        clauses.append(tuple(cur))
    return n, clauses


def cmd_encode_sat(args, out):
    n, clauses = read_dimacs(Path(args.file).read_text())
    text = format_process(encode_sat(n, clauses))
    if args.out:
        Path(args.out).write_text(text)
    else:
        out.write(text)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="dpp", description="Reachability for dynamic parametric processes.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide whether the root can write or output the target value")
    c.add_argument("file")
    c.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    c.add_argument("--emit-witness", action="store_true", help="print the witness labels and a concrete run")
    c.add_argument("--json", action="store_true")
    c.add_argument("--dot", metavar="PATH", help="write the process automaton in DOT format")
    c.add_argument("--poly-b", action="store_true", help="gen-futures: bounded B sets")
    c.add_argument("--guess", action="store_true", help="simple-futures: enumerate spawn orders")
    _add_caps(c)
    c.set_defaults(run=cmd_check)

    c = sub.add_parser("core", help="print the level-k core")
    c.add_argument("file")
    c.add_argument("--level", type=int, default=0)
    c.add_argument("--consistent", action="store_true")
    c.add_argument("--json", action="store_true")
    _add_caps(c)
    c.set_defaults(run=cmd_core)

    c = sub.add_parser("oracle", help="bounded explicit exploration")
    c.add_argument("file")
    c.add_argument("--semantics", choices=("multiset", "set"), default="multiset")
    c.add_argument("--json", action="store_true")
    _add_bounds(c)
    c.set_defaults(run=cmd_oracle)

    c = sub.add_parser("flatten", help="remove nested spawns (processes without locals)")
    c.add_argument("file")
    c.add_argument("--out")
    c.add_argument("--export-cd", action="store_true", help="emit the leader/contributor JSON instead")
    c.set_defaults(run=cmd_flatten)

    c = sub.add_parser("compare", help="solver vs. oracles on a seeded corpus or a directory")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--count", type=int, default=20)
    c.add_argument("--fragment", choices=FRAGMENTS, default="general")
    c.add_argument("--dir")
    c.add_argument("--algorithm", choices=ALGORITHMS, default="general")
    c.add_argument("--jobs", type=int, default=1)
    _add_bounds(c)
    c.set_defaults(run=cmd_compare, max_states=50_000)

    c = sub.add_parser("encode-sat", help="turn a DIMACS CNF file into a simple-futures process")
    c.add_argument("file")
    c.add_argument("--out")
    c.set_defaults(run=cmd_encode_sat)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        return args.run(args, out)
    except (SpecError, FragmentMismatch, ResourceLimit, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
