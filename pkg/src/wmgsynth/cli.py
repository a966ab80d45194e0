"""Command-line front end.

Reports are ``key: value`` lines on stdout.  Exit status: 0 for a positive
answer, 1 for a negative one, 2 for bad input, 3 when a budget or state
bound is exhausted.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import acyclic, binary, cyclic
from .errors import BudgetError, CertificationFailed, InputError, NonConvex, Unsolvable, WmgError
from .formats import emit_dot, emit_lts, emit_net, parse_lts, parse_net, read_lts, read_net
from .lts import ParikhVector, format_word, lts_isomorphic, parse_word
from .net import explore, is_wmg, minimal_t_semiflow
from .search import bounded_net_search


class Report:
    def __init__(self, out):
        self.out = out

    def __call__(self, key, value):
        if isinstance(value, bool):
            value = "true" if value else "false"
        print(f"{key}: {value}", file=self.out)


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _natural(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return value


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _emit_system(args, report, system):
    """Net text (or DOT) to --out, or inline after the report."""
    text = emit_dot(system) if args.format == "dot" else emit_net(system)
    if args.out:
        _write(args.out, text)
        report("net_file", args.out)
    else:
        report("net", "")
        print(text, end="", file=report.out)


def _maybe_plot(args, report, draw):
    if getattr(args, "plot", None):
        from . import plotting
        report("plot", draw(plotting, args.plot))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_solve_binary(args, report):
    word = parse_word(args.word)
    circuit = binary.solve_binary_cyclic(word)
    report("verdict", "solvable")
    report("word", format_word(word))
    report("length", len(word))
    if circuit.b is not None:
        report("roles", f"a={circuit.a},b={circuit.b}")
        report("n", circuit.n)
        report("m", circuit.m)
        report("quotients", ",".join(map(str, binary.quotient_sequence(circuit.n, circuit.m).quotients)))
        report("canonical", format_word(circuit.canonical))
        report("offset", circuit.offset)
    report("tokens_total", circuit.tokens_total)
    rg = explore(circuit.system, state_bound=len(word) + 1)[0]
    report("states", len(rg.states))
    report("certified", True)
    _emit_system(args, report, circuit.system)
    _maybe_plot(args, report, lambda pl, path: pl.plot_marking_trace(circuit.system, word, path))
    return 0


def cmd_solve_cyclic(args, report):
    word = parse_word(args.word)
    decision = cyclic.decide_cyclic(word, use_oracle=args.oracle, budget=args.budget)
    _cyclic_report(report, word, decision)
    if decision.system is not None:
        _emit_system(args, report, decision.system)
        _maybe_plot(args, report, lambda pl, path: pl.plot_marking_trace(decision.system, word, path))
    return {True: 0, False: 1, None: 1}[decision.verdict.solvable]


def _cyclic_report(report, word, decision):
    report("verdict", decision.verdict.value)
    report("word", format_word(word))
    report("parikh", ParikhVector.of_word(word))
    for d in decision.pairs:
        status = "ok" if d.ok else "failed"
        report(f"pair_{','.join(d.pair)}", f"root={format_word(d.root)} {status}")
    if decision.witness_pair:
        report("witness_pair", ",".join(decision.witness_pair))
    if decision.note:
        report("note", decision.note)
    if decision.system is not None:
        report("places", len(decision.system.net.places))
        report("semiflow", minimal_t_semiflow(decision.system.net) if decision.system.net.places
               else ParikhVector.of_word(word))
        report("certified", True)


def cmd_oracle(args, report):
    if args.lts:
        lts = read_lts(args.word)
        result = bounded_net_search(lts, args.max_weight, args.max_tokens)
        report("verdict", "OracleSolvable" if result.solvable else "OracleUnsolvable")
        report("places_tried", result.places_tried)
        report("places_admissible", result.places_admissible)
        if result.system is not None:
            _emit_system(args, report, result.system)
        return 0 if result.solvable else 1
    word = parse_word(args.word)
    decision = cyclic.brute_force_cyclic_oracle(word, budget=args.budget)
    _cyclic_report(report, word, decision)
    for key in ("flat_space", "group_space"):
        if key in decision.extra:
            report(key, decision.extra[key])
    if decision.system is not None:
        _emit_system(args, report, decision.system)
    return 0 if decision.verdict.solvable else 1


def cmd_synth_acyclic(args, report):
    lts = read_lts(args.file)
    try:
        solution = acyclic.synthesize_acyclic(lts)
    except NonConvex as exc:
        _maybe_plot_lattice(args, report, lts, (), exc.witness)
        raise
    report("verdict", "solvable")
    report("states", len(lts.states))
    report("labels", ",".join(lts.labels))
    for i, r in enumerate(solution.regions):
        report(f"region_{i}", str(r))
    report("counters", ",".join(solution.counters) or "none")
    report("certified", True)
    _emit_system(args, report, solution.system)
    _maybe_plot_lattice(args, report, lts, solution.regions, None)
    return 0


def _maybe_plot_lattice(args, report, lts, regions, missing):
    if not getattr(args, "plot", None):
        return
    if len(lts.labels) != 2:
        report("plot", "skipped (needs two labels)")
        return
    points, _ = acyclic.embed(lts)
    _maybe_plot(args, report, lambda pl, path: pl.plot_lattice(lts.labels, points.points, regions, path, missing))


def cmd_synth_reversible(args, report):
    lts = read_lts(args.file)
    circuit = binary.synthesize_reversible_binary(lts)
    report("verdict", "solvable")
    report("states", len(lts.states))
    report("small_cycle", f"{circuit.a}:{circuit.n},{circuit.b}:{circuit.m}")
    report("tokens_total", circuit.tokens_total)
    report("certified", True)
    _emit_system(args, report, circuit.system)
    return 0


def cmd_simulate(args, report):
    system = read_net(args.file)
    rg, _ = explore(system, state_bound=args.bound)
    report("states", len(rg.states))
    report("arcs", len(rg.arcs))
    report("wmg", bool(is_wmg(system.net)))
    if args.format == "dot":
        text = emit_dot(rg, "reachability")
    else:
        text = emit_lts(rg)
    if args.out:
        _write(args.out, text)
        report("rg_file", args.out)
    else:
        report("reachability_graph", "")
        print(text, end="", file=report.out)
    _maybe_plot(args, report, lambda pl, path: pl.plot_lts(rg, path))
    return 0


def cmd_isomorphic(args, report):
    left, right = read_lts(args.left), read_lts(args.right)
    mapping = lts_isomorphic(left, right) if len(left.states) == len(right.states) else None
    report("isomorphic", mapping is not None)
    if mapping is not None:
        for s in sorted(mapping):
            report(f"map_{s}", mapping[s])
    return 0 if mapping is not None else 1


def cmd_predict_states(args, report):
    predicted = binary.predict_state_count(args.n, args.m, args.k)
    report("predicted_states", predicted)
    if args.simulate:
        system = binary.circuit_system("a", "b", args.n, args.m, 0, args.k)
        rg, _ = explore(system, state_bound=args.k + 2)
        report("simulated_states", len(rg.states))
        return 0 if len(rg.states) == predicted else 1
    return 0


def cmd_infinite_check(args, report):
    system = binary.infinite_binary_candidate(args.n, args.m, args.i0)
    if args.against_lts:
        target = read_lts(args.against_lts)
    else:
        n, m, i0 = args.against or (args.n, args.m, args.i0)
        target = explore(binary.infinite_binary_candidate(n, m, i0), depth=args.depth)[0]
    ka, lb = binary.bezout_block(args.n, args.m)
    report("bezout_block", f"a^{ka} b^{lb}")
    report("block_repetitions", binary.max_block_repetitions(system, ["a"] * ka + ["b"] * lb))
    verdict = binary.verify_infinite_binary(system, target, args.depth)
    report("depth", args.depth)
    report("equivalent", bool(verdict))
    if not verdict:
        for key, value in verdict.witness.items():
            report(f"divergence_{key}", value if not isinstance(value, list) else ",".join(value) or "-")
    return 0 if verdict else 1


def cmd_export_dot(args, report):
    with open(args.file, encoding="utf-8") as fh:
        text = fh.read()
    kind = args.kind
    if kind == "auto":
        first = next((ln.split()[0] for ln in text.splitlines() if ln.split("#", 1)[0].strip()), "")
        kind = "lts" if first == "initial" else "net"
    obj = parse_lts(text) if kind == "lts" else parse_net(text)
    if kind == "rg":
        obj = explore(obj, state_bound=args.bound)[0]
    dot = emit_dot(obj)
    if args.out:
        _write(args.out, dot)
        report("dot_file", args.out)
    else:
        print(dot, end="", file=report.out)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wmgsynth", description="Decide, synthesize and certify weighted marked graphs.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        return p

    def outputs(p, plot=True):
        p.add_argument("--out", help="write the net (or graph) to this file")
        p.add_argument("--format", choices=("text", "dot"), default="text")
        if plot:
            p.add_argument("--plot", metavar="PNG", help="also render a figure to this file")

    p = add("solve-binary", cmd_solve_binary, "cyclic solvability of a two-label word")
    p.add_argument("word")
    outputs(p)

    p = add("solve-cyclic", cmd_solve_cyclic, "cyclic solvability of a word over any labels")
    p.add_argument("word")
    p.add_argument("--oracle", action="store_true", help="go straight to the exhaustive search")
    p.add_argument("--budget", type=_positive, default=cyclic.DEFAULT_ORACLE_BUDGET)
    outputs(p)

    p = add("oracle", cmd_oracle, "exhaustive search (cyclic word, or an LTS file with --lts)")
    p.add_argument("word", help="word, or LTS file with --lts")
    p.add_argument("--lts", action="store_true")
    p.add_argument("--budget", type=_positive, default=cyclic.DEFAULT_ORACLE_BUDGET)
    p.add_argument("--max-weight", type=_positive, default=4)
    p.add_argument("--max-tokens", type=_natural, default=8)
    outputs(p, plot=False)

    p = add("synth-acyclic", cmd_synth_acyclic, "synthesize a WMG for a finite acyclic LTS")
    p.add_argument("file")
    outputs(p)

    p = add("synth-reversible", cmd_synth_reversible, "synthesize a circuit for a finite two-label LTS")
    p.add_argument("file")
    outputs(p, plot=False)

    p = add("simulate", cmd_simulate, "reachability graph of a net file")
    p.add_argument("file")
    p.add_argument("--bound", type=_positive, default=100_000)
    outputs(p)

    p = add("isomorphic", cmd_isomorphic, "rooted isomorphism of two LTS files")
    p.add_argument("left")
    p.add_argument("right")

    p = add("predict-states", cmd_predict_states, "state count of a binary circuit with k tokens")
    p.add_argument("n", type=_positive)
    p.add_argument("m", type=_positive)
    p.add_argument("k", type=_natural)
    p.add_argument("--simulate", action="store_true", help="also count states by simulation")

    p = add("infinite-check", cmd_infinite_check, "bounded check of the single-place infinite candidate")
    p.add_argument("n", type=_positive)
    p.add_argument("m", type=_positive)
    p.add_argument("i0", type=_natural)
    p.add_argument("--depth", type=_positive, default=30)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--against", nargs=3, type=_natural, metavar=("N", "M", "I0"),
                       help="compare with another candidate's behaviour")
    group.add_argument("--against-lts", metavar="FILE")

    p = add("export-dot", cmd_export_dot, "render an LTS, a net, or a net's reachability graph as DOT")
    p.add_argument("file")
    p.add_argument("--kind", choices=("auto", "lts", "net", "rg"), default="auto")
    p.add_argument("--bound", type=_positive, default=100_000)
    p.add_argument("--out")
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    report = Report(out)
    try:
        return args.func(args, report)
    except OSError as exc:
        report("error", type(exc).__name__)
        print(f"error: {exc}", file=err)
        return 2
    except WmgError as exc:
        report("error", type(exc).__name__)
        if isinstance(exc, Unsolvable) or isinstance(exc, CertificationFailed):
            report("verdict", "unsolvable")
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        if isinstance(exc, BudgetError):
            return 3
        if isinstance(exc, InputError):
            return 2
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
