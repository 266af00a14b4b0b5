"""
Command-line front end.

    talented eq --graph ex.g "v@2" "v@0"
    talented orbit --graph ex.g "o@0" -n -2
    talented madvet --puzzle vet.txt --json

Exit status: 0 for definite answers (negative ones included), 2 when a
bounded procedure returns UNKNOWN, 1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analyzer, graph, ideals, madvet, monoid, oracle

EXIT_OK, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2

COMMANDS = (
    "analyze", "eq", "leq", "orbit", "periodic", "ideals", "quotient",
    "fingerprint", "compare", "covering", "oracle", "madvet",
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _default_budget() -> int:
    env = os.environ.get("TALENT_BUDGET")
    if env is None:
        return monoid.DEFAULT_BUDGET
    try:
        value = int(env)
    except ValueError:
        raise UsageError(f"TALENT_BUDGET must be an integer, got {env!r}") from None
    if value <= 0:
        raise UsageError("TALENT_BUDGET must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="talented", description="Decision procedures for graded graph monoids.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help, graphs=1, elements=0):
        p = sub.add_parser(name, help=help)
        if graphs:
            p.add_argument("--graph", required=True, action="append" if graphs > 1 else "store")
        if elements:
            p.add_argument("elements", nargs=elements, metavar="ELEMENT")
        p.add_argument("--json", action="store_true")
        p.add_argument("--cap", type=int, default=None, help="vertex cap for lattice enumeration")
        return p

    cmd("analyze", "structure report with witnesses")
    p = cmd("eq", "equality of two elements", elements=2)
    p.add_argument("--ungraded", action="store_true", help="compare in M_E instead of the graded monoid")
    p.add_argument("--budget", type=int, default=None)
    p = cmd("leq", "three-valued order test a <= b", elements=2)
    p.add_argument("--horizon", type=int, default=None)
    p = cmd("orbit", "compare an element with a negative shift of itself", elements=1)
    p.add_argument("-n", type=int, required=True, dest="n")
    p.add_argument("--horizon", type=int, default=None)
    cmd("periodic", "least period of an element", elements=1)
    p = cmd("ideals", "lattice of order-ideals")
    p.add_argument("--element", default=None, help="also report the ideal this element generates")
    p = cmd("quotient", "quotient graph by an ideal and similarity modulo it")
    p.add_argument("--ideal", required=True, help="whitespace-separated hereditary saturated vertex set")
    p.add_argument("elements", nargs="*", metavar="ELEMENT")
    cmd("fingerprint", "invariant fingerprint")
    cmd("compare", "compare the fingerprints of two graphs", graphs=2)
    p = cmd("covering", "finite window of the covering graph")
    p.add_argument("--levels", required=True, help="LO..HI")
    p = cmd("oracle", "breadth-first common-reduct search", elements=2)
    p.add_argument("--budget", type=int, default=None)
    p = cmd("madvet", "solve a Mad Veterinarian puzzle", graphs=0)
    p.add_argument("--puzzle", required=True)
    p.add_argument("--budget", type=int, default=None)
    return ap


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_graph(path: str) -> graph.Graph:
    try:
        return graph.parse_graph(_read(path))
    except graph.GraphFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _element(text: str, g: graph.Graph) -> monoid.GradedElement:
    try:
        return monoid.parse_element(text, g)
    except monoid.ElementSyntaxError as exc:
        raise UsageError(f"element {text!r}: {exc}") from None


def _budget(args) -> int:
    budget = args.budget if args.budget is not None else _default_budget()
    if budget <= 0:
        raise UsageError("--budget must be positive")
    return budget


def _horizon(args, g) -> int:
    h = args.horizon if args.horizon is not None else monoid.default_horizon(g)
    if h <= 0:
        raise UsageError("--horizon must be positive")
    return h


def _set_text(g, s) -> str:
    return "{" + ", ".join(g.ordered(s)) + "}"


# Each handler returns (report dict, text lines, exit status).


def _analyze(args):
    g = _load_graph(args.graph)
    rep = analyzer.structure_report(g, args.cap)
    d = rep.to_dict()
    lines = [f"{k}: {str(v).lower()}" for k, v in d.items() if k != "witnesses"]
    lines += [f"  {k}: {w}" for k, w in d["witnesses"].items()]
    return {"command": "analyze", **d}, lines, EXIT_OK


def _eq(args):
    g = _load_graph(args.graph)
    a, b = (_element(t, g) for t in args.elements)
    if args.ungraded:
        if any(i != 0 for x in (a, b) for _, i in x.terms):
            raise UsageError("--ungraded elements must not carry shifts")
        verdict = monoid.eq_ungraded(g, monoid.forgetful(a), monoid.forgetful(b), _budget(args)).value
    else:
        verdict = "EQUAL" if monoid.eq_graded(g, a, b) else "NOT_EQUAL"
    status = EXIT_UNKNOWN if verdict == "UNKNOWN" else EXIT_OK
    report = {"command": "eq", "a": a.format(g), "b": b.format(g), "graded": not args.ungraded, "verdict": verdict}
    return report, [verdict], status


def _leq(args):
    g = _load_graph(args.graph)
    a, b = (_element(t, g) for t in args.elements)
    h = _horizon(args, g)
    verdict = monoid.leq_graded(g, a, b, h).value
    status = EXIT_UNKNOWN if verdict == "UNKNOWN" else EXIT_OK
    return {"command": "leq", "a": a.format(g), "b": b.format(g), "horizon": h, "verdict": verdict}, [verdict], status


_ORBIT_TEXT = {
    "EQ": "EQ (ⁿa = a)",
    "GT": "GT (ⁿa > a)",
    "INCOMPARABLE": "INCOMPARABLE (ⁿa ∥ a)",
    "UNKNOWN": "UNKNOWN",
}


def _orbit(args):
    g = _load_graph(args.graph)
    (a,) = (_element(t, g) for t in args.elements)
    if args.n >= 0:
        raise UsageError("-n must be negative")
    h = _horizon(args, g)
    res = monoid.compare_orbit(g, a, args.n, h)
    witness = res.witness.as_element().format(g) if res.witness is not None else None
    report = {"command": "orbit", "a": a.format(g), "n": args.n, "horizon": h, "verdict": res.verdict.value, "witness": witness}
    lines = [_ORBIT_TEXT[res.verdict.value]]
    if witness is not None:
        lines.append(f"witness: {witness}")
    status = EXIT_UNKNOWN if res.verdict is monoid.Verdict.UNKNOWN else EXIT_OK
    return report, lines, status


def _periodic(args):
    g = _load_graph(args.graph)
    (a,) = (_element(t, g) for t in args.elements)
    if not a:
        raise UsageError("the zero element has no period")
    p = monoid.is_periodic(g, a)
    text = f"PERIODIC {p}" if p is not None else "APERIODIC"
    return {"command": "periodic", "a": a.format(g), "period": p}, [text], EXIT_OK


def _ideals(args):
    g = _load_graph(args.graph)
    lat = ideals.lattice(g, args.cap)
    entries = []
    lines = []
    for k, i in enumerate(lat.ideals):
        prime = ideals.is_prime(i)
        entries.append({"index": k, "generators": i.label(), "prime": prime})
        lines.append(f"[{k}] {_set_text(g, i.generators)}" + ("  prime" if prime else ""))
    covers = [list(p) for p in lat.covers()]
    lines.append("covers: " + ", ".join(f"{i}<{j}" for i, j in covers))
    report = {"command": "ideals", "ideals": entries, "covers": covers, "simple": len(lat.ideals) == 2}
    if args.element is not None:
        a = _element(args.element, g)
        gen = ideals.ideal_generated_by(g, a)
        report["generated"] = {"element": a.format(g), "generators": gen.label()}
        lines.append(f"<{a.format(g)}> = <{_set_text(g, gen.generators)}>")
    return report, lines, EXIT_OK


def _quotient(args):
    g = _load_graph(args.graph)
    members = args.ideal.split()
    try:
        ideal = ideals.ideal_of_set(g, members)
    except ideals.IdealError as exc:
        raise UsageError(str(exc)) from None
    ctx = ideals.quotient_context(ideal)
    report = {"command": "quotient", "ideal": ideal.label(), "quotient": graph.format_graph(ctx.quotient)}
    lines = [f"E/{_set_text(g, ideal.generators)}:", graph.format_graph(ctx.quotient).rstrip()]
    status = EXIT_OK
    if args.elements:
        if len(args.elements) != 2:
            raise UsageError("quotient takes either no elements or two")
        a, b = (_element(t, g) for t in args.elements)
        verdict = ideals.quotient_sim(ideal, a, b).value
        report.update({"a": a.format(g), "b": b.format(g), "verdict": verdict})
        lines.append(verdict)
    return report, lines, status


def _fingerprint(args):
    g = _load_graph(args.graph)
    fp = analyzer.fingerprint(g, args.cap)
    d = fp.to_dict()
    lines = [f"{k}: {json.dumps(v)}" for k, v in d.items()]
    return {"command": "fingerprint", **d}, lines, EXIT_OK


def _compare(args):
    if len(args.graph) != 2:
        raise UsageError("compare needs exactly two --graph flags")
    g1, g2 = (_load_graph(p) for p in args.graph)
    rep = analyzer.compare(g1, g2, args.cap)
    d = rep.to_dict()
    lines = [rep.verdict]
    lines += [f"  match: {n}" for n in rep.matched]
    lines += [f"  mismatch: {n}: {a} vs {b}" for n, a, b in rep.mismatched]
    lines += [f"  note: {n}" for n in rep.notes]
    return {"command": "compare", **d}, lines, EXIT_OK


def _covering(args):
    g = _load_graph(args.graph)
    lo, sep, hi = args.levels.partition("..")
    try:
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise UsageError("--levels must look like LO..HI") from None
    if not sep or lo > hi:
        raise UsageError("--levels must look like LO..HI with LO <= HI")
    w = graph.covering_window(g, lo, hi)
    text = graph.format_graph(w)
    return {"command": "covering", "levels": [lo, hi], "graph": text}, [text.rstrip()], EXIT_OK


def _oracle(args):
    g = _load_graph(args.graph)
    a, b = (_element(t, g) for t in args.elements)
    res = oracle.run_oracle(g, a, b, _budget(args))
    common = None
    if res.common is not None:
        common = monoid.GradedElement(res.common).format(g)
    report = {
        "command": "oracle",
        "a": a.format(g),
        "b": b.format(g),
        "verdict": res.verdict,
        "common_reduct": common,
        "states": res.states,
        "max_level": res.max_level,
        "window": list(res.window),
    }
    lines = [res.verdict]
    if common is not None:
        lines.append(f"common reduct: {common}")
    lines.append(f"states explored: {res.states}, max level: {res.max_level}")
    status = EXIT_UNKNOWN if res.verdict == "UNKNOWN" else EXIT_OK
    return report, lines, status


def _madvet(args):
    try:
        puzzle = madvet.parse_puzzle(_read(args.puzzle))
        results = madvet.solve_madvet(puzzle, _budget(args))
    except madvet.PuzzleError as exc:
        raise UsageError(f"{args.puzzle}: {exc}") from None
    g = madvet.puzzle_graph(puzzle)
    lines = []
    for r in results:
        kind = "graded" if r.graded else "ungraded"
        lines.append(f"{r.source} = {r.target} ({kind}): {r.verdict}")
        if r.trace is not None:
            lines.append("  " + " -> ".join(r.trace) if len(r.trace) > 1 else "  (no rewrites)")
    report = {
        "command": "madvet",
        "graph": graph.format_graph(g),
        "queries": [r.to_dict() for r in results],
    }
    status = EXIT_UNKNOWN if any(r.verdict == "UNKNOWN" for r in results) else EXIT_OK
    return report, lines, status


HANDLERS = {
    "analyze": _analyze, "eq": _eq, "leq": _leq, "orbit": _orbit,
    "periodic": _periodic, "ideals": _ideals, "quotient": _quotient,
    "fingerprint": _fingerprint, "compare": _compare, "covering": _covering,
    "oracle": _oracle, "madvet": _madvet,
}


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        report, lines, status = HANDLERS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (graph.GraphError, monoid.MonoidError, ideals.IdealError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.json:
        out.write(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        out.write("\n".join(lines) + "\n")
    return status


def main() -> None:
    raise SystemExit(run())
