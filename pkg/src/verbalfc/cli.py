"""Command-line front end.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
3 enumeration budget exceeded, 4 bad group spec or order cap,
5 word syntax error, 6 check inapplicable (hypotheses not met).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import verify as V
from .battery import BATTERIES, INSTANCE_CHECKS, instance_seed, run_suite
from .constructions import build
from .errors import (
    BudgetExceeded,
    GroupSpecError,
    InexactValuesError,
    MissingBindingError,
    OrderCapExceeded,
    PreconditionError,
    WordSyntaxError,
)
from .group import DEFAULT_MAX_ORDER, center
from .verbal import DEFAULT_MAX_TUPLES, iterated_commutator_chain, star, verbal_subgroup, w_values, word_width
from .words import evaluate, parse_word

EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET, EXIT_GROUP, EXIT_WORD, EXIT_INAPPLICABLE = 1, 2, 3, 4, 5, 6

CHECKS = ["decomposition", *INSTANCE_CHECKS, "commutator_identity", "wreath_orbit", "axioms"]


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.add_argument("--max-tuples", type=int, default=DEFAULT_MAX_TUPLES, help="enumeration budget")
    p.add_argument("--sample", type=int, default=None, metavar="N", help="sample N tuples when over budget (inexact)")
    p.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, help="largest group order to construct")
    p.add_argument("--seed", type=int, default=0)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="verbalfc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_, group=True, word=False, m=False):
        sp = sub.add_parser(name, parents=[common], help=help_)
        if group:
            sp.add_argument("--group", "-g", required=True, help="group spec, e.g. S4, D4, Q8, C3xS3, wr2(C3), @file.json")
        if word:
            sp.add_argument("--word", "-w", required=True, help='group word, e.g. "[x1,x2]"')
        if m:
            sp.add_argument("-m", type=int, default=1, help="number of extra commutator variables")
        return sp

    gp = sub.add_parser("group", help="group information")
    gsub = gp.add_subparsers(dest="group_command", required=True)
    desc = gsub.add_parser("describe", parents=[common], help="order, generators, center")
    desc.add_argument("--group", "-g", required=True)
    desc.add_argument("--elements", action="store_true", help="list every element")

    ev = add("eval", "evaluate a word", word=True)
    ev.add_argument("--assign", "-a", action="append", default=[], metavar="xi=ELEM", help="id, label or cycle notation")
    vs = add("values", "value set G_w", word=True)
    vs.add_argument("--star", action="store_true", help="adjoin inverses")
    add("verbal", "verbal subgroup w(G)", word=True)
    add("chain", "[w(G), G, ..., G] for k = 0..m", word=True, m=True)
    add("width", "width of the word", word=True)
    dp = add("decompose", "write a value of [w, x_{n+1}, ...] over G_w*", word=True, m=True)
    dp.add_argument("--tuple", "-t", required=True, help="comma-separated elements g_1..g_{n+m} (ids or labels)")

    vf = sub.add_parser("verify", parents=[common], help="run one named check")
    vf.add_argument("check", choices=CHECKS)
    vf.add_argument("--group", "-g", required=True, help="group spec (base group for wreath_orbit)")
    vf.add_argument("--word", "-w", default=None)
    vf.add_argument("-m", type=int, default=1)
    vf.add_argument("--y", default=None, help="commutator_identity: single y instead of all pairs")
    vf.add_argument("--b", default=None, help="commutator_identity: single b instead of all pairs")
    vf.add_argument("--samples", type=int, default=200, help="decomposition: random tuples")

    st = sub.add_parser("suite", parents=[common], help="run a verification battery")
    st.add_argument("--battery", default="default", choices=sorted(BATTERIES))
    return parser


# -- helpers -----------------------------------------------------------------------


def _group(args):
    return build(args.group, max_order=args.max_order)


def _budget(args) -> dict:
    return {"max_tuples": args.max_tuples, "sample": args.sample, "seed": args.seed}


def _elements(G, ids) -> list[dict]:
    return [{"id": int(g), "label": G.label(g)} for g in ids]


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _report_line(r: V.VerificationReport) -> str:
    word = f" {r.word}" if r.word else ""
    return f"{r.status.upper():12s} {r.check} {r.group}{word} m={r.m} observed={r.observed} bound: {r.bound}"


def _emit_reports(args, reports) -> int:
    n = failed = inapplicable = 0
    for r in reports:
        n += 1
        if r.status == "inapplicable":
            inapplicable += 1
        elif not r.passed:
            failed += 1
        if args.json:
            print(json.dumps(r.to_dict(), sort_keys=True), flush=True)
        else:
            print(_report_line(r), flush=True)
            if r.witness:
                print(f"    witness: {json.dumps(V._plain(r.witness), sort_keys=True)}")
    print(f"{n} checks, {failed} failed, {inapplicable} inapplicable", file=sys.stderr)
    if failed:
        return EXIT_FAIL
    return EXIT_INAPPLICABLE if inapplicable else 0


# -- commands -------------------------------------------------------------------------


def cmd_group(args) -> int:
    G = _group(args)
    Z = center(G)
    payload = {
        "name": G.name,
        "order": G.order,
        "backend": G.backend,
        "abelian": G.is_abelian,
        "identity": G.identity,
        "generators": _elements(G, G.generators),
        "center_order": Z.order,
    }
    lines = [
        f"{G.name}: order {G.order}, {G.backend} backend, {'abelian' if G.is_abelian else 'non-abelian'}",
        "generators: " + ", ".join(f"{g} = {G.label(g)}" for g in G.generators),
        f"center order: {Z.order}",
    ]
    if args.elements:
        payload["elements"] = _elements(G, range(G.order))
        lines += [f"  {g}: {G.label(g)}" for g in range(G.order)]
    _emit(args, payload, "\n".join(lines))
    return 0


def _parse_assign(G, items) -> dict[int, int]:
    out: dict[int, int] = {}
    for item in items:
        for part in _split_top(item):
            if "=" not in part:
                raise UsageError(f"assignment {part!r} must look like x1=ELEM")
            var, val = part.split("=", 1)
            var = var.strip()
            if not (var.startswith("x") and var[1:].isdigit() and int(var[1:]) >= 1):
                raise UsageError(f"bad variable name {var!r}")
            out[int(var[1:])] = _parse_value(G, val)
    return out


def _parse_value(G, text: str) -> int:
    """An element given as id, label, or ``ID=LABEL`` (both must name the same element)."""
    forms = [t.strip() for t in text.split("=")]
    ids = {G.parse_element(t) for t in forms}
    if len(ids) != 1:
        raise UsageError(f"{text!r} names different elements: " + ", ".join(f"{t} -> {G.parse_element(t)}" for t in forms))
    return ids.pop()


def _split_top(text: str) -> list[str]:
    """Split on commas outside parentheses."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return [p.strip() for p in parts]


def cmd_eval(args) -> int:
    G = _group(args)
    w = parse_word(args.word)
    g = int(evaluate(w, G, _parse_assign(G, args.assign)))
    _emit(args, {"group": G.name, "word": str(w), "id": g, "label": G.label(g)}, f"{g} {G.label(g)}")
    return 0


def cmd_values(args) -> int:
    G = _group(args)
    w = parse_word(args.word)
    vs = w_values(G, w, **_budget(args))
    if args.star:
        vs = star(vs)
    payload = vs.to_json() | {"count": len(vs)}
    text = f"{len(vs)} values{' (sampled, inexact)' if not vs.exact else ''}: " + ", ".join(G.label(g) for g in vs.values)
    _emit(args, payload, text)
    return 0


def cmd_verbal(args) -> int:
    G = _group(args)
    w = parse_word(args.word)
    H = verbal_subgroup(G, w, **_budget(args))
    payload = {"group": G.name, "word": str(w), "order": H.order, "elements": [int(g) for g in H.ids]}
    _emit(args, payload, f"order {H.order}: " + ", ".join(G.label(g) for g in H.ids))
    return 0


def cmd_chain(args) -> int:
    G = _group(args)
    w = parse_word(args.word)
    ch = iterated_commutator_chain(G, w, args.m, max_tuples=args.max_tuples)
    payload = {
        "group": G.name,
        "word": str(w),
        "m": args.m,
        "orders": ch.orders(),
        "chain": [[int(g) for g in V_.ids] for V_ in ch.chain],
        "agrees_with_word": ch.agrees_with_word,
    }
    text = "\n".join(f"V{k}: order {o}" for k, o in enumerate(ch.orders()))
    text += f"\nV{args.m} equals the verbal subgroup of the extended word: {ch.agrees_with_word}"
    _emit(args, payload, text)
    return 0


def cmd_width(args) -> int:
    G = _group(args)
    w = parse_word(args.word)
    k = word_width(G, w, **_budget(args))
    _emit(args, {"group": G.name, "word": str(w), "width": k}, str(k))
    return 0


def cmd_decompose(args) -> int:
    G = _group(args)
    w = parse_word(args.word)
    g = [_parse_value(G, t) for t in _split_top(args.tuple)]
    d = V.decompose_into_values(G, w, g, args.m)
    problems = d.problems()
    factors = [
        {"id": f.element, "label": G.label(f.element), "inverted": f.inverted, "witness": list(f.witness)}
        for f in d.factors
    ]
    payload = {"group": G.name, "word": str(w), "m": args.m, "target": d.target, "factors": factors, "valid": not problems}
    lines = [f"target {d.target} {G.label(d.target)} = product of {len(factors)} factors:"]
    for f in factors:
        inv = "^-1" if f["inverted"] else ""
        lines.append(f"  {f['label']} = w({', '.join(G.label(t) for t in f['witness'])}){inv}")
    lines.append("valid" if not problems else "INVALID: " + "; ".join(problems))
    _emit(args, payload, "\n".join(lines))
    return 0 if not problems else EXIT_FAIL


def cmd_verify(args) -> int:
    G = _group(args)
    if args.check == "axioms":
        return _emit_reports(args, [V.check_group_axioms(G)])
    if args.check == "wreath_orbit":
        return _emit_reports(args, [V.wreath_orbit_growth(G, args.m)])
    if args.check == "commutator_identity":
        if (args.y is None) != (args.b is None):
            raise UsageError("--y and --b go together")
        if args.y is not None:
            r = V.iterated_commutator_identity(G, G.parse_element(args.y), G.parse_element(args.b), args.m)
        else:
            r = V.check_commutator_identity(G, tuple(range(args.m + 1)))
        return _emit_reports(args, [r])
    if args.word is None:
        raise UsageError(f"check {args.check} needs --word")
    w = parse_word(args.word)
    if args.check == "decomposition":
        if args.m < 1:
            raise UsageError("decomposition needs m >= 1")
        return _emit_reports(args, [V.check_decomposition(G, w, args.m, samples=args.samples, seed=instance_seed(G.name, w, args.m))])
    if args.m < 0:
        raise UsageError("m must be non-negative")
    data = V.Instance(G, w, args.m, max_tuples=args.max_tuples)
    return _emit_reports(args, [INSTANCE_CHECKS[args.check](G, w, args.m, data=data)])


def cmd_suite(args) -> int:
    return _emit_reports(args, run_suite(args.battery, max_tuples=args.max_tuples, max_order=args.max_order))


COMMANDS = {
    "group": cmd_group,
    "eval": cmd_eval,
    "values": cmd_values,
    "verbal": cmd_verbal,
    "chain": cmd_chain,
    "width": cmd_width,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "suite": cmd_suite,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except WordSyntaxError as exc:
        print(f"error: word syntax: {exc}", file=sys.stderr)
        return EXIT_WORD
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (GroupSpecError, OrderCapExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GROUP
    except PreconditionError as exc:
        print(f"error: inapplicable: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except (UsageError, MissingBindingError, InexactValuesError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())
