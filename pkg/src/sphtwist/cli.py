"""Command line front end.

Exit status: 0 when everything requested verified, 1 on a mismatch, 2 on
an inconclusive (exhausted) search, 64 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .ktheory import evaluate_word_matrix, generator_matrices, verify_relator_matrix
from .search import DEFAULT_BUDGET, evaluate_side
from .sheaves import ObjectParseError, StuckState, cohomology, evaluate_word, parse_divisor, parse_object
from .verifier import (
    EXHAUSTED,
    MISMATCH,
    ConfigError,
    cross_check,
    family_relators,
    resolve_families,
    resolve_representations,
    verify_on_generators,
    verify_relation_suite,
)
from .words import PresentationSpec, VARIANTS, WordParseError, format_word, g_relator_based_at, parse_word, relators

EXIT_OK, EXIT_MISMATCH, EXIT_EXHAUSTED, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sphtwist", description="Check twist relations on the cycle of projective lines.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, output_default="json"):
        sp.add_argument("--n", type=_positive, required=True)
        sp.add_argument("--output", choices=("json", "text"), default=output_default)

    v = sub.add_parser("verify", help="verify relator families on generating objects")
    common(v)
    v.add_argument("--families", default="all", help="comma separated, or 'all'")
    v.add_argument("--rep", default="both", choices=("ktheory", "sheaf", "both"))
    v.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
    v.add_argument("--base", type=_positive, help="verify only the G-tilde relator based at this index")
    v.add_argument("--jobs", type=int, default=0, help="worker processes (0: one per CPU)")
    v.add_argument("--fail-fast", action="store_true", help="stop at the first relator that does not verify")

    m = sub.add_parser("matrix", help="lattice matrices of generators, a word, or a based relator")
    common(m)
    m.add_argument("--word")
    m.add_argument("--base", type=_positive)

    c = sub.add_parser("cohom", help="h0 and h1 of O(D)")
    common(c)
    c.add_argument("--divisor", required=True)

    a = sub.add_parser("act", help="apply a word to an object")
    common(a, output_default="text")
    a.add_argument("--word", required=True)
    a.add_argument("--object", required=True)
    a.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)

    r = sub.add_parser("relators", help="list relators")
    common(r, output_default="text")
    r.add_argument("--variant", default="extended", choices=VARIANTS)
    r.add_argument("--families", help="comma separated verifier families instead of a variant")
    r.add_argument("--base", type=_positive)
    return p


def _emit(doc, output: str, text: str, out) -> None:
    if output == "json":
        out.write(json.dumps(doc) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _families_arg(text: str):
    return "all" if text.strip() == "all" else [f.strip() for f in text.split(",") if f.strip()]


def _check_base(base: Optional[int], n: int) -> None:
    if base is not None and base > n:
        raise UsageError(f"--base {base} outside 1..{n}")


def cmd_verify(args, out) -> int:
    _check_base(args.base, args.n)
    reps = resolve_representations(args.rep)
    if args.base is not None:
        rels = [g_relator_based_at(args.base, args.n)]
        reports = [verify_on_generators(r, args.n, rep, args.budget) for r in rels for rep in reps]
    else:
        resolve_families(_families_arg(args.families), args.n)
        reports = verify_relation_suite(
            args.n, _families_arg(args.families), reps, args.budget, args.jobs, stop_on_failure=args.fail_fast
        )
    problems = cross_check(reports) if len(reps) == 2 else []
    stats = {o.status for r in reports for o in r.outcomes}
    if MISMATCH in stats or problems:
        code = EXIT_MISMATCH
    elif EXHAUSTED in stats:
        code = EXIT_EXHAUSTED
    else:
        code = EXIT_OK
    doc = {
        "n": args.n,
        "representations": reps,
        "budget": args.budget,
        "ok": code == EXIT_OK,
        "cross_check": problems,
        "reports": [rec for r in reports for rec in r.records()],
    }
    lines = []
    for r in reports:
        lines.append(f"{r.relator} [{r.representation}]: {r.status}")
        for o in r.outcomes:
            extra = ""
            if o.central_defect_m is not None:
                extra += f" t^{o.central_defect_m}"
            if o.involution:
                extra += f" {o.involution}"
            where = o.generator_object or "lattice"
            lines.append(f"  {where}: {o.status}{extra} ({o.states_expanded} states)")
            for s in o.trace:
                detail = {k: v for k, v in s.items() if k not in ("kind", "side")}
                lines.append(f"    {s['kind']:<9} {s['side']} " + " ".join(f"{k}={v}" for k, v in detail.items()))
    lines += [f"cross-check: {p}" for p in problems]
    lines.append("OK" if code == EXIT_OK else "FAILED")
    _emit(doc, args.output, "\n".join(lines), out)
    return code


def _fmt_matrix(m) -> str:
    return "\n".join(" ".join(f"{x:>3}" for x in row) for row in m)


def cmd_matrix(args, out) -> int:
    n = args.n
    _check_base(args.base, n)
    if args.word is not None:
        w = parse_word(args.word, n)
        mat = evaluate_word_matrix(w, n)
        _emit({"word": format_word(w), "matrix": mat}, args.output, _fmt_matrix(mat), out)
    elif args.base is not None:
        rel = g_relator_based_at(args.base, n)
        rep = verify_relator_matrix(rel, n)
        doc = {"relator": rel.name, "lhs": rep.lhs, "rhs": rep.rhs, "status": rep.status}
        text = f"{rel.name}: {rep.status}\nlhs\n{_fmt_matrix(rep.lhs)}\nrhs\n{_fmt_matrix(rep.rhs)}"
        _emit(doc, args.output, text, out)
    else:
        mats = generator_matrices(n)
        _emit(mats, args.output, "\n".join(f"{k}\n{_fmt_matrix(v)}" for k, v in mats.items()), out)
    return EXIT_OK


def cmd_cohom(args, out) -> int:
    d = parse_divisor(args.divisor)
    if len(d) != args.n:
        raise UsageError(f"divisor has {len(d)} entries, expected {args.n}")
    c = cohomology(d)
    doc = {"h0": c.h0, "h1": c.h1, "deg": sum(d)}
    _emit(doc, args.output, f"h0 = {c.h0}, h1 = {c.h1}, deg = {sum(d)}", out)
    return EXIT_OK


def cmd_act(args, out) -> int:
    n = args.n
    w = parse_word(args.word, n)
    obj = parse_object(args.object, n)
    res = evaluate_word(w, obj)
    rewrites = 0
    if isinstance(res, StuckState):
        found = evaluate_side(w, obj, "lhs", args.budget)
        if not found.closed:
            doc = {"object": None, "stuck": str(res)}
            _emit(doc, args.output, str(res), out)
            return EXIT_EXHAUSTED
        res = found.final[0]
        rewrites = sum(s.kind == "rewrite" for s in found.steps)
    _emit({"object": str(res), "rewrites": rewrites}, args.output, str(res), out)
    return EXIT_OK


def cmd_relators(args, out) -> int:
    n = args.n
    _check_base(args.base, n)
    if args.base is not None:
        rels = [g_relator_based_at(args.base, n)]
    elif args.families:
        fams = resolve_families(_families_arg(args.families), n)
        rels = [r for f in fams for r in family_relators(f, n)]
    else:
        try:
            rels = relators(PresentationSpec(n, args.variant))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    doc = [{"name": r.name, "family": r.family, "lhs": format_word(r.lhs), "rhs": format_word(r.rhs)} for r in rels]
    _emit(doc, args.output, "\n".join(f"{r.name}: {r.to_text()}" for r in rels), out)
    return EXIT_OK


COMMANDS = {"verify": cmd_verify, "matrix": cmd_matrix, "cohom": cmd_cohom, "act": cmd_act, "relators": cmd_relators}


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except (UsageError, ConfigError, WordParseError, ObjectParseError) as exc:
        err.write(f"sphtwist: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
