"""Command-line front end.

Exit status: 0 YES / true / valid, 1 NO / false / invalid,
2 UNDECIDED-RESOURCE, 3 usage error, 4 input (parse or validation) error.

Polynomials use the grammar documented in :mod:`hahnauto.parse`, e.g.
``"X^2 - t^3"``; automaton operands are files in the ``dfao`` text format.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import arithmetic
from .automata import to_dot
from .decide import NO, UNDECIDED, YES, FieldSpec, decide_gamma_m, decide_ppf, reduce_value_group
from .encoding import (
    AutomaticSeries,
    MalformedSeriesError,
    check_well_formed,
    check_well_ordered,
    format_terms,
    support_prefix,
)
from .fields import GF, FieldError, FqField
from .newton import envelope, ore_additive_multiple, ramification_bound
from .parse import OutputSpec, ParseError, format_dfao, parse_dfao, parse_field, parse_polynomial

EXIT_YES, EXIT_NO, EXIT_UNDECIDED, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3, 4
VERDICT_EXIT = {YES: EXIT_YES, NO: EXIT_NO, UNDECIDED: EXIT_UNDECIDED}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def _fmt(r: Fraction) -> str:
    return str(Fraction(r))


def _emit(args, record: dict, text_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(record, sort_keys=True, indent=2))
    else:
        print("\n".join(text_lines))


def _base_field(args) -> FqField:
    if args.base:
        return parse_field(args.base, args.p)
    return GF(args.p)


def _monic_input(args) -> tuple:
    base = _base_field(args)
    f = parse_polynomial(args.polynomial, base)
    if f.degree < 1 or not f.is_monic():
        raise ValueError(f"{args.polynomial!r} is not monic of degree >= 1 in X")
    return f, base


# --- decide -----------------------------------------------------------------

def cmd_decide(args) -> int:
    f, base = _monic_input(args)
    spec = FieldSpec.parse(args.field or f"F{base.q}", args.p)
    if spec.kind == "finite" and min(spec.degrees) % base.e:
        raise UsageError(f"coefficient field {spec.describe()} does not contain {base.describe()}")
    caps = dict(max_states=args.max_states, max_candidates=args.max_candidates, jobs=args.jobs)
    if args.V is not None:
        allowed = {int(v) for v in args.V.split(",") if v.strip()}
        m = reduce_value_group(f, base, allowed)
    else:
        m = args.m
    if m == 1:
        decision = decide_ppf(f, base, spec, **caps)
    else:
        decision = decide_gamma_m(f, base, spec, m, **caps)
    record = decision.to_dict()
    record["polynomial"] = args.polynomial
    record["field"] = spec.describe()
    record["witness_file"] = None
    record["witness_variable"] = "t" if m == 1 else f"t^(1/{m})"
    if decision.witness is not None and args.witness:
        path = Path(args.witness)
        path.write_text(format_dfao(decision.witness.dfao, OutputSpec(field=decision.witness.field)))
        record["witness_file"] = str(path)
    lines = [
        f"verdict: {decision.verdict}",
        f"oracle count: {record['oracle_count']}",
        f"roots found: {record['roots_found']}",
        f"bound m: {record['bound_m']}",
        f"value group m: {m}",
    ]
    if decision.witness is not None:
        lines += [
            f"witness: {record['witness_states']} states over {record['witness_field']}"
            + ("" if m == 1 else f" in s = {record['witness_variable']}"),
            f"witness support: {record['witness_support']}",
        ]
        if record["witness_file"]:
            lines.append(f"witness file: {record['witness_file']}")
    for cap in decision.caps_hit:
        lines.append(f"cap hit: {cap}")
    _emit(args, record, lines)
    return VERDICT_EXIT[decision.verdict]


# --- additive multiple, envelope, bound ---------------------------------------

def cmd_ore(args) -> int:
    f, base = _monic_input(args)
    P = ore_additive_multiple(f, base)
    record = {"polynomial": args.polynomial, "additive": str(P), "indices": P.indices}
    _emit(args, record, [str(P)])
    return 0


def _envelope_record(P) -> dict:
    env = envelope(P)
    return {
        "lines": [{"index": i, "slope": s, "intercept": _fmt(b)} for i, s, b in env.lines],
        "active": list(env.active),
        "breakpoints": [_fmt(r) for r, _, _ in env.breakpoints],
    }


def cmd_envelope(args) -> int:
    f, base = _monic_input(args)
    P = ore_additive_multiple(f, base) if args.ore else None
    if P is None:
        # the input is read as an additive polynomial itself
        from .newton import AdditivePolynomial

        coeffs = {}
        for d, a in enumerate(f.coeffs):
            if not a:
                continue
            i, rest = 0, d
            while rest > 1 and rest % args.p == 0:
                rest //= args.p
                i += 1
            if rest != 1:
                raise UsageError(f"X^{d} is not of the form X^(p^i); pass --ore to take the additive multiple first")
            coeffs[i] = a
        P = AdditivePolynomial(args.p, coeffs)
    record = _envelope_record(P)
    record["additive"] = str(P)
    lines = [f"additive: {P}"]
    lines += [f"line {l['index']}: {l['slope']}*r + {l['intercept']}" for l in record["lines"]]
    lines.append("breakpoints: " + (", ".join(record["breakpoints"]) or "none"))
    _emit(args, record, lines)
    return 0


def cmd_bound(args) -> int:
    f, base = _monic_input(args)
    B = ramification_bound(f, base)
    record = {
        "polynomial": args.polynomial,
        "m": B.m,
        "additive": str(B.additive),
        "breakpoints": [_fmt(r) for r in B.breakpoints],
        "prime_powers": B.prime_powers(),
    }
    lines = [
        f"m = {B.m}",
        f"additive multiple: {B.additive}",
        "breakpoints: " + (", ".join(record["breakpoints"]) or "none"),
    ]
    _emit(args, record, lines)
    return 0


# --- automaton algebra --------------------------------------------------------

def _load(path: str, validate: bool = True):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    M, spec = parse_dfao(text)
    if spec.field is None:
        raise UsageError(f"{path}: series need field outputs, not {spec.describe()}")
    return AutomaticSeries(M, spec.field, validate=validate, canonicalize=False) if validate else (M, spec)


def _write_series(args, x: AutomaticSeries) -> None:
    text = format_dfao(x.dfao, OutputSpec(field=x.field))
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_dfao(args) -> int:
    op = args.op
    if op in ("add", "mul", "eq"):
        if len(args.files) != 2:
            raise UsageError(f"dfao {op} takes two automaton files")
        x, y = (_load(p) for p in args.files)
        if op == "eq":
            same = arithmetic.equals(x, y)
            _emit(args, {"equal": same}, ["true" if same else "false"])
            return EXIT_YES if same else EXIT_NO
        z = arithmetic.add(x, y) if op == "add" else arithmetic.multiply(x, y)
        _write_series(args, z)
        return 0
    if len(args.files) != 1:
        raise UsageError(f"dfao {op} takes one automaton file")
    if op == "validate":
        M, spec = _load(args.files[0], validate=False)
        formed, diag = check_well_formed(M)
        ordered, report = check_well_ordered(M) if formed else (False, None)
        edges = [list(e) for e in report.offending_edges()] if report else []
        record = {"well_formed": formed, "well_ordered": ordered, "diagnostic": diag, "offending_edges": edges}
        lines = [f"well-formed: {'yes' if formed else 'no'}" + (f" ({diag})" if diag else "")]
        if formed:
            lines.append(f"well-ordered: {'yes' if ordered else 'no'}")
            lines += [f"offending cyclic edge: {q} --{'.' if a == M.p else a}--> {r}" for q, a, r in report.offending_edges()]
        _emit(args, record, lines)
        return EXIT_YES if formed and ordered else EXIT_NO
    if op == "dot":
        M, _ = _load(args.files[0], validate=False)
        sys.stdout.write(to_dot(M))
        return 0
    x = _load(args.files[0])
    if op == "zero":
        z = arithmetic.is_zero(x)
        _emit(args, {"zero": z}, ["true" if z else "false"])
        return EXIT_YES if z else EXIT_NO
    if op == "support":
        terms, _ = support_prefix(x, args.k)
        record = {"terms": [[_fmt(e), str(c)] for e, c in terms]}
        _emit(args, record, [format_terms(terms)])
        return 0
    raise UsageError(f"unknown dfao operation {op!r}")


# --- argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hahnauto", description="Automatic series and root decisions in characteristic p.")
    parser.add_argument("--format", choices=("text", "json"), default="text", help="output format")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def poly_command(name: str, help_text: str):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("polynomial", help='monic polynomial in X over F_q[t], e.g. "X^2 - t^3"')
        sp.add_argument("--p", type=int, required=True, help="characteristic")
        sp.add_argument("--base", help="coefficient field of the polynomial (default F_p)")
        sp.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        return sp

    d = poly_command("decide", "decide whether f has a root in the Hahn field")
    d.add_argument("--field", help="residue field: F<q>, Fbar, perfect, or deg:d1,d2 (default: the base field)")
    group = d.add_mutually_exclusive_group()
    group.add_argument("--m", type=_positive, default=1, help="exponent group (1/(m p^inf))Z, m coprime to p")
    group.add_argument("--V", help="comma-separated admissible prime powers; m is reduced to them")
    d.add_argument("--max-states", type=_positive, default=6)
    d.add_argument("--max-candidates", type=_positive, default=10**5)
    d.add_argument("--jobs", type=_positive, default=1)
    d.add_argument("--witness", metavar="PATH", help="write the witness automaton here")
    d.set_defaults(run=cmd_decide)

    poly_command("ore", "additive polynomial multiple").set_defaults(run=cmd_ore)
    e = poly_command("envelope", "lower envelope of the additive polynomial's lines")
    e.add_argument("--ore", action="store_true", help="take the additive multiple of the input first")
    e.set_defaults(run=cmd_envelope)
    poly_command("bound", "ramification bound m").set_defaults(run=cmd_bound)

    a = sub.add_parser("dfao", help="automaton algebra")
    a.add_argument("op", choices=("add", "mul", "zero", "eq", "validate", "support", "dot"))
    a.add_argument("files", nargs="+")
    a.add_argument("-k", type=_positive, default=8, help="number of support terms")
    a.add_argument("-o", "--output", help="write the result automaton here")
    a.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    a.set_defaults(run=cmd_dfao)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "p"):
        from .fields import is_prime

        if not is_prime(args.p):
            parser.error(f"--p {args.p} is not prime")
        if getattr(args, "m", 1) % args.p == 0:
            parser.error(f"--m {args.m} is not coprime to p = {args.p}")
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"hahnauto: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, MalformedSeriesError, FieldError, ValueError) as exc:
        print(f"hahnauto: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
