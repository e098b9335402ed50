"""Text formats: polynomials in X and t, field descriptors, automaton files.

Polynomial grammar (version 1)::

    expr   := ["+"|"-"] term (("+"|"-") term)*
    term   := factor (["*"] factor)*        juxtaposition multiplies: 2t, tX
    factor := atom ["^" integer]
    atom   := integer | "X" | "t" | "z" | "(" expr ")"

Integer literals are reduced mod p.  ``z`` is the generator of the
coefficient field and is only allowed when that field is not prime.

Automaton files::

    dfao p=<p> states=<n> q0=<i> outputs=<F<q>[:modulus] | Z/<n>>
    <state> <symbol> -> <state>        symbol is a digit or "."
    <state> : <value>                  every state, including zero outputs

Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .automata import Dfao
from .fields import GF, FieldError, FqElement, FqField, is_irreducible, is_prime
from .poly import Poly, t_poly

FORMAT_VERSION = 1


class ParseError(ValueError):
    """Syntax error with a column (0-based) into the offending text."""

    def __init__(self, message: str, text: str = "", pos: int = 0, line: int | None = None):
        self.message = message
        self.text = text
        self.pos = pos
        self.line = line
        where = f"line {line}, " if line is not None else ""
        detail = f"{where}column {pos + 1}: {message}"
        if text:
            detail += f"\n  {text}\n  {' ' * pos}^"
        super().__init__(detail)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z])|(\S))")


def _tokens(text: str) -> Iterator[tuple[str, str, int]]:
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1):
            yield ("int", m.group(1), m.start(1))
        elif m.group(2):
            yield ("name", m.group(2), m.start(2))
        else:
            yield ("op", m.group(3), m.start(3))
        pos = m.end()
    yield ("end", "", len(text))


# A polynomial is held as {(x_degree, t_degree): field element} while parsing.
_Terms = dict


class _PolyParser:
    def __init__(self, text: str, field: FqField, names: dict):
        self.text = text
        self.field = field
        self.names = names
        self.toks = list(_tokens(text))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, pos: int | None = None):
        raise ParseError(message, self.text, self.peek()[2] if pos is None else pos)

    def const(self, c: FqElement) -> _Terms:
        return {(0, 0): c} if c else {}

    def add(self, a: _Terms, b: _Terms, sign: int = 1) -> _Terms:
        out = dict(a)
        for k, v in b.items():
            out[k] = out.get(k, self.field.zero) + (v if sign > 0 else -v)
        return {k: v for k, v in out.items() if v}

    def mul(self, a: _Terms, b: _Terms) -> _Terms:
        out: _Terms = {}
        for (i, j), u in a.items():
            for (k, l), v in b.items():
                key = (i + k, j + l)
                out[key] = out.get(key, self.field.zero) + u * v
        return {k: v for k, v in out.items() if v}

    def parse(self) -> _Terms:
        if self.peek()[0] == "end":
            self.fail("empty polynomial")
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected {self.peek()[1]!r}")
        return value

    def expr(self) -> _Terms:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc = self.add({}, self.term(), sign)
        while self.peek()[0] == "op" and self.peek()[1] in ("+", "-"):
            sign = -1 if self.take()[1] == "-" else 1
            acc = self.add(acc, self.term(), sign)
        return acc

    def term(self) -> _Terms:
        acc = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = self.mul(acc, self.factor())
            elif kind in ("int", "name") or (kind == "op" and val == "("):
                acc = self.mul(acc, self.factor())
            else:
                return acc

    def factor(self) -> _Terms:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "int":
                self.fail("exponent must be a nonnegative integer literal", pos)
            out = self.const(self.field.one)
            for _ in range(int(val)):
                out = self.mul(out, base)
            return out
        return base

    def atom(self) -> _Terms:
        kind, val, pos = self.take()
        if kind == "int":
            return self.const(self.field(int(val)))
        if kind == "name":
            if val not in self.names:
                allowed = ", ".join(self.names)
                self.fail(f"unknown symbol {val!r} (expected one of {allowed})", pos)
            slot = self.names[val]
            return self.const(self.field.gen) if slot is None else {slot: self.field.one}
        if kind == "op" and val == "(":
            inner = self.expr()
            if self.peek()[1] != ")":
                self.fail("missing ')'")
            self.take()
            return inner
        self.fail("expected a number, variable or '('" if kind != "end" else "unexpected end of input", pos)
        raise AssertionError  # unreachable


def _names(field: FqField, *extra: str) -> dict:
    # symbol -> (X degree, t degree), or None for the field generator
    slots = {"X": (1, 0), "t": (0, 1)}
    names = {v: slots[v] for v in extra}
    if field.e > 1:
        names["z"] = None
    return names


def parse_polynomial(text: str, field: FqField) -> Poly:
    """A polynomial in X with coefficients in F_q[t]."""
    terms = _PolyParser(text, field, _names(field, "X", "t")).parse()
    tzero = t_poly(field, [])
    if not terms:
        return Poly([], tzero)
    xdeg = max(i for i, _ in terms)
    coeffs = []
    for i in range(xdeg + 1):
        row = {j: c for (a, j), c in terms.items() if a == i}
        tdeg = max(row, default=-1)
        coeffs.append(t_poly(field, [row.get(j, field.zero) for j in range(tdeg + 1)]))
    return Poly(coeffs, tzero)


def parse_element(text: str, field: FqField) -> FqElement:
    """A field element written as a polynomial in z (or an integer)."""
    terms = _PolyParser(text, field, _names(field)).parse()
    return terms.get((0, 0), field.zero)


# --- field descriptors -------------------------------------------------------

_FIELD = re.compile(r"F(\d+)(?::(.+))?")


def _fp_coeffs(text: str, p: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of a polynomial in z over F_p."""
    out = _PolyParser(text, GF(p), {"z": (1, 0)}).parse()
    deg = max((i for i, _ in out), default=-1)
    return tuple(out.get((i, 0), GF(p).zero).value for i in range(deg + 1))


def parse_field(text: str, p: int | None = None) -> FqField:
    """``F<q>`` with the default modulus or ``F<q>:<modulus in z>``."""
    m = _FIELD.fullmatch(text.strip())
    if not m:
        raise ParseError(f"bad field descriptor {text!r}, expected F<q> or F<q>:<modulus>", text, 0)
    q = int(m.group(1))
    base = next((r for r in range(2, q + 1) if q % r == 0), None)
    if base is None or not is_prime(base):
        raise ParseError(f"{q} is not a prime power", text, 1)
    e = 0
    rest = q
    while rest % base == 0:
        rest //= base
        e += 1
    if rest != 1:
        raise ParseError(f"{q} is not a prime power", text, 1)
    if p is not None and base != p:
        raise ParseError(f"field F{q} does not have characteristic {p}", text, 1)
    modulus = None
    if m.group(2):
        modulus = _fp_coeffs(m.group(2), base)
        if len(modulus) - 1 != e or modulus[-1] != 1 or not is_irreducible(modulus, base):
            raise ParseError(f"modulus {m.group(2)} is not monic irreducible of degree {e}", text, m.start(2))
    try:
        return GF(base, e, modulus)
    except FieldError as exc:
        raise ParseError(str(exc), text, 0) from None


# --- automaton files ---------------------------------------------------------

@dataclass(frozen=True)
class OutputSpec:
    """Output alphabet of an automaton file: a finite field or Z/n."""

    field: FqField | None = None
    modulus: int | None = None

    def describe(self) -> str:
        return self.field.describe() if self.field is not None else f"Z/{self.modulus}"

    def parse_value(self, text: str):
        if self.field is not None:
            return parse_element(text, self.field)
        if not re.fullmatch(r"-?\d+", text.strip()):
            raise ParseError(f"expected an integer mod {self.modulus}", text, 0)
        return int(text) % self.modulus

    def format_value(self, value) -> str:
        return str(value)

    @property
    def zero(self):
        return self.field.zero if self.field is not None else 0


def parse_output_spec(text: str, p: int) -> OutputSpec:
    m = re.fullmatch(r"Z/(\d+)", text.strip())
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ParseError("modulus must be positive", text, 2)
        return OutputSpec(modulus=n)
    return OutputSpec(field=parse_field(text, p))


_HEADER = re.compile(r"dfao\s+p=(\d+)\s+states=(\d+)\s+q0=(\d+)\s+outputs=(\S+)")
_EDGE = re.compile(r"(\d+)\s+(\S+)\s*->\s*(\d+)")
_OUT = re.compile(r"(\d+)\s*:\s*(.+)")


def parse_dfao(text: str) -> tuple[Dfao, OutputSpec]:
    """Read an automaton file; every transition and output must be listed."""
    lines = [(no, raw.split("#", 1)[0].strip()) for no, raw in enumerate(text.splitlines(), 1)]
    lines = [(no, s) for no, s in lines if s]
    if not lines:
        raise ParseError("empty automaton file", "", 0, 1)
    no, head = lines[0]
    m = _HEADER.fullmatch(head)
    if not m:
        raise ParseError("expected header 'dfao p=<p> states=<n> q0=<i> outputs=<spec>'", head, 0, no)
    p, n, q0 = int(m.group(1)), int(m.group(2)), int(m.group(3))
    if not is_prime(p):
        raise ParseError(f"p = {p} is not prime", head, m.start(1), no)
    if n < 1 or not 0 <= q0 < n:
        raise ParseError("need states >= 1 and 0 <= q0 < states", head, m.start(2), no)
    try:
        spec = parse_output_spec(m.group(4), p)
    except ParseError as exc:
        raise ParseError(exc.message, head, m.start(4), no) from None
    k = p + 1
    delta = [[None] * k for _ in range(n)]
    tau: list = [None] * n
    for no, s in lines[1:]:
        if "->" in s:
            e = _EDGE.fullmatch(s)
            if not e:
                raise ParseError("expected '<state> <symbol> -> <state>'", s, 0, no)
            q, sym, r = int(e.group(1)), e.group(2), int(e.group(3))
            a = p if sym == "." else (int(sym) if sym.isdigit() else -1)
            if not 0 <= a <= p or (sym != "." and a == p):
                raise ParseError(f"symbol {sym!r} is not a digit below {p} or '.'", s, e.start(2), no)
            for state, col in ((q, e.start(1)), (r, e.start(3))):
                if state >= n:
                    raise ParseError(f"state {state} out of range", s, col, no)
            if delta[q][a] is not None and delta[q][a] != r:
                raise ParseError(f"conflicting transition for state {q} on {sym!r}", s, 0, no)
            delta[q][a] = r
            continue
        o = _OUT.fullmatch(s)
        if not o:
            raise ParseError("expected a transition or '<state> : <value>'", s, 0, no)
        q = int(o.group(1))
        if q >= n:
            raise ParseError(f"state {q} out of range", s, o.start(1), no)
        try:
            tau[q] = spec.parse_value(o.group(2))
        except ParseError as exc:
            raise ParseError(exc.message, s, o.start(2) + exc.pos, no) from None
    for q in range(n):
        for a in range(k):
            if delta[q][a] is None:
                sym = "." if a == p else str(a)
                raise ParseError(f"missing transition for state {q} on {sym!r}", "", 0, lines[-1][0])
        if tau[q] is None:
            raise ParseError(f"missing output for state {q}", "", 0, lines[-1][0])
    return Dfao(k, tuple(tuple(row) for row in delta), q0, tuple(tau), spec.zero), spec


def format_dfao(M: Dfao, spec: OutputSpec) -> str:
    p = M.p
    out = [f"dfao p={p} states={M.n} q0={M.q0} outputs={spec.describe()}"]
    for q, row in enumerate(M.delta):
        for a, r in enumerate(row):
            out.append(f"{q} {'.' if a == p else a} -> {r}")
    for q, v in enumerate(M.tau):
        out.append(f"{q} : {spec.format_value(v)}")
    return "\n".join(out) + "\n"
