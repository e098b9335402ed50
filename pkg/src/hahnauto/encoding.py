"""Base-p expansions of exponents and the series view of a DFAO.

A series sum a_g t^g with support in (1/p^inf)N is represented by a DFAO
over digits 0..p-1 plus the radix point, reading the base-p expansion of g
most significant digit first and returning a_g.  Exponent 0 is the string
".", every other exponent has no leading or trailing zero and exactly one
radix point.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

from .automata import Dfao, explore, format_word, minimize, parse_word, product, relevant_states, shortest_accepted
from .fields import FqElement, FqField

SUPPORT_POP_CAP = 10**6


class InvalidExpansionError(ValueError):
    pass


class MalformedSeriesError(ValueError):
    """An automaton failed the well-formed or well-ordered check."""


def is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def p_adic_split(n: int, p: int) -> tuple[int, int]:
    """n = p^k * rest with p not dividing rest; returns (k, rest)."""
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def _as_word(w, p: int) -> tuple[int, ...]:
    return parse_word(w, p) if isinstance(w, str) else tuple(w)


def validity_reason(w, p: int) -> str | None:
    """None for a valid expansion, otherwise a short reason."""
    w = _as_word(w, p)
    radix = [i for i, s in enumerate(w) if s == p]
    if len(radix) != 1:
        return f"radix count is {len(radix)}, expected 1"
    if w == (p,):
        return None
    if w[0] == 0:
        return "leading zero"
    if w[-1] == 0:
        return "trailing zero"
    return None


def expansion_value(w, p: int) -> Fraction:
    w = _as_word(w, p)
    reason = validity_reason(w, p)
    if reason:
        raise InvalidExpansionError(f"{format_word(w, p)!r}: {reason}")
    k = w.index(p)
    value = Fraction(0)
    for s in w[:k]:
        value = value * p + s
    scale = Fraction(1)
    for s in w[k + 1 :]:
        scale /= p
        value += s * scale
    return value


def expansion_of(e, p: int) -> tuple[int, ...]:
    e = Fraction(e)
    if e < 0:
        raise InvalidExpansionError(f"negative exponent {e}")
    if not is_p_power(e.denominator, p):
        raise InvalidExpansionError(f"denominator of {e} is not a power of {p}")
    whole, frac = divmod(e.numerator, e.denominator)
    pre = []
    while whole:
        whole, d = divmod(whole, p)
        pre.append(d)
    post = []
    num, den = frac, e.denominator
    while num:
        num *= p
        d, num = divmod(num, den)
        post.append(d)
    return tuple(reversed(pre)) + (p,) + tuple(post)


def expansion_string(e, p: int) -> str:
    return format_word(expansion_of(e, p), p)


# --- the DFA of valid expansions ------------------------------------------------

# states: start, integer part, just after radix, fraction ending nonzero,
# fraction ending zero, dead
V_START, V_INT, V_RADIX, V_NZ, V_Z, V_DEAD = range(6)
V_ACCEPT = (V_RADIX, V_NZ)
V_POST = (V_RADIX, V_NZ, V_Z)


def validity_step(s: int, a: int, p: int) -> int:
    if s == V_DEAD:
        return V_DEAD
    if s in (V_START, V_INT):
        if a == p:
            return V_RADIX
        if s == V_START and a == 0:
            return V_DEAD
        return V_INT
    if a == p:
        return V_DEAD
    return V_Z if a == 0 else V_NZ


def validity_dfa(p: int) -> Dfao:
    delta = tuple(tuple(validity_step(s, a, p) for a in range(p + 1)) for s in range(6))
    return Dfao(p + 1, delta, V_START, tuple(1 if s in V_ACCEPT else 0 for s in range(6)), 0)


def mask_valid(M: Dfao) -> Dfao:
    """Zero the output on every invalid string."""
    p = M.p
    return explore(
        M.k,
        (M.q0, V_START),
        lambda s, a: (M.delta[s[0]][a], validity_step(s[1], a, p)),
        lambda s: M.tau[s[0]] if s[1] in V_ACCEPT else M.zero,
        M.zero,
    )


def check_well_formed(M: Dfao) -> tuple[bool, str | None]:
    """Exact test that every accepted string is a valid expansion.

    On failure the diagnostic names the violated condition and the
    shortest offending accepted string.
    """
    p = M.p
    bad = explore(
        M.k,
        (M.q0, V_START),
        lambda s, a: (M.delta[s[0]][a], validity_step(s[1], a, p)),
        lambda s: 1 if M.tau[s[0]] != M.zero and s[1] not in V_ACCEPT else 0,
    )
    w = shortest_accepted(bad)
    if w is None:
        return True, None
    text = format_word(w, p)
    radix = w.count(p)
    if w and w[0] == 0:
        item = "accepting path begins with 0"
    elif radix == 0:
        item = "accepting state in the preradix part"
    elif radix > 1:
        item = "postradix RADIX edge not to zero-sink"
    else:
        item = "accepting state entered by symbol 0"
    return False, f"{item} (accepted string {text!r})"


# --- well-orderedness -------------------------------------------------------------

@dataclass(frozen=True)
class StateReport:
    is_saguaro: bool
    labeling_proper: bool
    offending: tuple | None = None  # (vertex, label, target) of a bad cyclic edge


@dataclass(frozen=True)
class SaguaroReport:
    states: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(r.is_saguaro and r.labeling_proper for r in self.states.values())

    def offending_edges(self) -> list[tuple]:
        return sorted({r.offending for r in self.states.values() if r.offending is not None})


def postradix_relevant(M: Dfao) -> tuple[set[int], set[int]]:
    """(relevant states, relevant states reached after the radix point)."""
    rel = relevant_states(M)
    p = M.p
    post: set[int] = set()
    seen = {(M.q0, False)}
    queue = deque(seen)
    while queue:
        q, after = queue.popleft()
        if q not in rel:
            continue
        if after:
            post.add(q)
        for a in range(M.k):
            nxt = (M.delta[q][a], after or a == p)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return rel, post


def _sccs(nodes: Sequence[int], succ: dict[int, list[int]]) -> list[list[int]]:
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    stack: list[int] = []
    on_stack: set[int] = set()
    out: list[list[int]] = []
    counter = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                low[work[-1][0]] = min(low[work[-1][0]], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                out.append(sorted(comp))
    return out


def check_well_ordered(M: Dfao) -> tuple[bool, SaguaroReport]:
    """Saguaro shape and proper labeling on the relevant postradix subgraph.

    Every non-trivial strongly connected component must be a single simple
    cycle (each vertex has exactly one labeled out-edge inside it), and the
    cyclic edge at each vertex must carry a label larger than every other
    relevant out-edge there.
    """
    rel, post = postradix_relevant(M)
    nodes = sorted(post)
    edges = {v: [(a, M.delta[v][a]) for a in range(M.p) if M.delta[v][a] in post] for v in nodes}
    succ = {v: [r for _, r in edges[v]] for v in nodes}
    bad_shape: dict[int, tuple] = {}
    bad_label: dict[int, tuple] = {}
    for comp in _sccs(nodes, succ):
        members = set(comp)
        if len(comp) == 1 and comp[0] not in succ[comp[0]]:
            continue
        for v in comp:
            inner = [(a, r) for a, r in edges[v] if r in members]
            if len(inner) != 1:
                bad_shape[v] = (v, inner[0][0], inner[0][1])
                continue
            a, r = inner[0]
            if any(b > a for b, s in edges[v] if (b, s) != (a, r)):
                bad_label[v] = (v, a, r)
    states = {}
    for q in nodes:
        reach = {q}
        queue = deque([q])
        while queue:
            v = queue.popleft()
            for r in succ[v]:
                if r not in reach:
                    reach.add(r)
                    queue.append(r)
        shape = sorted(bad_shape[v] for v in reach if v in bad_shape)
        label = sorted(bad_label[v] for v in reach if v in bad_label)
        offending = (shape or label or [None])[0]
        states[q] = StateReport(not shape, not label, offending)
    report = SaguaroReport(states)
    return report.ok, report


# --- series ---------------------------------------------------------------------


class AutomaticSeries:
    """A validated DFAO read as a series with coefficients in ``field``."""

    __slots__ = ("dfao", "field", "well_formed", "well_ordered")

    def __init__(self, dfao: Dfao, field: FqField, validate: bool = True, canonicalize: bool = True):
        if dfao.zero != field.zero:
            raise ValueError("automaton zero output must be the field's zero")
        if canonicalize:
            dfao = minimize(dfao)
        self.dfao = dfao
        self.field = field
        self.well_formed = False
        self.well_ordered = False
        if validate:
            ok, diag = check_well_formed(dfao)
            if not ok:
                raise MalformedSeriesError(f"automaton is not well-formed: {diag}")
            self.well_formed = True
            ok, report = check_well_ordered(dfao)
            if not ok:
                raise MalformedSeriesError(f"automaton is not well-ordered: offending cyclic edges {report.offending_edges()}")
            self.well_ordered = True

    @property
    def p(self) -> int:
        return self.dfao.p

    def coefficient(self, exponent) -> FqElement:
        return self.dfao.run(expansion_of(exponent, self.p))

    def support_prefix(self, k: int) -> list[tuple[Fraction, FqElement]]:
        return support_prefix(self, k)[0]

    def outputs(self) -> set[FqElement]:
        """Outputs of states that are reachable and relevant."""
        rel = relevant_states(self.dfao)
        return {self.dfao.tau[q] for q in rel if self.dfao.tau[q] != self.dfao.zero}

    def __repr__(self) -> str:
        return f"AutomaticSeries({format_series(self)})"


def from_finite_series(terms: Iterable[tuple], field: FqField, p: int | None = None) -> AutomaticSeries:
    p = field.p if p is None else p
    table: dict[tuple[int, ...], FqElement] = {}
    seen = set()
    for exp, coeff in terms:
        exp = Fraction(exp)
        if exp in seen:
            raise ValueError(f"duplicate exponent {exp}")
        seen.add(exp)
        c = coeff if isinstance(coeff, FqElement) else field(coeff)
        if c:
            table[expansion_of(exp, p)] = c
    prefixes = {w[:i] for w in table for i in range(len(w) + 1)}

    def step(s, a):
        if s is None:
            return None
        t = s + (a,)
        return t if t in prefixes else None

    dfao = explore(p + 1, (), step, lambda s: table.get(s, field.zero), field.zero)
    return AutomaticSeries(dfao, field)


def zero_series(field: FqField, p: int | None = None) -> AutomaticSeries:
    return from_finite_series([], field, p)


def support_prefix(x, k: int, cap: int = SUPPORT_POP_CAP) -> tuple[list[tuple[Fraction, FqElement]], bool]:
    """The k smallest support points with coefficients, and a completeness flag.

    Best-first search over valid prefixes keyed by the least value any
    completion can have.  The flag is False when the support has fewer than
    k points.
    """
    M = x.dfao if isinstance(x, AutomaticSeries) else x
    p = M.p
    rel = relevant_states(M)
    out: list[tuple[Fraction, FqElement]] = []
    if M.q0 not in rel or k <= 0:
        return out, k <= 0
    heap = [(Fraction(0), (), M.q0, V_START, Fraction(0), Fraction(1))]
    pops = 0
    while heap and len(out) < k:
        key, word, q, v, value, scale = heapq.heappop(heap)
        pops += 1
        if pops > cap:
            raise RuntimeError(f"support enumeration exceeded {cap} prefix expansions")
        if v in V_ACCEPT and M.tau[q] != M.zero:
            out.append((key, M.tau[q]))
        for a in range(M.k):
            r = M.delta[q][a]
            nv = validity_step(v, a, p)
            if r not in rel or nv == V_DEAD:
                continue
            if nv == V_INT:
                nvalue, nscale = value * p + a, scale
            elif nv == V_RADIX:
                nvalue, nscale = value, scale
            else:
                nscale = scale / p
                nvalue = value + a * nscale
            heapq.heappush(heap, (nvalue, word + (a,), r, nv, nvalue, nscale))
    return out, len(out) >= k


def format_exponent(e: Fraction) -> str:
    e = Fraction(e)
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e.numerator}/{e.denominator})"


def format_terms(terms: Sequence[tuple[Fraction, FqElement]], truncated: bool = False) -> str:
    parts = []
    for e, c in terms:
        coeff = str(c)
        if "+" in coeff:
            coeff = f"({coeff})"
        if e == 0:
            parts.append(coeff)
        else:
            mono = "t" if e == 1 else f"t^{format_exponent(e)}"
            parts.append(mono if c == 1 else f"{coeff}*{mono}")
    text = " + ".join(parts) if parts else "0"
    return text + (" + O(...)" if truncated else "")


def format_series(x: AutomaticSeries, k: int = 8) -> str:
    terms, _ = support_prefix(x, k + 1)
    return format_terms(terms[:k], truncated=len(terms) > k)
