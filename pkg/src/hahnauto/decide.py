"""Decide whether a monic f in F_q[t][X] has a root of nonnegative value in a Hahn field.

The oracle counts the roots over an algebraic closure of the coefficient
field and produces their leading terms; the search then looks for an
automaton for each of them, smallest coefficient field first and smallest
state count first, and every candidate is checked by evaluating f on it.
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Iterable, Iterator

from .arithmetic import equals, evaluate_polynomial, is_zero
from .automata import Dfao
from .encoding import AutomaticSeries, expansion_value, support_prefix
from .fields import FqElement, FqField, GF, divisors, embed_subfield, subfield_degree
from .newton import (
    OracleResult,
    RootExpansion,
    count_roots_oracle,
    maximal_prime_powers,
    ramification_bound,
    substitute_power,
)
from .poly import Poly
from .search import SearchCapError, candidate_automata, digit_sample

YES = "YES"
NO = "NO"
UNDECIDED = "UNDECIDED-RESOURCE"


class OracleMismatchError(RuntimeError):
    """A verified root disagrees with every root predicted by the oracle."""


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field F: a finite field, the algebraic closure, or a set of degrees."""

    p: int
    kind: str  # "finite" | "closure" | "degrees"
    degrees: frozenset = frozenset()

    @classmethod
    def finite(cls, p: int, e: int) -> "FieldSpec":
        return cls(p, "finite", frozenset([e]))

    @classmethod
    def parse(cls, text: str, p: int) -> "FieldSpec":
        """``F<q>``, ``Fbar``, ``perfect`` (perfect closure of F_p, i.e. F_p) or ``deg:<d1>,<d2>,...``."""
        text = text.strip()
        low = text.lower()
        if low in ("fbar", "closure", "algebraic-closure"):
            return cls(p, "closure")
        if low in ("perfect", "perfect-closure"):
            return cls.finite(p, 1)
        if low.startswith("deg:"):
            degs = frozenset(int(x) for x in low[4:].split(",") if x.strip())
            if not degs or min(degs) < 1:
                raise ValueError(f"bad degree set {text!r}")
            return cls(p, "degrees", degs)
        m = re.fullmatch(r"[Ff](\d+)(?::.*)?", text)
        if not m:
            raise ValueError(f"unrecognised field descriptor {text!r}")
        q = int(m.group(1))
        e = 0
        while q % p == 0:
            q //= p
            e += 1
        if q != 1 or e == 0:
            raise ValueError(f"{text!r} is not a field of characteristic {p}")
        return cls.finite(p, e)

    def contains_degree(self, d: int) -> bool:
        if self.kind == "closure":
            return True
        return any(k % d == 0 for k in self.degrees)

    def contains(self, a: FqElement) -> bool:
        return self.contains_degree(subfield_degree(a))

    def describe(self) -> str:
        if self.kind == "closure":
            return "Fbar"
        if self.kind == "finite":
            (e,) = self.degrees
            return f"F{self.p ** e}"
        return "deg:" + ",".join(str(d) for d in sorted(self.degrees))


@dataclass
class RootDecision:
    verdict: str
    witness: AutomaticSeries | None
    roots: list
    oracle_count: int
    bound_m: int | None
    group_m: int = 1
    exponent_scale: int = 1
    caps_hit: list = dc_field(default_factory=list)
    search_log: dict = dc_field(default_factory=dict)

    @property
    def witnesses(self) -> list:
        return [self.witness] if self.witness is not None else []

    def witness_terms(self, k: int = 8) -> list[tuple[Fraction, FqElement]]:
        """First k support terms of the witness with exponents in the original variable t."""
        if self.witness is None:
            return []
        terms, _ = support_prefix(self.witness, k)
        return [(e / self.exponent_scale, c) for e, c in terms]

    def to_dict(self) -> dict:
        from .encoding import format_terms

        terms = self.witness_terms(9)
        return {
            "verdict": self.verdict,
            "oracle_count": self.oracle_count,
            "roots_found": sum(1 for r in self.roots if r is not None),
            "bound_m": self.bound_m,
            "group_m": self.group_m,
            "witness_states": self.witness.dfao.n if self.witness else None,
            "witness_field": self.witness.field.describe() if self.witness else None,
            "witness_support": format_terms(terms[:8], truncated=len(terms) > 8) if self.witness else None,
            "caps_hit": list(self.caps_hit),
            "search_log": dict(sorted(self.search_log.items())),
        }


def enumeration_key(x: AutomaticSeries) -> tuple:
    """Position of a candidate in the search order: field size, state count, table, outputs."""
    M = x.dfao
    return (x.field.q, M.n, M.delta, tuple(v.value for v in M.tau))


def _map_poly_field(f: Poly, source_to_target: Callable[[FqElement], FqElement], target: FqField) -> Poly:
    tzero = Poly([], target.zero, "t")
    return Poly(
        [Poly([source_to_target(a) for a in c.coeffs], target.zero, "t") for c in f.coeffs],
        tzero,
        f.var,
    )


@dataclass
class _RootTask:
    f: Poly
    base: FqField
    d: int
    K: FqField
    index: int
    roots: list
    exponents: list
    sample_length: int
    max_states: int
    max_candidates: int
    max_search_nodes: int


def _match_root(x: AutomaticSeries, roots: list[RootExpansion], exponents: list[Fraction], K: FqField) -> int | None:
    """Index of the unique oracle root whose determined coefficients agree with x."""
    coeffs = {e: embed_subfield(x.coefficient(e), K) for e in exponents}
    hits = []
    for j, r in enumerate(roots):
        if all(r.coefficient(e) is None or coeffs[e] == r.coefficient(e) for e in exponents):
            hits.append(j)
    return hits[0] if len(hits) == 1 else None


def _search_root(task: _RootTask) -> dict:
    """Enumerate candidates guided by one root's expansion until that root is found."""
    p = task.base.p
    Fd = GF(p, task.d)
    K = task.K
    image = {embed_subfield(a, K): a for a in Fd.elements()}
    to_fd = lambda c: image[embed_subfield(c, K)]
    fd = _map_poly_field(task.f, to_fd, Fd)
    root = task.roots[task.index]
    stats: dict = {}
    found: list[tuple[int, Dfao]] = []
    result = {"index": task.index, "d": task.d, "found": found, "stats": stats, "cap": None}

    def coefficient(w):
        c = root.coefficient(expansion_value(w, p))
        return None if c is None else image[c]

    trie = digit_sample(p, task.sample_length, coefficient, Fd.zero)
    checked = 0
    for n in range(1, task.max_states + 1):
        try:
            for M in candidate_automata(p, Fd, n, trie, task.max_search_nodes, stats):
                checked += 1
                if checked > task.max_candidates:
                    result["cap"] = f"candidate cap {task.max_candidates} reached"
                    return result
                x = AutomaticSeries(M, Fd, validate=False, canonicalize=False)
                if not is_zero(evaluate_polynomial(fd, x)):
                    continue
                j = _match_root(x, task.roots, task.exponents, K)
                if j is None:
                    raise OracleMismatchError(f"verified root with {n} states matches no predicted root")
                found.append((j, M))
                if j == task.index:
                    stats["states"] = n
                    return result
        except SearchCapError as exc:
            result["cap"] = str(exc)
            return result
    result["cap"] = f"state cap {task.max_states} reached"
    return result


def decide_ppf(
    f: Poly,
    base: FqField,
    spec: FieldSpec,
    max_states: int = 6,
    max_candidates: int = 10**5,
    max_search_nodes: int = 2 * 10**6,
    sample_length: int | None = None,
    jobs: int = 1,
    oracle_steps: int = 256,
    with_bound: bool = True,
) -> RootDecision:
    """Roots of nonnegative value with exponents in (1/p^inf)Z and coefficients in F."""
    if f.degree < 1 or f.lc() != f.lc().one:
        raise ValueError("f must be monic of degree at least 1")
    p = base.p
    L = sample_length or (5 if p <= 3 else 4)
    oracle = count_roots_oracle(f, base, 1, step_cap=oracle_steps, expand_below=p ** (L - 1) + 1)
    bound = ramification_bound(f, base).m if with_bound else None
    log: dict = {"oracle_field": oracle.field.describe(), "oracle_steps": oracle.steps}
    if oracle.count == 0:
        return RootDecision(NO, None, [], 0, bound, search_log=log)
    K = oracle.field
    roots = oracle.roots
    exponents = sorted({e for r in roots for e, _ in r.terms})
    found: list[AutomaticSeries | None] = [None] * len(roots)
    caps: list[tuple[int, str]] = []
    degrees = [d for d in divisors(K.e) if d % base.e == 0]
    for d in degrees:
        Fd = GF(p, d)
        image = {embed_subfield(a, K) for a in Fd.elements()}
        pending = [
            i for i, r in enumerate(roots) if found[i] is None and all(c in image for _, c in r.terms)
        ]
        tasks = [
            _RootTask(f, base, d, K, i, roots, exponents, L, max_states, max_candidates, max_search_nodes)
            for i in pending
        ]
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_search_root, tasks))
        else:
            results = [_search_root(t) for t in tasks]
        for res in results:
            for key, val in res["stats"].items():
                if key != "states":
                    log[key] = log.get(key, 0) + val
            for j, M in res["found"]:
                x = AutomaticSeries(M, Fd, validate=True, canonicalize=False)
                if found[j] is None:
                    found[j] = x
                elif found[j].field is Fd and not equals(found[j], x):
                    raise OracleMismatchError(f"two different verified roots share predicted root {j}")
            if res["cap"] and found[res["index"]] is None:
                caps.append((res["index"], f"root {res['index']} over F{p ** d}: {res['cap']}"))
        if all(x is not None for x in found):
            break
    # a root that was not found over a smaller field is only a cap if no larger field found it
    caps = [msg for i, msg in caps if found[i] is None]
    log["roots_found"] = sum(1 for x in found if x is not None)
    members = [x for x in found if x is not None and all(spec.contains(o) for o in x.outputs())]
    witness = min(members, key=enumeration_key) if members else None
    if witness is not None:
        verdict = YES
    elif all(x is not None for x in found):
        verdict = NO
    else:
        verdict = UNDECIDED
    return RootDecision(verdict, witness, found, oracle.count, bound, caps_hit=caps, search_log=log)


def decide_gamma_m(f: Poly, base: FqField, spec: FieldSpec, m: int, **kwargs) -> RootDecision:
    """Same question with exponents in (1/(m p^inf))Z, via the substitution t = s^m."""
    p = base.p
    if m < 1 or math.gcd(m, p) != 1:
        raise ValueError(f"m = {m} must be a positive integer coprime to p = {p}")
    with_bound = kwargs.pop("with_bound", True)
    decision = decide_ppf(substitute_power(f, m), base, spec, with_bound=False, **kwargs)
    decision.group_m = m
    decision.exponent_scale = m
    decision.bound_m = ramification_bound(f, base).m if with_bound else None
    return decision


def reduce_value_group(f: Poly, base: FqField, V: Iterable[int] | Callable[[int], bool]) -> int:
    """Product of the prime powers of the ramification bound that V admits."""
    m = ramification_bound(f, base).m
    admits = V if callable(V) else set(V).__contains__
    out = 1
    for q in maximal_prime_powers(m):
        if admits(q):
            out *= q
    return out


def decide_with_value_set(f: Poly, base: FqField, spec: FieldSpec, V, **kwargs) -> RootDecision:
    return decide_gamma_m(f, base, spec, reduce_value_group(f, base, V), **kwargs)


def enumerate_well_ordered_dfaos(
    p: int,
    field: FqField,
    max_states: int,
    sample_length: int = 4,
    max_search_nodes: int = 10**7,
) -> Iterator[AutomaticSeries]:
    """All minimal well-formed, well-ordered DFAOs up to the state cap.

    Ordered by state count, then transition table, then outputs; minimal
    automata are unique per series, so the stream has no repeats.
    """
    trie = digit_sample(p, sample_length, None, field.zero)
    for n in range(1, max_states + 1):
        for M in candidate_automata(p, field, n, trie, max_search_nodes):
            yield AutomaticSeries(M, field, validate=False, canonicalize=False)
