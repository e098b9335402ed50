"""Additive multiples, the line envelope, the ramification bound and a root-count oracle.

The oracle separates the distinct roots of f over an algebraic closure of
the residue field by Newton-polygon refinement: a segment of slope -g
carries roots of valuation g, the residual polynomial gives their leading
coefficients, a simple residual root lifts uniquely (Hensel), and a
repeated one is refined after the substitution X -> c*t^g + Y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .encoding import p_adic_split
from .fields import FqElement, FqField, GF, embed_subfield, lcm_range, prime_factors
from .hahn import HahnSum
from .poly import (
    Poly,
    RationalFunction,
    linear_solve,
    poly_gcd,
    powmod,
    resultant,
    rf_zero,
    roots_with_multiplicity,
    squarefree_decomposition,
    to_rational,
)


class OracleDepthError(RuntimeError):
    """Branch separation did not finish within the step budget or broke the discriminant bound."""


# --- additive multiples ------------------------------------------------------------

@dataclass(frozen=True)
class AdditivePolynomial:
    """P(X) = sum a_i X^(p^i); ``coeffs`` maps i to a nonzero polynomial in t."""

    p: int
    coeffs: dict

    @property
    def indices(self) -> list[int]:
        return sorted(self.coeffs)

    def as_poly(self, zero) -> Poly:
        top = max(self.coeffs)
        cs = [zero] * (self.p**top + 1)
        for i, a in self.coeffs.items():
            cs[self.p**i] = a
        return Poly(cs, zero, "X")

    def __str__(self) -> str:
        parts = []
        for i in sorted(self.coeffs, reverse=True):
            a = self.coeffs[i]
            mono = "X" if i == 0 else f"X^{self.p ** i}"
            if a == a.one:
                parts.append(mono)
            elif a == -a.one:
                parts.append(f"-{mono}")
            else:
                parts.append(f"({a})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _poly_lcm(a: Poly, b: Poly) -> Poly:
    return (a * b // poly_gcd(a, b)).monic()


def ore_additive_multiple(f: Poly, field: FqField) -> AdditivePolynomial:
    """Additive P with f | P, coefficients cleared to polynomials in t.

    ``f`` is monic in X with polynomial-in-t coefficients.
    """
    n = f.degree
    if n < 1:
        raise ValueError("need a polynomial of degree at least 1")
    p = field.p
    F = to_rational(f, field)
    zero = F.zero
    x = Poly([zero, zero + 1], zero, "X")
    powers = [x % F]
    for _ in range(n):
        powers.append(powmod(powers[-1], p, F))
    matrix = [[powers[i][j] for i in range(n + 1)] for j in range(n)]
    vec = linear_solve(matrix, zero)
    if vec is None:  # pragma: no cover - n+1 vectors in an n-dimensional space
        raise RuntimeError("no additive relation found")
    den = Poly([field.one], field.zero, "t")
    for c in vec:
        if c:
            den = _poly_lcm(den, c.den)
    coeffs = {i: (c.num * (den // c.den)) for i, c in enumerate(vec) if c}
    P = AdditivePolynomial(p, coeffs)
    if (P.as_poly(zero=coeffs[min(coeffs)]._like([])).map_coeffs(RationalFunction, rf_zero(field)) % F):
        raise RuntimeError("additive multiple is not divisible by f")
    return P


# --- lines and their lower envelope --------------------------------------------------

def t_valuation(a) -> int:
    if isinstance(a, RationalFunction):
        return a.valuation()
    return a.valuation()


@dataclass(frozen=True)
class Envelope:
    """Lower envelope of r -> slope*r + intercept over all real r."""

    lines: tuple  # (index i, slope p^i, intercept v(a_i))
    active: tuple  # indices of lines on the envelope, from r = -inf to r = +inf
    breakpoints: tuple  # (r, i, j): the envelope switches from line i to line j at r

    def value(self, r) -> Fraction:
        r = Fraction(r)
        return min(s * r + b for _, s, b in self.lines)

    def active_line(self, r) -> int:
        r = Fraction(r)
        pos = 0
        for k, (b, _, _) in enumerate(self.breakpoints):
            if r > b:
                pos = k + 1
        return self.active[pos]


def envelope(P: AdditivePolynomial) -> Envelope:
    if not P.coeffs:
        raise ValueError("empty line family")
    lines = tuple((i, P.p**i, Fraction(t_valuation(a))) for i, a in sorted(P.coeffs.items()))
    # steepest first: that line is minimal as r -> -inf
    ordered = sorted(lines, key=lambda l: -l[1])
    hull: list[tuple] = []
    cuts: list[Fraction] = []

    def meet(l1, l2) -> Fraction:
        return (l2[2] - l1[2]) / (l1[1] - l2[1])

    for line in ordered:
        while hull:
            r = meet(hull[-1], line)
            if cuts and r <= cuts[-1]:
                hull.pop()
                cuts.pop()
                continue
            break
        if hull:
            cuts.append(meet(hull[-1], line))
        hull.append(line)
    breaks = tuple((cuts[k], hull[k][0], hull[k + 1][0]) for k in range(len(cuts)))
    return Envelope(lines, tuple(l[0] for l in hull), breaks)


@dataclass(frozen=True)
class RamificationBound:
    m: int
    breakpoints: tuple
    additive: AdditivePolynomial

    def prime_powers(self) -> list[int]:
        return maximal_prime_powers(self.m)


def maximal_prime_powers(m: int) -> list[int]:
    out = []
    for q in prime_factors(m):
        k = q
        while m % (k * q) == 0:
            k *= q
        out.append(k)
    return out


def coprime_part(den: int, p: int) -> int:
    return p_adic_split(den, p)[1]


def ramification_bound(f: Poly, field: FqField) -> RamificationBound:
    P = ore_additive_multiple(f, field)
    env = envelope(P)
    m = 1
    for r, _, _ in env.breakpoints:
        part = coprime_part(r.denominator, field.p)
        m = m * part // math.gcd(m, part)
    return RamificationBound(m, tuple(r for r, _, _ in env.breakpoints), P)


# --- exponent groups ------------------------------------------------------------------

def in_group(g: Fraction, m: int, p: int) -> bool:
    """g in (1/(m p^inf))Z."""
    return m % coprime_part(Fraction(g).denominator, p) == 0


# --- Newton polygons over finite Hahn sums --------------------------------------------

def lower_hull(points: list[tuple[int, Fraction]]) -> list[tuple[int, int, Fraction]]:
    """Segments (i0, i1, g) of the lower convex hull, g = minus the slope."""
    hull: list[tuple[int, Fraction]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return [(a[0], b[0], (a[1] - b[1]) / (b[0] - a[0])) for a, b in zip(hull, hull[1:])]


class NeedExtension(Exception):
    def __init__(self, degree: int):
        super().__init__(degree)
        self.degree = degree


def _split_degree(phi: Poly) -> int:
    """lcm of the degrees of the irreducible factors of phi (distinct-degree split)."""
    K = phi.lc().field
    x = Poly([K.zero, K.one], K.zero, phi.var)
    h = phi.monic()
    power = x
    need = 1
    j = 0
    while h.degree > 0:
        j += 1
        power = powmod(power, K.q, h)
        g = poly_gcd(h, power - x)
        if g.degree > 0:
            need = need * j // math.gcd(need, j)
            h = h // g
            power = power % h if h.degree > 0 else power
    return need


@dataclass
class RootExpansion:
    """Leading terms of one root: every coefficient below ``known_below`` is fixed by ``terms``."""

    terms: list  # (exponent, coefficient in the oracle's field), increasing exponents
    known_below: Fraction | None  # None: the expansion is exact
    field: FqField
    inseparable_exponent: int = 0

    @property
    def exact(self) -> bool:
        return self.known_below is None

    def coefficient(self, e: Fraction) -> FqElement | None:
        """Coefficient at e when determined, else None."""
        if self.known_below is not None and e >= self.known_below:
            return None
        for g, c in self.terms:
            if g == e:
                return c
        return self.field.zero

    def coefficient_fields(self) -> int:
        """lcm of the subfield degrees of the known coefficients."""
        from .fields import subfield_degree

        d = 1
        for _, c in self.terms:
            k = subfield_degree(c)
            d = d * k // math.gcd(d, k)
        return d


@dataclass
class OracleResult:
    count: int
    roots: list
    field: FqField
    m: int
    steps: int


class _Separator:
    def __init__(self, K: FqField, m: int, p: int, step_cap: int, expand_terms: int, expand_below: Fraction):
        self.K = K
        self.m = m
        self.p = p
        self.step_cap = step_cap
        self.steps = 0
        self.expand_terms = expand_terms
        self.expand_below = expand_below

    def shift(self, G: Poly, c: FqElement, g: Fraction, count: bool = True) -> Poly:
        if count:
            self.steps += 1
            if self.steps > self.step_cap:
                raise OracleDepthError(f"branch separation exceeded {self.step_cap} refinement steps")
        K = self.K
        mono = HahnSum.monomial(K, c, g)
        y = Poly([mono, HahnSum(K, {Fraction(0): K.one})], G.zero, G.var)
        return G(y)

    def residual(self, G: Poly, i0: int, i1: int, g: Fraction) -> Poly:
        K = self.K
        base = G[i0].valuation() + i0 * g
        cs = [K.zero] * (i1 - i0 + 1)
        for i in range(i0, i1 + 1):
            gi = G[i]
            if gi and gi.valuation() + i * g == base:
                cs[i - i0] = gi.initial()
        return Poly(cs, K.zero, "c")

    def roots(self, G: Poly, last: Fraction | None, prefix: list, disc_bound: Fraction) -> list[RootExpansion]:
        out: list[RootExpansion] = []
        if not G[0]:
            out.append(RootExpansion(list(prefix), None, self.K))
        points = [(i, c.valuation()) for i, c in enumerate(G.coeffs) if c]
        for i0, i1, g in lower_hull(points):
            if last is not None and g <= last:
                continue
            if last is None and g < 0:
                continue
            if not in_group(g, self.m, self.p):
                continue
            phi = self.residual(G, i0, i1, g)
            mult = roots_with_multiplicity(phi)
            if sum(mult.values()) != phi.degree:
                raise NeedExtension(_split_degree(phi))
            for c in sorted(mult, key=lambda r: r.value):
                if mult[c] == 1:
                    out.append(self.expand_simple(G, c, g, prefix))
                else:
                    if g >= disc_bound:
                        raise OracleDepthError(
                            f"repeated residual root at exponent {g} beyond half the discriminant valuation"
                        )
                    out.extend(self.roots(self.shift(G, c, g), g, prefix + [(g, c)], disc_bound))
        return out

    def expand_simple(self, G: Poly, c: FqElement, g: Fraction, prefix: list) -> RootExpansion:
        """Continue the unique root with leading term c*t^g for a bounded number of terms."""
        terms = prefix + [(g, c)]
        while True:
            if len(terms) >= self.expand_terms or g >= self.expand_below or self.steps >= self.step_cap:
                return RootExpansion(terms, self._next_exponent_bound(G, c, g), self.K)
            G = self.shift(G, c, g)
            if not G[0]:
                return RootExpansion(terms, None, self.K)
            g_next = G[0].valuation() - G[1].valuation()
            if g_next <= g:  # pragma: no cover - Hensel guarantees growth
                raise OracleDepthError("simple root refinement did not increase the exponent")
            c = -G[0].initial() / G[1].initial()
            g = g_next
            terms.append((g, c))

    def _next_exponent_bound(self, G: Poly, c: FqElement, g: Fraction) -> Fraction:
        # After subtracting the known terms, the remainder has valuation > g.
        # Compute the next exponent exactly when cheap; it is the first unknown one.
        G1 = self.shift(G, c, g, count=False)
        if not G1[0]:
            return None
        return G1[0].valuation() - G1[1].valuation()


def _hahn_poly(g: Poly, K: FqField) -> Poly:
    """Monic g with polynomial-in-t coefficients (as F_q(t) values) to a polynomial over Hahn sums of K."""
    zero = HahnSum(K)
    cs = []
    for c in g.coeffs:
        if isinstance(c, RationalFunction):
            if not c.is_polynomial():
                raise ValueError("squarefree piece has non-polynomial coefficients")
            poly = c.num * (c.num.one / c.den.lc())
        else:
            poly = c
        cs.append(HahnSum(K, {Fraction(i): embed_subfield(a, K) for i, a in enumerate(poly.coeffs) if a}))
    return Poly(cs, zero, "Y")


def count_roots_oracle(
    f: Poly,
    field: FqField,
    m: int = 1,
    step_cap: int = 256,
    expand_terms: int = 64,
    expand_below: Fraction | int = 64,
) -> OracleResult:
    """Distinct roots of f in the Hahn field with exponents in (1/(m p^inf))Z>=0 over an algebraic closure.

    f is monic in X with polynomial-in-t coefficients over ``field``.
    Returns the count together with leading-term expansions of each root
    (over a finite field large enough to hold all of them).
    """
    p = field.p
    if m < 1 or m % p == 0:
        raise ValueError(f"m = {m} must be positive and coprime to p = {p}")
    F = to_rational(f, field)
    parts = squarefree_decomposition(F)
    degree_cap = field.e * lcm_range(max(1, sum(part.poly.degree for part in parts)))
    D = field.e
    while True:
        K = GF(p, D)
        sep = _Separator(K, m, p, step_cap, expand_terms, Fraction(expand_below))
        try:
            roots: list[RootExpansion] = []
            for part in parts:
                g = part.poly
                disc = resultant(g, g.derivative())
                disc_bound = Fraction(disc.valuation(), 2) if disc else Fraction(10**9)
                found = sep.roots(_hahn_poly(g, K), None, [], disc_bound)
                k = part.inseparable_exponent
                for r in found:
                    if k:
                        r.terms = [(e / p**k, c.frobenius(-k)) for e, c in r.terms]
                        r.known_below = None if r.known_below is None else r.known_below / p**k
                        r.inseparable_exponent = k
                    roots.append(r)
            roots.sort(key=lambda r: [(e, c.value) for e, c in r.terms])
            return OracleResult(len(roots), roots, K, m, sep.steps)
        except NeedExtension as ext:
            D *= ext.degree
            if D > degree_cap:  # pragma: no cover - residue degrees are bounded by deg f
                raise OracleDepthError(f"residual roots need F_(p^{D}), beyond the bound {degree_cap}")


def substitute_power(f: Poly, m: int) -> Poly:
    """Replace t by t^m in every coefficient of f."""
    if m == 1:
        return f

    def scale(c: Poly) -> Poly:
        cs = [c.zero] * (m * c.degree + 1) if c else []
        for i, a in enumerate(c.coeffs):
            cs[m * i] = a
        return c._like(cs)

    return f.map_coeffs(scale)


GroupPredicate = Callable[[int], bool]
