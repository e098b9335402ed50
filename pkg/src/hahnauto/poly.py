"""Dense univariate polynomials over a coefficient ring, and F_q(t).

``Poly`` is generic: coefficients may be ``FqElement`` (giving F_q[t] or
F_q[X]), ``RationalFunction`` (giving F_q(t)[X]) or another ``Poly``
(giving F_q[t][X]).  Division-based operations need field coefficients.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .fields import FqElement, FqField


class Poly:
    __slots__ = ("coeffs", "zero", "var")

    def __init__(self, coeffs: Sequence, zero, var: str = "X"):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.zero = zero
        self.var = var

    # construction helpers ---------------------------------------------------
    @classmethod
    def constant(cls, c, zero, var="X") -> "Poly":
        return cls([c], zero, var)

    @classmethod
    def monomial(cls, c, k: int, zero, var="X") -> "Poly":
        return cls([zero] * k + [c], zero, var)

    def _like(self, coeffs) -> "Poly":
        return Poly(coeffs, self.zero, self.var)

    @property
    def one(self):
        return self.zero + 1

    # basic queries -------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.zero

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.zero

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == self.one

    def valuation(self) -> int:
        """Order of vanishing at 0 (index of the lowest nonzero coefficient)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("valuation of the zero polynomial")

    # ring operations -----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly) and other.var == self.var:
            return other
        return self._like([self.zero + other])

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return self._like([self[i] + o[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return self._like([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly) or other.var != self.var:
            return self._like([c * other for c in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return self._like([])
        out = [self.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return self._like(out)

    def __rmul__(self, other):
        return self._like([other * c for c in self.coeffs])

    def __pow__(self, k: int) -> "Poly":
        result = self._like([self.one])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if not self.coeffs:
            return not other
        return len(self.coeffs) == 1 and self.coeffs[0] == other

    def __hash__(self):
        return hash(self.coeffs)

    def __call__(self, x):
        acc = self.zero if not isinstance(x, Poly) else x._like([])
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return self._like([c * i for i, c in enumerate(self.coeffs)][1:])

    def map_coeffs(self, fn, zero=None, var=None) -> "Poly":
        return Poly([fn(c) for c in self.coeffs], self.zero if zero is None else zero, var or self.var)

    # field-coefficient operations ----------------------------------------
    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        inv = self.one / self.coeffs[-1]
        return self._like([c * inv for c in self.coeffs])

    def __divmod__(self, other: "Poly"):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        # a monic divisor needs no inverse, so division works over rings like F_q[t]
        inv = self.one if other.lc() == self.one else self.one / other.lc()
        quot = [self.zero] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db and rem:
            k = len(rem) - 1 - db
            c = rem[-1] * inv
            quot[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
            rem.pop()
            while rem and not rem[-1]:
                rem.pop()
        return self._like(quot), self._like(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        return not (other % self)

    def __repr__(self) -> str:
        return format_poly(self)

    __str__ = __repr__


def _coeff_str(c) -> str:
    s = str(c)
    if any(ch in s for ch in "+-") and not (s.startswith("-") and s[1:].isdigit()):
        return f"({s})"
    return s


def format_poly(f: Poly) -> str:
    terms = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (f.var if i == 1 else f"{f.var}^{i}")
        if not mono:
            terms.append(_coeff_str(c))
        elif c == f.one:
            terms.append(mono)
        else:
            terms.append(f"{_coeff_str(c)}*{mono}")
    return " + ".join(terms) if terms else "0"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by Euclid's algorithm (field coefficients)."""
    while b:
        a, b = b, a % b
    return a.monic()


def resultant(a: Poly, b: Poly):
    """Resultant over a field, by the Euclidean recurrence."""
    one = a.one
    if not a or not b:
        return a.zero
    if b.degree == 0:
        return b.lc() ** a.degree if a.degree else one
    if a.degree == 0:
        return a.lc() ** b.degree
    r = a % b
    if not r:
        return a.zero
    sign = -one if (a.degree * b.degree) % 2 else one
    return sign * b.lc() ** (a.degree - r.degree) * resultant(b, r)


# --- polynomials over a finite field: powmod and root finding ---------------

def powmod(base: Poly, k: int, mod: Poly) -> Poly:
    result = base._like([base.one])
    base = base % mod
    while k:
        if k & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        k >>= 1
    return result


def _split(h: Poly, field: FqField, rng: random.Random) -> list[FqElement]:
    """Roots of a squarefree h that splits into distinct linear factors."""
    if h.degree == 0:
        return []
    if h.degree == 1:
        h = h.monic()
        return [-h.coeffs[0]]
    x = Poly([field.zero, field.one], field.zero, h.var)
    while True:
        a = field.from_index(rng.randrange(field.q))
        if field.p == 2:
            # trace map Tr(a x) = sum (a x)^(2^i)
            term = (x * a) % h
            acc = term
            for _ in range(field.e - 1):
                term = (term * term) % h
                acc = acc + term
            g = poly_gcd(h, acc)
        else:
            g = poly_gcd(h, powmod(x + a, (field.q - 1) // 2, h) - 1)
        if 0 < g.degree < h.degree:
            return _split(g, field, rng) + _split(h // g, field, rng)


def poly_roots(f: Poly) -> list[FqElement]:
    """Distinct roots in the coefficient field (Cantor-Zassenhaus splitting)."""
    if not f:
        raise ValueError("roots of the zero polynomial")
    field = f.lc().field
    x = Poly([field.zero, field.one], field.zero, f.var)
    roots = []
    if not f.coeffs[0]:
        roots.append(field.zero)
        while not f.coeffs[0]:
            f = f // x
    if f.degree < 1:
        return roots
    h = poly_gcd(f, powmod(x, field.q, f) - x)
    rng = random.Random(0x5EED ^ field.q)
    return roots + sorted(_split(h, field, rng), key=lambda r: r.value)


def roots_with_multiplicity(f: Poly) -> dict[FqElement, int]:
    out = {}
    for r in poly_roots(f):
        lin = Poly([-r, r.field.one], r.field.zero, f.var)
        k = 0
        g = f
        while True:
            q, rem = divmod(g, lin)
            if rem:
                break
            g = q
            k += 1
        out[r] = k
    return out


# --- rational functions F_q(t) ---------------------------------------------

class RationalFunction:
    """Reduced fraction num/den of polynomials in t with den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None, _reduced: bool = False):
        if den is None:
            den = num._like([num.one])
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if not num:
                den = den._like([den.one])
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num // g, den // g
                inv = den.one / den.lc()
                num, den = num * inv, den * inv
        self.num = num
        self.den = den

    @classmethod
    def from_field(cls, field: FqField, value=0) -> "RationalFunction":
        return cls(Poly([field(value) if not isinstance(value, FqElement) else value], field.zero, "t"))

    @property
    def field(self) -> FqField:
        return self.den.lc().field

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        return RationalFunction(self.num._like([self.num.zero + other]), _reduced=False)

    def __add__(self, other):
        o = self._coerce(other)
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o.num:
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den, self.num) ** (-k)
        return RationalFunction(self.num**k, self.den**k)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, FqElement, Poly)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def valuation(self) -> int:
        """t-adic valuation v(num) - v(den)."""
        return self.num.valuation() - self.den.valuation()

    def is_pth_power(self) -> bool:
        p = self.field.p
        return all(not c or i % p == 0 for part in (self.num, self.den) for i, c in enumerate(part.coeffs))

    def pth_root(self) -> "RationalFunction":
        field = self.field
        p = field.p

        def root(poly: Poly) -> Poly:
            cs = [poly.coeffs[i].frobenius(field.e - 1) for i in range(0, len(poly.coeffs), p)]
            return poly._like(cs)

        return RationalFunction(root(self.num), root(self.den))

    def __repr__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        return f"({self.num})/({self.den})"

    __str__ = __repr__


def t_poly(field: FqField, coeffs: Sequence[int | FqElement]) -> Poly:
    return Poly([c if isinstance(c, FqElement) else field(c) for c in coeffs], field.zero, "t")


def rf_zero(field: FqField) -> RationalFunction:
    return RationalFunction(Poly([], field.zero, "t"))


def to_rational(f: Poly, field: FqField) -> Poly:
    """Lift a polynomial in X with F_q[t] coefficients to F_q(t)[X]."""
    return Poly([RationalFunction(c) for c in f.coeffs], rf_zero(field), f.var)


def to_integral(f: Poly, field: FqField) -> Poly:
    """Inverse of ``to_rational``; every coefficient must be a polynomial in t."""
    out = []
    for c in f.coeffs:
        if not c.is_polynomial():
            raise ValueError(f"coefficient {c} is not a polynomial in t")
        out.append(c.num * (c.num.one / c.den.lc()))
    return Poly(out, Poly([], field.zero, "t"), f.var)


# --- squarefree decomposition in characteristic p ----------------------------

@dataclass(frozen=True)
class SquarefreePart:
    """A separable squarefree g such that the roots of g(X^(p^k)) are one slice of the root set."""

    poly: Poly
    inseparable_exponent: int

    def expanded(self) -> Poly:
        k = self.inseparable_exponent
        if k == 0:
            return self.poly
        p = self.poly.lc().field.p
        step = p**k
        cs = []
        for c in self.poly.coeffs:
            cs.extend([c] + [self.poly.zero] * (step - 1))
        return self.poly._like(cs[: (len(self.poly.coeffs) - 1) * step + 1])


def _deflate(f: Poly, p: int) -> Poly:
    return f._like([f.coeffs[i] for i in range(0, len(f.coeffs), p)])


def squarefree_decomposition(f: Poly, _k: int = 0) -> list[SquarefreePart]:
    """Split the distinct roots of f (coefficients in F_q(t)) into separable squarefree pieces.

    Returns parts (g, k) with pairwise disjoint root sets whose union, after
    taking p^k-th roots, is the root set of f.
    """
    if not f:
        raise ValueError("squarefree part of the zero polynomial")
    f = f.monic()
    if f.degree == 0:
        return []
    p = f.lc().field.p
    df = f.derivative()
    if not df:
        g = _deflate(f, p)
        if all(c.is_pth_power() for c in g.coeffs):
            # f = (g^(1/p))(X)^p: same roots, no new inseparability
            return squarefree_decomposition(g.map_coeffs(lambda c: c.pth_root()), _k)
        return squarefree_decomposition(g, _k + 1)
    u = poly_gcd(f, df)
    s = f // u
    rest = u
    g = poly_gcd(rest, s)
    while g.degree > 0:
        rest = rest // g
        g = poly_gcd(rest, s)
    parts = [SquarefreePart(s.monic(), _k)] if s.degree > 0 else []
    if rest.degree > 0:
        parts.extend(squarefree_decomposition(rest, _k))
    return parts


def squarefree_part(f: Poly) -> tuple[Poly, bool]:
    """Product of the squarefree pieces; the flag is set when an X -> X^p layer was peeled off."""
    parts = squarefree_decomposition(f)
    result = f._like([f.one])
    inseparable = False
    for part in parts:
        result = result * part.expanded()
        inseparable |= part.inseparable_exponent > 0
    return result, inseparable


# --- linear algebra over a field ----------------------------------------------

def linear_solve(matrix: Sequence[Sequence], zero) -> list | None:
    """A nonzero kernel vector of ``matrix`` or None when the kernel is trivial.

    Gauss-Jordan elimination with columns taken in increasing order; the
    first free column is set to 1 and the others to 0.
    """
    rows = [list(r) for r in matrix]
    ncols = len(rows[0]) if rows else 0
    one = zero + 1
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    if not free:
        return None
    j = free[0]
    vec = [zero] * ncols
    vec[j] = one
    for i, c in enumerate(pivots):
        vec[c] = -rows[i][j]
    return vec
