"""Finite generalized power series: sums of c * t^g with rational g >= 0."""

from __future__ import annotations

from fractions import Fraction

from .fields import FqElement, FqField


class HahnSum:
    __slots__ = ("field", "terms")

    def __init__(self, field: FqField, terms: dict | None = None):
        self.field = field
        self.terms = {Fraction(e): c for e, c in (terms or {}).items() if c}

    @classmethod
    def monomial(cls, field: FqField, c, e) -> "HahnSum":
        return cls(field, {Fraction(e): field(c) if not isinstance(c, FqElement) else c})

    def _coerce(self, other) -> "HahnSum":
        if isinstance(other, HahnSum):
            return other
        c = self.field(other) if isinstance(other, int) else other
        return HahnSum(self.field, {Fraction(0): c})

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out[e] + c if e in out else c
        return HahnSum(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return HahnSum(self.field, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict[Fraction, FqElement] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = e1 + e2
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return HahnSum(self.field, out)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, FqElement)):
            other = self._coerce(other)
        return isinstance(other, HahnSum) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def valuation(self) -> Fraction:
        return min(self.terms)

    def initial(self) -> FqElement:
        return self.terms[self.valuation()]

    def __repr__(self) -> str:
        parts = [f"{c}*t^({e})" for e, c in sorted(self.terms.items())]
        return " + ".join(parts) if parts else "0"
