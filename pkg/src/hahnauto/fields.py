"""Prime-power finite fields F_{p^e}.

Elements are stored as an integer index: the coordinate vector
(c_0, ..., c_{e-1}) in the power basis 1, z, ..., z^{e-1} is packed as
sum(c_i * p**i).  Small fields get exp/log/Zech tables; larger ones fall
back to polynomial arithmetic modulo the defining polynomial.
"""

from __future__ import annotations

import functools
import math
from typing import Iterator, Sequence

TABLE_LIMIT = 1 << 12


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- dense polynomials over F_p as lists (lowest degree first) -------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def _pdivmod(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    a = list(a)
    _trim(a)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], p - 2, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        c = a[-1] * inv % p
        q[k] = c
        for j, y in enumerate(b):
            a[k + j] = (a[k + j] - c * y) % p
        _trim(a)
    return _trim(q), a


def _pgcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def _ppowmod(base: Sequence[int], k: int, mod: Sequence[int], p: int) -> list[int]:
    result = [1]
    base = _pdivmod(base, mod, p)[1]
    while k:
        if k & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        k >>= 1
    return result


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over F_p."""
    poly = _trim(list(poly))
    n = len(poly) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    if _ppowmod(x, p**n, poly, p) != x:
        return False
    for r in prime_factors(n):
        h = _ppowmod(x, p ** (n // r), poly, p)
        h = h + [0] * (2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_pgcd(poly, _trim(h), p)) != 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def least_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically-least monic irreducible of degree e (lower coefficients read as a base-p integer)."""
    for idx in range(p**e):
        coeffs = [(idx // p**i) % p for i in range(e)] + [1]
        if e == 1 or coeffs[0] != 0:
            if is_irreducible(coeffs, p):
                return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {e} over F_{p}")


class FqField:
    """The field F_p[z]/(modulus)."""

    def __init__(self, p: int, modulus: Sequence[int]):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        modulus = tuple(int(c) % p for c in modulus)
        while modulus and modulus[-1] == 0:
            modulus = modulus[:-1]
        if len(modulus) < 2 or modulus[-1] != 1:
            raise FieldError("modulus must be monic of degree >= 1")
        if not is_irreducible(modulus, p):
            raise FieldError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.modulus = modulus
        self.e = len(modulus) - 1
        self.q = p**self.e
        self._exp: list[int] | None = None
        if self.q <= TABLE_LIMIT:
            self._build_tables()
        self.zero = FqElement(self, 0)
        self.one = FqElement(self, 1)

    # table construction -------------------------------------------------
    def _build_tables(self) -> None:
        q = self.q
        if q == 2:
            self._exp, self._log = [1], {1: 0}
            self._zech = [None]
            return
        order = q - 1
        for g in range(2, q) if self.e > 1 else range(1, q):
            seen = self._cycle(g)
            if len(seen) == order:
                break
        else:  # pragma: no cover - every finite field has a generator
            raise FieldError("no primitive element found")
        self._exp = seen
        self._log = {v: i for i, v in enumerate(seen)}
        # zech[k] = log(1 + g^k), None when 1 + g^k = 0
        one_plus = [self._add_slow(1, v) for v in seen]
        self._zech = [self._log.get(v) if v else None for v in one_plus]

    def _cycle(self, g: int) -> list[int]:
        out = [1]
        cur = g
        while cur != 1:
            out.append(cur)
            cur = self._mul_slow(cur, g)
            if len(out) > self.q:
                break
        return out

    # index <-> coordinate vectors ----------------------------------------
    def digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.e):
            out.append(a % p)
            a //= p
        return out

    def pack(self, coeffs: Sequence[int]) -> int:
        p = self.p
        if len(coeffs) > self.e:
            coeffs = _pdivmod(list(coeffs), self.modulus, p)[1]
        v = 0
        for c in reversed(list(coeffs)):
            v = v * p + c % p
        return v

    def _add_slow(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        da, db = self.digits(a), self.digits(b)
        return self.pack([(x + y) % self.p for x, y in zip(da, db)])

    def _mul_slow(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        prod = _pmul(_trim(self.digits(a)), _trim(self.digits(b)), self.p)
        return self.pack(_pdivmod(prod, self.modulus, self.p)[1])

    # raw integer-index arithmetic -----------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._exp is not None:
            if a == 0:
                return b
            if b == 0:
                return a
            la, lb = self._log[a], self._log[b]
            z = self._zech[(lb - la) % (self.q - 1)]
            return 0 if z is None else self._exp[(la + z) % (self.q - 1)]
        return self._add_slow(a, b)

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return self.pack([(-c) % self.p for c in self.digits(a)])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return a * b % self.p
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_slow(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.q)
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is not None:
            return self._exp[(-self._log[a]) % (self.q - 1)]
        return self.power(a, self.q - 2)

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        if a == 0:
            return 1 if k == 0 else 0
        if self._exp is not None:
            return self._exp[(self._log[a] * k) % (self.q - 1)]
        result, base = 1, a
        while k:
            if k & 1:
                result = self._mul_slow(result, base)
            base = self._mul_slow(base, base)
            k >>= 1
        return result

    # element constructors -------------------------------------------------
    def __call__(self, value) -> "FqElement":
        if isinstance(value, FqElement):
            if value.field is not self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FqElement(self, value % self.p)
        return FqElement(self, self.pack(list(value)))

    def from_index(self, idx: int) -> "FqElement":
        if not 0 <= idx < self.q:
            raise FieldError(f"index {idx} outside F_{self.q}")
        return FqElement(self, idx)

    @property
    def gen(self) -> "FqElement":
        return FqElement(self, self.pack([0, 1]))

    def elements(self) -> Iterator["FqElement"]:
        for i in range(self.q):
            yield FqElement(self, i)

    def describe(self) -> str:
        """Compact descriptor used in serialized artifacts, e.g. ``F9:z^2+1``."""
        if self.e == 1:
            return f"F{self.q}"
        return f"F{self.q}:{format_fp_poly(self.modulus, 'z')}"

    def __repr__(self) -> str:
        return f"FqField({self.describe()})"

    def __reduce__(self):
        return (GF, (self.p, self.e, self.modulus))


def format_fp_poly(coeffs: Sequence[int], var: str) -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
            continue
        mono = var if i == 1 else f"{var}^{i}"
        terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms) if terms else "0"


def GF(p: int, e: int = 1, modulus: tuple[int, ...] | None = None) -> FqField:
    """Cached field constructor; the default modulus is the least irreducible."""
    if modulus is None:
        modulus = (0, 1) if e == 1 else least_irreducible(p, e)
    modulus = tuple(int(c) % p for c in modulus)
    if len(modulus) - 1 != e:
        raise FieldError("modulus degree does not match e")
    return _field(p, modulus)


@functools.lru_cache(maxsize=None)
def _field(p: int, modulus: tuple[int, ...]) -> FqField:
    return FqField(p, modulus)


class FqElement:
    __slots__ = ("field", "value")

    def __init__(self, field: FqField, value: int):
        self.field = field
        self.value = value

    def _coerce(self, other) -> int:
        if isinstance(other, FqElement):
            if other.field is not self.field:
                raise FieldError(
                    f"field mismatch: {self.field.describe()} vs {other.field.describe()}"
                )
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FqElement(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __neg__(self):
        return FqElement(self.field, self.field.neg(self.value))

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FqElement(self.field, self.field.add(self.value, self.field.neg(b)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FqElement(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def inverse(self) -> "FqElement":
        return FqElement(self.field, self.field.inv(self.value))

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return NotImplemented
        return FqElement(self.field, self.field.mul(self.value, self.field.inv(b)))

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        return FqElement(self.field, self.field.power(self.value, k))

    def __eq__(self, other):
        if isinstance(other, FqElement):
            return self.field is other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.field.modulus, self.value))

    def __bool__(self):
        return self.value != 0

    def __lt__(self, other: "FqElement") -> bool:
        return self.value < other.value

    def coeffs(self) -> list[int]:
        return self.field.digits(self.value)

    def frobenius(self, k: int = 1) -> "FqElement":
        return self ** (self.field.p ** (k % self.field.e))

    def __repr__(self) -> str:
        return format_fp_poly(self.coeffs(), "z")

    __str__ = __repr__


def is_in_subfield(a: FqElement, d: int) -> bool:
    """True iff a lies in the subfield F_{p^d}, tested by a^(p^d) == a."""
    if a.field.e % d:
        raise FieldError(f"{d} does not divide the extension degree {a.field.e}")
    return a ** (a.field.p**d) == a


def subfield_degree(a: FqElement) -> int:
    """Degree of the smallest subfield containing a."""
    for d in range(1, a.field.e + 1):
        if a.field.e % d == 0 and is_in_subfield(a, d):
            return d
    return a.field.e  # pragma: no cover


@functools.lru_cache(maxsize=None)
def embedding_image(source: FqField, target: FqField) -> FqElement:
    """Image of the generator of ``source`` in ``target``: the least root of source.modulus."""
    if source.p != target.p or target.e % source.e:
        raise FieldError(f"no embedding of {source.describe()} into {target.describe()}")
    if source.e == 1:
        return target.one
    from .poly import Poly, poly_roots

    modpoly = Poly([target(c) for c in source.modulus], target.zero, "z")
    roots = sorted(poly_roots(modpoly), key=lambda r: r.value)
    if not roots:  # pragma: no cover - guaranteed by field theory
        raise FieldError("modulus has no root in target")
    return roots[0]


def embed_subfield(a: FqElement, target: FqField) -> FqElement:
    source = a.field
    if source is target:
        return a
    if source.e == 1:
        if source.p != target.p:
            raise FieldError("characteristic mismatch")
        return target(a.value)
    r = embedding_image(source, target)
    acc = target.zero
    for c in reversed(a.coeffs()):
        acc = acc * r + c
    return acc


def lcm_range(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out = out * k // math.gcd(out, k)
    return out


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]
