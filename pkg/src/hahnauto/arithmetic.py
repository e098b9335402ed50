"""Ring operations on automatic series.

Multiplication follows the carry-automaton route: read both factors least
significant digit first, guess aligned digit pairs whose sum with the
incoming carry produces each digit of the result, and count the guesses.
Counting happens in F_q with each path weighted by the product of the two
coefficients, which is the sum over all indicator sub-products at once.
"""

from __future__ import annotations

from fractions import Fraction

from .automata import DEFAULT_STATE_CAP, Dfao, explore, is_empty, minimize, product, reverse
from .encoding import AutomaticSeries, from_finite_series, mask_valid
from .fields import FieldError, FqElement, FqField
from .poly import Poly


def _check(x: AutomaticSeries, y: AutomaticSeries) -> None:
    if x.field is not y.field:
        raise FieldError(f"series over different fields: {x.field.describe()} vs {y.field.describe()}")
    if x.p != y.p:
        raise FieldError("series over different digit alphabets")


def _raw(M: Dfao) -> Dfao:
    return M.map_outputs(lambda c: c.value, zero=0)


def _wrap(M: Dfao, field: FqField, validate: bool) -> AutomaticSeries:
    return AutomaticSeries(M.map_outputs(field.from_index, zero=field.zero), field, validate=validate)


def add(x: AutomaticSeries, y: AutomaticSeries, validate: bool = True) -> AutomaticSeries:
    _check(x, y)
    M = product(x.dfao, y.dfao, lambda a, b: a + b, zero=x.field.zero)
    return AutomaticSeries(M, x.field, validate=validate)


def scalar_mul(c, x: AutomaticSeries) -> AutomaticSeries:
    c = x.field(c)
    if not c:
        return from_finite_series([], x.field, x.p)
    return AutomaticSeries(x.dfao.map_outputs(lambda v: c * v), x.field, validate=False)


def neg(x: AutomaticSeries) -> AutomaticSeries:
    return scalar_mul(-1, x)


def sub(x: AutomaticSeries, y: AutomaticSeries, validate: bool = True) -> AutomaticSeries:
    return add(x, neg(y), validate=validate)


def is_zero(x: AutomaticSeries) -> bool:
    return is_empty(mask_valid(x.dfao))


def equals(x: AutomaticSeries, y: AutomaticSeries) -> bool:
    _check(x, y)
    return is_zero(add(x, neg(y), validate=False))


# --- multiplication -------------------------------------------------------------

def _padded_factor(R: Dfao, p: int):
    """Step and weight of the recogniser for 0* core 0* over a reversed factor.

    A state is "L" while only padding zeros were read, otherwise
    (state of R after the core so far, output of R at the last nonzero symbol).
    """

    def step(s, a):
        if s == "L":
            if a == 0:
                return "L"
            q = R.delta[R.q0][a]
            return (q, R.tau[q])
        q = R.delta[s[0]][a]
        return (q, s[1]) if a == 0 else (q, R.tau[q])

    def weight(s):
        return 0 if s == "L" else s[1]

    return step, weight


def pair_automaton(Rx: Dfao, Ry: Dfao, field: FqField, cap: int = DEFAULT_STATE_CAP) -> Dfao:
    """Weighted DFAO over digit pairs (symbol t*(p+1)+u) with aligned radix points.

    Output on a pair of equal-length strings is x(w1)*y(w2) when the strings
    are zero-padded reversed expansions w1, w2, else 0.
    """
    p = Rx.p
    k = p + 1
    sx, wx = _padded_factor(Rx, p)
    sy, wy = _padded_factor(Ry, p)

    def step(s, sym):
        if s == "R":
            return "R"
        t, u = divmod(sym, k)
        if (t == p) != (u == p):
            return "R"
        return (sx(s[0], t), sy(s[1], u))

    def weight(s):
        if s == "R":
            return 0
        return field.mul(wx(s[0]), wy(s[1]))

    return minimize(explore(k * k, ("L", "L"), step, weight, 0, cap))


def _carry_sum_dfao(P: Dfao, p: int, field: FqField, cap: int) -> Dfao:
    """Weighted path sums of the carry automaton over the result digits.

    Carry states are (pair state, carry bit); a result digit d is reached by
    every pair (t, u) with t + u + carry = d mod p; the radix point keeps the
    carry.  Accepting weight is the pair weight at carry 0.
    """
    k = p + 1
    nP = P.n
    targets: list[list[list[int]]] = []
    for idx in range(2 * nP):
        s, c = divmod(idx, 2)
        per_symbol = []
        for d in range(k):
            if d == p:
                per_symbol.append([2 * P.delta[s][p * k + p] + c])
                continue
            outs = []
            for t in range(p):
                u = (d - t - c) % p
                carry = (t + u + c) // p
                outs.append(2 * P.delta[s][t * k + u] + carry)
            per_symbol.append(outs)
        targets.append(per_symbol)
    final = [P.tau[idx // 2] if idx % 2 == 0 else 0 for idx in range(2 * nP)]
    fadd, fmul = field.add, field.mul

    def step(vec, d):
        out = {}
        for idx, v in vec:
            for r in targets[idx][d]:
                out[r] = fadd(out.get(r, 0), v)
        return tuple(sorted((r, v) for r, v in out.items() if v))

    def output(vec):
        acc = 0
        for idx, v in vec:
            if final[idx]:
                acc = fadd(acc, fmul(v, final[idx]))
        return acc

    return explore(k, ((2 * P.q0, 1),), step, output, 0, cap)


def multiply(x: AutomaticSeries, y: AutomaticSeries, cap: int = DEFAULT_STATE_CAP, pad: int | None = None,
             validate: bool = True, extra_pad: int = 0) -> AutomaticSeries:
    _check(x, y)
    field = x.field
    if is_zero(x) or is_zero(y):
        return from_finite_series([], field, x.p)
    Rx = reverse(_raw(x.dfao), cap)
    Ry = reverse(_raw(y.dfao), cap)
    P = pair_automaton(Rx, Ry, field, cap)
    C = _carry_sum_dfao(P, x.p, field, cap)
    # Leading (fractional) zero padding stabilises once it exceeds the
    # number of states; one trailing zero leaves room for the final carry.
    m = (max(P.n, C.n) + 1 if pad is None else pad) + extra_pad
    root = C.step(C.q0, [0] * m)
    shifted = Dfao(C.k, C.delta, root, tuple(C.tau[C.delta[q][0]] for q in range(C.n)), 0)
    result = mask_valid(reverse(shifted, cap))
    return _wrap(result, field, validate)


def frobenius(x: AutomaticSeries, validate: bool = True) -> AutomaticSeries:
    """x^p: coefficients raised to the p-th power and exponents scaled by p (radix shift)."""
    M = x.dfao
    p = x.p
    R = p

    def step(s, a):
        kind = s[0]
        if kind == "pre":
            _, q, buf = s
            if a == R:
                if buf is None:
                    return ("zp", M.delta[q][R])
                q = M.delta[q][R]
                return ("zp", q) if buf == 0 else ("post", M.delta[q][buf])
            return ("pre", q if buf is None else M.delta[q][buf], a)
        if kind == "zp":
            q = M.delta[s[1]][0]
            return ("zp", q) if a == 0 else ("post", M.delta[q][a])
        return ("post", M.delta[s[1]][a])

    def output(s):
        return x.field.zero if s[0] == "pre" else M.tau[s[1]] ** p

    D = explore(M.k, ("pre", M.q0, None), step, output, x.field.zero)
    return AutomaticSeries(mask_valid(D), x.field, validate=validate)


def power(x: AutomaticSeries, n: int, cache: dict | None = None) -> AutomaticSeries:
    """x^n using Frobenius for multiples of p and one multiplication otherwise."""
    cache = {} if cache is None else cache
    if n in cache:
        return cache[n]
    if n == 0:
        out = from_finite_series([(0, 1)], x.field, x.p)
    elif n == 1:
        out = x
    elif n % x.p == 0:
        out = frobenius(power(x, n // x.p, cache))
    else:
        out = multiply(power(x, n - 1, cache), x)
    cache[n] = out
    return out


def series_of_coefficient(c, field: FqField, p: int) -> AutomaticSeries:
    """A polynomial in t (or a constant) as a finite-support series."""
    if isinstance(c, Poly):
        terms = [(Fraction(i), a) for i, a in enumerate(c.coeffs) if a]
    else:
        terms = [(Fraction(0), c)] if c else []
    return from_finite_series([(e, field(a) if not isinstance(a, FqElement) else a) for e, a in terms], field, p)


def evaluate_polynomial(f: Poly, x: AutomaticSeries) -> AutomaticSeries:
    """f(x) for f in F_q[t][X]: sum of coefficient series times powers of x."""
    field = x.field
    cache: dict[int, AutomaticSeries] = {}
    acc = from_finite_series([], field, x.p)
    for i, c in enumerate(f.coeffs):
        if not c:
            continue
        if isinstance(c, Poly) and c.degree > 0:
            term = multiply(series_of_coefficient(c, field, x.p), power(x, i, cache))
        else:
            const = c.coeffs[0] if isinstance(c, Poly) else c
            term = scalar_mul(const, power(x, i, cache))
        acc = add(acc, term, validate=False)
    return AutomaticSeries(acc.dfao, field, validate=True)
