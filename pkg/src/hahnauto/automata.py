"""Deterministic automata with output, NFAs, and their standard constructions.

Symbols are integers ``0..k-1``.  Over the digit alphabet of a prime p the
digits are ``0..p-1`` and the radix point is the integer ``p`` (``RADIX``
below is resolved per automaton as ``k - 1``).  Output values are arbitrary
hashable objects; each automaton carries its own zero output.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

DEFAULT_STATE_CAP = 10**6


class StateCapError(RuntimeError):
    """A lazy construction produced more states than allowed."""


class AlphabetError(ValueError):
    pass


def parse_word(text: str, p: int) -> tuple[int, ...]:
    """Digit string like ``"12.1"`` to symbol tuple; ``.`` is the radix symbol ``p``."""
    out = []
    for pos, ch in enumerate(text):
        if ch == ".":
            out.append(p)
        elif ch.isdigit() and int(ch) < p:
            out.append(int(ch))
        else:
            raise AlphabetError(f"symbol {ch!r} at position {pos} not in the base-{p} digit alphabet")
    return tuple(out)


def format_word(word: Sequence[int], p: int) -> str:
    return "".join("." if s == p else str(s) for s in word)


@dataclass(frozen=True)
class Dfao:
    """Total DFAO: ``delta[q][a]`` is the successor, ``tau[q]`` the output."""

    k: int
    delta: tuple[tuple[int, ...], ...]
    q0: int
    tau: tuple
    zero: Hashable = 0

    def __post_init__(self):
        n = len(self.delta)
        if len(self.tau) != n:
            raise ValueError("tau must give one output per state")
        if not 0 <= self.q0 < n:
            raise ValueError("initial state out of range")
        for row in self.delta:
            if len(row) != self.k or any(not 0 <= r < n for r in row):
                raise ValueError("delta must be total over the alphabet")

    @property
    def n(self) -> int:
        return len(self.delta)

    @property
    def p(self) -> int:
        """Digit count when the alphabet is the digit alphabet (k = p + 1)."""
        return self.k - 1

    def step(self, q: int, word: Iterable[int]) -> int:
        for a in word:
            if not 0 <= a < self.k:
                raise AlphabetError(f"symbol {a} outside alphabet of size {self.k}")
            q = self.delta[q][a]
        return q

    def run(self, word: Iterable[int]):
        return self.tau[self.step(self.q0, word)]

    def __call__(self, word):
        if isinstance(word, str):
            word = parse_word(word, self.p)
        return self.run(word)

    def accepting(self) -> set[int]:
        return {q for q, out in enumerate(self.tau) if out != self.zero}

    def map_outputs(self, fn: Callable, zero=None) -> "Dfao":
        return Dfao(self.k, self.delta, self.q0, tuple(fn(v) for v in self.tau), self.zero if zero is None else zero)


def explore(
    k: int,
    start: Hashable,
    step: Callable[[Hashable, int], Hashable],
    output: Callable[[Hashable], Hashable],
    zero: Hashable = 0,
    cap: int = DEFAULT_STATE_CAP,
) -> Dfao:
    """Build the DFAO of reachable composite states by breadth-first search."""
    index = {start: 0}
    order = [start]
    delta: list[tuple[int, ...]] = []
    i = 0
    while i < len(order):
        s = order[i]
        row = []
        for a in range(k):
            t = step(s, a)
            j = index.get(t)
            if j is None:
                j = len(order)
                if j >= cap:
                    raise StateCapError(f"construction exceeded the state cap of {cap}")
                index[t] = j
                order.append(t)
            row.append(j)
        delta.append(tuple(row))
        i += 1
    return Dfao(k, tuple(delta), 0, tuple(output(s) for s in order), zero)


def prune_unreachable(M: Dfao) -> Dfao:
    """Restrict to states reachable from q0, numbered breadth-first."""
    return explore(M.k, M.q0, lambda q, a: M.delta[q][a], lambda q: M.tau[q], M.zero)


def minimize(M: Dfao) -> Dfao:
    """Moore partition refinement followed by breadth-first renumbering.

    The result is the unique minimal DFAO for f_M up to the numbering, so
    structural equality of canonical automata coincides with f-equivalence.
    """
    M = prune_unreachable(M)
    outs = {}
    block = [outs.setdefault(v, len(outs)) for v in M.tau]
    nblocks = len(outs)
    while True:
        sigs = {}
        new = [sigs.setdefault((block[q],) + tuple(block[r] for r in M.delta[q]), len(sigs)) for q in range(M.n)]
        if len(sigs) == nblocks:
            break
        block, nblocks = new, len(sigs)
    rep = {}
    for q in range(M.n):
        rep.setdefault(block[q], q)
    quotient = explore(
        M.k,
        block[M.q0],
        lambda b, a: block[M.delta[rep[b]][a]],
        lambda b: M.tau[rep[b]],
        M.zero,
    )
    return quotient


canonical = minimize


def constant(k: int, value, zero=0) -> Dfao:
    return Dfao(k, (tuple([0] * k),), 0, (value,), zero)


def product(M1: Dfao, M2: Dfao, combine: Callable, zero=None, cap: int = DEFAULT_STATE_CAP) -> Dfao:
    if M1.k != M2.k:
        raise AlphabetError("product of automata over different alphabets")
    z = combine(M1.zero, M2.zero) if zero is None else zero
    return explore(
        M1.k,
        (M1.q0, M2.q0),
        lambda s, a: (M1.delta[s[0]][a], M2.delta[s[1]][a]),
        lambda s: combine(M1.tau[s[0]], M2.tau[s[1]]),
        z,
        cap,
    )


def relevant_states(M: Dfao) -> set[int]:
    """States from which some state with nonzero output is reachable."""
    preds: list[list[int]] = [[] for _ in range(M.n)]
    for q, row in enumerate(M.delta):
        for r in set(row):
            preds[r].append(q)
    seen = M.accepting()
    queue = deque(seen)
    while queue:
        r = queue.popleft()
        for q in preds[r]:
            if q not in seen:
                seen.add(q)
                queue.append(q)
    return seen


def shortest_accepted(M: Dfao) -> tuple[int, ...] | None:
    """A shortest word with nonzero output (least symbols first), or None."""
    parent = {M.q0: None}
    queue = deque([M.q0])
    while queue:
        q = queue.popleft()
        if M.tau[q] != M.zero:
            word = []
            while parent[q] is not None:
                q, a = parent[q]
                word.append(a)
            return tuple(reversed(word))
        for a in range(M.k):
            r = M.delta[q][a]
            if r not in parent:
                parent[r] = (q, a)
                queue.append(r)
    return None


def is_empty(M: Dfao) -> bool:
    """True iff every word maps to the zero output."""
    return shortest_accepted(M) is None


def equivalent(M1: Dfao, M2: Dfao) -> bool:
    """f-equivalence via the product's "outputs differ" predicate."""
    return is_empty(product(M1, M2, lambda a, b: a != b, zero=False))


def reverse(M: Dfao, cap: int = DEFAULT_STATE_CAP) -> Dfao:
    """DFAO computing w -> f_M(rev(w)).

    A composite state is the function g(q) = tau(delta*(q, rev(w))) for the
    word w read so far.  This is the per-output-value reversal and subset
    construction run simultaneously for every output value.
    """
    return explore(
        M.k,
        M.tau,
        lambda g, a: tuple(g[M.delta[q][a]] for q in range(M.n)),
        lambda g: g[M.q0],
        M.zero,
        cap,
    )


@dataclass(frozen=True)
class Nfa:
    """``delta[q][a]`` is a tuple of successors; repeated entries are parallel edges."""

    k: int
    delta: tuple[tuple[tuple[int, ...], ...], ...]
    q0: int
    accepting: frozenset

    @property
    def n(self) -> int:
        return len(self.delta)

    def accepting_paths(self, word: Sequence[int]) -> int:
        counts = {self.q0: 1}
        for a in word:
            nxt: dict[int, int] = {}
            for q, c in counts.items():
                for r in self.delta[q][a]:
                    nxt[r] = nxt.get(r, 0) + c
            counts = nxt
        return sum(c for q, c in counts.items() if q in self.accepting)

    def accepts(self, word: Sequence[int]) -> bool:
        current = {self.q0}
        for a in word:
            current = {r for q in current for r in self.delta[q][a]}
        return bool(current & self.accepting)

    @classmethod
    def from_dfao(cls, M: Dfao) -> "Nfa":
        return cls(M.k, tuple(tuple((r,) for r in row) for row in M.delta), M.q0, frozenset(M.accepting()))


def determinize(N: Nfa, cap: int = DEFAULT_STATE_CAP) -> Dfao:
    """Subset construction over reachable subsets; output 1 on accepting subsets."""
    return explore(
        N.k,
        frozenset([N.q0]),
        lambda s, a: frozenset(r for q in s for r in N.delta[q][a]),
        lambda s: 1 if s & N.accepting else 0,
        0,
        cap,
    )


def count_paths_mod(N: Nfa, n: int, cap: int = DEFAULT_STATE_CAP) -> Dfao:
    """DFAO whose output is the number of accepting paths mod n.

    States are count vectors Q -> Z/n over reachable configurations.
    """
    if n < 2:
        raise ValueError("modulus must be at least 2")
    start = tuple(1 if q == N.q0 else 0 for q in range(N.n))
    acc = sorted(N.accepting)

    def step(vec, a):
        out = [0] * N.n
        for q, c in enumerate(vec):
            if c:
                for r in N.delta[q][a]:
                    out[r] = (out[r] + c) % n
        return tuple(out)

    return explore(N.k, start, step, lambda vec: sum(vec[q] for q in acc) % n, 0, cap)


def to_dot(M: Dfao, p: int | None = None, name: str = "dfao") -> str:
    """Graphviz text; parallel edges are merged and the radix symbol is drawn as ``.``."""
    p = M.p if p is None else p
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  start [shape=point];', f"  start -> q{M.q0};"]
    for q in range(M.n):
        shape = "doublecircle" if M.tau[q] != M.zero else "circle"
        lines.append(f'  q{q} [shape={shape}, label="{q}/{M.tau[q]}"];')
    for q, row in enumerate(M.delta):
        labels: dict[int, list[str]] = {}
        for a, r in enumerate(row):
            labels.setdefault(r, []).append("." if a == p else str(a))
        for r, syms in labels.items():
            lines.append(f'  q{q} -> q{r} [label="{",".join(syms)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
