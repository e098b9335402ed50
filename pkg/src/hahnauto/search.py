"""Canonical enumeration of DFAOs over the digit alphabet, pruned by a sample.

Transitions are chosen in (state, symbol) order and every target is either
an existing state or the next fresh one, so each reachable automaton is
produced exactly once, already numbered breadth-first.  A sample maps short
words to required outputs; as soon as a word's path is fixed, its end
state's output is forced, and conflicts cut the branch.  Outputs never
forced by the sample are enumerated last, in field-index order.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterator

from .automata import Dfao
from .encoding import V_ACCEPT, V_DEAD, V_START, check_well_formed, check_well_ordered, validity_reason, validity_step
from .fields import FqField


class SearchCapError(RuntimeError):
    """The enumeration visited more search nodes than allowed."""


class SampleTrie:
    """All words of length <= depth that constrain some output, as a trie."""

    def __init__(self, k: int, depth: int, required: Callable[[tuple[int, ...]], object]):
        self.k = k
        children: list[list[int]] = []
        req: list = []
        words: list[tuple[int, ...]] = []
        frontier = [()]
        index = {(): 0}
        children.append([-1] * k)
        req.append(required(()))
        words.append(())
        for _ in range(depth):
            nxt = []
            for w in frontier:
                u = index[w]
                for a in range(k):
                    v = len(words)
                    wa = w + (a,)
                    index[wa] = v
                    words.append(wa)
                    children.append([-1] * k)
                    req.append(required(wa))
                    children[u][a] = v
                    nxt.append(wa)
            frontier = nxt
        keep = [r is not None for r in req]
        for v in range(len(words) - 1, -1, -1):
            if any(c >= 0 and keep[c] for c in children[v]):
                keep[v] = True
        self.children = [[c if c >= 0 and keep[c] else -1 for c in row] for row in children]
        self.required = req
        self.size = sum(keep)
        # hash-cons the constrained subtree below each node: nodes with the
        # same signature impose identical requirements on their state
        table: dict[tuple, int] = {}
        self.sig_required: list = []
        self.sig_children: list[tuple[int, ...]] = []
        sig = [-1] * len(words)
        for v in range(len(words) - 1, -1, -1):
            key = (req[v], tuple(sig[c] if c >= 0 else -1 for c in self.children[v]))
            if key not in table:
                table[key] = len(table)
                self.sig_required.append(key[0])
                self.sig_children.append(key[1])
            sig[v] = table[key]
        self.sig = sig
        self._compat: dict[tuple[int, int], bool] = {}

    def compatible(self, x: int, y: int) -> bool:
        """Whether signatures x and y agree on every suffix where both are constrained."""
        if x == y:
            return True
        key = (x, y) if x < y else (y, x)
        hit = self._compat.get(key)
        if hit is not None:
            return hit
        rx, ry = self.sig_required[x], self.sig_required[y]
        ok = rx is None or ry is None or rx == ry
        if ok:
            for a, b in zip(self.sig_children[x], self.sig_children[y]):
                if a >= 0 and b >= 0 and not self.compatible(a, b):
                    ok = False
                    break
        self._compat[key] = ok
        return ok


def digit_sample(p: int, depth: int, coefficient: Callable[[tuple[int, ...]], object] | None, zero) -> SampleTrie:
    """Invalid words must output zero; valid ones output ``coefficient(word)`` (None = free)."""

    def required(w):
        if validity_reason(w, p) is not None:
            return zero
        return None if coefficient is None else coefficient(w)

    return SampleTrie(p + 1, depth, required)


def _moore_classes(states: list[int], delta, tau) -> int:
    """Number of equivalence classes among ``states`` (closed under delta)."""
    block = {q: tau[q] for q in states}
    count = len(set(block.values()))
    while True:
        sig = {q: (block[q],) + tuple(block[r] for r in delta[q]) for q in states}
        ids: dict = {}
        block = {q: ids.setdefault(sig[q], len(ids)) for q in states}
        if len(ids) == count:
            return count
        count = len(ids)


def _determined_core(n: int, delta, tau) -> list[int]:
    """States with known rows and outputs whose successors are all such states."""
    core = {q for q in range(n) if tau[q] is not None and all(r >= 0 for r in delta[q])}
    changed = True
    while changed:
        changed = False
        for q in list(core):
            if any(r not in core for r in delta[q]):
                core.discard(q)
                changed = True
    return sorted(core)


class _Search:
    def __init__(self, n: int, trie: SampleTrie, max_nodes: int, zero):
        self.n = n
        self.k = trie.k
        self.trie = trie
        self.zero = zero
        self.delta = [[-1] * self.k for _ in range(n)]
        self.tau: list = [None] * n
        self.node_state = [-1] * len(trie.children)
        self.at_state: list[list[int]] = [[] for _ in range(n)]
        self.sigs_at: list[dict[int, int]] = [{} for _ in range(n)]
        # validity-DFA states reachable jointly with each state: a state hit by
        # any invalid word, of whatever length, must output zero
        p = self.k - 1
        self.vstep = [[validity_step(v, a, p) for a in range(self.k)] for v in range(6)]
        self.valid = [[] for _ in range(n)]
        # states hit by a dead-validity word reach only zero outputs; a minimal
        # automaton has at most one of them
        self.dead_states = 0
        self.trail: list[tuple] = []
        self.max_nodes = max_nodes
        self.visited = 0

    def _reach(self, s: int, v: int) -> bool:
        queue = [(s, v)]
        while queue:
            s, v = queue.pop()
            if v in self.valid[s]:
                continue
            self.valid[s].append(v)
            self.trail.append(("v", s))
            if v == V_DEAD:
                self.dead_states += 1
                if self.dead_states > 1:
                    return False
            if v not in V_ACCEPT:
                if self.tau[s] is None:
                    self.tau[s] = self.zero
                    self.trail.append(("t", s))
                elif self.tau[s] != self.zero:
                    return False
            row = self.delta[s]
            for a, r in enumerate(row):
                if r >= 0:
                    queue.append((r, self.vstep[v][a]))
        return True

    def _place(self, v: int, s: int) -> bool:
        trie = self.trie
        queue = [(v, s)]
        while queue:
            v, s = queue.pop()
            x = trie.sig[v]
            present = self.sigs_at[s]
            if x not in present and not all(trie.compatible(x, y) for y in present):
                return False
            present[x] = present.get(x, 0) + 1
            self.node_state[v] = s
            self.at_state[s].append(v)
            self.trail.append(("n", v, s))
            r = trie.required[v]
            if r is not None:
                if self.tau[s] is None:
                    self.tau[s] = r
                    self.trail.append(("t", s))
                elif self.tau[s] != r:
                    return False
            row = self.delta[s]
            for b, w in enumerate(trie.children[v]):
                if w >= 0 and row[b] >= 0:
                    queue.append((w, row[b]))
        return True

    def assign(self, q: int, a: int, r: int) -> bool:
        self.delta[q][a] = r
        self.trail.append(("d", q, a))
        children = self.trie.children
        for u in list(self.at_state[q]):
            v = children[u][a]
            if v >= 0 and not self._place(v, r):
                return False
        for v in list(self.valid[q]):
            if not self._reach(r, self.vstep[v][a]):
                return False
        return True

    def undo(self, mark: int) -> None:
        trail = self.trail
        while len(trail) > mark:
            entry = trail.pop()
            if entry[0] == "d":
                self.delta[entry[1]][entry[2]] = -1
            elif entry[0] == "v":
                if self.valid[entry[1]].pop() == V_DEAD:
                    self.dead_states -= 1
            elif entry[0] == "n":
                v, s = entry[1], entry[2]
                self.node_state[v] = -1
                self.at_state[s].pop()
                present = self.sigs_at[s]
                x = self.trie.sig[v]
                if present[x] == 1:
                    del present[x]
                else:
                    present[x] -= 1
            else:
                self.tau[entry[1]] = None

    def run(self) -> Iterator[tuple[tuple[tuple[int, ...], ...], list]]:
        if not self._place(0, 0) or not self._reach(0, V_START):
            return
        yield from self._dfs(0, 1)

    def _dfs(self, pos: int, created: int):
        self.visited += 1
        if self.visited > self.max_nodes:
            raise SearchCapError(f"candidate search exceeded {self.max_nodes} nodes")
        n, k = self.n, self.k
        if pos == n * k:
            if created == n:
                yield tuple(tuple(row) for row in self.delta), list(self.tau)
            return
        q, a = divmod(pos, k)
        if q >= created:
            return
        if a == 0 and pos:
            # a fully known closed part with two equivalent states stays non-minimal
            core = _determined_core(n, self.delta, self.tau)
            if len(core) > 1 and _moore_classes(core, self.delta, self.tau) < len(core):
                return
        # enough transitions left to reach every state?
        if n - created > n * k - pos:
            return
        for r in range(min(created + 1, n)):
            mark = len(self.trail)
            if self.assign(q, a, r):
                yield from self._dfs(pos + 1, max(created, r + 1))
            self.undo(mark)


def candidate_automata(
    p: int,
    field: FqField,
    n: int,
    trie: SampleTrie,
    max_nodes: int = 2 * 10**6,
    stats: dict | None = None,
) -> Iterator[Dfao]:
    """Minimal, well-formed, well-ordered n-state DFAOs consistent with the sample.

    Yielded in increasing (transition table, outputs) order.
    """
    search = _Search(n, trie, max_nodes, field.zero)
    values = list(field.elements())
    zero = field.zero
    try:
        for delta, tau in search.run():
            free = [i for i, v in enumerate(tau) if v is None]
            states = list(range(n))
            for choice in itertools.product(values, repeat=len(free)):
                full = list(tau)
                for i, v in zip(free, choice):
                    full[i] = v
                if stats is not None:
                    stats["candidates"] = stats.get("candidates", 0) + 1
                # every state is reachable by construction, so minimal = all distinguishable
                if _moore_classes(states, delta, full) != n:
                    continue
                M = Dfao(p + 1, delta, 0, tuple(full), zero)
                if not check_well_formed(M)[0] or not check_well_ordered(M)[0]:
                    continue
                yield M
    finally:
        if stats is not None:
            stats["search_nodes"] = stats.get("search_nodes", 0) + search.visited
