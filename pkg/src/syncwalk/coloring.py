"""Self-maps of a finite set, constant-outdegree graphs and road colorings.

A :class:`MappingTable` is a total function ``V -> V`` stored as its image
tuple.  Composition follows the usual right-to-left convention::

    (s1 @ s2)(x) == s1(s2(x))

and a word ``(s_p, ..., s_1)`` denotes the product ``s_p ... s_1``, so
``s_1`` acts first.

Adjacency matrices use the column-is-source convention: ``A[y][x]`` counts
the edges from ``x`` to ``y``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .chain import StochasticMatrix, wielandt_bound

__all__ = [
    "MappingTable",
    "AdjacencyMatrix",
    "RoadColoring",
    "AssumptionCheck",
    "HypothesisError",
    "SearchBudgetExceeded",
    "compose",
    "apply",
    "build_support_graph",
    "check_assumption_A",
    "is_synchronizing",
    "synchronizing_word",
    "find_synchronizing_coloring",
    "enumerate_colorings",
]


class HypothesisError(ValueError):
    """Raised when a graph does not satisfy assumption (A)."""


class SearchBudgetExceeded(RuntimeError):
    """Raised when a bounded search stops before reaching an answer."""


class MappingTable(tuple):
    """A map ``V -> V`` given by its image tuple ``(s(0), ..., s(m-1))``.

    Being a tuple, it is hashable and ordered lexicographically, which is
    the canonical order used throughout the package.
    """

    __slots__ = ()

    def __new__(cls, image: Iterable[int]):
        image = tuple(int(v) for v in image)
        m = len(image)
        if m == 0:
            raise ValueError("empty mapping")
        if any(v < 0 or v >= m for v in image):
            raise ValueError(f"image {image} leaves the state space 0..{m - 1}")
        return super().__new__(cls, image)

    @classmethod
    def identity(cls, m: int) -> "MappingTable":
        return cls(range(m))

    @classmethod
    def constant(cls, m: int, c: int) -> "MappingTable":
        return cls([c] * m)

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "MappingTable":
        """Build from 1-based labels, as written in files and reports."""
        return cls(v - 1 for v in labels)

    def labels(self) -> list[int]:
        return [v + 1 for v in self]

    @property
    def m(self) -> int:
        return len(self)

    def __call__(self, x: int) -> int:
        return tuple.__getitem__(self, x)

    def __matmul__(self, other: "MappingTable") -> "MappingTable":
        if not isinstance(other, MappingTable):
            return NotImplemented
        if len(other) != len(self):
            raise ValueError("dimension mismatch")
        return MappingTable(self[v] for v in other)

    # tuple concatenation/repetition make no sense for maps
    def __add__(self, other):
        raise TypeError("use @ to compose mappings")

    def __mul__(self, other):
        raise TypeError("use @ to compose mappings")

    def image_set(self) -> frozenset[int]:
        return frozenset(self)

    def is_constant(self) -> bool:
        return len(set(self)) == 1

    def is_permutation(self) -> bool:
        return len(set(self)) == len(self)

    def matrix(self) -> np.ndarray:
        """0/1 matrix with ``M[y][x] = 1`` iff ``y = s(x)``."""
        m = len(self)
        M = np.zeros((m, m), dtype=np.int64)
        M[list(self), np.arange(m)] = 1
        return M

    def __repr__(self) -> str:
        return f"MappingTable({tuple(self)})"


def apply(sigma: MappingTable, x: int) -> int:
    return sigma[x]


def compose(word: Sequence[MappingTable], m: int | None = None) -> MappingTable:
    """Product ``s_p ... s_1`` of the word ``(s_p, ..., s_1)``.

    The empty word gives the identity, which needs ``m``.
    """
    if not word:
        if m is None:
            raise ValueError("m is required to compose the empty word")
        return MappingTable.identity(m)
    image = list(range(len(word[0])))
    for sigma in reversed(word):
        image = [sigma[v] for v in image]
    return MappingTable(image)


class AdjacencyMatrix:
    """Non-negative integer matrix ``A[y][x]`` with constant column sums ``d``."""

    __slots__ = ("_A", "d")

    def __init__(self, A: Iterable[Iterable[int]]):
        A = tuple(tuple(int(v) for v in row) for row in A)
        m = len(A)
        if m == 0 or any(len(row) != m for row in A):
            raise ValueError("adjacency matrix must be square and non-empty")
        if any(v < 0 for row in A for v in row):
            raise ValueError("adjacency matrix has a negative entry")
        outdeg = {sum(A[y][x] for y in range(m)) for x in range(m)}
        if len(outdeg) != 1:
            raise ValueError(f"outdegree is not constant: {sorted(outdeg)}")
        d = outdeg.pop()
        if d < 1:
            raise ValueError("outdegree must be positive")
        self._A = A
        self.d = d

    @property
    def m(self) -> int:
        return len(self._A)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._A

    def __getitem__(self, y: int) -> tuple[int, ...]:
        return self._A[y]

    def __eq__(self, other) -> bool:
        if not isinstance(other, AdjacencyMatrix):
            return NotImplemented
        return self._A == other._A

    def __hash__(self) -> int:
        return hash(self._A)

    def __repr__(self) -> str:
        return f"AdjacencyMatrix({self._A}, d={self.d})"

    def to_numpy(self) -> np.ndarray:
        return np.array(self._A, dtype=np.int64)

    def out_edges(self, x: int) -> list[int]:
        """Targets of the edges leaving ``x``, with multiplicity, sorted."""
        return [y for y in range(self.m) for _ in range(self._A[y][x])]

    @classmethod
    def from_maps(cls, colors: Sequence[MappingTable]) -> "AdjacencyMatrix":
        m = len(colors[0])
        A = [[0] * m for _ in range(m)]
        for sigma in colors:
            for x, y in enumerate(sigma):
                A[y][x] += 1
        return cls(A)


@dataclass(frozen=True)
class RoadColoring:
    """An ordered family of maps summing to the adjacency matrix ``graph``."""

    colors: tuple[MappingTable, ...]
    graph: AdjacencyMatrix

    def __post_init__(self):
        if not self.colors:
            raise ValueError("a road coloring needs at least one color")
        if len(self.colors) != self.graph.d:
            raise ValueError(f"{len(self.colors)} colors for a {self.graph.d}-out graph")
        if AdjacencyMatrix.from_maps(self.colors) != self.graph:
            raise ValueError("colors do not sum to the adjacency matrix")

    @classmethod
    def from_colors(cls, colors: Sequence[MappingTable]) -> "RoadColoring":
        colors = tuple(MappingTable(c) for c in colors)
        return cls(colors, AdjacencyMatrix.from_maps(colors))

    @property
    def d(self) -> int:
        return len(self.colors)

    @property
    def color_set(self) -> frozenset[MappingTable]:
        return frozenset(self.colors)


def build_support_graph(
    Q: StochasticMatrix, tiebreak: str | Callable[[int, list[int]], int] = "smallest"
) -> AdjacencyMatrix:
    """Constant-outdegree graph with the same support as ``Q``.

    With ``d = max_x d(x)`` the largest row support size, the designated
    edge ``x -> s(x)`` receives ``d - d(x) + 1`` parallel edges and every
    other support edge receives one.  ``tiebreak`` picks ``s(x)`` among the
    support of row ``x``: ``"smallest"``, ``"largest"`` or a callable
    ``(x, candidates) -> y``.
    """
    m = Q.m
    targets = [[y for y in range(m) if Q[x][y] > 0] for x in range(m)]
    if any(not t for t in targets):
        raise ValueError("Q has an all-zero row")
    d = max(len(t) for t in targets)
    A = [[0] * m for _ in range(m)]
    for x, cand in enumerate(targets):
        if tiebreak == "smallest":
            s = cand[0]
        elif tiebreak == "largest":
            s = cand[-1]
        elif callable(tiebreak):
            s = tiebreak(x, list(cand))
            if s not in cand:
                raise ValueError(f"tiebreak chose {s}, not in the support of row {x}")
        else:
            raise ValueError(f"unknown tiebreak rule {tiebreak!r}")
        for y in cand:
            A[y][x] = d - len(cand) + 1 if y == s else 1
    return AdjacencyMatrix(A)


@dataclass(frozen=True)
class AssumptionCheck:
    """Outcome of :func:`check_assumption_A`; truthy iff the graph qualifies.

    ``r`` is the least power with all entries positive, ``failing_pair`` an
    ``(x, y)`` with no walk of length ``wielandt_bound(m)`` from ``x`` to ``y``.
    """

    ok: bool
    r: int | None = None
    failing_pair: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_assumption_A(A: AdjacencyMatrix) -> AssumptionCheck:
    B = A.to_numpy() > 0
    m = B.shape[0]
    P = B.copy()
    Bi = B.astype(np.int64)
    bound = wielandt_bound(m)
    for r in range(1, bound + 1):
        if P.all():
            return AssumptionCheck(True, r=r)
        if r < bound:
            P = (Bi @ P.astype(np.int64)) > 0
    y, x = map(int, np.argwhere(~P)[0])
    return AssumptionCheck(False, failing_pair=(x, y))


# -- synchronization -------------------------------------------------------


class _PairAutomaton:
    """Shortest merging words for every pair of states.

    Reverse breadth-first search from the diagonal over the automaton on
    unordered pairs ``{u, v}`` with transitions ``{u, v} -> {s u, s v}``.
    """

    def __init__(self, letters: Sequence[MappingTable]):
        self.letters = letters
        m = len(letters[0])
        self.m = m
        index = {}
        pairs = []
        for u in range(m):
            for v in range(u + 1, m):
                index[(u, v)] = len(pairs)
                pairs.append((u, v))
        self.index = index
        self.pairs = pairs
        n = len(pairs)
        # predecessors of singleton s and of pair p, in (pair, letter) order
        pred_single = [[] for _ in range(m)]
        pred_pair = [[] for _ in range(n)]
        for p, (u, v) in enumerate(pairs):
            for k, s in enumerate(letters):
                a, b = s[u], s[v]
                if a == b:
                    pred_single[a].append((p, k))
                else:
                    if a > b:
                        a, b = b, a
                    pred_pair[index[(a, b)]].append((p, k))
        dist = [-1] * n
        order = [-1] * n
        via: list[tuple[int, int] | None] = [None] * n  # (letter, successor pair or -1)
        queue = deque()
        found = 0
        for s in range(m):
            for p, k in pred_single[s]:
                if dist[p] < 0:
                    dist[p] = 1
                    via[p] = (k, -1)
                    order[p] = found
                    found += 1
                    queue.append(p)
        while queue:
            q = queue.popleft()
            for p, k in pred_pair[q]:
                if dist[p] < 0:
                    dist[p] = dist[q] + 1
                    via[p] = (k, q)
                    order[p] = found
                    found += 1
                    queue.append(p)
        self.dist = dist
        self.order = order
        self.via = via

    def all_mergeable(self) -> bool:
        return all(d > 0 for d in self.dist)

    def merge_letters(self, u: int, v: int) -> list[int]:
        """Letter indices, in application order, merging ``u`` and ``v``."""
        p = self.index[(min(u, v), max(u, v))]
        out = []
        while p >= 0:
            k, p = self.via[p]
            out.append(k)
        return out


def _canonical_letters(colors: Iterable[MappingTable]) -> list[MappingTable]:
    letters = sorted({MappingTable(c) for c in colors})
    if not letters:
        raise ValueError("empty color set")
    m = len(letters[0])
    if any(len(s) != m for s in letters):
        raise ValueError("mappings act on different state spaces")
    return letters


def _greedy_word(letters: list[MappingTable], automaton: _PairAutomaton) -> tuple[MappingTable, ...] | None:
    m = automaton.m
    current = set(range(m))
    applied: list[int] = []
    budget = m**3
    while len(current) > 1:
        best = None
        srt = sorted(current)
        for i, u in enumerate(srt):
            for v in srt[i + 1:]:
                p = automaton.index[(u, v)]
                if automaton.dist[p] < 0:
                    return None
                key = (automaton.dist[p], automaton.order[p])
                if best is None or key < best[0]:
                    best = (key, u, v)
        _, u, v = best
        ks = automaton.merge_letters(u, v)
        for k in ks:
            s = letters[k]
            current = {s[x] for x in current}
        applied.extend(ks)
        if len(applied) > budget:
            raise SearchBudgetExceeded(f"synchronizing word longer than m^3 = {budget}")
    # word in (s_p, ..., s_1) order: last applied first
    return tuple(letters[k] for k in reversed(applied))


def synchronizing_word(colors: Iterable[MappingTable]) -> tuple[MappingTable, ...]:
    """A word over ``colors`` whose product maps every state to one state.

    Greedy pair merging: while the current image has two or more states,
    apply a shortest word merging some pair of them (ties go to the pair
    discovered first by the reverse search).  The result is verified by
    composing it.  Raises ``ValueError`` if the set is not synchronizing.
    """
    letters = _canonical_letters(colors)
    m = len(letters[0])
    if m == 1:
        return (letters[0],)
    automaton = _PairAutomaton(letters)
    if not automaton.all_mergeable():
        raise ValueError("color set is not synchronizing")
    word = _greedy_word(letters, automaton)
    if word is None or not compose(word).is_constant():
        raise AssertionError("greedy merging failed to certify synchronization")
    return word


def is_synchronizing(colors: Iterable[MappingTable]) -> bool:
    """True iff some word over ``colors`` has a one-point image."""
    letters = _canonical_letters(colors)
    if len(letters[0]) == 1:
        return True
    automaton = _PairAutomaton(letters)
    if not automaton.all_mergeable():
        return False
    word = _greedy_word(letters, automaton)
    return word is not None and compose(word).is_constant()


# -- coloring search -------------------------------------------------------


def _distinct_arrangements(targets: list[int]):
    """Distinct orderings of a multiset, lazily, in lexicographic order."""
    a = sorted(targets)
    n = len(a)
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1 :] = reversed(a[i + 1 :])


def _coloring_from_arrangements(arr: Sequence[Sequence[int]], A: AdjacencyMatrix) -> RoadColoring:
    d = A.d
    colors = tuple(MappingTable(arr[x][i] for x in range(A.m)) for i in range(d))
    return RoadColoring(colors, A)


def _arrangement_product(A: AdjacencyMatrix, fix_first: bool):
    # lazy odometer; itertools.product would materialize every factor first
    m = A.m
    arr: list = [None] * m

    def rec(x):
        if x == m:
            yield arr
            return
        if x == 0 and fix_first:
            source = [tuple(sorted(A.out_edges(0)))]
        else:
            source = _distinct_arrangements(A.out_edges(x))
        for choice in source:
            arr[x] = choice
            yield from rec(x + 1)

    return rec(0)


def enumerate_colorings(A: AdjacencyMatrix, fix_first: bool = True):
    """Yield road colorings of ``A`` by per-vertex edge arrangements.

    With ``fix_first`` the arrangement at vertex 0 is held at its sorted
    order; every coloring is then reached up to a global renaming of
    colors, which leaves the color set unchanged.
    """
    for arr in _arrangement_product(A, fix_first):
        yield _coloring_from_arrangements(arr, A)


def _shortest_cycles(A: AdjacencyMatrix) -> list[list[int]]:
    """One shortest cycle through each vertex, shortest first, deduplicated."""
    m = A.m
    succ = [sorted(set(A.out_edges(x))) for x in range(m)]
    cycles = []
    seen = set()
    for start in range(m):
        parent = {start: None}
        queue = deque([start])
        cycle = None
        while queue and cycle is None:
            x = queue.popleft()
            for y in succ[x]:
                if y == start:
                    path = [x]
                    while parent[path[-1]] is not None:
                        path.append(parent[path[-1]])
                    cycle = path[::-1]
                    break
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        if cycle is not None:
            key = frozenset(cycle)
            if key not in seen:
                seen.add(key)
                cycles.append(cycle)
    cycles.sort(key=len)
    return cycles


def _tree_color_arrangement(A: AdjacencyMatrix, cycle: list[int]) -> list[tuple[int, ...]] | None:
    """Arrangements whose first color is ``cycle`` plus an in-tree onto it."""
    m = A.m
    first = [-1] * m
    for i, x in enumerate(cycle):
        first[x] = cycle[(i + 1) % len(cycle)]
    reached = set(cycle)
    preds = [[] for _ in range(m)]
    for x in range(m):
        for y in set(A.out_edges(x)):
            preds[y].append(x)
    queue = deque(cycle)
    while queue:
        y = queue.popleft()
        for x in preds[y]:
            if x not in reached:
                reached.add(x)
                first[x] = y
                queue.append(x)
    if len(reached) < m:
        return None
    arr = []
    for x in range(m):
        rest = A.out_edges(x)
        rest.remove(first[x])
        arr.append((first[x], *rest))
    return arr


def find_synchronizing_coloring(
    A: AdjacencyMatrix,
    seed: int = 0,
    restarts: int = 64,
    budget: int = 10**6,
) -> RoadColoring:
    """A road coloring of ``A`` whose color set is synchronizing.

    Tries, in order: colorings whose first color is a single short cycle
    with in-trees attached, ``restarts`` random colorings drawn from
    ``seed``, and finally exhaustive enumeration.  A synchronizing coloring
    exists whenever ``A`` satisfies assumption (A), so the enumeration
    always succeeds unless ``budget`` candidate colorings are used up first.
    """
    check = check_assumption_A(A)
    if not check:
        raise HypothesisError(
            f"road coloring theorem hypotheses not met: no walk of length "
            f"{wielandt_bound(A.m)} for pair {check.failing_pair}"
        )
    tried = 0

    def attempt(arr) -> RoadColoring | None:
        nonlocal tried
        tried += 1
        if tried > budget:
            raise SearchBudgetExceeded(f"no synchronizing coloring within {budget} candidates")
        coloring = _coloring_from_arrangements(arr, A)
        return coloring if is_synchronizing(coloring.colors) else None

    for cycle in _shortest_cycles(A):
        arr = _tree_color_arrangement(A, cycle)
        if arr is not None and (found := attempt(arr)) is not None:
            return found

    rng = random.Random(seed)
    for _ in range(restarts):
        arr = []
        for x in range(A.m):
            targets = A.out_edges(x)
            rng.shuffle(targets)
            arr.append(tuple(targets))
        if (found := attempt(arr)) is not None:
            return found

    for arr in _arrangement_product(A, fix_first=True):
        if (found := attempt(arr)) is not None:
            return found
    raise AssertionError("exhaustive search found no synchronizing coloring under assumption (A)")
