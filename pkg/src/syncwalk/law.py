"""Mapping laws: probability laws on self-maps whose marginal is a given chain."""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Iterable, Mapping

from .chain import MIXING, StochasticMatrix, classify, to_fraction
from .coloring import (
    MappingTable,
    RoadColoring,
    build_support_graph,
    find_synchronizing_coloring,
    is_synchronizing,
)

__all__ = [
    "MappingLaw",
    "verify_mapping_law",
    "law_from_coloring",
    "rational_mapping_law",
    "synchronizing_mapping_law",
    "mix",
    "NotMixingError",
]


class NotMixingError(ValueError):
    def __init__(self, kind: str):
        super().__init__(f"chain is {kind}, not mixing")
        self.kind = kind


class MappingLaw:
    """Exact probability law on maps ``V -> V``.

    Zero weights are dropped, so ``support`` is exactly the set of maps with
    positive weight.  Iteration and ``items()`` use the canonical
    (lexicographic) order of the image tuples.
    """

    __slots__ = ("_items", "m")

    def __init__(self, weights: Mapping[Iterable[int], object] | Iterable[tuple[Iterable[int], object]]):
        pairs = weights.items() if isinstance(weights, Mapping) else weights
        acc: dict[MappingTable, Fraction] = {}
        for sigma, w in pairs:
            sigma = MappingTable(sigma)
            w = to_fraction(w)
            if w < 0:
                raise ValueError(f"negative weight {w} on {sigma}")
            acc[sigma] = acc.get(sigma, Fraction(0)) + w
        items = tuple(sorted((s, w) for s, w in acc.items() if w > 0))
        if not items:
            raise ValueError("a law needs positive total mass")
        sizes = {len(s) for s, _ in items}
        if len(sizes) != 1:
            raise ValueError("maps act on different state spaces")
        total = sum(w for _, w in items)
        if total != 1:
            raise ValueError(f"weights sum to {total}, not 1")
        self._items = items
        self.m = sizes.pop()

    def items(self) -> tuple[tuple[MappingTable, Fraction], ...]:
        return self._items

    @property
    def support(self) -> tuple[MappingTable, ...]:
        return tuple(s for s, _ in self._items)

    @property
    def weights(self) -> tuple[Fraction, ...]:
        return tuple(w for _, w in self._items)

    def __getitem__(self, sigma) -> Fraction:
        sigma = MappingTable(sigma)
        for s, w in self._items:
            if s == sigma:
                return w
        return Fraction(0)

    def __iter__(self):
        return iter(self.support)

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MappingLaw):
            return NotImplemented
        return self._items == other._items

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        body = ", ".join(f"{tuple(s)}: {w}" for s, w in self._items)
        return f"MappingLaw({{{body}}})"

    def marginal(self) -> StochasticMatrix:
        """The transition matrix ``q[x][y] = sum of weights of maps sending x to y``."""
        m = self.m
        rows = [[Fraction(0)] * m for _ in range(m)]
        for sigma, w in self._items:
            for x, y in enumerate(sigma):
                rows[x][y] += w
        return StochasticMatrix(rows)

    def has_synchronizing_support(self) -> bool:
        return is_synchronizing(self.support)

    @classmethod
    def point_mass(cls, sigma) -> "MappingLaw":
        return cls({MappingTable(sigma): 1})


def verify_mapping_law(mu: MappingLaw, Q: StochasticMatrix) -> bool:
    if mu.m != Q.m:
        raise ValueError(f"law acts on {mu.m} states, matrix has {Q.m}")
    return mu.marginal() == Q


def law_from_coloring(coloring: RoadColoring | Iterable[MappingTable]) -> MappingLaw:
    """Uniform law over the colors, counting repeats."""
    colors = coloring.colors if isinstance(coloring, RoadColoring) else tuple(coloring)
    if not colors:
        raise ValueError("empty coloring")
    d = len(colors)
    return MappingLaw({s: Fraction(c, d) for s, c in Counter(MappingTable(s) for s in colors).items()})


def rational_mapping_law(Q: StochasticMatrix) -> MappingLaw:
    """A mapping law for an exact-rational ``Q`` from a road coloring.

    With ``d`` the lcm of the entry denominators, ``A(y, x) = d q[x][y]``
    is a ``d``-out graph.  Coloring it by listing each vertex's out-edges in
    increasing target order gives color ``i`` mapping ``x`` to the ``y``
    whose cumulative row interval contains ``i / d``.  Colors repeat over
    runs of ``i`` between consecutive row breakpoints, so the law is built
    from those runs directly instead of materializing ``d`` colors.
    """
    m = Q.m
    cums = []
    for row in Q:
        acc = Fraction(0)
        c = []
        for v in row:
            acc += v
            c.append(acc)
        cums.append(c)
    cuts = sorted({Fraction(0), *(v for c in cums for v in c)})
    weights: dict[MappingTable, Fraction] = {}
    for lo, hi in zip(cuts, cuts[1:]):
        image = []
        for c in cums:
            # first y whose cumulative mass exceeds lo; [lo, hi) sits inside its bin
            y = next(y for y in range(m) if c[y] > lo)
            image.append(y)
        sigma = MappingTable(image)
        weights[sigma] = weights.get(sigma, Fraction(0)) + (hi - lo)
    return MappingLaw(weights)


def mix(mu1: MappingLaw, mu2: MappingLaw, t) -> MappingLaw:
    """The convex combination ``(1 - t) mu1 + t mu2``."""
    t = to_fraction(t)
    if not 0 <= t <= 1:
        raise ValueError(f"mixing weight {t} outside [0, 1]")
    if mu1.m != mu2.m:
        raise ValueError("laws act on different state spaces")
    acc: dict[MappingTable, Fraction] = {}
    for s, w in mu1.items():
        acc[s] = acc.get(s, Fraction(0)) + (1 - t) * w
    for s, w in mu2.items():
        acc[s] = acc.get(s, Fraction(0)) + t * w
    return MappingLaw(acc)


def synchronizing_mapping_law(
    Q: StochasticMatrix,
    tiebreak="smallest",
    seed: int = 0,
    budget: int = 10**6,
    return_parts: bool = False,
):
    """A mapping law for a mixing ``Q`` whose support is synchronizing.

    Builds the constant-outdegree support graph, finds a synchronizing road
    coloring of it, and mixes the induced uniform law ``mu_hat`` (weight
    ``eps``, the smallest positive entry of ``Q``) with a rational mapping law
    for the remainder ``(Q - eps Q_hat) / (1 - eps)``.

    With ``return_parts`` the result is ``(mu, parts)`` where ``parts``
    holds the intermediate objects (graph, coloring, mu_hat, Q_hat, eps,
    Q_eps, mu_eps).
    """
    kind = classify(Q)
    if kind != MIXING:
        raise NotMixingError(kind)
    A = build_support_graph(Q, tiebreak)
    coloring = find_synchronizing_coloring(A, seed=seed, budget=budget)
    mu_hat = law_from_coloring(coloring)
    Q_hat = mu_hat.marginal()
    eps = min(v for row in Q for v in row if v > 0)
    parts = {"graph": A, "coloring": coloring, "mu_hat": mu_hat, "Q_hat": Q_hat, "eps": eps,
             "Q_eps": None, "mu_eps": None}
    if eps == 1:
        mu = mu_hat
    else:
        m = Q.m
        Q_eps = StochasticMatrix(
            [[(Q[x][y] - eps * Q_hat[x][y]) / (1 - eps) for y in range(m)] for x in range(m)]
        )
        mu_eps = rational_mapping_law(Q_eps)
        mu = mix(mu_eps, mu_hat, eps)
        parts.update(Q_eps=Q_eps, mu_eps=mu_eps)
    if not verify_mapping_law(mu, Q):
        raise AssertionError("synthesized law does not reproduce Q")
    if not is_synchronizing(mu.support):
        raise AssertionError("synthesized law lost synchronizing support")
    return (mu, parts) if return_parts else mu
