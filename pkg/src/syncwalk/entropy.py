"""Entropy of a chain versus entropy of the IID maps driving it.

All entropies are in nats.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .chain import MIXING, StochasticMatrix, classify, stationary, to_fraction
from .coloring import MappingTable, build_support_graph, find_synchronizing_coloring, is_synchronizing
from .law import MappingLaw, NotMixingError, synchronizing_mapping_law

__all__ = [
    "phi",
    "chain_entropy",
    "law_entropy",
    "PUniformity",
    "is_p_uniform",
    "family_min_n",
    "entropy_family",
    "two_state_family",
    "entropy_gap_floor",
    "EntropyReport",
    "entropy_report",
    "NotPUniformError",
]


class NotPUniformError(ValueError):
    pass


def phi(t) -> float:
    """``-t log t`` with ``phi(0) = 0``."""
    t = float(t)
    return 0.0 if t == 0 else -t * math.log(t)


def chain_entropy(Q: StochasticMatrix, lam: Sequence | None = None) -> float:
    """Entropy rate ``-sum_x lam(x) sum_y q[x][y] log q[x][y]``."""
    if lam is None:
        lam = stationary(Q)
    return math.fsum(float(lam[x]) * phi(v) for x, row in enumerate(Q) for v in row)


def law_entropy(mu: MappingLaw) -> float:
    return math.fsum(phi(w) for w in mu.weights)


@dataclass(frozen=True)
class PUniformity:
    """Truthy iff every row of ``Q`` is a rearrangement of one law ``nu``.

    When true, ``nu`` is row 0 of ``Q`` and ``taus[x]`` is a permutation
    with ``Q[x][y] == nu[taus[x][y]]``.
    """

    ok: bool
    nu: tuple[Fraction, ...] | None = None
    taus: tuple[tuple[int, ...], ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_p_uniform(Q: StochasticMatrix) -> PUniformity:
    ref = Q[0]
    ref_sorted = sorted(ref)
    if any(sorted(row) != ref_sorted for row in Q):
        return PUniformity(False)
    taus = []
    for row in Q:
        # stable matching of equal values, smallest indices first
        slots: dict[Fraction, list[int]] = {}
        for i, v in enumerate(ref):
            slots.setdefault(v, []).append(i)
        tau = []
        for v in row:
            tau.append(slots[v].pop(0))
        taus.append(tuple(tau))
    return PUniformity(True, tuple(ref), tuple(taus))


def _family_parts(Q: StochasticMatrix, seed: int = 0):
    kind = classify(Q)
    if kind != MIXING:
        raise NotMixingError(kind)
    pu = is_p_uniform(Q)
    if not pu:
        raise NotPUniformError(
            "chain is not p-uniform; no sequence of synchronizing mapping laws has entropy tending to h(Y)"
        )
    m = Q.m
    nu, taus = pu.nu, pu.taus
    atoms = [i for i in range(m) if nu[i] > 0]
    d = len(atoms)
    # sigma_i x = the y with tau_x(y) = x_i
    inverse = [{t: y for y, t in enumerate(tau)} for tau in taus]
    sigmas = [MappingTable(inverse[x][xi] for x in range(m)) for xi in atoms]
    coloring = find_synchronizing_coloring(build_support_graph(Q), seed=seed)
    sigma1 = sorted(coloring.color_set)
    return nu, atoms, d, sigmas, sigma1


def family_min_n(Q: StochasticMatrix, seed: int = 0) -> int:
    """Least ``n >= 1`` for which :func:`entropy_family` has no negative weight."""
    nu, atoms, d, sigmas, sigma1 = _family_parts(Q, seed)
    return _min_n(nu, atoms, d, sigmas, sigma1)


def _weights(nu, atoms, d, sigmas, sigma1, n: int) -> dict[MappingTable, Fraction]:
    w: dict[MappingTable, Fraction] = {}
    for xi, s in zip(atoms, sigmas):
        w[s] = w.get(s, Fraction(0)) + nu[xi] - Fraction(1, n * d)
    for s in sigma1:
        w[s] = w.get(s, Fraction(0)) + Fraction(1, n * len(sigma1))
    return w


def _min_n(nu, atoms, d, sigmas, sigma1) -> int:
    # each weight is c + k/n; a negative k needs n >= -k/c
    const: dict[MappingTable, Fraction] = {}
    slope: dict[MappingTable, Fraction] = {}
    for xi, s in zip(atoms, sigmas):
        const[s] = const.get(s, Fraction(0)) + nu[xi]
        slope[s] = slope.get(s, Fraction(0)) - Fraction(1, d)
    for s in sigma1:
        slope[s] = slope.get(s, Fraction(0)) + Fraction(1, len(sigma1))
    n = 1
    for s, k in slope.items():
        if k < 0:
            n = max(n, math.ceil(-k / const[s]))
    return n


def entropy_family(Q: StochasticMatrix, n: int, seed: int = 0) -> MappingLaw:
    """The ``n``-th law of a synchronizing family with ``h(N) -> h(Y)``.

    For p-uniform ``Q`` with ``Q[x][y] = nu(tau_x(y))``, let
    ``sigma_i x = tau_x^{-1}(x_i)`` over the atoms ``x_1..x_d`` of ``nu`` and
    let ``S1`` be a synchronizing road coloring of the support graph.  The
    law moves mass ``1/(n d)`` from each ``sigma_i`` onto ``S1`` uniformly.
    Raises ``ValueError`` if ``n`` is below :func:`family_min_n`.
    """
    parts = _family_parts(Q, seed)
    nmin = _min_n(*parts)
    if n < nmin:
        raise ValueError(f"n={n} gives negative weights; the least admissible n is {nmin}")
    return MappingLaw(_weights(*parts, n))


def two_state_family(p, eps) -> tuple[MappingLaw, float, float]:
    """Mapping laws of the symmetric two-state chain ``((p, 1-p), (1-p, p))``.

    Every mapping law has ``mu(11) = mu(22) = eps``, ``mu(12) = p - eps`` and
    ``mu(21) = 1 - p - eps`` (maps written by their 1-based images).
    Returns ``(law, h(Y), h(N))``.
    """
    p, eps = to_fraction(p), to_fraction(eps)
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    if not 0 <= eps <= min(p, 1 - p):
        raise ValueError(f"eps={eps} outside [0, min(p, 1-p)]")
    law = MappingLaw({(0, 0): eps, (1, 1): eps, (0, 1): p - eps, (1, 0): 1 - p - eps})
    hY = phi(p) + phi(1 - p)
    hN = 2 * phi(eps) + phi(p - eps) + phi(1 - p - eps)
    return law, hY, hN


# -- numerical floor of the gap ---------------------------------------------


def _entropy_rows(W: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(W > 0, -W * np.log(np.where(W > 0, W, 1.0)), 0.0)
    return terms.sum(axis=1)


def _northwest_vertex(Q: StochasticMatrix, orders: Sequence[Sequence[int]]) -> dict[MappingTable, Fraction]:
    """Comonotone coupling of the rows after reordering each row's states."""
    m = Q.m
    cums = []
    for x in range(m):
        acc = Fraction(0)
        c = []
        for y in orders[x]:
            acc += Q[x][y]
            c.append((acc, y))
        cums.append(c)
    cuts = sorted({Fraction(0), *(a for c in cums for a, _ in c)})
    w: dict[MappingTable, Fraction] = {}
    for lo, hi in zip(cuts, cuts[1:]):
        sigma = MappingTable(next(y for a, y in c if a > lo) for c in cums)
        w[sigma] = w.get(sigma, Fraction(0)) + hi - lo
    return w


def entropy_gap_floor(Q: StochasticMatrix, grid=Fraction(1, 1000), seed: int = 0) -> float:
    """Smallest ``h(N) - h(Y)`` found over a grid of synchronizing mapping laws.

    For ``m == 2`` the mapping laws form a segment parametrized by
    ``a = mu(00)``, and the grid covers it with step ``grid``.  For
    ``m == 3`` the grid runs along segments from a synchronizing law to each
    comonotone coupling of the reordered rows (vertices of the law
    polytope).  Points whose support is not synchronizing are skipped.
    """
    m = Q.m
    if m > 3:
        raise ValueError(f"grid search supports m <= 3, got m={m}")
    step = to_fraction(grid)
    if step <= 0:
        raise ValueError("grid step must be positive")
    hY = chain_entropy(Q)
    if m == 1:
        return 0.0
    if m == 2:
        q00, q10, q11 = Q[0][0], Q[1][0], Q[1][1]
        lo, hi = max(Fraction(0), q00 - q11), min(q00, q10)
        count = int((hi - lo) / step)
        a = np.array([float(lo + k * step) for k in range(count + 1)] + [float(hi)])
        # images (0,0), (0,1), (1,0), (1,1)
        W = np.stack([a, float(q00) - a, float(q10) - a, float(q11 - q00) + a], axis=1)
        W = np.clip(W, 0.0, None)
        maps = [(0, 0), (0, 1), (1, 0), (1, 1)]
        ok = np.array([_support_sync(maps, row) for row in W > 0])
        if not ok.any():
            raise ValueError("no grid point has synchronizing support")
        return float(_entropy_rows(W[ok]).min() - hY)
    base = synchronizing_mapping_law(Q, seed=seed)
    vertices = {}
    for orders in itertools.product(itertools.permutations(range(m)), repeat=m):
        v = _northwest_vertex(Q, orders)
        vertices[tuple(sorted(v.items()))] = v
    count = int(1 / step)
    t = np.array([float(k * step) for k in range(count + 1)] + [1.0])
    best = math.inf
    for v in vertices.values():
        keys = sorted(set(base.support) | set(v))
        b = np.array([float(base[s]) for s in keys])
        e = np.array([float(v.get(s, 0)) for s in keys])
        W = (1 - t)[:, None] * b + t[:, None] * e
        h = _entropy_rows(W)
        # t < 1 keeps the synchronizing support of the base law
        if not is_synchronizing([s for s in keys if v.get(s, 0) > 0]):
            h = h[t < 1]
        best = min(best, float(h.min()))
    return best - hY


def _support_sync(maps, mask) -> bool:
    chosen = [m for m, on in zip(maps, mask) if on]
    return bool(chosen) and is_synchronizing(chosen)


@dataclass(frozen=True)
class EntropyReport:
    hY: float
    hN: float | None
    p_uniform: bool
    n_min: int | None = None
    witness: PUniformity | None = None

    @property
    def gap(self) -> float | None:
        return None if self.hN is None else self.hN - self.hY

    def to_json(self) -> dict:
        return {"hY": self.hY, "hN": self.hN, "gap": self.gap, "p_uniform": self.p_uniform, "n_min": self.n_min}


def entropy_report(Q: StochasticMatrix, law: MappingLaw | None = None, seed: int = 0) -> EntropyReport:
    pu = is_p_uniform(Q)
    n_min = family_min_n(Q, seed) if pu and classify(Q) == MIXING else None
    return EntropyReport(
        hY=chain_entropy(Q),
        hN=None if law is None else law_entropy(law),
        p_uniform=bool(pu),
        n_min=n_min,
        witness=pu if pu else None,
    )
