"""Random walks driven by IID random maps, and coupling from the past.

Draws of a map from a :class:`~syncwalk.law.MappingLaw` use inverse-CDF
sampling on integer weights over a common denominator, so the sampled
frequencies match the rational weights exactly (up to the generator).
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from math import lcm

import numpy as np

from .chain import ratio_str, stationary
from .coloring import MappingTable, compose, is_synchronizing
from .law import MappingLaw

__all__ = [
    "RngStream",
    "WalkTrace",
    "CftpResult",
    "CoalescenceTimeout",
    "NotSynchronizingError",
    "step",
    "simulate_forward",
    "cftp_sample",
    "cftp_batch",
    "coalescence_stats",
    "sample_report",
    "tv_distance",
]

DEFAULT_DEPTH_CAP = 10**6
_INT64_SAFE = 2**62


class CoalescenceTimeout(RuntimeError):
    """Backward composition did not collapse within the depth cap."""


class NotSynchronizingError(ValueError):
    pass


class RngStream:
    """Seeded generator for one independent stream of map draws.

    Streams with the same ``seed`` and distinct ``stream`` ids are
    statistically independent (numpy ``SeedSequence`` spawn keys).
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed)
        self.stream = int(stream)
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        self.generator = np.random.Generator(np.random.PCG64(ss))
        self._tables: dict[int, tuple] = {}

    def _table(self, law: MappingLaw):
        key = id(law)
        hit = self._tables.get(key)
        if hit is not None and hit[0] is law:
            return hit[1]
        den = lcm(*(w.denominator for w in law.weights))
        cum = []
        acc = 0
        for w in law.weights:
            acc += w.numerator * (den // w.denominator)
            cum.append(acc)
        table = (den, cum, np.array(cum[:-1], dtype=np.int64) if den < _INT64_SAFE else None)
        self._tables[key] = (law, table)
        return table

    def _randbelow(self, n: int) -> int:
        if n < _INT64_SAFE:
            return int(self.generator.integers(n))
        k = n.bit_length()
        nbytes = (k + 7) // 8
        while True:
            r = int.from_bytes(self.generator.bytes(nbytes), "little") >> (8 * nbytes - k)
            if r < n:
                return r

    def draw_index(self, law: MappingLaw) -> int:
        den, cum, _ = self._table(law)
        return bisect_right(cum, self._randbelow(den))

    def draw_indices(self, law: MappingLaw, size) -> np.ndarray:
        den, cum, cum_arr = self._table(law)
        if cum_arr is not None:
            u = self.generator.integers(den, size=size)
            return np.searchsorted(cum_arr, u, side="right")
        flat = [bisect_right(cum, self._randbelow(den)) for _ in range(int(np.prod(size)))]
        return np.array(flat, dtype=np.int64).reshape(size)

    def draw(self, law: MappingLaw) -> MappingTable:
        return law.support[self.draw_index(law)]


def step(sigma: MappingTable, x: int) -> int:
    return sigma[x]


@dataclass(frozen=True)
class WalkTrace:
    start: int
    mappings: tuple[MappingTable, ...]
    states: tuple[int, ...]

    def check(self) -> bool:
        """The recursion ``X_k = N_k X_{k-1}`` holds at every step."""
        return self.states[0] == self.start and all(
            self.states[k] == self.mappings[k - 1][self.states[k - 1]] for k in range(1, len(self.states))
        )


def simulate_forward(law: MappingLaw, x0: int, n: int, rng: RngStream) -> WalkTrace:
    if n < 0:
        raise ValueError("n must be non-negative")
    if not 0 <= x0 < law.m:
        raise ValueError(f"start state {x0} outside 0..{law.m - 1}")
    idx = rng.draw_indices(law, n) if n else np.empty(0, dtype=np.int64)
    support = law.support
    maps = tuple(support[i] for i in idx)
    states = [x0]
    x = x0
    for sigma in maps:
        x = sigma[x]
        states.append(x)
    return WalkTrace(x0, maps, tuple(states))


@dataclass(frozen=True)
class CftpResult:
    """One exact stationary draw.

    ``word`` is ``(N_0, N_-1, ..., N_-(depth-1))``: the shortest backward
    composition that is constant, with ``value`` its constant.  ``horizon``
    is the doubling depth at which coalescence was detected.
    """

    value: int
    depth: int
    word: tuple[MappingTable, ...] = field(repr=False)
    horizon: int = 0


def _check_sync(law: MappingLaw) -> None:
    if not is_synchronizing(law.support):
        raise NotSynchronizingError("support of the law is not synchronizing; coupling from the past may never stop")


def cftp_sample(
    law: MappingLaw,
    rng: RngStream,
    x0: int = 0,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    start_horizon: int = 1,
    check: bool = True,
) -> CftpResult:
    """Draw one sample from the stationary law by coupling from the past.

    Maps ``N_0, N_-1, ...`` are drawn once, in that order, and reused as the
    horizon doubles.  The composition over the horizon is constant on
    success, so ``x0`` does not affect the result.
    """
    if check:
        _check_sync(law)
    if not 0 <= x0 < law.m:
        raise ValueError(f"start state {x0} outside 0..{law.m - 1}")
    support = law.support
    draws: list[int] = []
    horizon = max(1, int(start_horizon))
    while True:
        if horizon > depth_cap:
            raise CoalescenceTimeout(f"no coalescence within depth cap {depth_cap}")
        while len(draws) < horizon:
            draws.append(rng.draw_index(law))
        image = list(range(law.m))
        for j in range(horizon - 1, -1, -1):
            sigma = support[draws[j]]
            image = [sigma[v] for v in image]
        if len(set(image)) == 1:
            break
        horizon *= 2
    # exact stopping depth: G_j = N_0 ... N_-j becomes constant first at j = depth-1
    g = support[draws[0]]
    depth = 1
    while not g.is_constant():
        g = g @ support[draws[depth]]
        depth += 1
    word = tuple(support[i] for i in draws[:depth])
    value = compose(word)[x0]
    return CftpResult(value=value, depth=depth, word=word, horizon=horizon)


def cftp_batch(
    law: MappingLaw,
    n: int,
    rng: RngStream,
    depth_cap: int = DEFAULT_DEPTH_CAP,
    check: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """``n`` independent CFTP draws, vectorized over runs.

    Returns ``(values, depths)``.  Same doubling schedule and draw reuse as
    :func:`cftp_sample`, but the random stream is consumed in a different
    order, so individual draws differ from repeated single calls.
    """
    if check:
        _check_sync(law)
    m = law.m
    tables = np.array(law.support, dtype=np.int64)  # (K, m)
    values = np.full(n, -1, dtype=np.int64)
    depths = np.zeros(n, dtype=np.int64)
    active = np.arange(n)
    draws = np.empty((n, 0), dtype=np.int64)
    horizon = 1
    while active.size:
        if horizon > depth_cap:
            raise CoalescenceTimeout(f"{active.size} runs did not coalesce within depth cap {depth_cap}")
        # rows of ``draws`` track ``active``; finished runs are dropped
        extra = horizon - draws.shape[1]
        if extra > 0:
            draws = np.concatenate([draws, rng.draw_indices(law, (active.size, extra))], axis=1)
        state = np.broadcast_to(np.arange(m), (active.size, m)).copy()
        for j in range(horizon - 1, -1, -1):
            state = np.take_along_axis(tables[draws[:, j]], state, axis=1)
        done = (state == state[:, :1]).all(axis=1)
        if done.any():
            fin = active[done]
            values[fin] = state[done, 0]
            fdraws = draws[done]
            # exact depth by right-extension G_j = G_{j-1} o N_-j
            g = tables[fdraws[:, 0]]
            dep = np.zeros(fin.size, dtype=np.int64)
            const = (g == g[:, :1]).all(axis=1)
            dep[const] = 1
            j = 1
            while not const.all():
                g = np.take_along_axis(g, tables[fdraws[:, j]], axis=1)
                now = (g == g[:, :1]).all(axis=1) & ~const
                dep[now] = j + 1
                const |= now
                j += 1
            depths[fin] = dep
        active = active[~done]
        draws = draws[~done]
        horizon *= 2
    return values, depths


@dataclass(frozen=True)
class CoalescenceSummary:
    n: int
    mean: float
    median: float
    p90: float
    p99: float
    max: int
    depths: np.ndarray = field(repr=False)


def coalescence_stats(law: MappingLaw, n_samples: int, rng: RngStream, depth_cap: int = DEFAULT_DEPTH_CAP) -> CoalescenceSummary:
    _, depths = cftp_batch(law, n_samples, rng, depth_cap)
    return CoalescenceSummary(
        n=n_samples,
        mean=float(depths.mean()),
        median=float(np.median(depths)),
        p90=float(np.percentile(depths, 90)),
        p99=float(np.percentile(depths, 99)),
        max=int(depths.max()),
        depths=depths,
    )


def tv_distance(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)).sum())


def sample_report(law: MappingLaw, n: int, seed: int, depth_cap: int = DEFAULT_DEPTH_CAP) -> dict:
    """CFTP sample summary in the JSON report layout (1-based state labels)."""
    values, depths = cftp_batch(law, n, RngStream(seed), depth_cap)
    counts = np.bincount(values, minlength=law.m)
    lam = stationary(law.marginal())
    return {
        "samples": n,
        "empirical": {str(x + 1): int(c) for x, c in enumerate(counts)},
        "stationary": {str(x + 1): ratio_str(w) for x, w in enumerate(lam)},
        "tv_distance": tv_distance(counts / n, [float(w) for w in lam]),
        "mean_depth": float(depths.mean()),
        "seed": seed,
    }
