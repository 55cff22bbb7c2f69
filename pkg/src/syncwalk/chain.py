"""Exact-rational stochastic matrices and their basic structure.

States are indexed ``0 .. m-1`` inside Python.  File formats and printed
reports use the 1-based labels ``1 .. m``.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "StochasticMatrix",
    "classify",
    "stationary",
    "support",
    "power",
    "rationalize",
    "wielandt_bound",
    "MIXING",
    "PERIODIC",
    "REDUCIBLE",
]

MIXING = "mixing"
PERIODIC = "irreducible-periodic"
REDUCIBLE = "reducible"


def ratio_str(value) -> str:
    """Exact ``"a/b"`` text, including integers (``"1/1"``)."""
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def to_fraction(value) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Strings are parsed as ``"a/b"`` or decimal literals.  Floats are read
    through their shortest repr, so ``0.7`` becomes ``7/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {value!r} to an exact rational")


class StochasticMatrix:
    """Immutable row-stochastic matrix with Fraction entries.

    ``Q[x][y]`` is the probability of moving from ``x`` to ``y``.  Rows must
    sum to exactly 1; use :func:`rationalize` for floating-point input.
    """

    __slots__ = ("_rows", "_hash")

    def __init__(self, rows: Iterable[Iterable]):
        rows = tuple(tuple(to_fraction(v) for v in row) for row in rows)
        m = len(rows)
        if m == 0:
            raise ValueError("state space must be non-empty")
        for x, row in enumerate(rows):
            if len(row) != m:
                raise ValueError(f"row {x} has length {len(row)}, expected {m}")
            if any(v < 0 for v in row):
                raise ValueError(f"row {x} has a negative entry")
            if sum(row) != 1:
                raise ValueError(f"row {x} sums to {sum(row)}, not 1")
        self._rows = rows
        self._hash = None

    @property
    def m(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def __getitem__(self, x: int) -> tuple[Fraction, ...]:
        return self._rows[x]

    def __iter__(self):
        return iter(self._rows)

    def __len__(self) -> int:
        return len(self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StochasticMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._rows)
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("(" + ", ".join(str(v) for v in row) + ")" for row in self._rows)
        return f"StochasticMatrix({body})"

    def __matmul__(self, other: "StochasticMatrix") -> "StochasticMatrix":
        if not isinstance(other, StochasticMatrix):
            return NotImplemented
        if other.m != self.m:
            raise ValueError("dimension mismatch")
        return StochasticMatrix(_matmul(self._rows, other._rows))

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self._rows])

    def boolean_support(self) -> np.ndarray:
        return np.array([[v > 0 for v in row] for row in self._rows], dtype=bool)

    def denominators_lcm(self) -> int:
        return lcm(*(v.denominator for row in self._rows for v in row))

    @classmethod
    def identity(cls, m: int) -> "StochasticMatrix":
        return cls([[int(x == y) for y in range(m)] for x in range(m)])


def _matmul(a, b):
    m = len(a)
    return tuple(
        tuple(sum((a[x][k] * b[k][y] for k in range(m)), Fraction(0)) for y in range(m))
        for x in range(m)
    )


def support(Q: StochasticMatrix) -> frozenset[tuple[int, int]]:
    """The set of transitions ``(x, y)`` with ``Q[x][y] > 0``."""
    return frozenset((x, y) for x, row in enumerate(Q) for y, v in enumerate(row) if v > 0)


def power(Q: StochasticMatrix, n: int) -> StochasticMatrix:
    if n < 0:
        raise ValueError("n must be non-negative")
    result = StochasticMatrix.identity(Q.m).rows
    base = Q.rows
    while n:
        if n & 1:
            result = _matmul(result, base)
        n >>= 1
        if n:
            base = _matmul(base, base)
    return StochasticMatrix(result)


def wielandt_bound(m: int) -> int:
    """Index beyond which a primitive m x m matrix is strictly positive."""
    return m * m - 2 * m + 2


def _bool_power_witness(B: np.ndarray) -> int | None:
    """Least r <= Wielandt bound with B^r strictly positive, else None."""
    B = B.astype(bool)
    m = B.shape[0]
    Bi = B.astype(np.int64)
    P = B.copy()
    for r in range(1, wielandt_bound(m) + 1):
        if P.all():
            return r
        P = (Bi @ P.astype(np.int64)) > 0
    return None


def _strongly_connected(B: np.ndarray) -> bool:
    m = B.shape[0]
    reach = B.astype(bool) | np.eye(m, dtype=bool)
    # transitive closure by repeated squaring
    for _ in range(max(1, m.bit_length())):
        reach = (reach.astype(np.int64) @ reach.astype(np.int64)) > 0
    return bool(reach.all())


def classify(Q: StochasticMatrix) -> str:
    """Return ``"mixing"``, ``"irreducible-periodic"`` or ``"reducible"``."""
    B = Q.boolean_support()
    if _bool_power_witness(B) is not None:
        return MIXING
    if _strongly_connected(B):
        return PERIODIC
    return REDUCIBLE


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the right null space of an exact matrix (reduced row echelon)."""
    A = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -A[i][f]
        basis.append(v)
    return basis


def stationary(Q: StochasticMatrix) -> tuple[Fraction, ...]:
    """Exact stationary law ``lam`` with ``lam Q = lam`` and unit mass.

    Solved by Gaussian elimination over the rationals.  Raises ``ValueError``
    when the stationary law is not unique (more than one closed class).
    """
    m = Q.m
    # lam (Q - I) = 0  <=>  (Q - I)^T lam^T = 0
    system = [[Q[x][y] - (1 if x == y else 0) for x in range(m)] for y in range(m)]
    basis = _nullspace(system, m)
    if len(basis) != 1:
        raise ValueError(
            f"no unique stationary law ({classify(Q)} chain, {len(basis)}-dimensional fixed space)"
        )
    v = basis[0]
    total = sum(v)
    lam = tuple(w / total for w in v)
    if any(w < 0 for w in lam):
        raise ArithmeticError("stationary solve produced a negative weight")
    return lam


def rationalize(M: Sequence[Sequence], maxden: int = 10**6) -> StochasticMatrix:
    """Round an approximately stochastic real matrix to an exact one.

    Each positive entry is replaced by its best rational approximation with
    denominator at most ``maxden``; zeros stay zero and positive entries stay
    positive.  Each row is then made to sum to 1 by adjusting its largest entry.
    """
    rows = [list(r) for r in M]
    m = len(rows)
    if maxden < m:
        raise ValueError(f"maxden={maxden} must be at least m={m}")
    out = []
    for x, row in enumerate(rows):
        if len(row) != m:
            raise ValueError(f"row {x} has length {len(row)}, expected {m}")
        # exact binary value of floats; limit_denominator does the rounding
        vals = [Fraction(v) if not isinstance(v, str) else Fraction(v.strip()) for v in row]
        if any(v < 0 for v in vals):
            raise ValueError(f"row {x} has a negative entry")
        if abs(float(sum(vals)) - 1.0) > 1e-6:
            raise ValueError(f"row {x} sum deviates from 1 by more than 1e-6")
        approx = []
        for f in vals:
            if f == 0:
                approx.append(Fraction(0))
                continue
            a = f.limit_denominator(maxden)
            approx.append(a if a > 0 else Fraction(1, maxden))
        k = max(range(m), key=lambda i: approx[i])
        approx[k] += 1 - sum(approx)
        if approx[k] <= 0:
            raise ValueError(f"row {x} cannot be renormalized at maxden={maxden}")
        out.append(approx)
    return StochasticMatrix(out)
