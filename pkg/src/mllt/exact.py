"""Ground-truth side: exact pmf evaluation, lattice enumeration, exact moments.

Log-space evaluation is the working path; the rational-arithmetic mode is
the slow incorruptible oracle used by tests.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import _backend
from .errors import InvalidProbabilityError, MassOverflowError, OutOfSimplexError, TooLargeError
from .model import ModelParams, check_in_simplex

#: Hard cap on the number of lattice points any enumeration may produce.
ENUMERATION_GUARD = 10**9

#: Practical in-memory cap for materialized lattices.
_ARRAY_GUARD = 3 * 10**7


def simplex_count(d: int, N: int) -> int:
    """Number of lattice points with d nonnegative counts summing to <= N."""
    return math.comb(N + d, d)


def _check_guard(d: int, N: int) -> int:
    count = simplex_count(d, N)
    if count > ENUMERATION_GUARD:
        raise TooLargeError(f"lattice has {count} points, guard is {ENUMERATION_GUARD}")
    return count


def enumerate_simplex(d: int, N: int) -> Iterator[tuple]:
    """Yield every count vector of the simplex once, in colexicographic order.

    Colex order: points are sorted by the last coordinate first, so the
    d=1 stream is (0,), (1,), ..., (N,).
    """
    _check_guard(d, N)

    def rec(dim: int, budget: int, suffix: tuple):
        if dim == 1:
            for k in range(budget + 1):
                yield (k,) + suffix
        else:
            for k in range(budget + 1):
                yield from rec(dim - 1, budget - k, (k,) + suffix)

    yield from rec(d, N, ())


def simplex_lattice(d: int, N: int) -> np.ndarray:
    """The full simplex lattice as an (n, d) int array in colex order."""
    count = _check_guard(d, N)
    if count > _ARRAY_GUARD:
        raise TooLargeError(f"lattice of {count} points is too large to materialize")
    if d == 1:
        return np.arange(N + 1, dtype=np.int64)[:, None]
    blocks = []
    for last in range(N + 1):
        inner = simplex_lattice(d - 1, N - last)
        col = np.full((inner.shape[0], 1), last, dtype=np.int64)
        blocks.append(np.concatenate([inner, col], axis=1))
    return np.concatenate(blocks, axis=0)


def log_pmf(m: ModelParams, k) -> float:
    """Natural log of the multinomial mass at k, via log-gamma."""
    ki = check_in_simplex(m, k)
    return float(
        _backend.log_pmf_batch(
            ki[None, :].astype(np.float64), float(m.N), np.log(m.p), math.log(m.q)
        )[0]
    )


def log_pmf_batch(m: ModelParams, ks: np.ndarray) -> np.ndarray:
    """Vectorized :func:`log_pmf` over rows of ks; assumes feasible points."""
    ks = np.asarray(ks, dtype=np.float64)
    return _backend.log_pmf_batch(ks, float(m.N), np.log(m.p), math.log(m.q))


@dataclass(frozen=True)
class RationalParams:
    """Exact-arithmetic mirror of ModelParams (test oracle only)."""

    p: tuple
    N: int

    @property
    def q(self) -> Fraction:
        return 1 - sum(self.p)

    @property
    def d(self) -> int:
        return len(self.p)


def new_rational(p: Sequence, N: int) -> RationalParams:
    ps = tuple(Fraction(x) for x in p)
    if any(not (0 < x < 1) for x in ps):
        raise InvalidProbabilityError("every rational weight must lie in (0, 1)")
    if sum(ps) >= 1:
        raise MassOverflowError("rational weights sum to >= 1")
    return RationalParams(p=ps, N=int(N))


def pmf_exact_rational(r: RationalParams, k) -> Fraction:
    """Exact rational multinomial mass at k (big-integer coefficient)."""
    ks = [int(x) for x in np.atleast_1d(k)]
    if len(ks) != r.d or any(x < 0 for x in ks) or sum(ks) > r.N:
        raise OutOfSimplexError(f"{ks} is outside the width-{r.N} simplex")
    coef = 1
    remaining = r.N
    for ki in ks:
        coef *= math.comb(remaining, ki)
        remaining -= ki
    value = Fraction(coef)
    for ki, pi in zip(ks, r.p):
        value *= pi**ki
    return value * r.q ** (r.N - sum(ks))


def central_moment_exact(m: ModelParams, a) -> float:
    """Brute-force central moment: sum over the lattice of pmf times
    the product of per-cell deviations raised to the multi-index a."""
    a = np.atleast_1d(np.asarray(a, dtype=np.int64))
    ks = simplex_lattice(m.d, m.N)
    w = np.exp(log_pmf_batch(m, ks))
    dev = ks - m.N * m.p
    prod = np.ones(ks.shape[0])
    for i in range(m.d):
        if a[i] > 0:
            prod *= dev[:, i] ** int(a[i])
    # np.sum uses pairwise accumulation, which meets the compensation bar
    return float(np.sum(w * prod))


def restricted_central_moment_exact(m: ModelParams, a, mask_fn) -> float:
    """Like :func:`central_moment_exact` but restricted to points where
    ``mask_fn(ks) -> bool array`` holds."""
    a = np.atleast_1d(np.asarray(a, dtype=np.int64))
    ks = simplex_lattice(m.d, m.N)
    keep = mask_fn(ks)
    ks = ks[keep]
    w = np.exp(log_pmf_batch(m, ks))
    dev = ks - m.N * m.p
    prod = np.ones(ks.shape[0])
    for i in range(m.d):
        if a[i] > 0:
            prod *= dev[:, i] ** int(a[i])
    return float(np.sum(w * prod))


def factorial_moment(m: ModelParams, a) -> float:
    """Falling-factorial moment: N^(|a|) * prod p_i^a_i; 0 when |a| > N."""
    a = np.atleast_1d(np.asarray(a, dtype=np.int64))
    order = int(a.sum())
    if order > m.N:
        return 0.0
    value = 1.0
    for j in range(order):
        value *= m.N - j
    for ai, pi in zip(a, m.p):
        value *= float(pi) ** int(ai)
    return value
