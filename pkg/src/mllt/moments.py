"""Closed-form central moments and restricted-event moment bounds.

Moments up to order three are exact; the fourth/sixth/mixed 3-3 forms are
leading terms with a known remainder order, so each result is a (leading,
remainder_order) pair and callers can test the scaling claim directly.
"""

import math

from .errors import MomentIndexError
from .model import ModelParams

#: remainder tags
EXACT = "exact"
O_N = "O(N)"
O_N2 = "O(N^2)"


def _check_index(m: ModelParams, *idx):
    for i in idx:
        if not (0 <= i < m.d):
            raise MomentIndexError(f"index {i} out of range for d={m.d}")


def closed_form_central_moment(m: ModelParams, spec: str, *idx):
    """Closed-form central moment of the given kind at the given indices.

    Kinds: ``mean`` (i), ``cov`` (i, j), ``third`` (i, j, l) -- exact;
    ``fourth`` (i), ``sixth`` (i), ``mixed33`` (i, j with i != j) --
    leading order with O(N) / O(N^2) remainders.
    """
    _check_index(m, *idx)
    p = m.p
    N = float(m.N)
    if spec == "mean":
        (i,) = idx
        return 0.0, EXACT
    if spec == "cov":
        i, j = idx
        return N * (p[i] * (i == j) - p[i] * p[j]), EXACT
    if spec == "third":
        i, j, l = idx
        value = N * (
            2.0 * p[i] * p[j] * p[l]
            - (i == j) * p[i] * p[l]
            - (j == l) * p[i] * p[j]
            - (i == l) * p[j] * p[l]
            + (i == j == l) * p[i]
        )
        return float(value), EXACT
    if spec == "fourth":
        (i,) = idx
        return 3.0 * N**2 * p[i] ** 2 * (1.0 - p[i]) ** 2, O_N
    if spec == "sixth":
        (i,) = idx
        return 15.0 * N**3 * p[i] ** 3 * (1.0 - p[i]) ** 3, O_N2
    if spec == "mixed33":
        i, j = idx
        if i == j:
            raise MomentIndexError("mixed33 requires two distinct indices")
        value = (
            N**3
            * p[i] ** 2
            * p[j] ** 2
            * (-9.0 + 9.0 * p[j] + 9.0 * p[i] - 15.0 * p[i] * p[j])
        )
        return float(value), O_N2
    raise MomentIndexError(f"unknown moment kind {spec!r}")


def restricted_moment_bound(m: ModelParams, spec: str, prob_complement: float) -> float:
    """Bound on how far a centered moment restricted to an event can drift
    from its unrestricted value, in terms of the complement probability."""
    if not (0.0 <= prob_complement <= 1.0):
        raise MomentIndexError(f"complement probability must be in [0,1], got {prob_complement}")
    N = float(m.N)
    P = prob_complement
    if spec == "first":
        return 0.5 * math.sqrt(N) * math.sqrt(P)
    if spec == "second":
        return 0.5 * N * math.sqrt(P)
    if spec == "third":
        return N**1.5 * P**0.25 / math.sqrt(8.0)
    raise MomentIndexError(f"unknown restricted-moment kind {spec!r}")
