"""Pure-numpy implementations of the hot inner kernels.

Selected when the numba backend is unavailable or when MLLT_BACKEND=numpy.
Signatures must stay in lockstep with ``_kernels_nb``.
"""

import numpy as np
from scipy.special import gammaln


def log_pmf_batch(ks, N, logp, logq):
    """Log multinomial mass at each row of ``ks`` (shape (n, d))."""
    ks = np.asarray(ks, dtype=np.float64)
    rest = N - ks.sum(axis=1)
    return (
        gammaln(N + 1.0)
        - gammaln(rest + 1.0)
        - gammaln(ks + 1.0).sum(axis=1)
        + rest * logq
        + ks @ logp
    )


def sym_coeffs(delta, p, q):
    """Correction coefficients from the symmetrized form, O(d) per point.

    ``delta`` has shape (n, d); the dependent (d+1)-th deviation is the
    negated row sum and the remainder mass q plays the role of its weight.
    Returns (c_half, c_one), each of shape (n,).
    """
    delta = np.asarray(delta, dtype=np.float64)
    full = np.concatenate([delta, -delta.sum(axis=1, keepdims=True)], axis=1)
    pfull = np.concatenate([np.asarray(p, dtype=np.float64), [q]])
    r = full / pfull
    c_half = -0.5 * r.sum(axis=1) + (full * r**2).sum(axis=1) / 6.0
    c_one = (
        0.5 * c_half**2
        + 0.25 * (r**2).sum(axis=1)
        - (full * r**3).sum(axis=1) / 12.0
        + (1.0 - (1.0 / pfull).sum()) / 12.0
    )
    return c_half, c_one


def raw_coeffs(delta, p, q):
    """Correction coefficients with the literal nested-sum structure.

    Kept as an O(d^4)-per-point cross-validation article; the index loops
    mirror the summation layout term by term instead of collapsing them.
    """
    delta = np.asarray(delta, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    n, d = delta.shape
    c_half = np.zeros(n)
    c_one = np.zeros(n)

    for i in range(d):
        c_half += -0.5 * delta[:, i] * (1.0 / p[i] - 1.0 / q)
    cubic = np.zeros(n)
    for i in range(d):
        for j in range(d):
            for l in range(d):
                coef = -1.0 / q**2
                if i == j == l:
                    coef += 1.0 / p[i] ** 2
                cubic += delta[:, i] * delta[:, j] * delta[:, l] * coef
    c_half += cubic / 6.0

    for i in range(d):
        for j in range(d):
            for l in range(d):
                coef3 = -1.0 / q**2
                if i == j == l:
                    coef3 += 1.0 / p[i] ** 2
                for m in range(d):
                    prod4 = delta[:, i] * delta[:, j] * delta[:, l] * delta[:, m]
                    c_one += -prod4 * coef3 * (1.0 / p[m] - 1.0 / q) / 12.0
                    coef4 = 1.0 / q**3
                    if i == j == l == m:
                        coef4 += 1.0 / p[i] ** 3
                    c_one += -prod4 * coef4 / 12.0
    c_one += cubic**2 / 72.0
    for i in range(d):
        for j in range(d):
            coef2 = -2.0 / (p[i] * q) + 3.0 / q**2
            if i == j:
                coef2 += 3.0 / p[i] ** 2
            elif i < j:
                coef2 += 2.0 / (p[i] * p[j])
            c_one += delta[:, i] * delta[:, j] * coef2 / 8.0
    c_one += (1.0 - (1.0 / p).sum() - 1.0 / q) / 12.0
    return c_half, c_one


def abs_diff_cell_integrals(pk, dens_grid, weights):
    """Per-cell integral of |pmf - gaussian| given grid density values.

    ``pk`` (ncells,), ``dens_grid`` (ncells, npts), ``weights`` (npts,).
    """
    return np.abs(pk[:, None] - dens_grid) @ weights
