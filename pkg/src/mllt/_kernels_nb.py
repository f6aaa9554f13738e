"""Numba-compiled implementations of the hot inner kernels.

Same contracts as ``_kernels_np``; plain loops that numba turns into
machine code. Summation order is fixed so results are deterministic.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def log_pmf_batch(ks, N, logp, logq):
    n, d = ks.shape
    out = np.empty(n)
    lg_n1 = math.lgamma(N + 1.0)
    for row in range(n):
        total = 0.0
        acc = lg_n1
        for i in range(d):
            k = ks[row, i]
            total += k
            acc += k * logp[i] - math.lgamma(k + 1.0)
        acc += (N - total) * logq - math.lgamma(N - total + 1.0)
        out[row] = acc
    return out


@njit(cache=True)
def sym_coeffs(delta, p, q):
    n, d = delta.shape
    c_half = np.empty(n)
    c_one = np.empty(n)
    inv_sum = 1.0 / q
    for i in range(d):
        inv_sum += 1.0 / p[i]
    const = (1.0 - inv_sum) / 12.0
    for row in range(n):
        s = 0.0
        h1 = 0.0
        h3 = 0.0
        sq = 0.0
        cub = 0.0
        for i in range(d):
            dv = delta[row, i]
            s += dv
            r = dv / p[i]
            h1 += r
            h3 += dv * r * r
            sq += r * r
            cub += dv * r * r * r
        dlast = -s
        rlast = dlast / q
        h1 += rlast
        h3 += dlast * rlast * rlast
        sq += rlast * rlast
        cub += dlast * rlast * rlast * rlast
        ch = -0.5 * h1 + h3 / 6.0
        c_half[row] = ch
        c_one[row] = 0.5 * ch * ch + 0.25 * sq - cub / 12.0 + const
    return c_half, c_one


@njit(cache=True)
def raw_coeffs(delta, p, q):
    n, d = delta.shape
    c_half = np.empty(n)
    c_one = np.empty(n)
    const = 1.0 - 1.0 / q
    for i in range(d):
        const -= 1.0 / p[i]
    const /= 12.0
    for row in range(n):
        ch = 0.0
        for i in range(d):
            ch += -0.5 * delta[row, i] * (1.0 / p[i] - 1.0 / q)
        cubic = 0.0
        for i in range(d):
            for j in range(d):
                for l in range(d):
                    coef = -1.0 / (q * q)
                    if i == j and j == l:
                        coef += 1.0 / (p[i] * p[i])
                    cubic += delta[row, i] * delta[row, j] * delta[row, l] * coef
        ch += cubic / 6.0
        co = 0.0
        for i in range(d):
            for j in range(d):
                for l in range(d):
                    coef3 = -1.0 / (q * q)
                    if i == j and j == l:
                        coef3 += 1.0 / (p[i] * p[i])
                    for m in range(d):
                        prod4 = (
                            delta[row, i]
                            * delta[row, j]
                            * delta[row, l]
                            * delta[row, m]
                        )
                        co += -prod4 * coef3 * (1.0 / p[m] - 1.0 / q) / 12.0
                        coef4 = 1.0 / (q * q * q)
                        if i == j and j == l and l == m:
                            coef4 += 1.0 / (p[i] * p[i] * p[i])
                        co += -prod4 * coef4 / 12.0
        co += cubic * cubic / 72.0
        for i in range(d):
            for j in range(d):
                coef2 = -2.0 / (p[i] * q) + 3.0 / (q * q)
                if i == j:
                    coef2 += 3.0 / (p[i] * p[i])
                elif i < j:
                    coef2 += 2.0 / (p[i] * p[j])
                co += delta[row, i] * delta[row, j] * coef2 / 8.0
        c_half[row] = ch
        c_one[row] = co + const
    return c_half, c_one


@njit(cache=True)
def abs_diff_cell_integrals(pk, dens_grid, weights):
    ncells, npts = dens_grid.shape
    out = np.empty(ncells)
    for c in range(ncells):
        acc = 0.0
        comp = 0.0
        for t in range(npts):
            term = abs(pk[c] - dens_grid[c, t]) * weights[t]
            y = term - comp
            s = acc + y
            comp = (s - acc) - y
            acc = s
        out[c] = acc
    return out
