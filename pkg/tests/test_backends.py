import math
import os
import subprocess
import sys

import numpy as np
import pytest

import mllt
from mllt import _kernels_np
from mllt.model import new_model

try:
    from mllt import _kernels_nb

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not available")


def _random_inputs(seed, d, n_pts, N):
    rng = np.random.default_rng(seed)
    raw = rng.uniform(0.05, 1.0, size=d + 1)
    p = raw[:d] / raw.sum()
    q = 1.0 - p.sum()
    ks = rng.multinomial(N, np.concatenate([p, [q]]), size=n_pts)[:, :d].astype(np.float64)
    deltas = (ks - N * p) / math.sqrt(N)
    return p, q, ks, deltas


@needs_numba
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_log_pmf_batch_backends_agree(d):
    p, q, ks, _ = _random_inputs(d, d, 200, 50)
    a = _kernels_np.log_pmf_batch(ks, 50.0, np.log(p), math.log(q))
    b = _kernels_nb.log_pmf_batch(ks, 50.0, np.log(p), math.log(q))
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)


@needs_numba
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_coeff_backends_agree(d):
    p, q, _, deltas = _random_inputs(100 + d, d, 200, 80)
    for fn in ("sym_coeffs", "raw_coeffs"):
        ch_a, co_a = getattr(_kernels_np, fn)(deltas, p, q)
        ch_b, co_b = getattr(_kernels_nb, fn)(deltas, p, q)
        assert np.allclose(ch_a, ch_b, rtol=1e-11, atol=1e-11)
        assert np.allclose(co_a, co_b, rtol=1e-11, atol=1e-11)


@needs_numba
def test_abs_diff_backends_agree():
    rng = np.random.default_rng(42)
    pk = rng.uniform(0, 0.1, size=30)
    dens = rng.uniform(0, 1.0, size=(30, 16))
    w = rng.uniform(0, 0.1, size=16)
    a = _kernels_np.abs_diff_cell_integrals(pk, dens, w)
    b = _kernels_nb.abs_diff_cell_integrals(pk, dens, w)
    assert np.allclose(a, b, rtol=1e-13, atol=1e-15)


def test_backend_env_flag():
    code = "import mllt; print(mllt.BACKEND)"
    for flag in ("numpy",) + (("numba",) if HAVE_NUMBA else ()):
        env = dict(os.environ, MLLT_BACKEND=flag)
        out = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        assert out.returncode == 0
        assert out.stdout.strip() == flag


def test_backend_reported():
    assert mllt.BACKEND in ("numpy", "numba")


@needs_numba
def test_tv_value_backend_independent():
    from mllt.gauss_compare import tv_distance_numeric

    here = tv_distance_numeric(new_model([0.5], 16)).tv
    code = (
        "from mllt.gauss_compare import tv_distance_numeric\n"
        "from mllt.model import new_model\n"
        "print(repr(tv_distance_numeric(new_model([0.5], 16)).tv))\n"
    )
    other = "numpy" if mllt.BACKEND == "numba" else "numba"
    env = dict(os.environ, MLLT_BACKEND=other)
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.returncode == 0
    assert float(out.stdout.strip()) == pytest.approx(here, rel=1e-12)
