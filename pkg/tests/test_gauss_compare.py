import numpy as np
import pytest

from mllt.errors import EtaRangeError, OutOfSimplexError
from mllt.gauss_compare import (
    hellinger_upper_bound_terms,
    kernel_T1,
    kernel_T2,
    tail_mass_outside_bulk,
    tv_distance_numeric,
)
from mllt.model import new_model

# frozen from the first implementation run; guards against silent numerical
# drift, not against an external reference
TV_D1_P05_N16 = 0.050219497056029176


def test_tv_regression_value():
    rep = tv_distance_numeric(new_model([0.5], 16))
    assert rep.tv == pytest.approx(TV_D1_P05_N16, rel=1e-12)


def test_tv_report_invariants():
    rep = tv_distance_numeric(new_model([0.3, 0.4], 30))
    assert rep.tv == pytest.approx(
        0.5 * (rep.cell_contribution + rep.outside_mass), abs=1e-15
    )
    assert 0.0 <= rep.tv <= 1.0
    assert rep.cells_evaluated > 0
    assert rep.truncation_bound >= 0.0
    assert rep.truncation_bound < 1e-10


def test_tv_decreases_with_n():
    tvs = [tv_distance_numeric(new_model([0.5], n)).tv for n in (16, 64, 256)]
    assert tvs[0] > tvs[1] > tvs[2]


def test_tv_node_refinement_stable():
    # the integrand has a kink where the pmf level crosses the density, so
    # refinement converges slowly in the few crossing cells; 2% brackets it
    m = new_model([0.5], 32)
    a = tv_distance_numeric(m, nodes_per_axis=8).tv
    b = tv_distance_numeric(m, nodes_per_axis=16).tv
    assert a == pytest.approx(b, rel=2e-2)


def test_tail_mass_spot():
    # p=0.5, N=100, eta=0.5: bulk is 45..55, outside mass is P(|K-50| >= 6)
    exact, azuma = tail_mass_outside_bulk(new_model([0.5], 100), 0.5)
    assert exact == pytest.approx(0.2713, abs=1e-3)
    assert exact <= azuma


def test_tail_bound_holds_fuzz():
    rng = np.random.default_rng(11)
    for _ in range(25):
        d = int(rng.integers(1, 3))
        raw = rng.uniform(0.1, 1.0, size=d + 1)
        p = raw[:d] / raw.sum()
        n = int(rng.integers(5, 200))
        eta = float(rng.choice([0.3, 0.5, 0.8]))
        exact, azuma = tail_mass_outside_bulk(new_model(p, n), eta)
        assert exact <= azuma + 1e-12


def test_eta_validation():
    m = new_model([0.5], 50)
    with pytest.raises(EtaRangeError):
        tail_mass_outside_bulk(m, 1.5)
    with pytest.raises(EtaRangeError):
        hellinger_upper_bound_terms(m, 0.0)


def test_hellinger_bound_large_n():
    tail, valid = hellinger_upper_bound_terms(new_model([0.5], 10**6), 0.5)
    assert valid
    assert 0.0 <= tail <= 2.0


def test_hellinger_tail_conservative():
    # counting every cube that touches the complement can only increase it
    m = new_model([0.5], 100)
    exact, _ = tail_mass_outside_bulk(m, 0.5)
    tail, _ = hellinger_upper_bound_terms(m, 0.5)
    assert tail / 2.0 >= exact - 1e-12


def test_kernel_t1():
    m = new_model([0.3, 0.4], 10)
    out = kernel_T1(m, [3, 4], [0.25, -0.4])
    assert np.allclose(out, [3.25, 3.6])
    with pytest.raises(OutOfSimplexError):
        kernel_T1(m, [11, 0], [0.1, 0.1])
    with pytest.raises(ValueError):
        kernel_T1(m, [3, 4], [0.5, 0.0])


def test_kernel_t2_rounding():
    m = new_model([0.4, 0.4], 6)
    # both coordinates round up to 4, total 8 > 6, two decrements at the
    # lowest-index largest entry bring it back to a feasible point
    assert kernel_T2(m, [3.6, 3.6]).tolist() == [3, 3]
    assert kernel_T2(m, [2.5, 1.4]).tolist() == [3, 1]
    assert kernel_T2(m, [-0.4, 2.0]).tolist() == [0, 2]


def test_kernel_round_trip_small():
    m = new_model([0.3, 0.4], 8)
    rng = np.random.default_rng(13)
    for a in range(9):
        for b in range(9 - a):
            noise = rng.uniform(-0.5, 0.5, size=2)
            x = kernel_T1(m, [a, b], noise)
            assert kernel_T2(m, x).tolist() == [a, b]
