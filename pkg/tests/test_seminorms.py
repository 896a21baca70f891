"""Seminorm estimators: exactness, oracles, inequalities."""

import itertools
import math

import numpy as np
import pytest

from conftest import ALPHA, random_trigpoly, seeded
from ergolab.numutil import e, geometric_mean_phase
from ergolab.seminorms import (BudgetError, SeminormEstimate, delta, gcs_check,
                               monotonicity_report, seminorm_box,
                               seminorm_iterative, soft_inverse)
from ergolab.averages import TruncationError
from ergolab.systems import (Cyclic, Observable, ProductSystem, Rotation, Skew,
                             integrate, pullback)


def brute_box(system, f, s, n):
    """Independent oracle: enumerate [N]^s and integrate the derivative."""
    total = 0.0 + 0.0j
    for tup in itertools.product(range(1, n + 1), repeat=s):
        total += integrate(system.canonicalize(
            delta(system, f, list(tup), degree_cap=None)))
    return total / n ** s


# ---------------------------------------------------------------- derivative


def test_delta_eigenfunction_collapses(rot):
    d5 = delta(rot, Observable.monomial((1,)), 5)
    assert set(d5.coeffs) == {(0,)}
    assert d5.coeffs[(0,)] == pytest.approx(e((5 * ALPHA) % 1.0), abs=1e-12)
    assert abs(d5.coeffs[(0,)]) == pytest.approx(1.0, abs=1e-15)


def test_delta_constant(rot):
    c = Observable.constant(0.5 + 0.5j, 1)
    # exact complex product (0.5+0.5j)(0.5-0.5j) = 0.5
    assert delta(rot, c, 7).coeffs == {(0,): 0.5 + 0.0j}


def test_delta_two_shifts_exactly_one(rot):
    d = delta(rot, Observable.monomial((1,)), (3, 7))
    assert d.coeffs == {(0,): 1.0 + 0.0j}


def test_delta_multiplicative_on_monomials(rot):
    rng = seeded(31)
    for _ in range(20):
        k1, k2 = int(rng.integers(-4, 5)), int(rng.integers(-4, 5))
        f = Observable.monomial((k1,), e(float(rng.random())))
        g = Observable.monomial((k2,), e(float(rng.random())))
        shifts = [int(rng.integers(1, 30)), int(rng.integers(1, 30))]
        lhs = delta(rot, f * g, shifts)
        rhs = delta(rot, f, shifts) * delta(rot, g, shifts)
        keys = set(lhs.coeffs) | set(rhs.coeffs)
        assert all(abs(lhs.coeffs.get(k, 0) - rhs.coeffs.get(k, 0)) <= 1e-12
                   for k in keys)


def test_delta_degree_cap_errors_on_skew(skew):
    with pytest.raises(TruncationError):
        delta(skew, Observable.monomial((0, 1)), 100, degree_cap=8)


# ---------------------------------------------------------------- box estimator


def test_eigenfunction_rigidity_exact(rot):
    chi = Observable.monomial((1,))
    for s in (2, 3):
        for n in (16, 100, 256, 512):
            assert seminorm_box(rot, chi, s, n).raw == 1.0


def test_rigidity_across_spectrum(prod):
    from ergolab.systems import spectrum, eigenfunction
    for entry in spectrum(prod, 1).entries:
        chi = eigenfunction(prod, entry.generator).chi
        for s in (2, 3):
            assert seminorm_box(prod, chi, s, 64).raw == 1.0


def test_s0_convention(rot):
    f = Observable(coeffs={(0,): 0.25 - 0.5j, (2,): 1.0})
    est = seminorm_box(rot, f, 0, 10)
    assert est.raw == 0.25


def test_s1_geometric(rot):
    est = seminorm_box(rot, Observable.monomial((1,)), 1, 10**4)
    assert abs(est.raw) <= 1e-3
    assert est.raw == pytest.approx(geometric_mean_phase(ALPHA, 10**4).real, abs=1e-15)


def test_s1_bound_zero_mean_monomials(rot):
    for freq in (1, 2, 3):
        for n in (100, 1000):
            est = seminorm_box(rot, Observable.monomial((freq,)), 1, n)
            bound = 2.0 / (n * abs(2 * math.sin(math.pi * ((freq * ALPHA) % 1.0))))
            assert abs(est.raw) <= bound + 1e-15


def test_constants_all_s(rot):
    c = Observable.constant(0.7, 1)
    for s in (1, 2, 3):
        assert seminorm_box(rot, c, s, 64).value == pytest.approx(0.7, abs=1e-12)


def test_box_matches_brute_force_oracle(rot):
    rng = seeded(33)
    for trial in range(4):
        f = Observable(coeffs={(k,): 0.3 * complex(rng.normal(), rng.normal())
                               for k in range(-2, 3)})
        for s in (1, 2):
            oracle = brute_box(rot, f, s, 7)
            est = seminorm_box(rot, f, s, 7)
            assert est.raw == pytest.approx(oracle.real, abs=1e-12)
            assert est.imag_residual == pytest.approx(abs(oracle.imag), abs=1e-12)


def test_box_s3_structured_matches_brute(rot):
    rng = seeded(34)
    f = Observable(coeffs={(k,): 0.25 * complex(rng.normal(), rng.normal())
                           for k in range(-4, 5)})
    oracle = brute_box(rot, f, 3, 5)
    est = seminorm_box(rot, f, 3, 5)
    assert est.raw == pytest.approx(oracle.real, abs=1e-10)


def test_box_cyclic_character(cyc2):
    chi = Observable.monomial((1,))
    # the alternating character has vanishing invariant part but full
    # higher seminorms (it is an eigenfunction)
    assert seminorm_box(cyc2, chi, 1, 32).raw == 0.0
    for s in (2, 3):
        assert seminorm_box(cyc2, chi, s, 32).raw == pytest.approx(1.0, abs=1e-12)


def test_box_skew_coordinate_small(skew):
    est = seminorm_box(skew, Observable.monomial((0, 1)), 2, 256)
    assert est.value <= 0.2


def test_box_generic_budget(skew):
    with pytest.raises(BudgetError):
        seminorm_box(skew, Observable.monomial((0, 1)), 3, 10**4, budget=10**6)


def test_subsampled_estimator_close(rot):
    f = Observable(coeffs={(1,): 0.6, (2,): 0.4})
    full = seminorm_box(rot, f, 2, 64)
    sub = seminorm_box(rot, f, 2, 64, estimator="subsampled",
                       subsample_count=4000, seed=5)
    assert sub.estimator == "subsampled" and sub.seed == 5
    assert abs(sub.value - full.value) <= 0.05


def test_negative_raw_clipped(skew):
    est = seminorm_box(skew, Observable.monomial((0, 1)), 2, 256)
    if est.raw < 0:
        assert est.value == 0.0


# ---------------------------------------------------------------- iterative


def test_iterative_constant(rot):
    c = Observable.constant(0.3 + 0.2j, 1)
    for s in (1, 2, 3):
        assert seminorm_iterative(rot, c, s, 32).value == \
            pytest.approx(abs(0.3 + 0.2j), abs=1e-12)


def test_iterative_eigenfunction_unimodular(rot):
    chi = Observable.monomial((2,))
    for s in (1, 2, 3):
        est = seminorm_iterative(rot, chi, s, 128)
        if s == 1:
            assert est.value <= 0.2   # ergodic rotation: mean orbit dies
        else:
            assert est.value == pytest.approx(1.0, abs=1e-12)


def test_iterative_closed_form_matches_loop(rot):
    # oracle: the explicit level recursion at small N
    from ergolab.seminorms import _mean_orbit_l2

    def loop_est(f, s, levels):
        def rec(g, depth):
            n_here = levels[s - depth]
            if depth == 1:
                return _mean_orbit_l2(rot, g, n_here) ** 2
            return sum(rec(delta(rot, g, m, degree_cap=None), depth - 1)
                       for m in range(1, n_here + 1)) / n_here
        return rec(f, s)

    rng = seeded(37)
    f = Observable(coeffs={(k,): 0.3 * complex(rng.normal(), rng.normal())
                           for k in range(-2, 3)})
    for s, levels in ((2, [11, 6]), (3, [7, 6, 5])):
        assert seminorm_iterative(rot, f, s, levels).raw == \
            pytest.approx(loop_est(f, s, levels), abs=1e-12)


def test_box_iterative_agreement_example(rot):
    f = Observable(coeffs={(1,): 1.0, (2,): 1.0})
    bx = seminorm_box(rot, f, 2, 512)
    it = seminorm_iterative(rot, f, 2, 512)
    assert abs(bx.value - it.value) <= 0.02


# ---------------------------------------------------------------- monotonicity


def test_monotonicity_eigenfunction(rot):
    rep = monotonicity_report(rot, Observable.monomial((1,)), 3, 256)
    vals = [est.value for est in rep.estimates]
    assert vals[0] <= 0.05 and vals[1] == 1.0 and vals[2] == 1.0
    assert rep.ok


def test_monotonicity_seeded_random(rot):
    rng = seeded(41)
    for _ in range(6):
        f = random_trigpoly(rng)
        rep = monotonicity_report(rot, f, 3, 256)
        assert rep.ok, [est.value for est in rep.estimates]


# ---------------------------------------------------------------- soft inverse


def test_soft_inverse_half_monomial(rot):
    rep = soft_inverse(rot, Observable(coeffs={(1,): 0.5}), 3)
    assert rep.correlation == 0.5
    assert rep.box_estimate.raw == pytest.approx(0.0625, abs=1e-12)
    assert rep.bound_ok


def test_soft_inverse_constant_one(rot):
    rep = soft_inverse(rot, Observable.constant(1.0, 1), 2)
    assert rep.correlation == 1.0
    assert rep.box_estimate.raw == pytest.approx(1.0, abs=1e-12)
    assert rep.bound_ok


def test_soft_inverse_skew_orthogonal(skew):
    rep = soft_inverse(skew, Observable.monomial((0, 1)), 3, n=256)
    assert rep.correlation == 0.0
    assert rep.box_estimate.value <= 0.2
    assert rep.bound_ok


def test_soft_inverse_rejects_large_sup(rot):
    with pytest.raises(ValueError):
        soft_inverse(rot, Observable(coeffs={(1,): 1.0, (2,): 1.0}), 2)


# ---------------------------------------------------------------- box Cauchy-Schwarz


def test_gcs_all_ones(rot):
    one = Observable.constant(1.0, 1)
    for s, n in ((1, 16), (2, 5)):
        f_eps = {eps: one for eps in itertools.product((0, 1), repeat=s)}
        lhs, rhs = gcs_check(rot, f_eps, lambda idx: one, n, s)
        assert lhs == pytest.approx(1.0, abs=1e-12)
        assert rhs == pytest.approx(1.0, abs=1e-12)


def test_gcs_monomials_strict(rot):
    f = Observable.monomial((1,))
    lhs, rhs = gcs_check(rot, {(0,): f, (1,): f}, lambda idx: Observable.constant(1.0, 1),
                         64, 1)
    assert lhs ** 2 <= rhs + 1e-8
    assert lhs ** 2 < rhs  # strictly smaller for the oscillating pair


def test_gcs_seeded_families(rot):
    rng = seeded(43)
    for s, n, reps in ((1, 32, 6), (2, 8, 4)):
        for _ in range(reps):
            f_eps = {}
            for eps in itertools.product((0, 1), repeat=s):
                k = int(rng.integers(-3, 4))
                f_eps[eps] = Observable.monomial((k,), e(float(rng.random())))
            g_freq = int(rng.integers(-2, 3))
            lhs, rhs = gcs_check(rot, f_eps,
                                 lambda idx: Observable.monomial((g_freq,)), n, s)
            assert lhs ** (2 ** s) <= rhs + 1e-8


def test_gcs_rejects_large_inputs(rot):
    big = Observable(coeffs={(1,): 1.0, (2,): 1.0})
    with pytest.raises(ValueError):
        gcs_check(rot, {(0,): big, (1,): big}, lambda idx: big, 8, 1)
