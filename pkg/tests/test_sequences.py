"""Sequences: exact floors, growth classes, trend tests, densities."""

import math
from fractions import Fraction

import mpmath
import pytest

from ergolab.sequences import (AmbiguousFloorError, FloorGeneralized, FloorHardy,
                               LinearCombo, PolyInt, SequenceParseError,
                               divisibility_density, growth_classify,
                               log_distance_trend, parse_sequence, seq_eval,
                               seq_eval_real)


# ---------------------------------------------------------------- evaluation


def test_eval_exact_power():
    assert seq_eval(FloorGeneralized(terms=((1.0, 1.5),)), 4) == 8


def test_eval_poly():
    assert seq_eval(PolyInt(coeffs=(1, 1, 0)), 3) == 12


def test_eval_floor_15_at_2():
    # oracle: multiprecision 2^1.5 = 2.828..., floor 2
    mpmath.mp.prec = 120
    assert int(mpmath.floor(mpmath.mpf(2) ** mpmath.mpf(1.5))) == 2
    assert seq_eval(FloorGeneralized(terms=((1.0, 1.5),)), 2) == 2


def test_eval_matches_multiprecision_floor():
    mpmath.mp.prec = 140
    seq = FloorGeneralized(terms=((1.0, 1.5), (2.0, 0.5)))
    for n in (1, 2, 10, 97, 10**4, 10**6):
        oracle = int(mpmath.floor(mpmath.mpf(n) ** mpmath.mpf(1.5)
                                  + 2 * mpmath.mpf(n) ** mpmath.mpf(0.5)))
        assert seq_eval(seq, n) == oracle


def test_eval_hardy_log_terms():
    mpmath.mp.prec = 140
    seq = FloorHardy(terms=((1.0, 1.0, 0.5),))
    for n in (2, 3, 100, 12345):
        oracle = int(mpmath.floor(mpmath.mpf(n) * mpmath.log(n) ** mpmath.mpf(0.5)))
        assert seq_eval(seq, n) == oracle
    assert seq_eval(seq, 1) == 0  # log term at n=1 taken as 0


def test_eval_rejects_n_below_one():
    with pytest.raises(ValueError):
        seq_eval(PolyInt(coeffs=(1, 0)), 0)


def test_exact_resolution_of_cancelling_radicals():
    seq = FloorGeneralized(terms=((1.0, 0.5), (-1.0, 0.5), (0.25, 1.0)))
    # true value n/4; at n=2 the value 0.5 floors to 0 with the radicals gone
    assert seq_eval(seq, 2) == 0
    assert seq_eval(seq, 8) == 2


def test_floor_consistency_with_poly():
    gen = FloorGeneralized(terms=((2.0, 2.0), (3.0, 1.0)))
    poly = PolyInt(coeffs=(2, 3, 0))
    for n in range(1, 10**4 + 1, 37):
        assert seq_eval(gen, n) == seq_eval(poly, n)


def test_monotonicity_single_term():
    seq = FloorGeneralized(terms=((0.7, 1.3),))
    prev = seq_eval(seq, 1)
    for n in range(2, 10**5 + 1, 811):
        cur = seq_eval(seq, n)
        assert cur >= prev
        prev = cur


def test_linear_combo_linearity():
    p1 = PolyInt(coeffs=(1, 0, 0))
    p2 = PolyInt(coeffs=(5, 1))
    combo = LinearCombo(parts=((3, p1), (-2, p2)))
    for n in range(1, 10**4 + 1, 53):
        assert seq_eval(combo, n) == 3 * seq_eval(p1, n) - 2 * seq_eval(p2, n)


# ---------------------------------------------------------------- growth


def test_growth_tempered():
    g = growth_classify(FloorGeneralized(terms=((1.0, 1.5),)), (100, 100000))
    assert g.label() == "Tempered(1)"
    assert 1 < g.slope < 2


def test_growth_polynomial():
    assert growth_classify(PolyInt(coeffs=(1, 0, 0)), (100, 10**4)).label() == \
        "PolynomialDegree(2)"


def test_growth_t_plus_p():
    combo = parse_sequence("combo:1*(gen:1*n^1.5)+1*(poly:1,0,0)")
    assert growth_classify(combo, (100, 10**4)).label() == "TplusP"


def test_growth_needs_two_decades():
    with pytest.raises(ValueError):
        growth_classify(PolyInt(coeffs=(1, 0)), (100, 5000))


def test_growth_rejects_nonpositive_values():
    with pytest.raises(ValueError):
        growth_classify(FloorGeneralized(terms=((-1.0, 1.5),)), (100, 10**4))


# ---------------------------------------------------------------- trend test


def test_trend_power_diverges():
    rep = log_distance_trend(FloorGeneralized(terms=((1.0, 1.5),)), [Fraction(0)],
                             (10**3, 10**7))
    assert rep.verdict == "diverging"
    assert rep.slope > 1.0


def test_trend_matching_polynomial_bounded():
    rep = log_distance_trend(PolyInt(coeffs=(1, 0, 0)),
                             [Fraction(1), Fraction(0), Fraction(0)], (10**3, 10**7))
    assert rep.verdict == "bounded"


def test_trend_log_half_perturbation():
    # oracle: slope of log(|a - p| / log t) for a = t (log t)^0.5, p = t is
    # 1 - o(1) on t in [1e3, 1e9]: decisively diverging
    seq = FloorHardy(terms=((1.0, 1.0, 0.5),))
    rep = log_distance_trend(seq, [Fraction(1), Fraction(0)], (10**3, 10**9))
    assert rep.verdict == "diverging"


def test_trend_needs_twenty_points():
    with pytest.raises(ValueError):
        log_distance_trend(PolyInt(coeffs=(1, 0)), [Fraction(0)], (10, 10**4),
                           n_points=10)


# ---------------------------------------------------------------- densities


def test_density_examples_exact():
    assert divisibility_density([PolyInt(coeffs=(1, 0, 0))], 4, 1000) == 0.5
    assert divisibility_density([PolyInt(coeffs=(1, 0))], 3, 999) == 1 / 3
    both = [PolyInt(coeffs=(1, 0)), PolyInt(coeffs=(1, 0, 0))]
    assert divisibility_density(both, 2, 1000) == 0.5


def test_density_brute_force_oracle():
    seqs = [PolyInt(coeffs=(1, 0)), PolyInt(coeffs=(1, 0, 0))]
    count = sum(1 for n in range(1, 501) if n % 2 == 0 and n * n % 2 == 0)
    assert divisibility_density(seqs, 2, 500) == count / 500


def test_density_modulus_one():
    for seqs in ([PolyInt(coeffs=(1, 0))], [FloorGeneralized(terms=((1.0, 1.5),))]):
        assert divisibility_density(seqs, 1, 123) == 1.0


# ---------------------------------------------------------------- parsing


def test_parse_forms():
    assert parse_sequence("poly:1,1,0") == PolyInt(coeffs=(1, 1, 0))
    assert parse_sequence("gen:1*n^1.5+2*n^0.5") == \
        FloorGeneralized(terms=((1.0, 1.5), (2.0, 0.5)))
    assert parse_sequence("hardy:1*n^1.5*log^0.5") == \
        FloorHardy(terms=((1.0, 1.5, 0.5),))
    combo = parse_sequence("combo:2*(poly:1,0)-1*(gen:1*n^0.5)")
    assert combo.parts[0][0] == 2 and combo.parts[1][0] == -1


def test_parse_negative_terms():
    seq = parse_sequence("gen:1*n^1.5-2*n^0.5")
    assert seq.terms == ((1.0, 1.5), (-2.0, 0.5))


def test_parse_errors_carry_positions():
    for bad in ("gen:n^", "poly:1,x", "hardy:1*q^2", "nope:1", "gen:"):
        with pytest.raises(SequenceParseError) as err:
            parse_sequence(bad)
        assert "position" in str(err.value)


def test_label_roundtrip():
    for text in ("poly:1,1,0", "gen:1.0*n^1.5+2.0*n^0.5", "hardy:1.0*n^1.5*log^0.5"):
        seq = parse_sequence(text)
        assert parse_sequence(seq.label()) == seq


def test_real_value_accessor():
    seq = FloorGeneralized(terms=((1.0, 1.5),))
    assert seq_eval_real(seq, 4) == pytest.approx(8.0)
    assert seq_eval_real(PolyInt(coeffs=(1, 0)), 3) == 3.0
