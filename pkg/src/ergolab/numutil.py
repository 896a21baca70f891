"""Low-level numeric kernels shared by every module.

Everything here is deterministic and order-fixed so that results are
bit-reproducible across runs and across thread counts:

  * pairwise (tree) summation with a fixed split point,
  * exact reduction of integer*float products mod 1 (no rounding at all,
    the fractional part is computed through the float's integer mantissa),
  * the normalized geometric mean D_N(phi) = (1/N) sum_{n=1..N} e(n phi),
  * continued-fraction convergents and a rational-angle detector,
  * a counter-based seeded generator (Philox) for reproducible subsampling.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


def e(t: float | Fraction) -> complex:
    """e(t) = exp(2*pi*i*t), bit-exact on quarter phases (0, 1/4, 1/2, 3/4)."""
    if isinstance(t, Fraction):
        t = float(t % 1)
    t = t % 1.0
    if t == 0.0:
        return complex(1.0, 0.0)
    if t == 0.5:
        return complex(-1.0, 0.0)
    if t == 0.25:
        return complex(0.0, 1.0)
    if t == 0.75:
        return complex(0.0, -1.0)
    return complex(math.cos(TWO_PI * t), math.sin(TWO_PI * t))


def pairwise_sum(values: Sequence[complex]) -> complex:
    """Sum with a fixed binary-tree order (bit-reproducible)."""
    n = len(values)
    if n == 0:
        return 0.0 + 0.0j
    if n == 1:
        return values[0]
    if n <= 8:
        acc = values[0]
        for v in values[1:]:
            acc += v
        return acc
    half = n // 2
    return pairwise_sum(values[:half]) + pairwise_sum(values[half:])


def frac_mul_int_float(a: int, t: float) -> float:
    """Exact fractional part of a*t for integer a and float t.

    The float t equals m * 2**e exactly for a 53-bit integer m, so a*t is
    the exact rational a*m * 2**e and its fractional part is computed with
    integer arithmetic only.  Result lies in [0, 1).
    """
    if t == 0.0 or a == 0:
        return 0.0
    m, exp2 = math.frexp(t)  # t = m * 2**exp2, 0.5 <= |m| < 1
    m_int = int(m * 9007199254740992.0)  # m * 2**53, exact
    shift = 53 - exp2
    if shift <= 0:
        # |t| is a large even integer multiple of 1: a*t integer => frac 0
        return 0.0
    num = (a * m_int) % (1 << shift)  # exact bigint arithmetic
    return num / float(1 << shift)


def frac_mul_int_fraction(a: int, t: Fraction) -> Fraction:
    """Fractional part of a*t for integer a and rational t, in [0,1)."""
    num = (a * t.numerator) % t.denominator
    return Fraction(num, t.denominator)


class PhaseSum:
    """Accumulates a phase mod 1, keeping rational contributions exact.

    Rational parts are reduced in exact integer arithmetic; float parts are
    added in arrival order.  `value()` returns the total phase in [0, 1)
    and is exactly 0.0 when only rational terms summing to an integer were
    pushed (so e(phase) is exactly 1).
    """

    __slots__ = ("rat", "flt")

    def __init__(self) -> None:
        self.rat = Fraction(0)
        self.flt = 0.0

    def add_fraction(self, f: Fraction) -> None:
        self.rat = (self.rat + f) % 1

    def add_float(self, x: float) -> None:
        self.flt += x

    def value(self) -> float:
        if self.flt == 0.0:
            return float(self.rat % 1)
        return (float(self.rat) + self.flt) % 1.0

    def as_complex(self) -> complex:
        if self.flt == 0.0:
            return e(self.rat % 1)
        return e((float(self.rat) + self.flt) % 1.0)


def geometric_mean_phase(phi: float, n_terms: int) -> complex:
    """D_N(phi) = (1/N) * sum_{n=1..N} e(n*phi).

    Closed form e((N+1)phi/2) * sin(pi N phi) / (N sin(pi phi)); returns
    exactly 1+0j when phi is an exact integer (the resonant case).
    """
    phi = phi % 1.0
    if phi == 0.0:
        return complex(1.0, 0.0)
    s = math.sin(math.pi * phi)
    if abs(s) < 1e-15:
        # pathologically close to resonance: sum directly, pairwise
        terms = np.exp(TWO_PI * 1j * ((np.arange(1, n_terms + 1) * phi) % 1.0))
        return complex(np.sum(terms)) / n_terms
    amp = math.sin(math.pi * n_terms * phi) / (n_terms * s)
    return e(((n_terms + 1) * phi / 2.0) % 1.0) * amp


def convergents(t: float, max_q: int) -> list[tuple[int, int]]:
    """Continued-fraction convergents p/q of t with q <= max_q.

    The expansion runs on the exact rational value of the float, so it
    terminates; junk terms beyond the float's precision are cut off by the
    denominator bound.
    """
    frac = Fraction(t).limit_denominator(10**18)
    a = frac.numerator
    b = frac.denominator
    p_prev, p = 1, a // b
    q_prev, q = 0, 1
    out = [(p, q)]
    a, b = b, a - (a // b) * b
    while b != 0 and q <= max_q:
        digit = a // b
        a, b = b, a - digit * b
        p_prev, p = p, digit * p + p_prev
        q_prev, q = q, digit * q + q_prev
        if q > max_q:
            break
        out.append((p, q))
    return out


def best_rational(t: float, max_q: int) -> tuple[int, int, float]:
    """Best convergent p/q of t with q <= max_q; returns (p, q, |t - p/q|)."""
    best = (0, 1, abs(t))
    for p, q in convergents(t, max_q):
        err = abs(t - p / q)
        if err < best[2]:
            best = (p, q, err)
    return best


def detect_rational(t: float, max_q: int = 10**6) -> Fraction | None:
    """Classify a float angle as rational p/q (q <= max_q) or None.

    A float that was produced from a true rational with small denominator
    sits within a few ulp of it; an angle that is irrational (or rational
    with huge denominator) has no convergent that close.  Heuristic, exact
    for angles entered as decimal representations of small rationals.
    """
    t = t % 1.0
    if t == 0.0:
        return Fraction(0)
    p, q, err = best_rational(t, max_q)
    tol = max(4.0 * math.ulp(max(t, 1e-8)), 1e-15)
    if err <= tol:
        return Fraction(p, q)
    return None


def gauss_legendre(npts: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on [0,1] (cached)."""
    key = npts
    cached = _GL_CACHE.get(key)
    if cached is None:
        x, w = np.polynomial.legendre.leggauss(npts)
        cached = ((x + 1.0) / 2.0, w / 2.0)
        _GL_CACHE[key] = cached
    return cached


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def counter_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator; draws are reproducible per (seed, stream)."""
    return np.random.Generator(np.random.Philox(key=seed, counter=stream))


def parse_angle(text: str) -> Fraction | float:
    """Angle from 'p/q' (exact rational) or a decimal string (float)."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        f = Fraction(int(num), int(den)) % 1
        return f
    return float(text) % 1.0


def angle_float(angle: Fraction | float) -> float:
    return float(angle) % 1.0


def block_ranges(total: int, block: int = 1 << 16) -> list[tuple[int, int]]:
    """Fixed block partition of range(total); merge order = list order."""
    return [(lo, min(lo + block, total)) for lo in range(0, total, block)]
