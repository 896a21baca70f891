"""Exponential sums over integer sequences and equidistribution verdicts.

The central object is

    S_N = (1/N) sum_{n=1..N} e(a_1(n) t_1 + ... + a_l(n) t_l).

Phases are reduced mod 1 before exponentiation with *exact* arithmetic:
rational t_j go through residue arithmetic, float t_j through the integer
mantissa of the float (`frac_mul_int_float`), so there is no catastrophic
precision loss even for a(n) ~ 1e15.  Rational resonances therefore come
out exactly resonant (|S_N| = 1) and the all-zero tuple gives exactly 1.

Block sums are pairwise and merged in fixed index order: results are
bit-identical across runs and across thread counts.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .numutil import TWO_PI, best_rational, block_ranges, counter_rng, frac_mul_int_float
from .sequences import SequenceSpec, seq_eval
from .systems import SpectrumSet

PhaseValue = float | Fraction


def _phase_fracs(values: Sequence[int], t: PhaseValue) -> np.ndarray:
    """Fractional parts of a(n)*t, exact, as a float64 array."""
    if isinstance(t, Fraction):
        p, q = t.numerator, t.denominator
        return np.array([((v % q) * p % q) / q for v in values], dtype=float)
    return np.array([frac_mul_int_float(v, t) for v in values], dtype=float)


def _sum_unit_phases(phases: np.ndarray) -> complex:
    """Pairwise sum of e(phi) over the phase array (numpy sum is pairwise)."""
    return complex(np.sum(np.exp((TWO_PI * 1j) * np.mod(phases, 1.0))))


@dataclass
class ExpSumSeries:
    seq_labels: list[str]
    ts: list[PhaseValue]
    schedule: list[int]
    values: list[complex]

    def final_abs(self) -> float:
        return abs(self.values[-1])


def _seq_values_block(seqs: Sequence[SequenceSpec], lo: int, hi: int) -> list[list[int]]:
    return [[seq_eval(s, n) for n in range(lo + 1, hi + 1)] for s in seqs]


def exp_sum(seqs: Sequence[SequenceSpec], ts: Sequence[PhaseValue], n_max: int,
            threads: int = 1) -> complex:
    """S_N for one frequency tuple."""
    return exp_sum_series(seqs, ts, [n_max], threads=threads).values[0]


def exp_sum_series(seqs: Sequence[SequenceSpec], ts: Sequence[PhaseValue],
                   schedule: Sequence[int], threads: int = 1,
                   seq_values: list[list[int]] | None = None) -> ExpSumSeries:
    """Prefix averages S_N at every schedule point (one pass).

    `seq_values` can carry precomputed integer values a_j(1..N_max) to share
    evaluation across many frequency tuples.
    """
    if len(seqs) != len(ts):
        raise ValueError("sequence and frequency counts differ")
    schedule = sorted(set(int(n) for n in schedule))
    if schedule[0] < 1:
        raise ValueError("N must be >= 1")
    n_max = schedule[-1]

    def block_sum(lo: int, hi: int) -> complex:
        if seq_values is None:
            vals = _seq_values_block(seqs, lo, hi)
        else:
            vals = [sv[lo:hi] for sv in seq_values]
        total = np.zeros(hi - lo, dtype=float)
        for v, t in zip(vals, ts):
            total += _phase_fracs(v, t)
        return _sum_unit_phases(total)

    # blocks cut at schedule boundaries so prefixes are exact block unions
    cuts = sorted(set([0] + schedule))
    blocks: list[tuple[int, int]] = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        blocks.extend((lo + a, lo + b) for a, b in block_ranges(hi - lo, 1 << 16))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(lambda ab: block_sum(*ab), blocks))
    else:
        partials = [block_sum(lo, hi) for lo, hi in blocks]

    values = []
    running = 0.0 + 0.0j
    bi = 0
    for n_point in schedule:
        while bi < len(blocks) and blocks[bi][1] <= n_point:
            running += partials[bi]
            bi += 1
        values.append(running / n_point)
    labels = [s.label() for s in seqs]
    return ExpSumSeries(seq_labels=labels, ts=list(ts), schedule=schedule, values=values)


# ---------------------------------------------------------------------------
# equidistribution verdicts over a spectrum
# ---------------------------------------------------------------------------


@dataclass
class TupleRecord:
    ts: tuple[PhaseValue, ...]
    abs_value: float
    passed: bool


@dataclass
class EquidistVerdict:
    mode: str           # "full" | "irrational-only"
    tolerance: float
    n_max: int
    records: list[TupleRecord]
    sampled: bool
    overall: bool


class TupleBlowupError(RuntimeError):
    def __init__(self, count: int, cap: int):
        self.count = count
        super().__init__(f"{count} frequency tuples exceed the cap {cap}; pass a sample size")


def _tuple_phase(entry) -> PhaseValue:
    return entry.rational if entry.rational is not None else entry.value


def equidist_verdict(seqs: Sequence[SequenceSpec], spec_set: SpectrumSet, mode: str,
                     n_max: int, tol: float, cap: int = 10**6,
                     sample: int | None = None, seed: int = 0) -> EquidistVerdict:
    """Check S_N at every qualifying frequency tuple from the spectrum.

    full mode excludes only the all-zero tuple; irrational-only mode skips
    tuples whose entries are all rational.  Each qualifying tuple passes
    when |S_{N_max}| <= tol; the overall verdict is the conjunction.
    """
    if mode not in ("full", "irrational-only"):
        raise ValueError(f"unknown mode {mode!r}")
    if not spec_set.entries:
        raise ValueError("empty spectrum")
    ell = len(seqs)
    entries = spec_set.entries
    total = len(entries) ** ell
    if total > cap and sample is None:
        raise TupleBlowupError(total, cap)

    if total > cap:
        rng = counter_rng(seed)
        indices = sorted(set(int(x) for x in rng.integers(0, total, size=sample)))
        sampled = True
    else:
        indices = range(total)
        sampled = False

    n_values = list(range(1, n_max + 1))
    seq_values = [[seq_eval(s, n) for n in n_values] for s in seqs]

    records: list[TupleRecord] = []
    for flat in indices:
        combo = []
        x = flat
        for _ in range(ell):
            combo.append(entries[x % len(entries)])
            x //= len(entries)
        if mode == "full" and all(en.value == 0.0 for en in combo):
            continue
        if mode == "irrational-only" and all(en.is_rational for en in combo):
            continue
        ts = tuple(_tuple_phase(en) for en in combo)
        s_val = exp_sum_series(seqs, ts, [n_max], seq_values=seq_values).values[0]
        records.append(TupleRecord(ts=ts, abs_value=abs(s_val), passed=abs(s_val) <= tol))
    overall = all(r.passed for r in records)
    return EquidistVerdict(mode=mode, tolerance=tol, n_max=n_max, records=records,
                           sampled=sampled, overall=overall)


# ---------------------------------------------------------------------------
# rational detection behind large Weyl sums
# ---------------------------------------------------------------------------


@dataclass
class WeylDetection:
    sum_abs: float
    p: int
    q: int
    error: float


def weyl_detect(t: float, degree: int, n_max: int, threshold: float,
                q_max: int = 10**4, c_const: float = 10.0) -> WeylDetection | None:
    """If |E_n e(t n^i)| >= threshold, hunt a rational p/q near t.

    Searches continued-fraction convergents with q <= q_max for
    |t - p/q| <= c_const / N^i and reports the witness found (the
    existential constants of the underlying estimate are user config, the
    detector never asserts them).  Returns None when the computed sum stays
    below the threshold or no convergent qualifies.
    """
    if not 0 < threshold <= 1:
        raise ValueError("threshold must lie in (0, 1]")
    if n_max < 10:
        raise ValueError("N must be >= 10")
    from .sequences import PolyInt
    mono = PolyInt(coeffs=(1,) + (0,) * degree)  # n^degree
    s_val = exp_sum([mono], [t % 1.0], n_max)
    if abs(s_val) < threshold:
        return None
    p, q, err = best_rational(t % 1.0, q_max)
    if err <= c_const / float(n_max) ** degree:
        return WeylDetection(sum_abs=abs(s_val), p=p, q=q, error=err)
    return None


# ---------------------------------------------------------------------------
# averaged Cauchy-Schwarz (difference) inequality
# ---------------------------------------------------------------------------


def vdc_bound(vectors: np.ndarray) -> tuple[float, float]:
    """Both sides of the averaged difference inequality.

    `vectors` is (N,) complex scalars or (N, d) complex rows with norm <= 1.
    Returns (lhs, rhs) with

        lhs = || (1/N) sum v_n ||^2
        rhs = (2/N) sum_{m=1..N} Re( (1/N) sum_{n=1..N-m} <v_{n+m}, v_n> ) + 1/N

    and checks lhs <= rhs + 1e-10 (a theorem; a violation is a bug).
    """
    v = np.asarray(vectors, dtype=complex)
    if v.ndim == 1:
        v = v[:, None]
    n = v.shape[0]
    norms = np.sqrt(np.sum(np.abs(v) ** 2, axis=1))
    if np.any(norms > 1.0 + 1e-12):
        raise ValueError(f"vector norm {norms.max():.3e} exceeds 1")
    mean = np.sum(v, axis=0) / n
    lhs = float(np.sum(np.abs(mean) ** 2))
    corr_total = 0.0
    for m in range(1, n):
        corr_total += float(np.real(np.sum(v[m:] * np.conj(v[:-m]))))
    rhs = (2.0 * corr_total + n) / (n * n)
    if lhs > rhs + 1e-10:
        raise AssertionError(f"averaged difference inequality violated: {lhs} > {rhs}")
    return lhs, rhs
