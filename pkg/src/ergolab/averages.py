"""Multiple ergodic averages and recurrence counts on explicit systems.

The central quantity is the finite average

    A_N = (1/N) sum_{n=1..N}  T^{a_1(n)} f_1 * ... * T^{a_l(n)} f_l

held as a trig polynomial.  On diagonal systems (rotations, cyclic shifts,
products of those) every monomial is an eigenfunction, so A_N collapses to
one exponential-sum coefficient per monomial combination and the whole
schedule is computed in a single pass over n with exact mod-1 phase
arithmetic.  The skew product needs genuine per-n polynomial products and
a frequency cap with truncation-mass accounting (pullbacks grow the x
frequency linearly in n).

The convergence diagnostic classifies the distance series
||A_N - prod_j integral(f_j)|| as converging-to-product / obstructed /
inconclusive under fixed finite-N acceptance rules (the underlying
statements are limit theorems; the rules are pinned here so runs are
reproducible pass/fail gates).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .numutil import TWO_PI, detect_rational, frac_mul_int_float, frac_mul_int_fraction
from .sequences import SequenceSpec, filtered_indices, seq_eval
from .systems import Cyclic, Freq, Observable, ProductSystem, Rotation, \
    TorusSystem, integrate, l2_distance, pullback

DEFAULT_DEGREE_CAP = 64


class TruncationError(RuntimeError):
    """Truncated L2 mass exceeded 10% of the total."""


class PreconditionError(ValueError):
    """A documented operation precondition failed."""


# ---------------------------------------------------------------------------
# phase arrays for diagonal systems
# ---------------------------------------------------------------------------


def _phase_frac_array(system: TorusSystem, k: Freq, values: Sequence[int]) -> np.ndarray:
    """Fractional phases of T^{m} e_k for m in values, exact per entry."""
    total = np.zeros(len(values), dtype=float)

    def add_rotation(angles, ks):
        for ki, a in zip(ks, angles):
            if ki == 0:
                continue
            if isinstance(a, Fraction):
                p, q = a.numerator, a.denominator
                total_part = np.array(
                    [(((m * ki) % q) * p % q) / q for m in values], dtype=float)
            else:
                total_part = np.array(
                    [frac_mul_int_float(m * ki, a) for m in values], dtype=float)
            np.add(total, total_part, out=total)

    def walk(s: TorusSystem, ks: tuple):
        if isinstance(s, ProductSystem):
            lo = 0
            for f in s.factors:
                walk(f, ks[lo:lo + f.dim])
                lo += f.dim
        elif isinstance(s, Rotation):
            add_rotation(s.angles, ks)
        elif isinstance(s, Cyclic):
            (j,) = ks
            if j % s.order:
                r = s.order
                part = np.array([((m * j) % r) / r for m in values], dtype=float)
                np.add(total, part, out=total)
        else:
            raise TypeError("phase arrays exist only for diagonal systems")

    walk(system, tuple(k))
    return total


def _combo_iter(supports: list[list[tuple[Freq, complex]]]):
    """All monomial combinations across the observables' supports."""
    if not supports:
        yield (), complex(1.0)
        return
    head, *tail = supports
    for k, c in head:
        for ks, cs in _combo_iter(tail):
            yield (k,) + ks, c * cs


@dataclass
class AverageSeries:
    """A_N snapshots: frequency -> complex coefficient arrays per schedule."""

    schedule: list[int]
    coeff_series: dict[Freq, np.ndarray]   # each array indexed like schedule
    truncated_mass: list[float]            # L2 mass dropped, per schedule point

    def snapshot(self, idx: int) -> Observable:
        return Observable(coeffs={k: complex(v[idx]) for k, v in self.coeff_series.items()
                                  if v[idx] != 0})


def _multi_average_series(system: TorusSystem, seqs: Sequence[SequenceSpec],
                          observables: Sequence[Observable], schedule: Sequence[int],
                          degree_cap: int = DEFAULT_DEGREE_CAP) -> AverageSeries:
    if len(seqs) != len(observables):
        raise ValueError("need one sequence per observable")
    schedule = sorted(set(int(n) for n in schedule))
    if schedule[0] < 1:
        raise ValueError("N must be >= 1")
    for f in observables:
        f._need_trig()
    if system.is_diagonal:
        return _diagonal_series(system, seqs, observables, schedule, degree_cap)
    return _generic_series(system, seqs, observables, schedule, degree_cap)


def _diagonal_series(system, seqs, observables, schedule, degree_cap) -> AverageSeries:
    n_max = schedule[-1]
    supports = [sorted(f.coeffs.items()) for f in observables]
    combos = list(_combo_iter(supports))
    if len(combos) > 20000:
        raise ValueError(f"{len(combos)} monomial combinations; shrink the observables")

    n_values = list(range(1, n_max + 1))
    seq_values = [[seq_eval(s, n) for n in n_values] for s in seqs]

    # phase arrays per (observable, monomial), shared across combos
    phase_cache: dict[tuple[int, Freq], np.ndarray] = {}
    for j, support in enumerate(supports):
        for k, _ in support:
            phase_cache[(j, k)] = _phase_frac_array(system, k, seq_values[j])

    cuts = sorted(set([0] + schedule))
    coeff_series: dict[Freq, np.ndarray] = {}
    for ks, coef in combos:
        key = system.fold_freq(tuple(sum(x) for x in zip(*ks)))
        total_phase = np.zeros(n_max, dtype=float)
        for j, k in enumerate(ks):
            np.add(total_phase, phase_cache[(j, k)], out=total_phase)
        z = np.exp((TWO_PI * 1j) * np.mod(total_phase, 1.0))
        # prefix sums at schedule points, pairwise within segments
        running = 0.0 + 0.0j
        prefixes = np.empty(len(schedule), dtype=complex)
        idx = 0
        for lo, hi in zip(cuts[:-1], cuts[1:]):
            running += complex(np.sum(z[lo:hi]))
            if hi == schedule[idx]:
                prefixes[idx] = running / hi
                idx += 1
        if key in coeff_series:
            coeff_series[key] = coeff_series[key] + coef * prefixes
        else:
            coeff_series[key] = coef * prefixes

    kept: dict[Freq, np.ndarray] = {}
    dropped_mass = np.zeros(len(schedule))
    for key, series in coeff_series.items():
        if max(abs(x) for x in key) > degree_cap:
            dropped_mass += np.abs(series) ** 2
        else:
            kept[key] = series
    total_mass = dropped_mass.copy()
    for series in kept.values():
        total_mass += np.abs(series) ** 2
    _check_truncation(dropped_mass, total_mass)
    return AverageSeries(schedule=schedule, coeff_series=kept,
                         truncated_mass=[float(x) for x in dropped_mass])


def _generic_series(system, seqs, observables, schedule, degree_cap) -> AverageSeries:
    n_max = schedule[-1]
    acc: dict[Freq, complex] = {}
    dropped: dict[Freq, complex] = {}
    snapshots: list[dict[Freq, complex]] = []
    drop_snapshots: list[float] = []
    sched_set = set(schedule)
    for n in range(1, n_max + 1):
        prod: Observable | None = None
        for s, f in zip(seqs, observables):
            pb = pullback(system, f, seq_eval(s, n))
            prod = pb if prod is None else prod * pb
        prod = system.canonicalize(prod)
        for k, c in prod.coeffs.items():
            if max(abs(x) for x in k) > degree_cap:
                dropped[k] = dropped.get(k, 0.0) + c
                if len(dropped) > 2_000_000:
                    raise TruncationError(
                        "truncated-frequency table exploded; lower N or the observables")
            else:
                acc[k] = acc.get(k, 0.0) + c
        if n in sched_set:
            snapshots.append({k: c / n for k, c in acc.items()})
            drop_snapshots.append(sum(abs(c / n) ** 2 for c in dropped.values()))
    keys = set()
    for snap in snapshots:
        keys |= set(snap)
    coeff_series = {k: np.array([snap.get(k, 0.0) for snap in snapshots], dtype=complex)
                    for k in keys}
    total_mass = np.array(drop_snapshots)
    for series in coeff_series.values():
        total_mass = total_mass + np.abs(series) ** 2
    _check_truncation(np.array(drop_snapshots), total_mass)
    return AverageSeries(schedule=schedule, coeff_series=coeff_series,
                         truncated_mass=drop_snapshots)


def _check_truncation(dropped: np.ndarray, total: np.ndarray) -> None:
    bad = (dropped > 0.1 * np.maximum(total, 1e-300)) & (dropped > 1e-12)
    if np.any(bad):
        raise TruncationError(
            "truncated L2 mass exceeds 10% of the total; use smaller observables "
            "or a larger degree cap")


def multi_average(system: TorusSystem, seqs: Sequence[SequenceSpec],
                  observables: Sequence[Observable], n_max: int,
                  degree_cap: int = DEFAULT_DEGREE_CAP) -> tuple[Observable, float]:
    """A_N as a trig polynomial plus the truncated L2 mass."""
    series = _multi_average_series(system, seqs, observables, [n_max], degree_cap)
    return series.snapshot(0), series.truncated_mass[0]


# ---------------------------------------------------------------------------
# convergence diagnostics
# ---------------------------------------------------------------------------


@dataclass
class AverageReport:
    schedule: list[int]
    distances: list[float]
    verdict: str                    # converging-to-product | obstructed | inconclusive
    witness: Observable | None      # stable nonzero limit, when obstructed
    target: complex                 # the product of integrals checked against
    tolerance: float
    truncated_mass: list[float]
    note: str = ""

    def final_distance(self) -> float:
        return self.distances[-1]


def _distance_to_constant(series: AverageSeries, idx: int, target: complex) -> float:
    total = 0.0
    has_zero_freq = False
    for k, arr in series.coeff_series.items():
        v = arr[idx]
        if not any(k):
            v = v - target
            has_zero_freq = True
        total += abs(v) ** 2
    if not has_zero_freq:
        total += abs(target) ** 2
    return math.sqrt(total)


def _classify(series: AverageSeries, schedule, distances, tol) -> tuple[str, Observable | None]:
    final = distances[-1]
    first = distances[0]
    if final <= tol and final <= 0.5 * first + 1e-14:
        return "converging-to-product", None
    if final > tol and len(schedule) >= 2:
        last = series.snapshot(len(schedule) - 1)
        prev = series.snapshot(len(schedule) - 2)
        wobble = l2_distance(last, prev)
        if wobble <= max(0.05 * final, 0.01):
            return "obstructed", last
    return "inconclusive", None


def joint_ergodicity_diagnostic(system: TorusSystem, seqs: Sequence[SequenceSpec],
                                observables: Sequence[Observable],
                                schedule: Sequence[int], tol: float = 0.05,
                                degree_cap: int = DEFAULT_DEGREE_CAP) -> AverageReport:
    """Distance of A_N to the product of integrals along the schedule.

    The verdict only certifies the equidistribution side of the joint
    ergodicity criterion on this instance; whether equidistribution alone
    suffices in general is open, and the report says so.
    """
    series = _multi_average_series(system, seqs, observables, schedule, degree_cap)
    target = complex(np.prod([integrate(f) for f in observables]))
    distances = [_distance_to_constant(series, i, target) for i in range(len(series.schedule))]
    verdict, witness = _classify(series, series.schedule, distances, tol)
    return AverageReport(schedule=series.schedule, distances=distances, verdict=verdict,
                         witness=witness, target=target, tolerance=tol,
                         truncated_mass=series.truncated_mass,
                         note="instance-level check; seminorm-estimate hypothesis not "
                              "verified (open whether equidistribution alone suffices)")


# ---------------------------------------------------------------------------
# rational-eigenfunction projection
# ---------------------------------------------------------------------------


def krat_projection(system: TorusSystem, f: Observable, q_max: int = 10**6) -> Observable:
    """Projection onto the span of eigenfunctions with rational frequency.

    Keeps exactly the monomials whose eigenfrequency is rational with
    denominator <= q_max.  Monomials that are not eigenfunctions at all
    (skew-coordinate frequencies) project to zero.
    """
    cs = f._need_trig()
    kept: dict[Freq, complex] = {}
    for k, c in cs.items():
        try:
            ph = system.eigenphase(k)
        except ValueError:
            continue
        if ph.flt == 0.0:
            if ph.rat.denominator <= q_max:
                kept[k] = c
        else:
            rat = detect_rational(ph.value(), q_max)
            if rat is not None:
                kept[k] = c
    return Observable(coeffs=kept)


def fw_residual_test(system: TorusSystem, f1: Observable, f2: Observable,
                     schedule: Sequence[int], tol: float = 0.05,
                     q_max: int = 10**6,
                     degree_cap: int = DEFAULT_DEGREE_CAP) -> AverageReport:
    """Decay of E_n T^n f1 * T^{n^2} f2 when a rational projection vanishes.

    Precondition (checked): krat_projection of f1 or of f2 is zero; the
    average is then expected to die, and the report tracks ||A_N|| itself.
    """
    from .sequences import PolyInt
    p1 = math.sqrt(krat_projection(system, f1, q_max).l2_norm_sq())
    p2 = math.sqrt(krat_projection(system, f2, q_max).l2_norm_sq())
    if p1 > 1e-10 and p2 > 1e-10:
        raise PreconditionError(
            f"both rational projections are nonzero (norms {p1:.3e}, {p2:.3e}); "
            "the decay statement does not apply")
    seqs = [PolyInt(coeffs=(1, 0)), PolyInt(coeffs=(1, 0, 0))]
    series = _multi_average_series(system, seqs, [f1, f2], schedule, degree_cap)
    distances = [_distance_to_constant(series, i, 0.0) for i in range(len(series.schedule))]
    verdict, witness = _classify(series, series.schedule, distances, tol)
    return AverageReport(schedule=series.schedule, distances=distances, verdict=verdict,
                         witness=witness, target=0.0, tolerance=tol,
                         truncated_mass=series.truncated_mass)


# ---------------------------------------------------------------------------
# indicator sets and recurrence averages
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Arc:
    """[lo, hi) on the circle, 0 <= lo <= hi <= 1; measure hi - lo exactly."""
    lo: float
    hi: float

    def __post_init__(self):
        if not (0.0 <= self.lo <= self.hi <= 1.0):
            raise ValueError("arc needs 0 <= lo <= hi <= 1")

    @property
    def measure(self) -> float:
        return self.hi - self.lo

    def describe(self) -> str:
        return f"arc[{self.lo},{self.hi})"


@dataclass(frozen=True)
class Box:
    """Product of arcs on a torus of matching dimension; exact measure."""
    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        for lo, hi in self.intervals:
            if not (0.0 <= lo <= hi <= 1.0):
                raise ValueError("box intervals need 0 <= lo <= hi <= 1")

    @property
    def measure(self) -> float:
        out = 1.0
        for lo, hi in self.intervals:
            out *= hi - lo
        return out

    def describe(self) -> str:
        return "box" + "x".join(f"[{lo},{hi})" for lo, hi in self.intervals)


@dataclass(frozen=True)
class CyclicSubset:
    indices: tuple[int, ...]

    def describe(self) -> str:
        return "cyclic{" + ",".join(str(i) for i in self.indices) + "}"


@dataclass(frozen=True)
class GridMask:
    """Union of grid cells [j/M, (j+1)/M) given by a boolean mask."""
    mask: tuple[bool, ...]

    def describe(self) -> str:
        return f"mask[{sum(self.mask)}/{len(self.mask)}]"


IndicatorSet = Arc | Box | CyclicSubset | GridMask


@dataclass
class RecurrenceReport:
    set_description: str
    mu_a: float
    schedule: list[int]
    averages: list[float]
    lower_bound: float            # mu(A)^(l+1)
    margins: list[float]
    quadrature_bound: float
    filter_modulus: int | None = None
    filter_density: float | None = None


def _int_ranges_from_arc(lo: float, hi: float, m: int) -> list[tuple[int, int]]:
    """Grid indices i with i/m in [lo, hi), as half-open integer ranges."""
    lo_i = math.ceil(Fraction(lo) * m)
    hi_i = math.ceil(Fraction(hi) * m)
    if lo_i >= hi_i:
        return []
    return [(lo_i, hi_i)]


def _shift_ranges(ranges: list[tuple[int, int]], shift: int, m: int) -> list[tuple[int, int]]:
    """Indices i with (i + shift) mod m in the ranges."""
    out = []
    for a, b in ranges:
        a2, b2 = a - shift, b - shift
        a2m = a2 % m
        width = b - a
        if a2m + width <= m:
            out.append((a2m, a2m + width))
        else:
            out.append((a2m, m))
            out.append((0, a2m + width - m))
    return out


def _intersect_ranges(xs: list[tuple[int, int]], ys: list[tuple[int, int]]):
    out = []
    for a, b in xs:
        for c, d in ys:
            lo, hi = max(a, c), min(b, d)
            if lo < hi:
                out.append((lo, hi))
    return out


def _count_ranges(rs: list[tuple[int, int]]) -> int:
    return sum(b - a for a, b in rs)


def recurrence_average(system: TorusSystem, indicator: IndicatorSet,
                       seqs: Sequence[SequenceSpec], schedule: Sequence[int],
                       grid_m: int = 1 << 12,
                       restrict_to: Sequence[int] | None = None) -> RecurrenceReport:
    """Averages of mu(A and T^{-a_1(n)}A and ... and T^{-a_l(n)}A) over n<=N.

    Grid evaluation: count grid points x with x in A and T^{a_j(n)} x in A
    for every j.  Exact interval/index arithmetic; the only error against
    the true measure is the O(l/M) boundary effect, reported as
    `quadrature_bound`.
    """
    schedule = sorted(set(int(n) for n in schedule))
    ell = len(seqs)
    if isinstance(indicator, CyclicSubset):
        if not isinstance(system, Cyclic):
            raise ValueError("cyclic subsets need a cyclic system")
        m = system.order
        base_mask = np.zeros(m, dtype=bool)
        base_mask[list(indicator.indices)] = True
        mu_a = float(base_mask.sum()) / m
        count_fn = _mask_count_fn(base_mask, m)
        shift_of_n = _integer_shift_fn(system, seqs, m)
        quad = 0.0
    elif isinstance(indicator, GridMask):
        if grid_m < 1 << 10:
            raise ValueError("grid size must be at least 2^10")
        m = len(indicator.mask)
        base_mask = np.array(indicator.mask, dtype=bool)
        mu_a = float(base_mask.sum()) / m
        count_fn = _mask_count_fn(base_mask, m)
        shift_of_n = _rotation_cell_shift_fn(system, seqs, m)
        quad = 2.0 * (ell + 1) / m
    elif isinstance(indicator, Arc):
        if grid_m < 1 << 10:
            raise ValueError("grid size must be at least 2^10")
        if not isinstance(system, Rotation) or system.dim != 1:
            raise ValueError("arc indicators are for one-dimensional rotations")
        m = grid_m
        base = _int_ranges_from_arc(indicator.lo, indicator.hi, m)
        mu_a = indicator.measure
        count_fn, shift_of_n = None, None
        quad = 2.0 * (ell + 1) / m
    elif isinstance(indicator, Box):
        if grid_m < 1 << 10:
            raise ValueError("grid size must be at least 2^10")
        if not isinstance(system, Rotation) or system.dim != len(indicator.intervals):
            raise ValueError("box indicators need a rotation of matching dimension")
        return _box_recurrence(system, indicator, seqs, schedule, grid_m, restrict_to)
    else:
        raise TypeError(f"unsupported indicator {indicator!r}")

    n_max = schedule[-1]
    ns = list(restrict_to) if restrict_to is not None else list(range(1, n_max + 1))

    averages: list[float] = []
    if isinstance(indicator, Arc):
        alpha = system.angles[0]
        counts = []
        for n in ns:
            ranges = base
            for s in seqs:
                a_n = seq_eval(s, n)
                if isinstance(alpha, Fraction):
                    c = float(frac_mul_int_fraction(a_n, alpha))
                else:
                    c = frac_mul_int_float(a_n, alpha)
                # membership of x_i + c: i/m in [lo - c, hi - c) mod 1
                shifted = _arc_minus_shift(indicator, c, m)
                ranges = _intersect_ranges(ranges, shifted)
                if not ranges:
                    break
            counts.append(_count_ranges(ranges))
        averages = _prefix_means(counts, ns, schedule, m)
    else:
        counts = []
        for n in ns:
            shifts = shift_of_n(n)
            counts.append(count_fn(shifts))
        averages = _prefix_means(counts, ns, schedule, m)

    bound = mu_a ** (ell + 1)
    margins = [a - bound for a in averages]
    return RecurrenceReport(set_description=indicator.describe(), mu_a=mu_a,
                            schedule=schedule, averages=averages, lower_bound=bound,
                            margins=margins, quadrature_bound=quad)


def _arc_minus_shift(indicator: Arc, c: float, m: int) -> list[tuple[int, int]]:
    """Indices i with (i/m + c) mod 1 in [lo, hi)."""
    lo, hi = (indicator.lo - c) % 1.0, (indicator.hi - c) % 1.0
    if indicator.measure >= 1.0:
        return [(0, m)]
    if lo <= hi:
        return _int_ranges_from_arc(lo, hi, m)
    return _int_ranges_from_arc(lo, 1.0, m) + _int_ranges_from_arc(0.0, hi, m)


def _box_recurrence(system: Rotation, box: Box, seqs, schedule, grid_m: int,
                    restrict_to) -> RecurrenceReport:
    """Boxes on d-dim rotations factor per coordinate: the joint count is
    the product of one-dimensional interval-intersection counts."""
    ell = len(seqs)
    arcs = [Arc(lo, hi) for lo, hi in box.intervals]
    bases = [_int_ranges_from_arc(a.lo, a.hi, grid_m) for a in arcs]
    n_max = schedule[-1]
    ns = list(restrict_to) if restrict_to is not None else list(range(1, n_max + 1))
    counts = []
    for n in ns:
        total = 1
        shifts = [seq_eval(s, n) for s in seqs]
        for coord, (arc, base) in enumerate(zip(arcs, bases)):
            alpha = system.angles[coord]
            ranges = base
            for a_n in shifts:
                if isinstance(alpha, Fraction):
                    c = float(frac_mul_int_fraction(a_n, alpha))
                else:
                    c = frac_mul_int_float(a_n, alpha)
                ranges = _intersect_ranges(ranges, _arc_minus_shift(arc, c, grid_m))
                if not ranges:
                    break
            total *= _count_ranges(ranges)
            if total == 0:
                break
        counts.append(total)
    dim = len(arcs)
    averages = _prefix_means(counts, ns, schedule, grid_m ** dim)
    mu_a = box.measure
    bound = mu_a ** (ell + 1)
    return RecurrenceReport(set_description=box.describe(), mu_a=mu_a,
                            schedule=schedule, averages=averages, lower_bound=bound,
                            margins=[a - bound for a in averages],
                            quadrature_bound=2.0 * dim * (ell + 1) / grid_m)


def _prefix_means(counts: list[int], ns: list[int], schedule: list[int], m: int) -> list[float]:
    """Mean count/m over the n in ns up to each schedule point."""
    out = []
    total = 0
    seen = 0
    idx = 0
    for n, c in zip(ns, counts):
        while idx < len(schedule) and n > schedule[idx]:
            out.append(total / (m * seen) if seen else 0.0)
            idx += 1
        total += c
        seen += 1
    while idx < len(schedule):
        out.append(total / (m * seen) if seen else 0.0)
        idx += 1
    return out


def _mask_count_fn(base_mask: np.ndarray, m: int) -> Callable[[list[int]], int]:
    def count(shifts: list[int]) -> int:
        sel = base_mask
        for sh in shifts:
            sel = sel & np.roll(base_mask, -sh)
            if not sel.any():
                return 0
        return int(sel.sum())
    return count


def _integer_shift_fn(system: Cyclic, seqs, m: int):
    def shifts(n: int) -> list[int]:
        return [seq_eval(s, n) % m for s in seqs]
    return shifts


def _rotation_cell_shift_fn(system: TorusSystem, seqs, m: int):
    if not isinstance(system, Rotation) or system.dim != 1:
        raise ValueError("grid masks are for one-dimensional rotations")
    alpha = system.angles[0]

    def shifts(n: int) -> list[int]:
        out = []
        for s in seqs:
            a_n = seq_eval(s, n)
            if isinstance(alpha, Fraction):
                c = float(frac_mul_int_fraction(a_n, alpha))
            else:
                c = frac_mul_int_float(a_n, alpha)
            out.append(int(math.floor(c * m)))
        return out
    return shifts


def recurrence_filtered(system: TorusSystem, indicator: IndicatorSet,
                        seqs: Sequence[SequenceSpec], modulus: int,
                        schedule: Sequence[int], grid_m: int = 1 << 12) -> RecurrenceReport:
    """Recurrence averages over S_r = {n : every a_j(n) = 0 mod r}."""
    schedule = sorted(set(int(n) for n in schedule))
    n_max = schedule[-1]
    good = filtered_indices(seqs, modulus, n_max)
    if not good:
        raise ValueError(f"no n <= {n_max} has all sequence values divisible by {modulus}")
    report = recurrence_average(system, indicator, seqs, schedule, grid_m,
                                restrict_to=good)
    report.filter_modulus = modulus
    report.filter_density = len(good) / n_max
    return report
