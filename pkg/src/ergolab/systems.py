"""Explicit measure-preserving systems on tori and finite cyclic groups.

A system is one of

  Rotation(alpha_1, ..., alpha_d)   x -> x + alpha  on T^d
  Skew(alpha)                       (x, y) -> (x + alpha, y + x)  on T^2
  Cyclic(r)                         j -> j + 1  on Z_r
  ProductSystem(S_1, ..., S_m)      componentwise on the product space

All preserve the uniform (Haar) probability measure and are invertible;
powers T^n have closed forms, so orbits and pullbacks are evaluated exactly
for any n (positive or negative).

Observables are trigonometric polynomials: finite maps from integer
frequency vectors (one entry per flattened coordinate; for cyclic factors
the entry is a character index mod r) to complex coefficients.  Integrals
and L2 distances are then exact coefficient arithmetic.  A grid-sampled
backend exists for indicator-type observables used in recurrence counts.

Angles can be exact rationals (`Fraction`) or floats.  Phase arithmetic
keeps rational contributions exact and reduces integer*float products mod 1
without rounding (see `numutil.frac_mul_int_float`), so rational resonances
come out exactly resonant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .numutil import (
    PhaseSum,
    detect_rational,
    e,
    frac_mul_int_float,
    frac_mul_int_fraction,
    pairwise_sum,
    parse_angle,
)

Freq = tuple[int, ...]
Point = tuple


class BackendError(ValueError):
    """Raised when an operation gets an unsupported observable backend."""


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------


class TorusSystem:
    """Base interface; concrete kinds implement the closed-form dynamics."""

    dim: int  # number of flattened coordinates

    def iterate(self, point: Point, n: int) -> Point:
        """T^n(point), closed form."""
        raise NotImplementedError

    def monomial_phase(self, k: Freq, n: int) -> PhaseSum:
        """Phase picked up by the monomial e_k under T^n (diagonal part)."""
        raise NotImplementedError

    def monomial_pullback(self, k: Freq, n: int) -> tuple[Freq, PhaseSum]:
        """(new frequency, phase) with T^n e_k = e(phase) * e_new."""
        return k, self.monomial_phase(k, n)

    @property
    def is_diagonal(self) -> bool:
        """True when every monomial is an eigenfunction of T."""
        return True

    def eigenphase(self, k: Freq) -> PhaseSum:
        """Eigenfrequency t of the monomial e_k, i.e. T e_k = e(t) e_k."""
        raise NotImplementedError

    def eigen_generators(self, k_max: int) -> list[Freq]:
        """Frequency vectors generating the spectrum truncation."""
        raise NotImplementedError

    def point_coords(self, point: Point) -> tuple:
        if not isinstance(point, tuple):
            point = (point,)
        if len(point) != self.dim:
            raise ValueError(f"point has {len(point)} coordinates, system needs {self.dim}")
        return point

    def fold_freq(self, k: Freq) -> Freq:
        """Canonical representative of a frequency (cyclic coords mod r)."""
        return k

    def canonicalize(self, f: "Observable") -> "Observable":
        """Fold coefficient keys onto canonical frequencies.

        Needed after products/pullbacks on systems with cyclic factors,
        where e_k and e_{k mod r} are the same character."""
        cs = f._need_trig()
        out: dict[Freq, complex] = {}
        changed = False
        for k, c in cs.items():
            fk = self.fold_freq(k)
            changed = changed or fk != k
            out[fk] = out.get(fk, 0.0) + c
        if not changed:
            return f
        return Observable(coeffs=out, unimodular=f.unimodular)

    def evaluate_monomial(self, k: Freq, point: Point) -> complex:
        raise NotImplementedError

    def kind_label(self) -> str:
        raise NotImplementedError


def _check_angle(a: Fraction | float) -> Fraction | float:
    if isinstance(a, Fraction):
        return a % 1
    a = float(a)
    if not 0.0 <= a < 1.0:
        raise ValueError(f"angle {a} outside [0,1)")
    return a


class Rotation(TorusSystem):
    """Rotation by alpha on T^d: x -> x + alpha mod 1."""

    def __init__(self, *angles: Fraction | float):
        if not angles:
            raise ValueError("rotation needs at least one angle")
        self.angles = tuple(_check_angle(a) for a in angles)
        self.dim = len(self.angles)

    def iterate(self, point: Point, n: int) -> Point:
        coords = self.point_coords(point)
        out = []
        for x, a in zip(coords, self.angles):
            if isinstance(a, Fraction):
                shift = float(frac_mul_int_fraction(n, a))
            else:
                shift = frac_mul_int_float(n, a)
            out.append((x + shift) % 1.0)
        return tuple(out)

    def monomial_phase(self, k: Freq, n: int) -> PhaseSum:
        ph = PhaseSum()
        for ki, a in zip(k, self.angles):
            m = n * ki
            if m == 0:
                continue
            if isinstance(a, Fraction):
                ph.add_fraction(frac_mul_int_fraction(m, a))
            else:
                ph.add_float(frac_mul_int_float(m, a))
        return ph

    def eigenphase(self, k: Freq) -> PhaseSum:
        return self.monomial_phase(k, 1)

    def eigen_generators(self, k_max: int) -> list[Freq]:
        ranges = [range(-k_max, k_max + 1)] * self.dim
        out: list[Freq] = []
        _cartesian(ranges, (), out)
        return out

    def evaluate_monomial(self, k: Freq, point: Point) -> complex:
        coords = self.point_coords(point)
        t = sum(ki * x for ki, x in zip(k, coords))
        return e(t % 1.0)

    def kind_label(self) -> str:
        return "rotation"


class Skew(TorusSystem):
    """Skew product on T^2: (x, y) -> (x + alpha, y + x).

    The n-th power is (x, y) -> (x + n alpha, y + n x + n(n-1)/2 alpha).
    Monomials in y are not eigenfunctions; the diagonal structure lives on
    the x coordinate only.
    """

    dim = 2

    def __init__(self, angle: Fraction | float):
        self.angle = _check_angle(angle)

    def _shift(self, m: int) -> float:
        if isinstance(self.angle, Fraction):
            return float(frac_mul_int_fraction(m, self.angle))
        return frac_mul_int_float(m, self.angle)

    def iterate(self, point: Point, n: int) -> Point:
        x, y = self.point_coords(point)
        tri = n * (n - 1) // 2
        new_x = (x + self._shift(n)) % 1.0
        new_y = (y + (n * x) % 1.0 + self._shift(tri)) % 1.0
        return (new_x, new_y)

    def monomial_phase(self, k: Freq, n: int) -> PhaseSum:
        k1, k2 = k
        tri = n * (n - 1) // 2
        m = n * k1 + tri * k2
        ph = PhaseSum()
        if m != 0:
            if isinstance(self.angle, Fraction):
                ph.add_fraction(frac_mul_int_fraction(m, self.angle))
            else:
                ph.add_float(frac_mul_int_float(m, self.angle))
        return ph

    def monomial_pullback(self, k: Freq, n: int) -> tuple[Freq, PhaseSum]:
        k1, k2 = k
        return (k1 + n * k2, k2), self.monomial_phase(k, n)

    @property
    def is_diagonal(self) -> bool:
        return False

    def eigenphase(self, k: Freq) -> PhaseSum:
        if k[1] != 0:
            raise ValueError(f"monomial {k} depends on the skew coordinate; not an eigenfunction")
        return self.monomial_phase(k, 1)

    def eigen_generators(self, k_max: int) -> list[Freq]:
        return [(k, 0) for k in range(-k_max, k_max + 1)]

    def evaluate_monomial(self, k: Freq, point: Point) -> complex:
        x, y = self.point_coords(point)
        return e((k[0] * x + k[1] * y) % 1.0)

    def kind_label(self) -> str:
        return "skew"


class Cyclic(TorusSystem):
    """Shift j -> j + 1 on Z_r with normalized counting measure."""

    dim = 1

    def __init__(self, order: int):
        if order < 1:
            raise ValueError("cyclic order must be >= 1")
        self.order = order

    def iterate(self, point: Point, n: int) -> Point:
        (j,) = self.point_coords(point)
        return ((int(j) + n) % self.order,)

    def monomial_phase(self, k: Freq, n: int) -> PhaseSum:
        ph = PhaseSum()
        m = (n * k[0]) % self.order
        if m:
            ph.add_fraction(Fraction(m, self.order))
        return ph

    def eigenphase(self, k: Freq) -> PhaseSum:
        return self.monomial_phase(k, 1)

    def eigen_generators(self, k_max: int) -> list[Freq]:
        return [(j,) for j in range(self.order)]

    def fold_freq(self, k: Freq) -> Freq:
        return (k[0] % self.order,)

    def evaluate_monomial(self, k: Freq, point: Point) -> complex:
        (j,) = self.point_coords(point)
        return e(Fraction((k[0] * int(j)) % self.order, self.order))

    def kind_label(self) -> str:
        return "cyclic"


class ProductSystem(TorusSystem):
    """Direct product acting componentwise; coordinates are concatenated."""

    def __init__(self, *factors: TorusSystem):
        if not factors:
            raise ValueError("product needs at least one factor")
        self.factors = tuple(factors)
        self.dim = sum(f.dim for f in factors)
        self._slices = []
        lo = 0
        for f in factors:
            self._slices.append(slice(lo, lo + f.dim))
            lo += f.dim

    def _split(self, seq: Sequence) -> list[tuple]:
        return [tuple(seq[s]) for s in self._slices]

    def iterate(self, point: Point, n: int) -> Point:
        parts = self._split(self.point_coords(point))
        out: list = []
        for f, p in zip(self.factors, parts):
            out.extend(f.iterate(p, n))
        return tuple(out)

    def monomial_phase(self, k: Freq, n: int) -> PhaseSum:
        ph = PhaseSum()
        for f, kp in zip(self.factors, self._split(k)):
            sub = f.monomial_phase(kp, n)
            ph.rat = (ph.rat + sub.rat) % 1
            ph.flt += sub.flt
        return ph

    def monomial_pullback(self, k: Freq, n: int) -> tuple[Freq, PhaseSum]:
        ph = PhaseSum()
        new_k: list[int] = []
        for f, kp in zip(self.factors, self._split(k)):
            nk, sub = f.monomial_pullback(kp, n)
            new_k.extend(nk)
            ph.rat = (ph.rat + sub.rat) % 1
            ph.flt += sub.flt
        return tuple(new_k), ph

    @property
    def is_diagonal(self) -> bool:
        return all(f.is_diagonal for f in self.factors)

    def eigenphase(self, k: Freq) -> PhaseSum:
        ph = PhaseSum()
        for f, kp in zip(self.factors, self._split(k)):
            sub = f.eigenphase(kp)
            ph.rat = (ph.rat + sub.rat) % 1
            ph.flt += sub.flt
        return ph

    def eigen_generators(self, k_max: int) -> list[Freq]:
        parts = [f.eigen_generators(k_max) for f in self.factors]
        out: list[Freq] = []
        _cartesian(parts, (), out, concat=True)
        return out

    def evaluate_monomial(self, k: Freq, point: Point) -> complex:
        coords = self.point_coords(point)
        val = complex(1.0, 0.0)
        for f, kp, pp in zip(self.factors, self._split(k), self._split(coords)):
            val *= f.evaluate_monomial(kp, pp)
        return val

    def fold_freq(self, k: Freq) -> Freq:
        out: list[int] = []
        for f, kp in zip(self.factors, self._split(k)):
            out.extend(f.fold_freq(kp))
        return tuple(out)

    def kind_label(self) -> str:
        return "product"


def _cartesian(pools, prefix, out, concat=False):
    if not pools:
        out.append(tuple(x for part in prefix for x in part) if concat else prefix)
        return
    for item in pools[0]:
        if concat:
            _cartesian(pools[1:], prefix + (item,), out, concat=True)
        else:
            _cartesian(pools[1:], prefix + (item,), out)


# ---------------------------------------------------------------------------
# observables
# ---------------------------------------------------------------------------


class Observable:
    """Trig-polynomial or grid-sampled function on a system's state space."""

    def __init__(self, coeffs: dict[Freq, complex] | None = None,
                 values: np.ndarray | None = None,
                 plan: "SamplePlan | None" = None,
                 unimodular: bool = False):
        if coeffs is not None and values is not None:
            raise ValueError("observable takes either coefficients or samples, not both")
        if coeffs is not None:
            self.kind = "trigpoly"
            self.coeffs = {tuple(k): complex(c) for k, c in coeffs.items() if c != 0}
            self.values = None
            self.plan = None
        elif values is not None:
            if plan is None:
                raise ValueError("grid-sampled observable needs its sample plan")
            values = np.asarray(values, dtype=complex)
            if len(values) != len(plan.points):
                raise ValueError("sample values and plan length differ")
            self.kind = "grid"
            self.coeffs = None
            self.values = values
            self.plan = plan
        else:
            self.kind = "trigpoly"
            self.coeffs = {}
            self.values = None
            self.plan = None
        self.unimodular = unimodular

    # -- constructors ------------------------------------------------------

    @staticmethod
    def monomial(k: Freq, coeff: complex = 1.0) -> "Observable":
        uni = abs(abs(coeff) - 1.0) < 1e-15
        return Observable(coeffs={tuple(k): complex(coeff)}, unimodular=uni)

    @staticmethod
    def constant(c: complex, dim: int = 1) -> "Observable":
        return Observable(coeffs={(0,) * dim: complex(c)})

    # -- algebra (trigpoly only) -------------------------------------------

    def _need_trig(self) -> dict[Freq, complex]:
        if self.kind != "trigpoly":
            raise BackendError("operation supports the trig-polynomial backend only")
        return self.coeffs

    def conjugate(self) -> "Observable":
        cs = self._need_trig()
        return Observable(coeffs={tuple(-x for x in k): c.conjugate() for k, c in cs.items()})

    def __add__(self, other: "Observable") -> "Observable":
        a, b = self._need_trig(), other._need_trig()
        out = dict(a)
        for k, c in b.items():
            out[k] = out.get(k, 0.0) + c
        return Observable(coeffs={k: c for k, c in out.items() if c != 0})

    def __sub__(self, other: "Observable") -> "Observable":
        return self + other.scale(-1.0)

    def scale(self, z: complex) -> "Observable":
        cs = self._need_trig()
        return Observable(coeffs={k: z * c for k, c in cs.items()})

    def __mul__(self, other: "Observable") -> "Observable":
        a, b = self._need_trig(), other._need_trig()
        out: dict[Freq, complex] = {}
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                k = tuple(x + y for x, y in zip(k1, k2))
                out[k] = out.get(k, 0.0) + c1 * c2
        return Observable(coeffs={k: c for k, c in out.items() if c != 0})

    def l2_norm_sq(self) -> float:
        cs = self._need_trig()
        return float(sum(abs(c) ** 2 for c in cs.values()))

    def sup_norm_bound(self) -> float:
        """Triangle-inequality upper bound sum |c_k| (trigpoly)."""
        cs = self._need_trig()
        return float(sum(abs(c) for c in cs.values()))

    def dim_guess(self) -> int:
        cs = self._need_trig()
        for k in cs:
            return len(k)
        return 1

    def max_abs_freq(self) -> int:
        cs = self._need_trig()
        return max((max(abs(x) for x in k) for k in cs if any(k)), default=0)

    def __repr__(self) -> str:
        if self.kind == "trigpoly":
            return f"Observable(trigpoly, {len(self.coeffs)} terms)"
        return f"Observable(grid, {len(self.values)} samples)"


@dataclass
class SamplePlan:
    """Quadrature plan: points with non-negative weights summing to 1."""

    points: list[Point]
    weights: np.ndarray

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if len(self.points) != len(self.weights):
            raise ValueError("points/weights length mismatch")
        if np.any(self.weights < 0):
            raise ValueError("weights must be non-negative")
        if abs(float(np.sum(self.weights)) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")


def uniform_plan(system: TorusSystem, per_coord: int) -> SamplePlan:
    """Uniform product grid; cyclic factors use their own r points."""
    axes: list[list] = []

    def collect(s: TorusSystem):
        if isinstance(s, ProductSystem):
            for f in s.factors:
                collect(f)
        elif isinstance(s, Cyclic):
            axes.append(list(range(s.order)))
        else:
            for _ in range(s.dim):
                axes.append([i / per_coord for i in range(per_coord)])

    collect(system)
    pts: list[Point] = []
    _cartesian([list(a) for a in axes], (), pts)
    w = np.full(len(pts), 1.0 / len(pts))
    return SamplePlan(points=pts, weights=w)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def iterate(system: TorusSystem, point: Point, n: int) -> Point:
    """T^n(point); n may be negative (T is invertible)."""
    return system.iterate(point, n)


def pullback(system: TorusSystem, f: Observable, n: int) -> Observable:
    """T^n f = f o T^n, exactly, for the trig-polynomial backend."""
    cs = f._need_trig()
    out: dict[Freq, complex] = {}
    for k, c in cs.items():
        nk, ph = system.monomial_pullback(k, n)
        nk = system.fold_freq(nk)
        out[nk] = out.get(nk, 0.0) + c * ph.as_complex()
    return Observable(coeffs=out, unimodular=f.unimodular)


def integrate(f: Observable, plan: SamplePlan | None = None) -> complex:
    """Integral against the invariant measure.

    Trig polynomials integrate to their zero-frequency coefficient, exactly;
    grid-sampled observables use their plan's weighted sum.
    """
    if f.kind == "trigpoly":
        for k, c in f.coeffs.items():
            if not any(k):
                return c
        return 0.0 + 0.0j
    plan = plan if plan is not None else f.plan
    if plan is None or len(plan.points) != len(f.values):
        raise ValueError("grid observable needs a matching sample plan")
    return complex(np.sum(f.values * plan.weights))


def evaluate(system: TorusSystem, f: Observable, point: Point) -> complex:
    """Pointwise value of the observable at a state-space point."""
    if f.kind != "trigpoly":
        raise BackendError("pointwise evaluation needs the trig-polynomial backend")
    return complex(pairwise_sum([c * system.evaluate_monomial(k, point)
                                 for k, c in sorted(f.coeffs.items())]))


def l2_distance(f: Observable, g: Observable) -> float:
    """||f - g||_{L2(mu)}; exact coefficient arithmetic for trig polys."""
    if f.kind != g.kind:
        raise BackendError("observables have different backends")
    if f.kind == "trigpoly":
        keys = set(f.coeffs) | set(g.coeffs)
        total = math.fsum(abs(f.coeffs.get(k, 0.0) - g.coeffs.get(k, 0.0)) ** 2 for k in keys)
        return math.sqrt(total)
    if f.plan is not g.plan and len(f.values) != len(g.values):
        raise BackendError("grid observables live on different plans")
    diff = np.abs(f.values - g.values) ** 2
    return float(math.sqrt(abs(np.sum(diff * f.plan.weights))))


def check_unimodular(system: TorusSystem, f: Observable, n_probe: int = 64,
                     tol: float = 1e-10) -> bool:
    """|f| = 1 on a deterministic probe grid."""
    rng = np.random.Generator(np.random.Philox(key=7, counter=0))
    for _ in range(n_probe):
        pt = _random_point(system, rng)
        if abs(abs(evaluate(system, f, pt)) - 1.0) > tol:
            return False
    return True


def _random_point(system: TorusSystem, rng: np.random.Generator) -> Point:
    coords: list = []

    def fill(s: TorusSystem):
        if isinstance(s, ProductSystem):
            for f in s.factors:
                fill(f)
        elif isinstance(s, Cyclic):
            coords.append(int(rng.integers(0, s.order)))
        else:
            coords.extend(float(x) for x in rng.random(s.dim))

    fill(system)
    return tuple(coords)


# ---------------------------------------------------------------------------
# spectrum and eigenfunctions
# ---------------------------------------------------------------------------


@dataclass
class SpectrumEntry:
    value: float                 # t in [0,1)
    rational: Fraction | None    # exact p/q when rational, else None
    generator: Freq

    @property
    def is_rational(self) -> bool:
        return self.rational is not None


@dataclass
class SpectrumSet:
    """Finite truncation of the eigenvalue frequencies of the system."""

    entries: list[SpectrumEntry]
    k_max: int

    def values(self) -> list[float]:
        return [en.value for en in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


def spectrum(system: TorusSystem, k_max: int) -> SpectrumSet:
    """Eigenfrequencies {t : T chi = e(t) chi} truncated at generator size k_max.

    Rationality tags are exact for angles entered as rationals; float angles
    fall back to continued-fraction detection with denominator bound 10^6.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    seen: dict = {}
    for gen in system.eigen_generators(k_max):
        ph = system.eigenphase(gen)
        if ph.flt == 0.0:
            rat: Fraction | None = ph.rat % 1
            val = float(rat)
        else:
            val = ph.value()
            rat = detect_rational(val)
        key = rat if rat is not None else round(val, 12)
        if key not in seen:
            seen[key] = SpectrumEntry(value=val, rational=rat, generator=gen)
    entries = sorted(seen.values(), key=lambda en: en.value)
    if not any(en.value == 0.0 for en in entries):
        raise AssertionError("spectrum is missing 0")
    return SpectrumSet(entries=entries, k_max=k_max)


@dataclass
class EigenfunctionSpec:
    frequency: float
    rational: Fraction | None
    chi: Observable
    generator: Freq


def eigenfunction(system: TorusSystem, generator: Freq) -> EigenfunctionSpec:
    """chi = e(k.x) (or cyclic character) with T chi = e(t) chi."""
    ph = system.eigenphase(tuple(generator))  # raises if not an eigenfunction
    chi = Observable.monomial(tuple(generator), 1.0)
    rat = ph.rat % 1 if ph.flt == 0.0 else None
    return EigenfunctionSpec(frequency=ph.value(), rational=rat,
                             chi=chi, generator=tuple(generator))


def eigenfunction_check(system: TorusSystem, spec: EigenfunctionSpec,
                        tol: float = 1e-12) -> bool:
    """pullback(chi, 1) == e(t) chi coefficientwise within tol."""
    lhs = pullback(system, spec.chi, 1)
    rhs = spec.chi.scale(e(spec.rational if spec.rational is not None else spec.frequency))
    keys = set(lhs.coeffs) | set(rhs.coeffs)
    return all(abs(lhs.coeffs.get(k, 0.0) - rhs.coeffs.get(k, 0.0)) <= tol for k in keys)


# ---------------------------------------------------------------------------
# plain-text serialization
# ---------------------------------------------------------------------------


def _angle_text(a: Fraction | float) -> str:
    if isinstance(a, Fraction):
        return f"{a.numerator}/{a.denominator}"
    return repr(a)


def system_to_text(system: TorusSystem) -> str:
    """Structured text: kind line plus angle/order lines (factors indented)."""
    if isinstance(system, Rotation):
        return "rotation " + " ".join(_angle_text(a) for a in system.angles)
    if isinstance(system, Skew):
        return "skew " + _angle_text(system.angle)
    if isinstance(system, Cyclic):
        return f"cyclic {system.order}"
    if isinstance(system, ProductSystem):
        return "product " + " | ".join(system_to_text(f) for f in system.factors)
    raise TypeError(f"unknown system {system!r}")


def system_from_text(text: str) -> TorusSystem:
    text = text.strip()
    head, _, rest = text.partition(" ")
    head = head.lower()
    if head == "rotation":
        parts = rest.split()
        if not parts:
            raise ValueError("rotation needs angles")
        return Rotation(*[parse_angle(p) for p in parts])
    if head == "skew":
        return Skew(parse_angle(rest))
    if head == "cyclic":
        return Cyclic(int(rest))
    if head == "product":
        factors = [system_from_text(part) for part in rest.split("|")]
        return ProductSystem(*factors)
    raise ValueError(f"unknown system kind {head!r}")


def observable_to_text(f: Observable) -> str:
    """Coefficient table, one line per monomial: 'k1,...,kd re im'."""
    cs = f._need_trig()
    lines = []
    for k in sorted(cs):
        c = cs[k]
        lines.append(f"{','.join(str(x) for x in k)} {c.real!r} {c.imag!r}")
    return "\n".join(lines)


def observable_from_text(text: str) -> Observable:
    coeffs: dict[Freq, complex] = {}
    for line in text.strip().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        k_part, re_part, im_part = line.split()
        k = tuple(int(x) for x in k_part.split(","))
        coeffs[k] = complex(float(re_part), float(im_part))
    return Observable(coeffs=coeffs)
