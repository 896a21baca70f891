"""Translation flows on tori and time-changed flow averages.

A FlowSystem is a list of commuting translation flows on a shared torus:
T_j^t x = x + t v_j mod 1.  Time changes are Hardy-style sums
gamma * t^b * (log t)^e (b > 0) plus exponential terms gamma * beta^t.

For trig-polynomial observables the flow average

    (1/y) int_0^y  f_1(T_1^{a_1(t)} x) ... f_l(T_l^{a_l(t)} x) dt

reduces per monomial combination to int e(psi(t)) dt with
psi(t) = sum_j (k_j . v_j) a_j(t): a one-dimensional oscillatory integral.
It is evaluated by composite 16-point Gauss-Legendre panels sized so the
phase varies at most a quarter cycle per panel (derivative-based uniform
panels within dyadic blocks).  When the phase derivative is monotone and
enormous (exponential time changes), the tail beyond psi' = lambda_max is
bounded by the first-derivative test |int e(psi)| <= 1/(pi lambda) instead
of being enumerated; the bound goes into the reported error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .numutil import TWO_PI, counter_rng, e, gauss_legendre
from .systems import Freq, Observable

DEFAULT_LAMBDA_MAX = 1e6
DEFAULT_PANEL_BUDGET = 10**8


class PanelBudgetError(RuntimeError):
    def __init__(self, panels: int, budget: int):
        super().__init__(
            f"oscillatory integral needs ~{panels:.3g} quarter-cycle panels "
            f"(budget {budget:.3g}); use a smaller upper limit y")


class HypothesisError(ValueError):
    """A growth hypothesis on the time changes fails."""


# ---------------------------------------------------------------------------
# time changes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HardyTimeChange:
    """Sum of gamma * t^b * (log t)^e terms (b > 0) and gamma * beta^t terms.

    Monotone increase on the working range is checked numerically, not
    proved.  Log terms push the domain start to t >= 2.
    """

    power_terms: tuple[tuple[float, float, float], ...] = ()
    exp_terms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        for _, b, _ in self.power_terms:
            if not b > 0:
                raise ValueError(f"power exponent {b} must be positive")
        for _, beta in self.exp_terms:
            if not beta > 1:
                raise ValueError(f"exponential base {beta} must exceed 1")
        if not self.power_terms and not self.exp_terms:
            raise ValueError("time change needs at least one term")

    @property
    def t_min(self) -> float:
        return 2.0 if any(e_ != 0 for _, _, e_ in self.power_terms) else 0.0

    def value(self, t: float) -> float:
        total = 0.0
        for g, b, e_ in self.power_terms:
            if t == 0.0:
                continue
            term = g * t ** b
            if e_ != 0:
                term *= math.log(t) ** e_
            total += term
        for g, beta in self.exp_terms:
            total += g * beta ** t
        return total

    def derivative(self, t: float) -> float:
        total = 0.0
        for g, b, e_ in self.power_terms:
            if t == 0.0:
                total += math.inf if b < 1 and g != 0 else (g if b == 1 and e_ == 0 else 0.0)
                continue
            term = g * b * t ** (b - 1)
            if e_ != 0:
                lg = math.log(t)
                term *= lg ** e_
                term += g * e_ * t ** (b - 1) * lg ** (e_ - 1)
            total += term
        for g, beta in self.exp_terms:
            total += g * math.log(beta) * beta ** t
        return total

    def check_monotone(self, lo: float, hi: float, n_probe: int = 64) -> bool:
        lo = max(lo, self.t_min, 1e-9)
        ts = np.geomspace(lo, max(hi, lo * 1.01), n_probe)
        vals = [self.value(float(t)) for t in ts]
        return all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))

    def leading(self) -> tuple[str, float]:
        """('exp', max base) or ('power', max exponent) of nonzero terms."""
        bases = [beta for g, beta in self.exp_terms if g != 0]
        if bases:
            return ("exp", max(bases))
        exps = [b for g, b, _ in self.power_terms if g != 0]
        return ("power", max(exps))

    def label(self) -> str:
        parts = []
        for g, b, e_ in self.power_terms:
            s = f"{g!r}*t^{b!r}"
            if e_ != 0:
                s += f"*log^{e_!r}"
            parts.append(s)
        for g, beta in self.exp_terms:
            parts.append(f"{g!r}*{beta!r}^t")
        return "+".join(parts).replace("+-", "-")


def parse_time_change(text: str) -> HardyTimeChange:
    """Grammar: 't^1.5', '2*t^0.5*log^1 + t', '2^t', 't^2+0.5*3^t'."""
    power_terms = []
    exp_terms = []
    body = text.strip().replace(" ", "")
    chunks = []
    cur = ""
    for ch in body:
        if ch in "+-" and cur and not cur.endswith(("e", "E", "^", "*")):
            chunks.append(cur)
            cur = ch
        else:
            cur += ch
    if cur:
        chunks.append(cur)
    for chunk in chunks:
        coef = 1.0
        while chunk and chunk[0] in "+-":
            if chunk[0] == "-":
                coef = -coef
            chunk = chunk[1:]
        factors = chunk.split("*")
        b = None
        e_log = 0.0
        beta = None
        for i, fac in enumerate(factors):
            if fac in ("", "+"):
                continue
            if fac == "-":
                coef = -coef
                continue
            if fac == "t":
                b = 1.0
            elif fac.startswith("t^"):
                b = float(fac[2:])
            elif fac.startswith("log"):
                rest = fac[3:]
                e_log = 1.0 if rest == "" else float(rest[1:])
            elif fac.endswith("^t"):
                beta = float(fac[:-2])
            else:
                if i == 0:
                    coef *= float(fac)
                else:
                    raise ValueError(f"bad time-change factor {fac!r} in {text!r}")
        if beta is not None:
            exp_terms.append((coef, beta))
        elif b is not None:
            power_terms.append((coef, b, e_log))
        else:
            raise ValueError(f"time-change term {chunk!r} has no t part")
    return HardyTimeChange(power_terms=tuple(power_terms), exp_terms=tuple(exp_terms))


# ---------------------------------------------------------------------------
# flow systems
# ---------------------------------------------------------------------------


class FlowSystem:
    """Commuting translation flows x -> x + t v_j on a shared torus T^d."""

    def __init__(self, speeds: Sequence[Sequence[float]]):
        self.speeds = [tuple(float(c) for c in v) for v in speeds]
        if not self.speeds:
            raise ValueError("need at least one flow")
        self.dim = len(self.speeds[0])
        if any(len(v) != self.dim for v in self.speeds):
            raise ValueError("speed vectors live on a shared torus")
        if any(not all(math.isfinite(c) for c in v) for v in self.speeds):
            raise ValueError("speeds must be finite")

    @property
    def n_flows(self) -> int:
        return len(self.speeds)

    def point(self, x: Sequence[float], shifts: Sequence[tuple[int, float]]) -> tuple:
        """Apply several T_j^{t}; displacements are accumulated in canonical
        flow order first, so composition order cannot matter (the flows
        commute by construction)."""
        disp = [0.0] * self.dim
        for j, t in sorted(shifts):
            v = self.speeds[j]
            for d in range(self.dim):
                disp[d] += t * v[d]
        return tuple((float(c) + disp[d]) % 1.0 for d, c in enumerate(x))

    def frequency_speed(self, j: int, k: Freq) -> float:
        """k . v_j: the oscillation speed of monomial e_k along flow j."""
        return float(sum(ki * vi for ki, vi in zip(k, self.speeds[j])))

    def label(self) -> str:
        return " | ".join(",".join(repr(c) for c in v) for v in self.speeds)


def parse_flow_speeds(text: str) -> FlowSystem:
    speeds = []
    for part in text.split("|"):
        speeds.append([float(x) for x in part.split(",")])
    return FlowSystem(speeds)


def invariant_projection(flow: FlowSystem, j: int, f: Observable,
                         tol: float = 1e-12) -> Observable:
    """Projection of f onto functions invariant under T_j^t for all t:
    keeps the monomials with k . v_j = 0 (within tol for float speeds)."""
    kept = {}
    for k, c in f._need_trig().items():
        if abs(flow.frequency_speed(j, k)) <= tol:
            kept[k] = c
    return Observable(coeffs=kept)


# ---------------------------------------------------------------------------
# the oscillatory integral engine
# ---------------------------------------------------------------------------


@dataclass
class PhaseTerm:
    weight: float            # cycles per unit of the change's value
    change: HardyTimeChange
    shift: float = 0.0       # evaluate the change at t + shift


@dataclass
class OscillatoryResult:
    y_points: list[float]
    values: list[complex]    # int_0^y e(psi(t)) dt at each y
    error_bound: float
    panels: int


def _psi(terms: list[PhaseTerm], t: float) -> float:
    return sum(pt.weight * pt.change.value(t + pt.shift) for pt in terms)


def _dpsi_bound(terms: list[PhaseTerm], a: float, b: float) -> float:
    """Safe upper bound for |psi'| on [a, b]: each term's derivative is
    monotone on the positive axis, so endpoint values bound it."""
    total = 0.0
    for pt in terms:
        da = abs(pt.change.derivative(a + pt.shift))
        db = abs(pt.change.derivative(b + pt.shift))
        total += abs(pt.weight) * max(da, db)
    return total


def _dpsi(terms: list[PhaseTerm], t: float) -> float:
    return sum(pt.weight * pt.change.derivative(t + pt.shift) for pt in terms)


def oscillatory_integral(terms: list[PhaseTerm], y_points: Sequence[float],
                         lambda_max: float = DEFAULT_LAMBDA_MAX,
                         panel_budget: int = DEFAULT_PANEL_BUDGET) -> OscillatoryResult:
    """Cumulative int_0^y e(psi(t)) dt at every y in y_points."""
    y_points = sorted(float(y) for y in y_points)
    y_max = y_points[-1]
    if not terms or all(pt.weight == 0.0 for pt in terms):
        return OscillatoryResult(y_points=y_points, values=[complex(y) for y in y_points],
                                 error_bound=0.0, panels=0)
    t_lo = max((pt.change.t_min - pt.shift for pt in terms), default=0.0)
    t_lo = max(t_lo, 0.0)
    if t_lo > 0 and y_points[0] <= t_lo:
        raise ValueError(
            f"schedule point {y_points[0]} below the change's domain start {t_lo}")
    # the [0, t_lo) prefix (log-bearing changes) is skipped; |e(psi)| <= 1
    # bounds its contribution
    err = t_lo

    # tail cutoff where the phase derivative passes lambda_max (monotone case)
    t_star = y_max
    tail_bound = 0.0
    signs = {math.copysign(1, pt.weight) for pt in terms if pt.weight != 0}
    if len(signs) == 1 and abs(_dpsi(terms, y_max)) > lambda_max:
        lo, hi = max(t_lo, 1e-9), y_max
        if abs(_dpsi(terms, lo)) >= lambda_max:
            t_star = lo
        else:
            for _ in range(200):
                mid = math.sqrt(lo * hi) if lo > 0 else (lo + hi) / 2
                if abs(_dpsi(terms, mid)) >= lambda_max:
                    hi = mid
                else:
                    lo = mid
                if hi - lo < 1e-9 * max(1.0, hi):
                    break
            t_star = hi
        probes = np.geomspace(max(t_star, 1e-6), y_max, 32)
        dvals = [abs(_dpsi(terms, float(t))) for t in probes]
        monotone = all(b >= a * 0.99 for a, b in zip(dvals, dvals[1:]))
        if monotone and min(dvals) >= 0.5 * lambda_max:
            tail_bound = 2.0 / (math.pi * 0.5 * lambda_max)
            err += tail_bound
        else:
            t_star = y_max  # tail shortcut not justified; enumerate panels

    # segment breakpoints: schedule points, dyadic points, the tail cutoff
    breaks = set(y_points) | {t_star, t_lo}
    k = -40
    while 2.0 ** k < y_max:
        if t_lo < 2.0 ** k:
            breaks.add(2.0 ** k)
        k += 1
    breaks = sorted(b for b in breaks if t_lo <= b <= y_max)

    glx, glw = gauss_legendre(16)
    total_panels = 0
    cum = 0.0 + 0.0j
    cum_at: dict[float, complex] = {}
    y_set = set(y_points)

    # estimate the panel count first so the budget check precedes the work
    est_panels = 0
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b <= t_star:
            bound = _dpsi_bound(terms, max(a, 1e-12), b)
            if math.isinf(bound):
                bound = 4.0 * abs(_psi(terms, b) - _psi(terms, max(a, 1e-12))) / max(b - a, 1e-300)
            est_panels += min(int((b - a) * bound * 4) + 8, 1 << 62)
    if est_panels > panel_budget:
        raise PanelBudgetError(est_panels, panel_budget)

    for a, b in zip(breaks[:-1], breaks[1:]):
        if a >= t_star:
            pass  # tail region: contribution bounded, not enumerated
        else:
            b_eff = min(b, t_star)
            width = b_eff - a
            if width > 0:
                a_safe = a if a > 0 else min(width, 2.0 ** -40)
                if a == 0.0:
                    # single panel over [0, a_safe]: phase variation is tiny
                    nodes = a_safe * glx
                    vals = np.exp(TWO_PI * 1j * np.array([_psi(terms, float(t)) for t in nodes]))
                    cum += a_safe * float(np.sum(glw * vals.real)) \
                        + 1j * a_safe * float(np.sum(glw * vals.imag))
                    total_panels += 1
                    a = a_safe
                    width = b_eff - a
                if width > 0:
                    bound = _dpsi_bound(terms, a, b_eff)
                    n_panels = max(int(width * bound * 4) + 1, 8)
                    total_panels += n_panels
                    cum += _integrate_uniform(terms, a, b_eff, n_panels, glx, glw)
        if b in y_set:
            cum_at[b] = cum

    values = [cum_at[y] for y in y_points]
    return OscillatoryResult(y_points=y_points, values=values,
                             error_bound=err, panels=total_panels)


def _integrate_uniform(terms, a, b, n_panels, glx, glw, chunk: int = 1 << 15) -> complex:
    """Uniform panels over [a, b], GL16 per panel, chunked and order-fixed."""
    h = (b - a) / n_panels
    total = 0.0 + 0.0j
    for lo_idx in range(0, n_panels, chunk):
        hi_idx = min(lo_idx + chunk, n_panels)
        left = a + h * np.arange(lo_idx, hi_idx)
        nodes = left[:, None] + (h * glx)[None, :]
        phases = np.zeros_like(nodes)
        for pt in terms:
            phases += pt.weight * _change_values(pt.change, nodes + pt.shift)
        vals = np.exp(TWO_PI * 1j * np.mod(phases, 1.0))
        # plain pairwise reductions (no BLAS): bit-stable across thread counts
        total += complex(np.sum(vals * glw[None, :])) * h
    return total


def _change_values(change: HardyTimeChange, ts: np.ndarray) -> np.ndarray:
    out = np.zeros_like(ts)
    for g, b, e_ in change.power_terms:
        term = g * ts ** b
        if e_ != 0:
            term = term * np.log(ts) ** e_
        out += term
    for g, beta in change.exp_terms:
        out += g * np.exp(math.log(beta) * ts)
    return out


# ---------------------------------------------------------------------------
# flow averages
# ---------------------------------------------------------------------------


@dataclass
class FlowAverage:
    y_points: list[float]
    values: list[complex]        # (1/y) int_0^y prod f_j(T_j^{a_j(t)} x) dt
    error_bound: float
    panels: int


class _ComboIntegrals:
    """Per-monomial-combination oscillatory integrals; x enters only through
    a static phase, so one integration serves every sampled point."""

    def __init__(self, flow: FlowSystem, changes, observables, y_points,
                 lambda_max: float, panel_budget: int):
        if not (len(changes) == len(observables) == flow.n_flows):
            raise ValueError("need one change and one observable per flow")
        self.y_points = sorted(float(y) for y in y_points)
        self.rows = []
        self.err = 0.0
        self.panels = 0
        cache: dict[tuple, OscillatoryResult] = {}
        for static_freqs, coef, terms in _flow_combos(flow, changes, observables):
            key = tuple((pt.weight, id(pt.change)) for pt in terms)
            res = cache.get(key)
            if res is None:
                res = oscillatory_integral(terms, self.y_points, lambda_max, panel_budget)
                cache[key] = res
                self.panels += res.panels
            self.rows.append((static_freqs, coef, np.array(res.values)))
            self.err += abs(coef) * res.error_bound

    def average_at(self, x: Sequence[float]) -> list[complex]:
        totals = np.zeros(len(self.y_points), dtype=complex)
        for static_freqs, coef, vals in self.rows:
            static = e(sum(ki * xi for ki, xi in zip(static_freqs, x)) % 1.0)
            totals += coef * static * vals
        return [complex(v) / y for v, y in zip(totals, self.y_points)]


def flow_average(flow: FlowSystem, changes: Sequence[HardyTimeChange],
                 observables: Sequence[Observable], x: Sequence[float],
                 y_points: Sequence[float],
                 lambda_max: float = DEFAULT_LAMBDA_MAX,
                 panel_budget: int = DEFAULT_PANEL_BUDGET) -> FlowAverage:
    """Average of the product of observables along time-changed flows."""
    combos = _ComboIntegrals(flow, changes, observables, y_points,
                             lambda_max, panel_budget)
    values = combos.average_at(x)
    return FlowAverage(y_points=combos.y_points, values=values,
                       error_bound=combos.err / combos.y_points[0], panels=combos.panels)


def _flow_combos(flow: FlowSystem, changes, observables):
    """(total frequency, coefficient, phase terms) per monomial combination."""
    supports = [sorted(f._need_trig().items()) for f in observables]
    combos = []

    def rec(j: int, freq_acc: tuple, coef: complex, terms: list[PhaseTerm]):
        if j == len(supports):
            combos.append((freq_acc, coef, list(terms)))
            return
        for k, c in supports[j]:
            w = flow.frequency_speed(j, k)
            new_terms = terms + ([PhaseTerm(weight=w, change=changes[j])] if w != 0 else [])
            freq = tuple(a + b for a, b in zip(freq_acc, k))
            rec(j + 1, freq, coef * c, new_terms)

    rec(0, (0,) * flow.dim, 1.0 + 0.0j, [])
    return combos


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------


@dataclass
class FlowDiagnostic:
    y_points: list[float]
    max_deviation: list[float]      # over sampled x, per y
    per_x_final: list[float]
    hypothesis_ok: bool
    hypothesis_note: str
    tolerance: float
    passed: bool


def check_growth_separation(changes: Sequence[HardyTimeChange]) -> tuple[bool, str]:
    """Syntactic check of the growth-separation hypotheses.

    Power changes must have strictly increasing exponents (ratio gaps give
    the separation delta); exponential changes strictly increasing bases;
    a power change may precede an exponential one only in the weak
    direction, which violates the lower separation bound (the method is
    known to fail for pairs like (t, 2^t)), so that combination is flagged.
    """
    leads = [c.leading() for c in changes]
    if leads and leads[0] == ("power", None):
        return False, "empty change"
    if leads[0][0] == "power" and leads[0][1] <= 0:
        return False, "first change does not dominate t^delta"
    for (k1, v1), (k2, v2) in zip(leads[:-1], leads[1:]):
        if k1 == "power" and k2 == "power":
            if not v1 < v2:
                return False, f"power exponents not strictly increasing ({v1} !< {v2})"
        elif k1 == "exp" and k2 == "exp":
            if not v1 < v2:
                return False, f"exponential bases not strictly increasing ({v1} !< {v2})"
        elif k1 == "power" and k2 == "exp":
            return False, "power followed by exponential: lower separation bound fails"
        else:
            return False, "exponential followed by power: growth order reversed"
    return True, "growth separation holds syntactically"


def joint_flow_diagnostic(flow: FlowSystem, changes: Sequence[HardyTimeChange],
                          observables: Sequence[Observable], y_points: Sequence[float],
                          tol: float = 0.05, n_x: int = 16, x_seed: int = 0,
                          lambda_max: float = DEFAULT_LAMBDA_MAX,
                          panel_budget: int = DEFAULT_PANEL_BUDGET) -> FlowDiagnostic:
    """Pointwise convergence of the flow average to the product of the
    per-flow invariant projections, sampled at seeded points x.

    A failed growth hypothesis is reported and the run proceeds with a
    warning flag (there is no finite-y prediction for those pairs).
    """
    ok, note = check_growth_separation(changes)
    rng = counter_rng(x_seed)
    xs = [tuple(float(v) for v in rng.random(flow.dim)) for _ in range(n_x)]
    projections = [invariant_projection(flow, j, f) for j, f in enumerate(observables)]
    combos = _ComboIntegrals(flow, changes, observables, y_points,
                             lambda_max, panel_budget)
    y_points = combos.y_points
    deviations = np.zeros((len(xs), len(y_points)))
    for xi, x in enumerate(xs):
        values = combos.average_at(x)
        target = 1.0 + 0.0j
        for proj in projections:
            target *= _eval_on_torus(proj, x)
        for yi, v in enumerate(values):
            deviations[xi, yi] = abs(v - target)
    max_dev = [float(np.max(deviations[:, yi])) for yi in range(len(y_points))]
    per_x_final = [float(d) for d in deviations[:, -1]]
    passed = all(d <= tol for d in per_x_final)
    return FlowDiagnostic(y_points=y_points, max_deviation=max_dev,
                          per_x_final=per_x_final, hypothesis_ok=ok,
                          hypothesis_note=note, tolerance=tol, passed=passed)


def _eval_on_torus(f: Observable, x: Sequence[float]) -> complex:
    total = 0.0 + 0.0j
    for k, c in sorted(f._need_trig().items()):
        total += c * e(sum(ki * xi for ki, xi in zip(k, x)) % 1.0)
    return total


# ---------------------------------------------------------------------------
# change-of-variables and stability checks
# ---------------------------------------------------------------------------


@dataclass
class PairedSeries:
    y_points: list[float]
    direct: list[complex]        # (1/y) int f(t) dt
    changed: list[complex]       # (1/y) int f(a(t)) dt
    final_difference: float
    passed: bool


def change_of_variables_check(profile: Sequence[tuple[float, complex]],
                              change: HardyTimeChange, y_points: Sequence[float],
                              tol: float = 0.02,
                              lambda_max: float = DEFAULT_LAMBDA_MAX,
                              panel_budget: int = DEFAULT_PANEL_BUDGET) -> PairedSeries:
    """Cesaro averages of f(t) and f(a(t)) for f(t) = sum c_m e(lambda_m t).

    The direct average has a closed form; the time-changed one is
    oscillatory quadrature.  The check asks for equal limits, verdict at
    the final schedule point.
    """
    kind, lead = change.leading()
    if kind == "power" and lead <= 0:
        raise HypothesisError("change must dominate some positive power of t")
    y_points = sorted(float(y) for y in y_points)
    direct = []
    for y in y_points:
        acc = 0.0 + 0.0j
        for lam, c in profile:
            if lam == 0:
                acc += c
            else:
                acc += c * (e((lam * y) % 1.0) - 1.0) / (TWO_PI * 1j * lam * y)
        direct.append(acc)
    changed_tot = np.zeros(len(y_points), dtype=complex)
    for lam, c in profile:
        if lam == 0:
            changed_tot += c
            continue
        res = oscillatory_integral([PhaseTerm(weight=lam, change=change)],
                                   y_points, lambda_max, panel_budget)
        changed_tot += c * np.array(res.values) / np.array(y_points)
    changed = [complex(v) for v in changed_tot]
    diff = abs(direct[-1] - changed[-1])
    return PairedSeries(y_points=y_points, direct=direct, changed=changed,
                        final_difference=diff, passed=diff <= tol)


@dataclass
class StabilitySeries:
    y_points: list[float]
    values: list[float]
    final_value: float
    passed: bool


def stability_check(flow: FlowSystem, change: HardyTimeChange, f: Observable,
                    shift: float, x: Sequence[float], y_points: Sequence[float],
                    tol: float = 0.05, flow_index: int = 0,
                    lambda_max: float = DEFAULT_LAMBDA_MAX,
                    panel_budget: int = DEFAULT_PANEL_BUDGET) -> StabilitySeries:
    """(1/y) int |f(T^{b(t+c)}x) - f(T^{b(t)}x)|^2 dt along the schedule.

    Needs a sublinear change (leading exponent strictly inside (0,1)); the
    squared difference expands into monomial pairs, each an oscillatory
    integral with the slowly-varying phase w_k b(t+c) - w_k' b(t+c')."""
    kind, lead = change.leading()
    if kind != "power" or not (0.0 < lead < 1.0):
        raise HypothesisError(
            f"stability check needs a power change with exponent in (0,1), got {kind} {lead}")
    if shift < 0.0:
        raise ValueError("shift must be non-negative (the symmetric case is identical)")
    y_points = sorted(float(y) for y in y_points)
    if shift == 0.0:
        return StabilitySeries(y_points=y_points, values=[0.0] * len(y_points),
                               final_value=0.0, passed=True)
    coeffs = f._need_trig()
    totals = np.zeros(len(y_points), dtype=complex)
    ys = np.array(y_points)
    cache: dict[tuple, np.ndarray] = {}

    def integral(w1: float, c1: float, w2: float, c2: float) -> np.ndarray:
        """int_0^y e(w1 b(t+c1) - w2 b(t+c2)) dt at each y."""
        key = (w1, c1, w2, c2)
        got = cache.get(key)
        if got is None:
            terms = []
            if w1 != 0:
                terms.append(PhaseTerm(weight=w1, change=change, shift=c1))
            if w2 != 0:
                terms.append(PhaseTerm(weight=-w2, change=change, shift=c2))
            if (w1, c1) == (w2, c2):
                got = ys.astype(complex)  # phases cancel identically
            else:
                got = np.array(oscillatory_integral(
                    terms, y_points, lambda_max, panel_budget).values)
            cache[key] = got
        return got

    for k1, a1 in coeffs.items():
        w1 = flow.frequency_speed(flow_index, k1)
        for k2, a2 in coeffs.items():
            w2 = flow.frequency_speed(flow_index, k2)
            static_freq = tuple(p - q for p, q in zip(k1, k2))
            static = e(sum(ki * xi for ki, xi in zip(static_freq, x)) % 1.0)
            coef = a1 * a2.conjugate() * static
            piece = (integral(w1, shift, w2, shift) - integral(w1, shift, w2, 0.0)
                     - integral(w1, 0.0, w2, shift) + integral(w1, 0.0, w2, 0.0))
            totals += coef * piece
    values = [max(float((v / y).real), 0.0) for v, y in zip(totals, ys)]
    final = values[-1]
    return StabilitySeries(y_points=y_points, values=values, final_value=final,
                           passed=final <= tol)
