"""Declarative integer sequences with exact floor evaluation.

Supported forms (compact string grammar in parentheses):

  PolyInt           integer polynomial, coefficients highest degree first
                    ("poly:1,1,0" is n^2 + n)
  FloorGeneralized  [sum_i alpha_i * n^{b_i}], b_i > 0
                    ("gen:1*n^1.5+2*n^0.5")
  FloorHardy        [sum_i c_i * n^{b_i} * (log n)^{e_i}], b_i >= 0
                    ("hardy:1*n^1.5*log^0.5")
  LinearCombo       integer combination of other specs
                    ("combo:1*(gen:1*n^1.5)+1*(poly:1,0,0)")

Floors are exact: evaluation runs in multiprecision arithmetic with 64
guard bits beyond the integer part; if the fractional part lands within
2^-40 of an integer the evaluation is redone with 256 guard bits, and a
remaining ambiguity (within 2^-60) is resolved exactly when every term is
a rational power with an exact integer root, otherwise it is an error -
never a silent choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import gmpy2
from gmpy2 import mpfr, mpq

GUARD_BITS_FIRST = 64
GUARD_BITS_RETRY = 256
GUARD_BAND_FIRST = 2.0 ** -40
GUARD_BAND_RETRY = 2.0 ** -60


class AmbiguousFloorError(ArithmeticError):
    """The value is too close to an integer to floor reliably."""


class SequenceParseError(ValueError):
    def __init__(self, text: str, pos: int, message: str):
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


# ---------------------------------------------------------------------------
# sequence forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolyInt:
    coeffs: tuple[int, ...]  # highest degree first

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("polynomial needs at least one coefficient")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def label(self) -> str:
        return "poly:" + ",".join(str(c) for c in self.coeffs)


@dataclass(frozen=True)
class FloorGeneralized:
    terms: tuple[tuple[float, float], ...]  # (alpha, b), b > 0

    def __post_init__(self):
        for _, b in self.terms:
            if not b > 0:
                raise ValueError(f"exponent {b} must be positive")

    def label(self) -> str:
        return "gen:" + "+".join(f"{a!r}*n^{b!r}" for a, b in self.terms).replace("+-", "-")


@dataclass(frozen=True)
class FloorHardy:
    terms: tuple[tuple[float, float, float], ...]  # (c, b, e), b >= 0

    def __post_init__(self):
        for _, b, _ in self.terms:
            if b < 0:
                raise ValueError(f"exponent {b} must be non-negative")

    def label(self) -> str:
        parts = []
        for c, b, ex in self.terms:
            t = f"{c!r}*n^{b!r}"
            if ex != 0:
                t += f"*log^{ex!r}"
            parts.append(t)
        return "hardy:" + "+".join(parts).replace("+-", "-")


@dataclass(frozen=True)
class LinearCombo:
    parts: tuple[tuple[int, "SequenceSpec"], ...]

    def label(self) -> str:
        return "combo:" + "+".join(f"{w}*({p.label()})" for w, p in self.parts).replace("+-", "-")


SequenceSpec = PolyInt | FloorGeneralized | FloorHardy | LinearCombo


# ---------------------------------------------------------------------------
# exact evaluation
# ---------------------------------------------------------------------------


def seq_eval(seq: SequenceSpec, n: int) -> int:
    """a(n), exact.  n >= 1."""
    if n < 1:
        raise ValueError("sequences are defined for n >= 1")
    if isinstance(seq, PolyInt):
        acc = 0
        for c in seq.coeffs:
            acc = acc * n + c
        return acc
    if isinstance(seq, LinearCombo):
        return sum(w * seq_eval(p, n) for w, p in seq.parts)
    if isinstance(seq, FloorGeneralized):
        return _floor_terms([(a, b, 0.0) for a, b in seq.terms], n)
    if isinstance(seq, FloorHardy):
        return _floor_terms(list(seq.terms), n)
    raise TypeError(f"unknown sequence spec {seq!r}")


def seq_eval_range(seq: SequenceSpec, n_values: Sequence[int]) -> list[int]:
    return [seq_eval(seq, n) for n in n_values]


def _magnitude_bits(terms, n: int) -> int:
    ln = math.log2(max(n, 2))
    top = 1.0
    for c, b, e in terms:
        mag = abs(c) if c else 1.0
        est = math.log2(mag + 1e-300) + b * ln + abs(e) * math.log2(ln + 2.0)
        top = max(top, est)
    return int(top) + 8


def _eval_terms_mpfr(terms, n: int, prec: int) -> "mpfr":
    with gmpy2.context(precision=prec):
        total = mpfr(0)
        logn = gmpy2.log(mpfr(n)) if any(e != 0 for _, _, e in terms) else None
        for c, b, e in terms:
            if e != 0 and n == 1:
                # (log 1)^e with e != 0: term taken as 0
                continue
            term = mpq(c) * (mpfr(n) ** mpfr(b))
            if e != 0:
                term *= logn ** mpfr(e)
            total += term
        return total


def _frac_distance(v: "mpfr") -> tuple[int, float]:
    fl = int(gmpy2.floor(v))
    frac = v - fl
    return fl, float(min(frac, 1 - frac))


def _exact_rational_value(terms, n: int):
    """Exact value as mpq when every term is alpha * n^(p/q) with an exact
    integer q-th root; None when some term is genuinely irrational.
    Terms sharing an exponent are combined first, so cancelling radicals
    still resolve exactly."""
    by_exponent: dict[float, "mpq"] = {}
    for c, b, e in terms:
        if e != 0:
            return None
        by_exponent[b] = by_exponent.get(b, mpq(0)) + mpq(c)
    total = mpq(0)
    for b, alpha in by_exponent.items():
        if alpha == 0:
            continue
        frac_b = Fraction(b)  # exact binary rational of the float exponent
        p, q = frac_b.numerator, frac_b.denominator
        if q > 64:
            return None
        power = mpq(n) ** p
        if q == 1:
            root = power
        else:
            if power.denominator != 1:
                return None
            r, exact = gmpy2.iroot(power.numerator, q)
            if not exact:
                return None
            root = mpq(r)
        total += alpha * root
    return total


def _floor_terms(terms, n: int) -> int:
    if n == 1:
        # log factors vanish at n=1: those terms are taken as 0
        terms = [t for t in terms if t[2] == 0]
        if not terms:
            return 0
    base = _magnitude_bits(terms, n)
    v = _eval_terms_mpfr(terms, n, base + GUARD_BITS_FIRST)
    fl, dist = _frac_distance(v)
    if dist > GUARD_BAND_FIRST:
        return fl
    v = _eval_terms_mpfr(terms, n, base + GUARD_BITS_RETRY)
    fl, dist = _frac_distance(v)
    if dist > GUARD_BAND_RETRY:
        return fl
    exact = _exact_rational_value(terms, n)
    if exact is not None:
        num, den = exact.numerator, exact.denominator
        return int(num // den)
    raise AmbiguousFloorError(
        f"value at n={n} sits within 2^-60 of an integer at maximum precision")


def seq_eval_real(seq: SequenceSpec, n: int, prec: int = 160) -> float:
    """The underlying real value before flooring (floored parts of combos
    stay floored).  Used by growth and distance diagnostics."""
    if isinstance(seq, PolyInt):
        return float(seq_eval(seq, n))
    if isinstance(seq, LinearCombo):
        return float(sum(w * seq_eval_real(p, n) for w, p in seq.parts))
    terms = [(a, b, 0.0) for a, b in seq.terms] if isinstance(seq, FloorGeneralized) \
        else list(seq.terms)
    return float(_eval_terms_mpfr(terms, n, prec))


# ---------------------------------------------------------------------------
# growth classification
# ---------------------------------------------------------------------------


@dataclass
class GrowthClass:
    kind: str          # "polynomial" | "tempered" | "t_plus_p" | "unclassified"
    k: int | None      # degree / tempered index
    slope: float | None  # measured log-log slope (witness)

    def label(self) -> str:
        if self.kind == "polynomial":
            return f"PolynomialDegree({self.k})"
        if self.kind == "tempered":
            return f"Tempered({self.k})"
        if self.kind == "t_plus_p":
            return "TplusP"
        return "Unclassified"


def _probe_grid(t0: float, t1: float, n_points: int = 24) -> list[int]:
    ratio = (t1 / t0) ** (1.0 / (n_points - 1))
    pts = sorted({max(2, int(round(t0 * ratio ** i))) for i in range(n_points)})
    return pts


def _loglog_slope(seq: SequenceSpec, grid: list[int]) -> float:
    xs, ys = [], []
    for t in grid:
        v = seq_eval_real(seq, t)
        if v <= 0:
            raise ValueError(f"non-positive sequence value {v} at probe point {t}")
        xs.append(math.log(t))
        ys.append(math.log(v))
    return _lsq_slope(xs, ys)


def _lsq_slope(xs: list[float], ys: list[float]) -> float:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = sum((x - mx) ** 2 for x in xs)
    return num / den


def growth_classify(seq: SequenceSpec, probe_range: tuple[float, float]) -> GrowthClass:
    """Growth class against t^k log t < a(t) < t^{k+1}.

    Polynomial forms are classified syntactically; otherwise the verdict is
    a numeric log-log slope fit on a geometric probe grid (a heuristic, not
    a proof): slope in (k+0.01, k+0.99) reports tempered index k.
    """
    t0, t1 = probe_range
    if not t1 / t0 >= 100:
        raise ValueError("probe range must span at least two decades (T1/T0 >= 100)")
    if isinstance(seq, PolyInt):
        return GrowthClass(kind="polynomial", k=seq.degree, slope=None)
    if isinstance(seq, LinearCombo):
        sub = [growth_classify(p, probe_range) for _, p in seq.parts]
        if all(g.kind == "polynomial" for g in sub):
            return GrowthClass(kind="polynomial", k=max(g.k for g in sub), slope=None)
        if any(g.kind == "polynomial" for g in sub) and any(g.kind == "tempered" for g in sub):
            return GrowthClass(kind="t_plus_p", k=None, slope=None)
    grid = _probe_grid(t0, t1)
    slope = _loglog_slope(seq, grid)
    k = math.floor(slope)
    if k + 0.01 < slope < k + 0.99 and k >= 0:
        return GrowthClass(kind="tempered", k=k, slope=slope)
    return GrowthClass(kind="unclassified", k=None, slope=slope)


# ---------------------------------------------------------------------------
# logarithmic-distance trend test
# ---------------------------------------------------------------------------


@dataclass
class TrendReport:
    points: list[int]
    values: list[float]     # |a(t) - p(t)| / log t
    slope: float | None
    verdict: str            # "diverging" | "bounded" | "inconclusive"


def log_distance_trend(seq: SequenceSpec, poly: Sequence[Fraction],
                       probe_range: tuple[float, float],
                       n_points: int = 24) -> TrendReport:
    """Trend of |a(t) - p(t)| / log t on a geometric grid.

    `poly` holds rational coefficients, highest degree first.  The verdict
    comes from the least-squares slope of the logarithm of the series; it
    is a numeric trend test, not a proof of the limiting behavior.
    """
    t0, t1 = probe_range
    if n_points < 20:
        raise ValueError("need at least 20 probe points")
    grid = _probe_grid(t0, t1, n_points)
    values = []
    for t in grid:
        a = seq_eval_real(seq, t)
        p = 0.0
        for c in poly:
            p = p * t + float(c)
        values.append(abs(a - p) / math.log(t))
    nonzero = [(t, v) for t, v in zip(grid, values) if v > 1e-12]
    if len(nonzero) < max(4, len(grid) // 2):
        return TrendReport(points=grid, values=values, slope=None, verdict="bounded")
    xs = [math.log(t) for t, _ in nonzero]
    ys = [math.log(v) for _, v in nonzero]
    slope = _lsq_slope(xs, ys)
    if slope >= 0.1:
        verdict = "diverging"
    elif slope <= 0.01:
        verdict = "bounded"
    else:
        verdict = "inconclusive"
    return TrendReport(points=grid, values=values, slope=slope, verdict=verdict)


# ---------------------------------------------------------------------------
# divisibility densities
# ---------------------------------------------------------------------------


def divisibility_density(seqs: Sequence[SequenceSpec], r: int, n_max: int) -> float:
    """Density of {n <= N : a_j(n) = 0 mod r for every j}, exact count."""
    if n_max < 1:
        raise ValueError("N must be >= 1")
    if r < 1:
        raise ValueError("modulus must be >= 1")
    if r == 1:
        return 1.0
    count = 0
    for n in range(1, n_max + 1):
        if all(seq_eval(s, n) % r == 0 for s in seqs):
            count += 1
    return count / n_max


def filtered_indices(seqs: Sequence[SequenceSpec], r: int, n_max: int) -> list[int]:
    """S_r intersect [N]: the n with every a_j(n) divisible by r."""
    if r == 1:
        return list(range(1, n_max + 1))
    return [n for n in range(1, n_max + 1)
            if all(seq_eval(s, n) % r == 0 for s in seqs)]


# ---------------------------------------------------------------------------
# compact string grammar
# ---------------------------------------------------------------------------


def parse_sequence(text: str) -> SequenceSpec:
    """Parse 'poly:...', 'gen:...', 'hardy:...' or 'combo:...' strings."""
    text = text.strip()
    head, sep, body = text.partition(":")
    if not sep:
        raise SequenceParseError(text, 0, "missing 'kind:' prefix")
    head = head.strip().lower()
    offset = len(text) - len(body)
    if head == "poly":
        return _parse_poly(text, body, offset)
    if head == "gen":
        terms = _parse_terms(text, body, offset, allow_log=False)
        return FloorGeneralized(terms=tuple((c, b) for c, b, _ in terms))
    if head == "hardy":
        terms = _parse_terms(text, body, offset, allow_log=True)
        return FloorHardy(terms=tuple(terms))
    if head == "combo":
        return _parse_combo(text, body, offset)
    raise SequenceParseError(text, 0, f"unknown sequence kind {head!r}")


def _parse_poly(full: str, body: str, offset: int) -> PolyInt:
    coeffs = []
    pos = offset
    for piece in body.split(","):
        stripped = piece.strip()
        if not stripped:
            raise SequenceParseError(full, pos, "empty polynomial coefficient")
        try:
            coeffs.append(int(stripped))
        except ValueError:
            raise SequenceParseError(full, pos, f"bad integer coefficient {stripped!r}") from None
        pos += len(piece) + 1
    return PolyInt(coeffs=tuple(coeffs))


def _split_signed_terms(body: str, offset: int) -> list[tuple[str, int]]:
    """Split on top-level +/- (keeping signs), tracking source positions."""
    out = []
    depth = 0
    cur = ""
    cur_pos = offset
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur.strip() and not cur.rstrip().endswith(("e", "E", "^", "*")):
            out.append((cur, cur_pos))
            cur = ch
            cur_pos = offset + i
        else:
            cur += ch
    if cur.strip():
        out.append((cur, cur_pos))
    return out


def _parse_float(full: str, token: str, pos: int, what: str) -> float:
    try:
        return float(token)
    except ValueError:
        raise SequenceParseError(full, pos, f"bad {what} {token.strip()!r}") from None


def _parse_terms(full: str, body: str, offset: int, allow_log: bool):
    if not body.strip():
        raise SequenceParseError(full, offset, "empty term list")
    terms = []
    for chunk, pos in _split_signed_terms(body, offset):
        factors = chunk.split("*")
        coef_txt = factors[0].strip()
        if coef_txt in ("", "+"):
            coef = 1.0
        elif coef_txt == "-":
            coef = -1.0
        else:
            coef = _parse_float(full, coef_txt, pos, "coefficient")
        b = None
        e_log = 0.0
        for fac in factors[1:]:
            fac = fac.strip()
            if fac.startswith("n"):
                rest = fac[1:]
                if rest == "":
                    b = 1.0
                elif rest.startswith("^"):
                    if not rest[1:]:
                        raise SequenceParseError(full, pos + chunk.find("^"),
                                                 "missing exponent after '^'")
                    b = _parse_float(full, rest[1:], pos, "exponent")
                else:
                    raise SequenceParseError(full, pos, f"bad factor {fac!r}")
            elif fac.startswith("log"):
                if not allow_log:
                    raise SequenceParseError(full, pos, "log factors need the hardy: form")
                rest = fac[3:]
                if rest == "":
                    e_log = 1.0
                elif rest.startswith("^"):
                    e_log = _parse_float(full, rest[1:], pos, "log exponent")
                else:
                    raise SequenceParseError(full, pos, f"bad factor {fac!r}")
            elif fac == "":
                raise SequenceParseError(full, pos, "dangling '*'")
            else:
                raise SequenceParseError(full, pos, f"bad factor {fac!r}")
        if b is None:
            raise SequenceParseError(full, pos, "term is missing its n-power factor")
        terms.append((coef, b, e_log))
    return terms


def _parse_combo(full: str, body: str, offset: int) -> LinearCombo:
    parts = []
    for chunk, pos in _split_signed_terms(body, offset):
        chunk = chunk.strip()
        star = chunk.find("*(")
        if star < 0 or not chunk.endswith(")"):
            raise SequenceParseError(full, pos, "combo parts look like w*(spec)")
        weight_txt = chunk[:star].strip()
        if weight_txt in ("", "+"):
            weight = 1
        elif weight_txt == "-":
            weight = -1
        else:
            try:
                weight = int(weight_txt)
            except ValueError:
                raise SequenceParseError(full, pos, f"bad combo weight {weight_txt!r}") from None
        inner = chunk[star + 2:-1]
        parts.append((weight, parse_sequence(inner)))
    if not parts:
        raise SequenceParseError(full, offset, "empty combo")
    return LinearCombo(parts=tuple(parts))
