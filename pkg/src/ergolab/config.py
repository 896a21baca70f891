"""Experiment configuration: a flat key=value text format.

One experiment per file, under an [experiment] section:

    [experiment]
    kind = average
    system = rotation 0.41421356237309515
    seqs = poly:1,0 | poly:1,0,0
    observables = 1*e(1) | 1*e(1)
    schedule = geom:100:2:100000
    tol = 0.05
    seed = 1

Keys are parsed per experiment kind (see cli.run_experiment).  Parse errors
carry line numbers; the normalized echo re-parses to an equivalent config
(round-trip tested).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .systems import Observable


class ConfigError(ValueError):
    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


@dataclass
class ExperimentConfig:
    kind: str
    values: dict[str, str]
    lines: dict[str, int] = field(default_factory=dict)

    def get(self, key: str, default: str | None = None) -> str | None:
        return self.values.get(key, default)

    def require(self, key: str) -> str:
        if key not in self.values:
            raise ConfigError(0, f"experiment kind {self.kind!r} needs key {key!r}")
        return self.values[key]

    def get_float(self, key: str, default: float | None = None) -> float | None:
        raw = self.values.get(key)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(self.lines.get(key, 0), f"bad float for {key}: {raw!r}") from None

    def get_int(self, key: str, default: int | None = None) -> int | None:
        raw = self.values.get(key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(self.lines.get(key, 0), f"bad integer for {key}: {raw!r}") from None

    def echo(self) -> str:
        """Normalized text that re-parses to an equivalent config."""
        out = ["[experiment]", f"kind = {self.kind}"]
        for key in sorted(self.values):
            if key != "kind":
                out.append(f"{key} = {self.values[key]}")
        return "\n".join(out) + "\n"


def parse_config(text: str) -> ExperimentConfig:
    values: dict[str, str] = {}
    lines: dict[str, int] = {}
    section = None
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section != "experiment":
                raise ConfigError(i, f"unknown section [{section}]")
            continue
        if "=" not in line:
            raise ConfigError(i, f"expected 'key = value', got {line!r}")
        if section != "experiment":
            raise ConfigError(i, "keys must appear under an [experiment] section")
        key, _, val = line.partition("=")
        key = key.strip().lower()
        val = val.strip()
        if key in values:
            raise ConfigError(i, f"duplicate key {key!r}")
        values[key] = val
        lines[key] = i
    if "kind" not in values:
        raise ConfigError(0, "missing 'kind' key")
    kind = values["kind"].lower()
    known = {"average", "seminorm", "equidist", "weyl", "recur", "flow", "vdc", "gcs"}
    if kind not in known:
        raise ConfigError(lines["kind"], f"unknown experiment kind {kind!r}")
    return ExperimentConfig(kind=kind, values=values, lines=lines)


# ---------------------------------------------------------------------------
# small value grammars
# ---------------------------------------------------------------------------


def _split_terms(body: str) -> list[str]:
    """Split on top-level +/- (signs and parenthesized complexes kept)."""
    chunks: list[str] = []
    cur = ""
    depth = 0
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in "+-" and depth == 0 and cur and not cur.endswith(("e", "E", "*", "(", ",", "+", "-")):
            chunks.append(cur)
            cur = ch
        else:
            cur += ch
    if cur:
        chunks.append(cur)
    return chunks


def parse_observable(text: str, dim: int) -> Observable:
    """Observables as sums of c*e(k1,...,kd) terms plus constants.

    Examples: '1*e(1)', '0.5*e(1,0) + 0.5*e(-1,0)', '2.0', 'e(2)+1'.
    Complex coefficients go in parentheses: '(0.5+0.5j)*e(1)'.
    """
    coeffs: dict[tuple, complex] = {}
    body = text.replace(" ", "")
    if not body:
        raise ValueError("empty observable")
    for chunk in _split_terms(body):
        if "e(" in chunk:
            head, _, rest = chunk.partition("e(")
            if not rest.endswith(")"):
                raise ValueError(f"unclosed e( in observable term {chunk!r}")
            coef_txt = head[:-1] if head.endswith("*") else head
            if coef_txt in ("", "+"):
                coef = 1.0 + 0.0j
            elif coef_txt == "-":
                coef = -1.0 + 0.0j
            else:
                coef = complex(coef_txt)
            k = tuple(int(x) for x in rest[:-1].split(","))
            if len(k) != dim:
                raise ValueError(
                    f"frequency {k} has {len(k)} coordinates, system has {dim}")
        else:
            coef = complex(chunk)
            k = (0,) * dim
        coeffs[k] = coeffs.get(k, 0.0) + coef
    return Observable(coeffs=coeffs)


def observable_text(f: Observable) -> str:
    parts = []
    for k in sorted(f._need_trig()):
        c = f.coeffs[k]
        coef = repr(c)[1:-1] if repr(c).startswith("(") else repr(c)
        if any(k):
            parts.append(f"{coef}*e({','.join(str(x) for x in k)})")
        else:
            parts.append(coef)
    return " + ".join(parts) if parts else "0"


def parse_schedule(text: str) -> list[int]:
    """'geom:start:ratio:stop' | 'list:n1,n2,...' | a single integer.

    Plain integers expand to the default geometric schedule 100*2^k capped
    at the value (the value itself always included)."""
    text = text.strip()
    if text.startswith("list:"):
        return sorted({int(x) for x in text[5:].split(",")})
    if text.startswith("geom:"):
        start_s, ratio_s, stop_s = text[5:].split(":")
        start, ratio, stop = int(start_s), float(ratio_s), int(stop_s)
        out = []
        x = float(start)
        while round(x) <= stop:
            out.append(int(round(x)))
            x *= ratio
        if not out or out[-1] != stop:
            out.append(stop)
        return sorted(set(out))
    n_max = int(text)
    out = []
    x = 100.0
    while round(x) < n_max:
        out.append(int(round(x)))
        x *= 2.0
    out.append(n_max)
    return sorted(set(out))


def parse_y_schedule(text: str) -> list[float]:
    text = text.strip()
    if text.startswith("list:"):
        return sorted({float(x) for x in text[5:].split(",")})
    if text.startswith("geom:"):
        start_s, ratio_s, stop_s = text[5:].split(":")
        start, ratio, stop = float(start_s), float(ratio_s), float(stop_s)
        out = []
        x = start
        while x < stop * (1 - 1e-12):
            out.append(x)
            x *= ratio
        out.append(stop)
        return sorted(set(out))
    return [float(text)]


def parse_profile(text: str) -> list[tuple[float, complex]]:
    """Trig profile in t for the change-of-variables check:
    'e(1.0)' or '0.5*e(1.0)+0.5*e(-1.0)+0.2' with real frequencies."""
    out: list[tuple[float, complex]] = []
    body = text.replace(" ", "")
    for chunk in _split_terms(body):
        if "e(" in chunk:
            head, _, rest = chunk.partition("e(")
            coef_txt = head[:-1] if head.endswith("*") else head
            coef = 1.0 + 0.0j if coef_txt in ("", "+") else \
                (-1.0 + 0.0j if coef_txt == "-" else complex(coef_txt))
            lam = float(rest[:-1])
        else:
            coef = complex(chunk)
            lam = 0.0
        out.append((lam, coef))
    return out
