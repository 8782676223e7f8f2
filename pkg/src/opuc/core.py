"""Domain types shared by the whole package.

A system of orthogonal polynomials on the unit circle is determined by its
reflection coefficients, one complex number strictly inside the unit disk per
index n >= 1. Sequences are pure evaluation rules (never materialized), so
indices up to 1e6 stay cheap. Every access is validated; a coefficient on or
outside the unit circle raises, naming the offending index.

Also here: the circular-arc geometry attached to a comparison coefficient a
(the arc shrinks to a point as |a| -> 1), unit-circle points, the fixed
2 x 2 matrix norm used artifact-wide, and the parser for the coefficient
mini-language used by the CLI.
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import special
from .errors import (
    DomainError,
    InvalidCoefficientError,
    InvalidRotationError,
    SequenceSpecError,
)

TWO_PI = 2.0 * math.pi

# eager validation horizon for parameterized sequences; the decay kinds are
# monotone beyond it so early indices are where violations appear
_EAGER_CHECK = 64


class ReflectionSequence:
    """Base evaluation rule n -> coefficient, n >= 1."""

    def raw_coeff(self, n: int) -> complex:
        raise NotImplementedError

    def coeff_at(self, n: int) -> complex:
        if n < 1:
            raise DomainError(f"coefficient index must be >= 1, got {n}")
        value = complex(self.raw_coeff(n))
        if abs(value) >= 1.0:
            raise InvalidCoefficientError(n, value, detail=repr(self))
        return value

    def coeffs(self, n: int) -> list[complex]:
        """Coefficients 1..n as a list."""
        return [self.coeff_at(k) for k in range(1, n + 1)]

    def _validate_prefix(self, count: int = _EAGER_CHECK) -> None:
        for k in range(1, count + 1):
            self.coeff_at(k)


@dataclass(frozen=True, repr=True)
class Constant(ReflectionSequence):
    """Constant coefficient a with |a| < 1 (a = 0 is the Lebesgue case)."""

    a: complex

    def __post_init__(self):
        if abs(self.a) >= 1.0:
            raise InvalidCoefficientError(1, self.a, detail="constant sequence")

    def raw_coeff(self, n: int) -> complex:
        return self.a


@dataclass(frozen=True)
class Explicit(ReflectionSequence):
    """Finite coefficient list; indices past the end raise IndexError."""

    values: tuple[complex, ...]

    def __init__(self, values):
        object.__setattr__(self, "values", tuple(complex(v) for v in values))
        self._validate_prefix(len(self.values))

    def raw_coeff(self, n: int) -> complex:
        if n > len(self.values):
            raise IndexError(
                f"explicit sequence has {len(self.values)} coefficients, index {n} requested"
            )
        return self.values[n - 1]


@dataclass(frozen=True)
class Rotated(ReflectionSequence):
    """tau^n times a base sequence, |tau| = 1."""

    tau: complex
    base: ReflectionSequence

    def __post_init__(self):
        if abs(abs(self.tau) - 1.0) > 1e-12:
            raise InvalidRotationError(self.tau)

    def raw_coeff(self, n: int) -> complex:
        # polar power keeps |tau^n| = 1 to rounding for large n
        return cmath.exp(1j * n * cmath.phase(self.tau)) * self.base.coeff_at(n)


@dataclass(frozen=True)
class Zhedanov(ReflectionSequence):
    """The sequence 2 q^n - 1 for 0 < q < 1; accumulates toward -1.

    Once 2 q^n falls below half an ulp of 1, floating point rounds the
    coefficient to exactly -1; the value is clamped to the nearest
    representable point inside the disk (an error below one ulp of the true
    coefficient), keeping every index valid.
    """

    q: float

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise DomainError(f"Zhedanov parameter must lie in (0, 1), got {self.q}")

    def raw_coeff(self, n: int) -> complex:
        v = 2.0 * self.q**n - 1.0
        if v <= -1.0:
            v = math.nextafter(-1.0, 0.0)
        return complex(v)


@dataclass(frozen=True)
class JacobiArc(ReflectionSequence):
    """Exact coefficients of the arc measure with a Jacobi-type weight."""

    alpha: float
    gamma: float
    delta: float
    params: special.ArcMeasureParams = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "params", special.ArcMeasureParams(self.alpha, self.gamma, self.delta)
        )
        self._validate_prefix()

    def raw_coeff(self, n: int) -> complex:
        return complex(special.arc_reflection_exact(self.params, n))


@dataclass(frozen=True)
class Perturbed(ReflectionSequence):
    """Decaying perturbation of a constant: a + amplitude * s_n * (n+1)^(-p).

    s_n is 1 ("plain") or (-1)^n ("alt"). The shifted decay (n+1)^(-p) keeps
    the standard test parameterizations (amplitude up to 1 around a = 0.5)
    strictly inside the disk; validity is enforced per index, eagerly on a
    small prefix and lazily beyond it.
    """

    a: complex
    amplitude: float
    p: float
    sign: str = "plain"

    def __post_init__(self):
        if abs(self.a) >= 1.0:
            raise InvalidCoefficientError(1, self.a, detail="perturbation center")
        if self.amplitude < 0.0:
            raise DomainError("amplitude must be nonnegative")
        if self.p <= 0.0:
            raise DomainError("decay exponent must be positive")
        if self.sign not in ("plain", "alt"):
            raise DomainError(f"sign pattern must be 'plain' or 'alt', got {self.sign!r}")
        self._validate_prefix()

    def raw_coeff(self, n: int) -> complex:
        s = -1.0 if (self.sign == "alt" and n % 2) else 1.0
        return self.a + self.amplitude * s * (n + 1.0) ** (-self.p)


def coeff_at(seq: ReflectionSequence, n: int) -> complex:
    """Functional alias for seq.coeff_at(n)."""
    return seq.coeff_at(n)


def rotate_sequence(seq: ReflectionSequence, tau: complex) -> ReflectionSequence:
    """Sequence yielding tau^n times the original coefficient at index n."""
    return Rotated(complex(tau), seq)


@dataclass(frozen=True)
class ArcSpec:
    """Closed arc {e^(i t) : alpha <= t <= 2 pi - alpha} rotated by arg tau."""

    alpha: float
    tau: complex = 1.0 + 0.0j

    def __post_init__(self):
        if not 0.0 < self.alpha < math.pi:
            raise DomainError(f"arc half-gap angle must lie in (0, pi), got {self.alpha}")
        if abs(abs(self.tau) - 1.0) > 1e-12:
            raise InvalidRotationError(self.tau)

    @property
    def abs_a(self) -> float:
        """Modulus of the coefficient generating this arc: sin(alpha/2)."""
        return math.sin(self.alpha / 2.0)

    @property
    def endpoints(self) -> tuple[float, float]:
        rot = cmath.phase(self.tau)
        return (self.alpha + rot, TWO_PI - self.alpha + rot)

    def contains(self, theta: float, tol: float = 0.0) -> bool:
        """Whether e^(i theta) lies on the closed arc, widened by tol."""
        t = (theta - cmath.phase(self.tau)) % TWO_PI
        return self.alpha - tol <= t <= TWO_PI - self.alpha + tol

    def grid(self, num: int, epsilon: float = 0.0) -> np.ndarray:
        """Evenly spaced angles on the arc, inset by epsilon at both ends."""
        lo = self.alpha + epsilon
        hi = TWO_PI - self.alpha - epsilon
        if not lo < hi:
            raise DomainError("epsilon leaves an empty subarc")
        return np.linspace(lo, hi, num) + cmath.phase(self.tau)


def arc_from_a(a: complex, tau: complex = 1.0) -> ArcSpec:
    """Arc attached to a comparison coefficient via cos(alpha/2) = sqrt(1 - |a|^2)."""
    r = abs(a)
    if not 0.0 < r < 1.0:
        raise DomainError(f"comparison coefficient needs 0 < |a| < 1, got |a| = {r:.6g}")
    return ArcSpec(alpha=2.0 * math.asin(r), tau=complex(tau))


@dataclass(frozen=True)
class UnitCirclePoint:
    theta: float
    z: complex

    @classmethod
    def from_theta(cls, theta: float) -> "UnitCirclePoint":
        t = theta % TWO_PI
        return cls(theta=t, z=cmath.exp(1j * t))


def unit_point(z) -> complex:
    """Coerce a UnitCirclePoint or complex to a point with |z| = 1."""
    if isinstance(z, UnitCirclePoint):
        return z.z
    w = complex(z)
    if abs(abs(w) - 1.0) > 1e-9:
        raise DomainError(f"point must lie on the unit circle, got |z| = {abs(w):.6g}")
    return w


# fixed matrix norm for the whole artifact: maximum absolute column sum
def mat_norm(m: np.ndarray) -> float:
    return float(np.max(np.abs(m).sum(axis=0)))


def mat_det(m: np.ndarray) -> complex:
    return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def mat(a11: complex, a12: complex, a21: complex, a22: complex) -> np.ndarray:
    return np.array([[a11, a12], [a21, a22]], dtype=complex)


# ---------------------------------------------------------------------------
# coefficient-spec mini-language
# ---------------------------------------------------------------------------

def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise SequenceSpecError(f"cannot parse complex value {text!r}: {exc}") from exc
    raise SequenceSpecError(f"complex value must be 're' or 're,im', got {text!r}")


def _parse_kv(body: str, spec: str) -> dict[str, str]:
    """Split 'k=v,k=v,...' where a value may itself contain commas (complex)."""
    fields: dict[str, str] = {}
    key = None
    for token in body.split(","):
        if "=" in token:
            key, _, val = token.partition("=")
            key = key.strip()
            if key in fields:
                raise SequenceSpecError(f"duplicate field {key!r} in {spec!r}")
            fields[key] = val.strip()
        elif key is not None:
            fields[key] += "," + token.strip()
        else:
            raise SequenceSpecError(f"expected key=value near {token!r} in {spec!r}")
    return fields


def _require_fields(fields: dict[str, str], required: set[str], spec: str) -> None:
    missing = required - fields.keys()
    extra = fields.keys() - required
    if missing:
        raise SequenceSpecError(f"missing field(s) {sorted(missing)} in {spec!r}")
    if extra:
        raise SequenceSpecError(f"unknown field(s) {sorted(extra)} in {spec!r}")


def parse_sequence(spec: str) -> ReflectionSequence:
    """Parse the coefficient mini-language.

    Forms: const:re[,im] | zhedanov:q=V | jacobi-arc:alpha=V,gamma=V,delta=V |
    perturbed:a=re[,im],amp=V,p=V,sign=plain|alt | file:PATH (CSV n,re,im with
    header).
    """
    kind, sep, body = spec.partition(":")
    if not sep:
        raise SequenceSpecError(f"coefficient spec needs 'kind:...', got {spec!r}")
    kind = kind.strip().lower()
    try:
        if kind == "const":
            return Constant(_parse_complex(body))
        if kind == "zhedanov":
            fields = _parse_kv(body, spec)
            _require_fields(fields, {"q"}, spec)
            return Zhedanov(float(fields["q"]))
        if kind == "jacobi-arc":
            fields = _parse_kv(body, spec)
            _require_fields(fields, {"alpha", "gamma", "delta"}, spec)
            return JacobiArc(float(fields["alpha"]), float(fields["gamma"]), float(fields["delta"]))
        if kind == "perturbed":
            fields = _parse_kv(body, spec)
            _require_fields(fields, {"a", "amp", "p", "sign"}, spec)
            return Perturbed(
                a=_parse_complex(fields["a"]),
                amplitude=float(fields["amp"]),
                p=float(fields["p"]),
                sign=fields["sign"],
            )
        if kind == "file":
            return explicit_from_csv(body)
    except (DomainError, InvalidCoefficientError, InvalidRotationError):
        raise
    except SequenceSpecError:
        raise
    except ValueError as exc:
        raise SequenceSpecError(f"bad numeric field in {spec!r}: {exc}") from exc
    raise SequenceSpecError(
        f"unknown sequence kind {kind!r}; expected const, zhedanov, jacobi-arc, perturbed, or file"
    )


def explicit_from_csv(path: str | Path) -> Explicit:
    """Load an Explicit sequence from CSV with header n,re,im."""
    path = Path(path)
    try:
        with path.open(newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise SequenceSpecError(f"cannot read coefficient file {path}: {exc}") from exc
    if not rows or [c.strip().lower() for c in rows[0]] != ["n", "re", "im"]:
        raise SequenceSpecError(f"coefficient file {path} must start with header n,re,im")
    indexed: dict[int, complex] = {}
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 3:
            raise SequenceSpecError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
        try:
            n = int(row[0])
            value = complex(float(row[1]), float(row[2]))
        except ValueError as exc:
            raise SequenceSpecError(f"{path}:{lineno}: {exc}") from exc
        if n in indexed:
            raise SequenceSpecError(f"{path}:{lineno}: duplicate index {n}")
        indexed[n] = value
    if not indexed:
        raise SequenceSpecError(f"coefficient file {path} has no data rows")
    if sorted(indexed) != list(range(1, len(indexed) + 1)):
        raise SequenceSpecError(f"coefficient file {path} must cover indices 1..m contiguously")
    return Explicit([indexed[k] for k in sorted(indexed)])
