"""Single hyperelliptic curves y^2 = f(x): point counts and L-polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

from .errors import CardinalityError, InvariantError, ValidationError
from .finite_field import (
    ENUMERATION_LIMIT,
    MAX_CARDINALITY,
    FieldSpec,
    field_tables,
    make_field,
    quad_char,
)
from .polynomial import Poly, is_separable


def genus_hyper(f: Poly | int) -> int:
    """Genus floor((deg f - 1)/2) of y^2 = f; accepts a Poly or a degree."""
    d = f if isinstance(f, int) else f.degree
    if d < 1:
        raise ValidationError("hyperelliptic model needs deg f >= 1")
    return (d - 1) // 2


def infinity_rule(degree: int, lc_char: int) -> int:
    """Rational points at infinity on the smooth model of y^2 = f."""
    if degree % 2:
        return 1
    return 2 if lc_char == 1 else 0


@dataclass(frozen=True)
class HyperellipticCurve:
    f: Poly

    def __post_init__(self):
        if self.f.is_zero() or self.f.degree < 1:
            raise ValidationError("f must have degree >= 1")
        if not is_separable(self.f):
            raise ValidationError(f"f = {self.f} is not separable")

    @property
    def spec(self) -> FieldSpec:
        return self.f.spec

    @property
    def genus(self) -> int:
        return genus_hyper(self.f)


def _char_sum(spec: FieldSpec, coeff_indices: list[int]) -> int:
    tables = field_tables(spec)
    return int(tables.chi[tables.eval_all(coeff_indices)].sum())


def affine_count(c: HyperellipticCurve) -> int:
    """Number of (x, y) in F_q^2 with y^2 = f(x)."""
    return c.spec.q + _char_sum(c.spec, c.f.indices())


def infinity_count(c: HyperellipticCurve) -> int:
    return infinity_rule(c.f.degree, quad_char(c.f.leading_coeff))


def point_total(c: HyperellipticCurve) -> int:
    return affine_count(c) + infinity_count(c)


def trace_A(c: HyperellipticCurve) -> int:
    """A = q + 1 - |C(F_q)|."""
    return c.spec.q + 1 - point_total(c)


def check_extension(spec: FieldSpec, m: int) -> FieldSpec:
    """Field F_{q^m} (default modulus) for a prime base field, size-checked."""
    if not spec.is_prime:
        raise ValidationError("extension counting needs a prime base field")
    if m < 1:
        raise ValidationError("extension degree must be >= 1")
    size = spec.p**m
    if size > MAX_CARDINALITY:
        raise CardinalityError(f"q^m = {spec.p}^{m} exceeds 2^62")
    if size > ENUMERATION_LIMIT:
        raise CardinalityError(f"q^m = {size} exceeds the enumeration limit {ENUMERATION_LIMIT}")
    return spec if m == 1 else make_field(spec.p, m)


def count_over_extension(c: HyperellipticCurve, m: int) -> int:
    """|C(F_{q^m})| including points at infinity."""
    ext = check_extension(c.spec, m)
    # prime-subfield elements keep their index under the embedding
    coeffs = c.f.indices()
    tables = field_tables(ext)
    affine = ext.q + int(tables.chi[tables.eval_all(coeffs)].sum())
    return affine + infinity_rule(c.f.degree, int(tables.chi[coeffs[-1]]))


@dataclass(frozen=True)
class TraceSequence:
    """a_j = q^j + 1 - |C(F_{q^j})| for j = 1..m."""

    q: int
    genus: int
    values: tuple[int, ...]

    def __post_init__(self):
        for j, a in enumerate(self.values, start=1):
            if a * a > 4 * self.genus**2 * self.q**j:
                raise InvariantError(f"|a_{j}| = {abs(a)} violates the Weil bound")


def trace_sequence(c: HyperellipticCurve, m: int) -> TraceSequence:
    q = c.spec.q
    vals = tuple(q**j + 1 - count_over_extension(c, j) for j in range(1, m + 1))
    return TraceSequence(q, c.genus, vals)


def newton_from_power_sums(sums: list[int], length: int) -> list[int]:
    """Coefficients c_0..c_{length-1} of prod(1 - b T) from power sums of the b."""
    c = [1]
    for i in range(1, length):
        acc = sum(sums[j - 1] * c[i - j] for j in range(1, i + 1))
        if acc % i:
            raise InvariantError(f"non-integral L-polynomial coefficient at T^{i}")
        c.append(-acc // i)
    return c


def power_sums(coeffs: list[int], m: int) -> list[int]:
    """Power sums s_1..s_m of the reciprocal roots of sum c_i T^i (c_0 = 1)."""
    s: list[int] = []
    for i in range(1, m + 1):
        ci = coeffs[i] if i < len(coeffs) else 0
        acc = -i * ci - sum(s[j - 1] * (coeffs[i - j] if i - j < len(coeffs) else 0) for j in range(1, i))
        s.append(acc)
    return s


@dataclass(frozen=True)
class LPolynomial:
    q: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        deg = len(self.coeffs) - 1
        if deg % 2 or self.coeffs[0] != 1:
            raise InvariantError("L-polynomial must have even degree and constant term 1")
        g = deg // 2
        for i in range(g + 1):
            if self.coeffs[2 * g - i] != self.q ** (g - i) * self.coeffs[i]:
                raise InvariantError(f"functional equation fails at i = {i}")
        for j, s in enumerate(self.power_sums(2 * g), start=1):
            if s * s > 4 * g * g * self.q**j:
                raise InvariantError(f"reciprocal roots too large: |s_{j}| = {abs(s)}")

    @property
    def genus(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def power_sums(self, m: int) -> list[int]:
        return power_sums(list(self.coeffs), m)

    def predicted_count(self, m: int) -> int:
        """|C(F_{q^m})| implied by the reciprocal roots."""
        return self.q**m + 1 - self.power_sums(m)[-1]

    def __call__(self, t: int) -> int:
        return sum(c * t**i for i, c in enumerate(self.coeffs))

    def __mul__(self, other: "LPolynomial") -> "LPolynomial":
        if self.q != other.q:
            raise ValidationError("L-polynomials over different fields")
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return LPolynomial(self.q, tuple(out))

    def to_list(self) -> list[int]:
        return list(self.coeffs)


def l_polynomial_from_traces(q: int, g: int, traces: list[int]) -> LPolynomial:
    """Build L from a_1..a_g; the top half comes from the functional equation."""
    if len(traces) < g:
        raise ValidationError(f"need {g} traces, got {len(traces)}")
    low = newton_from_power_sums(list(traces[:g]), g + 1)
    full = low + [q ** (g - i) * low[i] for i in range(g - 1, -1, -1)]
    return LPolynomial(q, tuple(full))


def l_polynomial(c: HyperellipticCurve) -> LPolynomial:
    g = c.genus
    if g == 0:
        return LPolynomial(c.spec.q, (1,))
    seq = trace_sequence(c, g)
    return l_polynomial_from_traces(c.spec.q, g, list(seq.values))


def weil_ok(a: int, g: int, q: int) -> bool:
    """|a| <= g * floor(2 sqrt q)."""
    return abs(a) <= g * isqrt(4 * q)


__all__ = [
    "HyperellipticCurve",
    "LPolynomial",
    "TraceSequence",
    "affine_count",
    "count_over_extension",
    "genus_hyper",
    "infinity_count",
    "infinity_rule",
    "l_polynomial",
    "l_polynomial_from_traces",
    "point_total",
    "trace_A",
    "trace_sequence",
]
