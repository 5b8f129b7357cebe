"""Dense univariate polynomials over a FieldSpec."""

from __future__ import annotations

import re
from typing import Iterable, Sequence

from .errors import FieldMismatchError, ParseError, ValidationError, ZeroPolynomialError
from .finite_field import FieldElement, FieldSpec, element


class Poly:
    """Polynomial with ascending FieldElement coefficients, always normalized.

    The zero polynomial has no coefficients and no degree: ``degree`` raises
    on it rather than returning a sentinel integer.
    """

    __slots__ = ("coeffs", "spec")

    def __init__(self, coeffs: Iterable, spec: FieldSpec):
        cs = [element(spec, c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[FieldElement, ...] = tuple(cs)
        self.spec = spec

    @classmethod
    def zero(cls, spec: FieldSpec) -> "Poly":
        return cls((), spec)

    @classmethod
    def x(cls, spec: FieldSpec) -> "Poly":
        return cls((0, 1), spec)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if not self.coeffs:
            raise ZeroPolynomialError("the zero polynomial has no degree")
        return len(self.coeffs) - 1

    @property
    def leading_coeff(self) -> FieldElement:
        if not self.coeffs:
            raise ZeroPolynomialError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def indices(self) -> list[int]:
        """Coefficients as element indices, ascending."""
        return [c.index for c in self.coeffs]

    def _check(self, other: "Poly") -> None:
        if other.spec != self.spec:
            raise FieldMismatchError(f"polynomials over {self.spec} and {other.spec}")

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.spec == other.spec and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs))

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        zero = self.spec.zero()
        return Poly([x + (b[i] if i < len(b) else zero) for i, x in enumerate(a)], self.spec)

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs], self.spec)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, FieldElement)):
            c = element(self.spec, other)
            return Poly([a * c for a in self.coeffs], self.spec)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Poly.zero(self.spec)
        out = [self.spec.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out, self.spec)

    __rmul__ = __mul__

    def __call__(self, x) -> FieldElement:
        return evaluate(self, x)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly.zero(self.spec), self
        quot = [self.spec.zero()] * (dq + 1)
        inv_lc = other.leading_coeff.inverse()
        db = other.degree
        for k in range(dq, -1, -1):
            c = rem[k + db] * inv_lc
            quot[k] = c
            if c.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                rem[k + j] = rem[k + j] - c * b
        return Poly(quot, self.spec), Poly(rem[:db], self.spec)

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        return self * self.leading_coeff.inverse()

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r}, {self.spec})"

    def __str__(self) -> str:
        return pretty(self)


def evaluate(f: Poly, x) -> FieldElement:
    """Horner evaluation."""
    if isinstance(x, FieldElement) and x.spec != f.spec:
        raise FieldMismatchError(f"point in {x.spec}, polynomial over {f.spec}")
    x = element(f.spec, x)
    acc = f.spec.zero()
    for c in reversed(f.coeffs):
        acc = acc * x + c
    return acc


def derivative(f: Poly) -> Poly:
    return Poly([c * i for i, c in enumerate(f.coeffs)][1:], f.spec)


def gcd(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor."""
    f._check(g)
    if f.is_zero() and g.is_zero():
        raise ZeroPolynomialError("gcd(0, 0) is undefined")
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def subset_product(fs: Sequence[Poly], subset: Iterable[int]) -> Poly:
    """Product of ``fs[i-1]`` over the 1-based indices in ``subset``."""
    idx = sorted(set(subset))
    if not idx:
        raise ValidationError("subset must be non-empty")
    out = fs[idx[0] - 1]
    for i in idx[1:]:
        out = out * fs[i - 1]
    return out


def mask_product(fs: Sequence[Poly], mask: int) -> Poly:
    """Product over the subset encoded as a bitmask (bit i-1 <-> f_i)."""
    return subset_product(fs, [i + 1 for i in range(len(fs)) if mask >> i & 1])


def is_separable(f: Poly) -> bool:
    if f.is_zero():
        raise ZeroPolynomialError("separability of the zero polynomial")
    return gcd(f, derivative(f)).degree == 0


# ---------------------------------------------------------------------------
# text formats

_TOKEN_RE = re.compile(r"\s*(\[[^\]]*\]|-?\d+)\s*(,|$)")


def parse_poly(text: str, spec: FieldSpec) -> Poly:
    """Parse ``c0,c1,...`` where each ci is an integer or ``[d0,d1,...]``."""
    pos, coeffs = 0, []
    text = text.strip()
    if not text:
        raise ParseError("empty polynomial")
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"cannot parse polynomial {text!r} at offset {pos}")
        tok = m.group(1)
        if tok.startswith("["):
            inner = tok[1:-1].strip()
            try:
                coords = [int(t) for t in inner.split(",")] if inner else []
            except ValueError as exc:
                raise ParseError(f"bad coefficient {tok!r}") from exc
            if len(coords) > spec.n:
                raise ParseError(f"coefficient {tok!r} has more than {spec.n} coordinates")
            coeffs.append(element(spec, coords))
        else:
            coeffs.append(element(spec, int(tok)))
        pos = m.end()
        if m.group(2) == "" and pos < len(text):
            raise ParseError(f"trailing text in {text!r}")
    if text.endswith(","):
        raise ParseError(f"trailing comma in {text!r}")
    return Poly(coeffs, spec)


def _coeff_text(c: FieldElement) -> str:
    if c.spec.n == 1:
        return str(c.coeffs[0])
    if all(v == 0 for v in c.coeffs[1:]):
        return str(c.coeffs[0])
    return "[" + ",".join(map(str, c.coeffs)) + "]"


def format_poly(f: Poly) -> str:
    """Inverse of :func:`parse_poly`."""
    return ",".join(_coeff_text(c) for c in f.coeffs) if f.coeffs else "0"


def pretty(f: Poly) -> str:
    """Human form such as ``x^4 + x^3 + 16x^2 + 15x + 1``."""
    terms = []
    for i in range(len(f.coeffs) - 1, -1, -1):
        c = f.coeffs[i]
        if c.is_zero():
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        cs = str(c)
        if " " in cs and mono:
            cs = f"({cs})"
        if mono and c == 1:
            cs = ""
        terms.append(cs + mono)
    return " + ".join(terms) if terms else "0"


def coeff_lists(fs: Sequence[Poly]) -> list[list]:
    """JSON-friendly coefficient lists (ints, or coordinate lists over extensions)."""
    out = []
    for f in fs:
        if f.spec.n == 1:
            out.append([c.coeffs[0] for c in f.coeffs])
        else:
            out.append([list(c.coeffs) for c in f.coeffs])
    return out


def from_coeff_list(values: Sequence, spec: FieldSpec) -> Poly:
    return Poly([element(spec, v) for v in values], spec)
