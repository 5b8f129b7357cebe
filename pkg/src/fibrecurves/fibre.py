"""Fibre products y_i^2 = f_i(x), i = 1..k: genus, point count, decomposition.

Subsets I of {1..k} are encoded as bitmasks with bit i-1 standing for f_i;
every per-subset list below is ordered by bitmask 1, 2, ..., 2^k - 1.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from math import isqrt
from typing import Sequence

import numpy as np

from .errors import FieldMismatchError, InvariantError, ValidationError
from .finite_field import FieldSpec, field_tables, parse_field, quad_char
from .hyperelliptic import (
    HyperellipticCurve,
    LPolynomial,
    check_extension,
    count_over_extension,
    genus_hyper,
    infinity_rule,
    l_polynomial,
)
from .polynomial import Poly, coeff_lists, from_coeff_list, gcd, is_separable, mask_product


@dataclass(frozen=True)
class CurveSystem:
    spec: FieldSpec
    polys: tuple[Poly, ...]

    def __post_init__(self):
        if not self.polys:
            raise ValidationError("need at least one polynomial")
        for f in self.polys:
            if f.spec != self.spec:
                raise FieldMismatchError(f"polynomial over {f.spec} in a system over {self.spec}")
            if f.is_zero() or f.degree < 1:
                raise ValidationError("every f_i must have degree >= 1")
        for i, f in enumerate(self.polys):
            if not is_separable(f):
                raise ValidationError(f"f_{i + 1} = {f} is not separable")
            for j in range(i):
                if gcd(f, self.polys[j]).degree > 0:
                    raise ValidationError(f"f_{j + 1} and f_{i + 1} share a factor")

    @property
    def k(self) -> int:
        return len(self.polys)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(f.degree for f in self.polys)

    @property
    def q(self) -> int:
        return self.spec.q


def make_system(spec: FieldSpec, polys: Sequence[Poly]) -> CurveSystem:
    return CurveSystem(spec, tuple(polys))


def genus_fibre(degrees: Sequence[int], k: int | None = None) -> tuple[int, int]:
    """(g, delta_k) for the fibre product with the given degrees."""
    degrees = list(degrees)
    if not degrees:
        raise ValidationError("empty degree list")
    k = len(degrees) if k is None else k
    if k != len(degrees):
        raise ValidationError(f"k = {k} but {len(degrees)} degrees given")
    if any(d < 1 for d in degrees):
        raise ValidationError("degrees must be >= 1")
    any_odd = any(d % 2 for d in degrees)
    if k == 1:
        return (degrees[0] - 1) // 2, 0
    delta = 2 ** (k - 2) if any_odd else 0
    return 2 ** (k - 2) * (sum(degrees) - 4) + 1 + delta, delta


def geometric_infinity(degrees: Sequence[int], k: int | None = None) -> int:
    k = len(degrees) if k is None else k
    return 2 ** (k - 1) if any(d % 2 for d in degrees) else 2**k


def hws_bound(q: int, g: int) -> int:
    """Hasse-Weil-Serre bound q + 1 + g * floor(2 sqrt q)."""
    if q < 2 or g < 0:
        raise ValidationError("need q >= 2 and g >= 0")
    return q + 1 + g * isqrt(4 * q)


def subset_members(mask: int, k: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(k) if mask >> i & 1)


@dataclass(frozen=True)
class SubsetReport:
    mask: int
    subset: tuple[int, ...]
    d_I: int
    g_I: int
    affine: int
    infinity: int
    A_I: int


@dataclass
class SystemReport:
    field: str
    polys: list
    k: int
    degrees: list[int]
    genus: int
    delta_k: int
    geometric_infinity: int
    N: int
    hws: int
    subsets: list[SubsetReport]
    affine_oracle: int | None = None
    rational_infinity: int | None = None
    rational_infinity_method: str | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "SystemReport":
        d = dict(d)
        d["subsets"] = [SubsetReport(**{**s, "subset": tuple(s["subset"])}) for s in d["subsets"]]
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "SystemReport":
        return cls.from_dict(json.loads(text))

    def system(self) -> CurveSystem:
        spec = parse_field(self.field)
        return make_system(spec, [from_coeff_list(c, spec) for c in self.polys])


def character_rows(sys: CurveSystem) -> np.ndarray:
    """(k, q) array of chi(f_i(x)) over all x in enumeration order."""
    tables = field_tables(sys.spec)
    return np.stack([tables.chi[tables.eval_all(f.indices())] for f in sys.polys])


def subset_char_sums(rows: np.ndarray) -> np.ndarray:
    """sum_x chi(f_I(x)) for every mask, built one multiply per subset."""
    k = rows.shape[0]
    prods = np.empty((2**k, rows.shape[1]), dtype=rows.dtype)
    prods[0] = 1
    for mask in range(1, 2**k):
        low = mask & -mask
        prods[mask] = prods[mask ^ low] * rows[low.bit_length() - 1]
    return prods[1:].sum(axis=1)


def subset_reports(sys: CurveSystem, rows: np.ndarray | None = None) -> list[SubsetReport]:
    rows = character_rows(sys) if rows is None else rows
    sums = subset_char_sums(rows)
    lc_chars = [quad_char(f.leading_coeff) for f in sys.polys]
    degs = sys.degrees
    q = sys.q
    out = []
    for mask in range(1, 2**sys.k):
        members = subset_members(mask, sys.k)
        d_I = sum(degs[i - 1] for i in members)
        lc = int(np.prod([lc_chars[i - 1] for i in members]))
        affine = q + int(sums[mask - 1])
        inf = infinity_rule(d_I, lc)
        out.append(SubsetReport(mask, members, d_I, genus_hyper(d_I), affine, inf, q + 1 - affine - inf))
    return out


def affine_oracle(sys: CurveSystem, rows: np.ndarray | None = None) -> int:
    """sum_x prod_i (1 + chi(f_i(x))): affine points of C over F_q."""
    rows = character_rows(sys) if rows is None else rows
    return int(np.prod(1 + rows, axis=0).sum())


def rational_infinity(sys: CurveSystem, N: int | None = None, affine: int | None = None) -> tuple[int, str]:
    """Rational points of C at infinity, with the method used."""
    degs = sys.degrees
    if all(d % 2 == 0 for d in degs):
        ok = all(quad_char(f.leading_coeff) == 1 for f in sys.polys)
        return (2**sys.k if ok else 0), "direct"
    N = point_count(sys, with_oracle=False).N if N is None else N
    affine = affine_oracle(sys) if affine is None else affine
    diff = N - affine
    if not 0 <= diff <= geometric_infinity(degs):
        raise InvariantError(f"N - affine = {diff} outside [0, {geometric_infinity(degs)}]")
    return diff, "difference"


def point_count(sys: CurveSystem, with_oracle: bool = True) -> SystemReport:
    rows = character_rows(sys)
    subsets = subset_reports(sys, rows)
    q = sys.q
    N = q + 1 - sum(s.A_I for s in subsets)
    g, delta = genus_fibre(sys.degrees)
    if g != sum(s.g_I for s in subsets):
        raise InvariantError("genus formula disagrees with the subset genus sum")
    hws = hws_bound(q, g)
    if N > hws:
        raise InvariantError(f"N = {N} exceeds the Hasse-Weil-Serre bound {hws}")
    report = SystemReport(
        field=str(sys.spec),
        polys=coeff_lists(sys.polys),
        k=sys.k,
        degrees=list(sys.degrees),
        genus=g,
        delta_k=delta,
        geometric_infinity=geometric_infinity(sys.degrees),
        N=N,
        hws=hws,
        subsets=subsets,
    )
    if with_oracle:
        report.affine_oracle = affine_oracle(sys, rows)
        report.rational_infinity, report.rational_infinity_method = rational_infinity(
            sys, N, report.affine_oracle
        )
    return report


# ---------------------------------------------------------------------------
# numerical check of the Jacobian decomposition


def affine_count_extension(sys: CurveSystem, m: int) -> int:
    """Affine points of C over F_{q^m} (prime base field)."""
    ext = check_extension(sys.spec, m)
    tables = field_tables(ext)
    acc = np.ones(ext.q, dtype=np.int64)
    for f in sys.polys:
        acc *= 1 + tables.chi[tables.eval_all(f.indices())]
    return int(acc.sum())


@dataclass
class IsogenyCheck:
    genus: int
    product: LPolynomial
    factors: dict[int, LPolynomial]
    # per m = 1..g: (predicted |C(F_{q^m})|, affine count, defect)
    extension_rows: list[tuple[int, int, int, int]]
    # per mask: (m = g_I + 1, predicted, counted)
    factor_rows: list[tuple[int, int, int, int]]
    geometric_infinity: int

    @property
    def ok(self) -> bool:
        defects = all(0 <= d <= self.geometric_infinity for _, _, _, d in self.extension_rows)
        factors = all(pred == cnt for _, _, pred, cnt in self.factor_rows)
        return defects and factors and 2 * self.genus == len(self.product.coeffs) - 1


def verify_isogeny(sys: CurveSystem, check_factors: bool = True) -> IsogenyCheck:
    """Compare prod_I L_I against direct counts of C over F_{q^m}, m = 1..g."""
    fs = sys.polys
    factors: dict[int, LPolynomial] = {}
    product = LPolynomial(sys.q, (1,))
    factor_rows = []
    for mask in range(1, 2**sys.k):
        curve = HyperellipticCurve(mask_product(fs, mask))
        L = l_polynomial(curve)
        factors[mask] = L
        product = product * L
        if check_factors:
            m = L.genus + 1
            factor_rows.append((mask, m, L.predicted_count(m), count_over_extension(curve, m)))
    g, _ = genus_fibre(sys.degrees)
    geo = geometric_infinity(sys.degrees)
    rows = []
    sums = product.power_sums(g) if g else []
    for m in range(1, g + 1):
        predicted = sys.q**m + 1 - sums[m - 1]
        affine = affine_count_extension(sys, m)
        rows.append((m, predicted, affine, predicted - affine))
    return IsogenyCheck(g, product, factors, rows, factor_rows, geo)
