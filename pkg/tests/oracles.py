"""Brute-force reference computations on the scalar FieldElement path.

Nothing here touches the numpy tables, so these serve as independent checks
of the vectorized kernels.
"""

from __future__ import annotations

import random
from functools import lru_cache

import numpy as np

from fibrecurves.errors import ValidationError
from fibrecurves.fibre import make_system
from fibrecurves.finite_field import element, elements, from_index, make_field, parse_field
from fibrecurves.polynomial import Poly, derivative

ODD_PRIME_POWERS = (5, 7, 9, 11, 13, 17, 19, 23, 25, 27, 29, 31, 37, 41, 43, 47, 49)


def spec_for(q: int):
    for p in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        n, r = 0, q
        while r % p == 0:
            r //= p
            n += 1
        if r == 1 and n:
            return make_field(p, n)
    raise ValueError(q)


@lru_cache(maxsize=None)
def square_indices(spec) -> np.ndarray:
    """index of y*y for every y, computed by scalar multiplication."""
    return np.array([(y * y).index for y in elements(spec)], dtype=np.int64)


def naive_affine(spec, polys) -> int:
    """Count (x, y_1..y_k) in F_q^(k+1) with y_i^2 = f_i(x), one tuple at a time."""
    sq = square_indices(spec)
    k = len(polys)
    total = 0
    for x in elements(spec):
        hits = []
        for i, f in enumerate(polys):
            shape = [1] * k
            shape[i] = -1
            hits.append((sq == f(x).index).reshape(shape))
        grid = np.ones([spec.q] * k, dtype=bool)
        for h in hits:
            grid = grid & h
        total += int(grid.sum())
    return total


def naive_hyper_affine(f: Poly) -> int:
    """#{(x, y) : y^2 = f(x)} by double enumeration."""
    return naive_affine(f.spec, [f])


def naive_chi(a) -> int:
    if a.is_zero():
        return 0
    return 1 if any(y * y == a for y in elements(a.spec)) else -1


def random_poly(spec, degree: int, rng: random.Random, lc=None) -> Poly:
    coeffs = [from_index(spec, rng.randrange(spec.q)) for _ in range(degree)]
    lead = from_index(spec, lc if lc is not None else rng.randrange(1, spec.q))
    return Poly(coeffs + [lead], spec)


def random_system(spec, degrees, rng: random.Random, lcs=None, tries: int = 500):
    """A random valid system with the given degrees (rejection sampling)."""
    for _ in range(tries):
        fs = [random_poly(spec, d, rng, None if lcs is None else lcs[i]) for i, d in enumerate(degrees)]
        try:
            return make_system(spec, fs)
        except ValidationError:
            continue
    raise RuntimeError(f"no valid system for {degrees} over {spec}")


def embed(f: Poly, ext) -> Poly:
    """Coefficients of f over a prime field, viewed in an extension."""
    if not f.spec.is_prime:
        raise ValueError("embed needs a prime base field")
    return Poly([element(ext, c.index) for c in f.coeffs], ext)


def has_repeated_root(f: Poly) -> bool:
    """True if f and f' share a root in some F_{p^j}, j <= deg f / 2 (prime base field)."""
    d = f.degree
    df = derivative(f)
    for j in range(1, max(1, d // 2) + 1):
        ext = make_field(f.spec.p, j)
        fe, de = embed(f, ext), embed(df, ext)
        for a in elements(ext):
            if fe(a).is_zero() and (de.is_zero() or de(a).is_zero()):
                return True
    return False



def enumerate_monic_pairs(spec, degrees) -> dict:
    """Every valid monic pair (f_1, f_2) with N, keyed by flattened coefficient indices.

    Validity and counts use the scalar path only: gcd-based separability,
    scalar evaluation, characters from an explicit square set, and
    N = q + 1 - sum_I (q + 1 - |C_I|) with |C_I| counted per subset curve.
    """
    import itertools

    from fibrecurves.polynomial import gcd, is_separable

    q = spec.q
    xs = list(elements(spec))
    squares = {(y * y).index for y in xs}

    def chi(idx):
        return 0 if idx == 0 else (1 if idx in squares else -1)

    def family(d):
        out = []
        for tail in itertools.product(range(q), repeat=d):
            f = Poly([from_index(spec, c) for c in tail] + [spec.one()], spec)
            out.append((tail + (1,), f, [chi(f(x).index) for x in xs]))
        return out

    fam1, fam2 = family(degrees[0]), family(degrees[1])
    sep1 = [is_separable(f) for _, f, _ in fam1]
    sep2 = [is_separable(f) for _, f, _ in fam2]

    def inf(d):
        return 1 if d % 2 else 2  # monic

    d1, d2 = degrees
    out = {}
    for (k1, f1, r1), s1 in zip(fam1, sep1):
        if not s1:
            continue
        for (k2, f2, r2), s2 in zip(fam2, sep2):
            if not s2 or gcd(f1, f2).degree:
                continue
            c1 = q + sum(r1) + inf(d1)
            c2 = q + sum(r2) + inf(d2)
            c3 = q + sum(a * b for a, b in zip(r1, r2)) + inf(d1 + d2)
            out[k1 + k2] = q + 1 - sum(q + 1 - c for c in (c1, c2, c3))
    return out
