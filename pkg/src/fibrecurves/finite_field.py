"""Finite fields F_q, q = p^n with p an odd prime.

Two representations live here:

* ``FieldElement``: a scalar with coordinates in the power basis of the
  modulus.  Used for parsing, polynomial algebra and as the brute-force path.
* ``FieldTables``: vectorized arithmetic on *element indices* (numpy int64
  arrays).  Element ``c0 + c1*a + ... `` has index ``c0 + c1*p + c2*p^2 ...``,
  which is also its position in :func:`elements`.  Counting and search run on
  this representation.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
import sympy
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p

from .errors import CardinalityError, FieldError, FieldMismatchError, ParseError

# Hard ceiling on q^m for any counting call (native 64-bit arithmetic).
MAX_CARDINALITY = 2**62
# Largest field we are willing to tabulate/enumerate element by element.
ENUMERATION_LIMIT = 2**23


@dataclass(frozen=True)
class FieldSpec:
    p: int
    n: int = 1
    modulus: tuple[int, ...] | None = None

    @property
    def q(self) -> int:
        return self.p**self.n

    @property
    def is_prime(self) -> bool:
        return self.n == 1

    def __str__(self) -> str:
        return format_field(self)

    # convenience constructors
    def __call__(self, value) -> "FieldElement":
        return element(self, value)

    def zero(self) -> "FieldElement":
        return FieldElement((0,) * self.n, self)

    def one(self) -> "FieldElement":
        return FieldElement((1,) + (0,) * (self.n - 1), self)


def _is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    # galoistools wants descending coefficients
    return bool(gf_irreducible_p([int(c) for c in reversed(coeffs)], p, ZZ))


def default_modulus(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree n over F_p.

    Candidates are ordered by (c0, c1, ..., c_{n-1}) with c0 most significant.
    """
    for low in itertools.product(range(p), repeat=n):
        cand = tuple(low) + (1,)
        if low[0] != 0 and _is_irreducible(cand, p):
            return cand
    raise FieldError(f"no irreducible polynomial of degree {n} over F_{p}")  # unreachable


def make_field(p: int, n: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Validate parameters and return a FieldSpec."""
    if not isinstance(p, int) or not isinstance(n, int):
        raise FieldError("p and n must be integers")
    if p == 2:
        raise FieldError("characteristic 2 is not supported")
    if p < 2 or not sympy.isprime(p):
        raise FieldError(f"p = {p} is not a prime")
    if n < 1:
        raise FieldError(f"extension degree must be >= 1, got {n}")
    if p**n > MAX_CARDINALITY:
        raise CardinalityError(f"q = {p}^{n} exceeds 2^62")
    if n == 1:
        if modulus is not None and len(modulus) != 2:
            raise FieldError("a prime field takes no modulus (or a degree-1 one)")
        return FieldSpec(p, 1, None)
    if modulus is None:
        return FieldSpec(p, n, default_modulus(p, n))
    mod = tuple(int(c) % p for c in modulus)
    if len(mod) != n + 1 or mod[-1] != 1:
        raise FieldError(f"modulus must be monic of degree {n}")
    if not _is_irreducible(mod, p):
        raise FieldError(f"modulus {list(mod)} is reducible over F_{p}")
    return FieldSpec(p, n, mod)


_FIELD_RE = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*(?::\s*([-\d,\s]+))?\s*$")


def parse_field(text: str) -> FieldSpec:
    """Parse ``p``, ``p^n`` or ``p^n:c0,c1,...,cn``."""
    m = _FIELD_RE.match(text)
    if not m:
        raise ParseError(f"cannot parse field spec {text!r}")
    p, n = int(m.group(1)), int(m.group(2) or 1)
    modulus = None
    if m.group(3) is not None:
        try:
            modulus = [int(t) for t in m.group(3).split(",")]
        except ValueError as exc:
            raise ParseError(f"bad modulus in {text!r}") from exc
    return make_field(p, n, modulus)


def format_field(spec: FieldSpec) -> str:
    if spec.n == 1:
        return str(spec.p)
    return f"{spec.p}^{spec.n}:" + ",".join(map(str, spec.modulus))


class FieldElement:
    """An element of F_q stored as power-basis coordinates."""

    __slots__ = ("coeffs", "spec")

    def __init__(self, coeffs: Sequence[int], spec: FieldSpec):
        if len(coeffs) != spec.n:
            raise FieldError(f"expected {spec.n} coordinates, got {len(coeffs)}")
        self.coeffs = tuple(int(c) % spec.p for c in coeffs)
        self.spec = spec

    # -- coercion -------------------------------------------------------
    def _other(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldMismatchError(f"cannot combine elements of {self.spec} and {other.spec}")
            return other
        if isinstance(other, (int, np.integer)):
            return element(self.spec, int(other))
        return NotImplemented

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        p = self.spec.p
        return FieldElement([(a + b) % p for a, b in zip(self.coeffs, o.coeffs)], self.spec)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement([-a for a in self.coeffs], self.spec)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        spec = self.spec
        p, n = spec.p, spec.n
        if n == 1:
            return FieldElement((self.coeffs[0] * o.coeffs[0],), spec)
        prod = [0] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    prod[i + j] += a * b
        mod = spec.modulus
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(n):
                    prod[k - n + j] -= c * mod[j]
            prod[k] = 0
        return FieldElement(prod[:n], spec)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = self.spec.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.spec.q - 2)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    # -- predicates and conversions --------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.spec == other.spec and self.coeffs == other.coeffs
        if isinstance(other, (int, np.integer)):
            return self == element(self.spec, int(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs))

    @property
    def index(self) -> int:
        p = self.spec.p
        return sum(c * p**i for i, c in enumerate(self.coeffs))

    def __repr__(self) -> str:
        return f"FieldElement({list(self.coeffs)}, {self.spec})"

    def __str__(self) -> str:
        if self.spec.n == 1:
            return str(self.coeffs[0])
        terms = []
        for i in range(self.spec.n - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
            if i == 0:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms) if terms else "0"


def element(spec: FieldSpec, value) -> FieldElement:
    """Build an element from an int (prime subfield) or a coordinate sequence."""
    if isinstance(value, FieldElement):
        if value.spec != spec:
            raise FieldMismatchError(f"element of {value.spec} used in {spec}")
        return value
    if isinstance(value, (int, np.integer)):
        return FieldElement((int(value),) + (0,) * (spec.n - 1), spec)
    coords = list(value)
    if len(coords) > spec.n:
        raise FieldError(f"too many coordinates for {spec}")
    return FieldElement(coords + [0] * (spec.n - len(coords)), spec)


def from_index(spec: FieldSpec, idx: int) -> FieldElement:
    coords = []
    for _ in range(spec.n):
        idx, c = divmod(idx, spec.p)
        coords.append(c)
    return FieldElement(coords, spec)


def _check_enumerable(q: int) -> None:
    if q > MAX_CARDINALITY:
        raise CardinalityError(f"q = {q} exceeds 2^62")
    if q > ENUMERATION_LIMIT:
        raise CardinalityError(f"q = {q} exceeds the enumeration limit {ENUMERATION_LIMIT}")


def elements(spec: FieldSpec) -> Iterator[FieldElement]:
    """All q elements in index order (constant coordinate varies fastest)."""
    for idx in range(spec.q):
        yield from_index(spec, idx)


def quad_char(a: FieldElement) -> int:
    """Quadratic character via Euler's criterion: 0, +1 or -1."""
    if a.is_zero():
        return 0
    r = a ** ((a.spec.q - 1) // 2)
    return 1 if r == 1 else -1


def char_table(spec: FieldSpec) -> np.ndarray:
    """Quadratic character of every element, indexed by element index."""
    return field_tables(spec).chi


# ---------------------------------------------------------------------------
# vectorized index arithmetic


def _primitive_element(spec: FieldSpec) -> FieldElement:
    order = spec.q - 1
    exps = [order // ell for ell in sympy.factorint(order)]
    for idx in range(1, spec.q):
        g = from_index(spec, idx)
        if all(g**e != 1 for e in exps):
            return g
    raise FieldError("no primitive element found")  # unreachable


class FieldTables:
    """Vectorized arithmetic on element indices via exp/log tables.

    Multiplication uses discrete-log tables relative to a primitive element;
    addition works coordinate by coordinate.  The quadratic character of a
    nonzero element is the parity of its log.
    """

    def __init__(self, spec: FieldSpec):
        _check_enumerable(spec.q)
        self.spec = spec
        self.p, self.n, self.q = spec.p, spec.n, spec.q
        self.generator = _primitive_element(spec)
        self.exp = self._build_exp()
        log = np.zeros(self.q, dtype=np.int64)
        log[self.exp] = np.arange(self.q - 1, dtype=np.int64)
        self.log = log
        chi = np.where(log % 2 == 0, 1, -1).astype(np.int64)
        chi[0] = 0
        self.chi = chi
        self.chi.setflags(write=False)
        self.weights = self.p ** np.arange(self.n, dtype=np.int64)

    def _build_exp(self) -> np.ndarray:
        p, n, q = self.p, self.n, self.q
        g = self.generator
        # matrix of multiplication by g; column j = g * a^j
        basis = [from_index(self.spec, p**j) for j in range(n)]
        mat = np.array([(g * b).coeffs for b in basis], dtype=np.int64).T
        block = min(q - 1, max(64, int((q - 1) ** 0.5)))
        first = np.zeros((n, block), dtype=np.int64)
        v = np.zeros(n, dtype=np.int64)
        v[0] = 1
        for k in range(block):
            first[:, k] = v
            v = (mat @ v) % p
        # v == g^block now; jump matrix is multiplication by g^block
        step = np.eye(n, dtype=np.int64)
        for _ in range(block):
            step = (mat @ step) % p
        cols = [first]
        total = block
        cur = first
        while total < q - 1:
            cur = (step @ cur) % p
            cols.append(cur)
            total += block
        vecs = np.concatenate(cols, axis=1)[:, : q - 1]
        weights = p ** np.arange(n, dtype=np.int64)
        return (weights @ vecs).astype(np.int64)

    # each op takes and returns int64 index arrays (or scalars)
    def add(self, a, b):
        if self.n == 1:
            return (a + b) % self.p
        a, b = np.asarray(a), np.asarray(b)
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self.weights:
            out = out + ((a // w + b // w) % self.p) * w
        return out

    def neg(self, a):
        if self.n == 1:
            return (-a) % self.p
        a = np.asarray(a)
        out = np.zeros(a.shape, dtype=np.int64)
        for w in self.weights:
            out = out + ((-(a // w)) % self.p) * w
        return out

    def sub(self, a, b):
        if self.n == 1:
            return (a - b) % self.p
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.n == 1:
            return (a * b) % self.p
        a, b = np.asarray(a), np.asarray(b)
        r = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(-self.log[a]) % (self.q - 1)]

    def horner(self, coeffs: np.ndarray, xs: np.ndarray) -> np.ndarray:
        """Evaluate a batch of polynomials at a vector of points.

        ``coeffs`` has shape (B, d+1), ascending; ``xs`` has shape (m,).
        Returns a (B, m) array of value indices.
        """
        coeffs = np.asarray(coeffs, dtype=np.int64)
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.repeat(coeffs[:, -1:], xs.shape[0], axis=1)
        for j in range(coeffs.shape[1] - 2, -1, -1):
            acc = self.add(self.mul(acc, xs[None, :]), coeffs[:, j, None])
        return acc

    def eval_all(self, coeffs: Sequence[int]) -> np.ndarray:
        """Values of one polynomial (ascending index coefficients) at every element."""
        xs = np.arange(self.q, dtype=np.int64)
        acc = np.full(self.q, int(coeffs[-1]), dtype=np.int64)
        for c in reversed(coeffs[:-1]):
            acc = self.add(self.mul(acc, xs), int(c))
        return acc


@lru_cache(maxsize=32)
def field_tables(spec: FieldSpec) -> FieldTables:
    return FieldTables(spec)


def smallest_nonsquare(spec: FieldSpec) -> int:
    """Index of the first non-square in enumeration order."""
    return int(np.argmax(char_table(spec) == -1))
