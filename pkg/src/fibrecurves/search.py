"""Record hunting over tuples (f_1, ..., f_k) of fixed degrees.

Candidates are points of a mixed-radix *slot* space: one slot per coefficient
of each f_i (ascending, f_1 first).  The first slot is most significant, so
candidate index order equals lexicographic order of the flattened coefficient
index tuple, which is also the tie-break order of every leaderboard.

Scoring is vectorized over batches: each f_i is evaluated at every x, mapped
through the character table, and the 2^k - 1 subset sums are built with one
multiply per subset.  Separability of f_1 ... f_k is decided by a lock-step
Euclidean algorithm run on the whole batch in the index representation.

Random streams: batch ``b`` of a random search draws from
``PCG64(SeedSequence(seed, spawn_key=(b,)))``, so the output does not depend
on how batches are distributed across workers.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvariantError, ValidationError
from .fibre import CurveSystem, genus_fibre, hws_bound, make_system, point_count
from .finite_field import (
    FieldSpec,
    FieldTables,
    field_tables,
    format_field,
    from_index,
    parse_field,
    smallest_nonsquare,
)
from .polynomial import Poly, coeff_lists, from_coeff_list

STRATEGIES = ("exhaustive", "random", "hill-climb")


@dataclass
class SearchConfig:
    field: FieldSpec
    degrees: tuple[int, ...]
    strategy: str = "random"
    budget: int = 100_000
    seed: int = 0
    monic_only: bool = True
    normalize: bool = True
    lc_classes: bool = False
    top: int = 10
    patience: int = 200
    cap: int = 10**9
    batch_size: int = 4096
    workers: int = 1
    spot_check_every: int = 1024

    def __post_init__(self):
        self.degrees = tuple(int(d) for d in self.degrees)
        if not self.degrees:
            raise ValidationError("degrees must be non-empty")
        if any(d < 1 for d in self.degrees):
            raise ValidationError("degrees must be >= 1")
        if self.budget < 1:
            raise ValidationError("budget must be >= 1")
        if self.strategy not in STRATEGIES:
            raise ValidationError(f"unknown strategy {self.strategy!r}")
        if self.top < 1 or self.batch_size < 1 or self.workers < 1:
            raise ValidationError("top, batch_size and workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer")

    @property
    def genus(self) -> int:
        return genus_fibre(self.degrees)[0]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["field"] = format_field(self.field)
        d["degrees"] = list(self.degrees)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SearchConfig":
        d = dict(d)
        if isinstance(d.get("field"), str):
            d["field"] = parse_field(d["field"])
        if isinstance(d.get("degrees"), str):
            d["degrees"] = [int(t) for t in d["degrees"].split(",")]
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ValidationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)


@dataclass
class RecordEntry:
    q: int
    g: int
    N: int
    field: str
    polys: list
    hws: int
    known_lower: int | None = None
    known_upper: int | None = None
    improved: bool | None = None
    discrepancy: bool = False

    def system(self) -> CurveSystem:
        spec = parse_field(self.field)
        return make_system(spec, [from_coeff_list(c, spec) for c in self.polys])

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


# ---------------------------------------------------------------------------
# candidate space


class CandidateSpace:
    """Mixed-radix enumeration of coefficient tuples."""

    def __init__(self, cfg: SearchConfig):
        spec = cfg.field
        q, p = spec.q, spec.p
        self.degrees = cfg.degrees
        self.choices: list[np.ndarray] = []
        self.offsets: list[int] = []
        full = np.arange(q, dtype=np.int64)
        if cfg.lc_classes:
            lcs = np.array([1, smallest_nonsquare(spec)], dtype=np.int64)
        elif cfg.monic_only:
            lcs = np.array([1], dtype=np.int64)
        else:
            lcs = np.arange(1, q, dtype=np.int64)
        for i, d in enumerate(cfg.degrees):
            self.offsets.append(len(self.choices))
            for j in range(d + 1):
                if j == d:
                    self.choices.append(lcs)
                elif i == 0 and j == d - 1 and cfg.normalize and d % p:
                    # x -> x + t moves this coefficient through all of F_q
                    self.choices.append(np.zeros(1, dtype=np.int64))
                else:
                    self.choices.append(full)
        self.offsets.append(len(self.choices))
        self.radices = [len(c) for c in self.choices]
        self.size = 1
        for r in self.radices:
            self.size *= r

    @property
    def n_slots(self) -> int:
        return len(self.choices)

    def digits_of(self, indices: np.ndarray) -> np.ndarray:
        rem = np.asarray(indices, dtype=np.int64).copy()
        out = np.empty((rem.shape[0], self.n_slots), dtype=np.int64)
        for s in range(self.n_slots - 1, -1, -1):
            rem, out[:, s] = np.divmod(rem, self.radices[s])
        return out

    def coeffs_of(self, digits: np.ndarray) -> np.ndarray:
        out = np.empty_like(digits)
        for s, ch in enumerate(self.choices):
            out[:, s] = ch[digits[:, s]]
        return out

    def random_digits(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return np.stack([rng.integers(0, r, size=count) for r in self.radices], axis=1)

    def split(self, coeffs: np.ndarray) -> list[np.ndarray]:
        return [coeffs[:, self.offsets[i] : self.offsets[i + 1]] for i in range(len(self.degrees))]

    def polys(self, spec: FieldSpec, row: Sequence[int]) -> list[Poly]:
        return [
            Poly([from_index(spec, int(c)) for c in row[self.offsets[i] : self.offsets[i + 1]]], spec)
            for i in range(len(self.degrees))
        ]


# ---------------------------------------------------------------------------
# batched validity


def _degrees(c: np.ndarray) -> np.ndarray:
    nz = c != 0
    width = c.shape[1]
    return np.where(nz.any(axis=1), width - 1 - np.argmax(nz[:, ::-1], axis=1), -1)


def batch_coprime(t: FieldTables, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """gcd(a, b) == 1 for each row, by a lock-step Euclidean algorithm.

    ``a`` rows must be nonzero.  Every iteration either lowers deg a by one
    leading-term cancellation or swaps a and b, so the loop is bounded by
    twice the total degree.
    """
    width = max(a.shape[1], b.shape[1])
    a = np.pad(a, ((0, 0), (0, width - a.shape[1])))
    b = np.pad(b, ((0, 0), (0, width - b.shape[1])))
    da, db = _degrees(a), _degrees(b)
    cols = np.arange(width)
    for _ in range(4 * width + 2):
        active = db >= 0
        if not active.any():
            break
        swap = active & (da < db)
        if swap.any():
            a[swap], b[swap] = b[swap].copy(), a[swap].copy()
            da[swap], db[swap] = db[swap], da[swap].copy()
        act = np.flatnonzero(db >= 0)
        shift = da[act] - db[act]
        lead_a = a[act, da[act]]
        lead_b = b[act, db[act]]
        factor = t.mul(lead_a, t.inv(lead_b))
        src = cols[None, :] - shift[:, None]
        shifted = np.where(src >= 0, b[act[:, None], np.clip(src, 0, None)], 0)
        a[act] = t.sub(a[act], t.mul(factor[:, None], shifted))
        da[act] = _degrees(a[act])
    else:
        raise InvariantError("batched Euclid failed to terminate")
    return da == 0


def batch_derivative(t: FieldTables, c: np.ndarray) -> np.ndarray:
    j = np.arange(1, c.shape[1], dtype=np.int64) % t.p
    return t.mul(c[:, 1:], j[None, :])


def batch_separable(t: FieldTables, polys: list[np.ndarray]) -> np.ndarray:
    """Is prod f_i separable?  Each f_i squarefree and pairwise coprime."""
    ok = np.ones(polys[0].shape[0], dtype=bool)
    for i, f in enumerate(polys):
        ok &= batch_coprime(t, f, batch_derivative(t, f))
        for g in polys[:i]:
            ok &= batch_coprime(t, f, g)
    return ok


# ---------------------------------------------------------------------------
# scoring


def batch_scores(t: FieldTables, degrees: Sequence[int], polys: list[np.ndarray]) -> np.ndarray:
    """N = q + 1 - sum_I A_I for each row (meaningful only for valid rows)."""
    k = len(degrees)
    xs = np.arange(t.q, dtype=np.int64)
    rows = [t.chi[t.horner(f, xs)] for f in polys]
    lcs = [t.chi[f[:, -1]] for f in polys]
    bt = polys[0].shape[0]
    total = np.zeros(bt, dtype=np.int64)
    prods: list = [None] * (2**k)
    lc_prod: list = [None] * (2**k)
    deg: list = [0] * (2**k)
    for mask in range(1, 2**k):
        low = mask & -mask
        i = low.bit_length() - 1
        rest = mask ^ low
        prods[mask] = rows[i] if rest == 0 else prods[rest] * rows[i]
        lc_prod[mask] = lcs[i] if rest == 0 else lc_prod[rest] * lcs[i]
        deg[mask] = deg[rest] + degrees[i]
        s = prods[mask].sum(axis=1)
        inf = 1 if deg[mask] % 2 else 2 * (lc_prod[mask] == 1)
        total += 1 - s - inf
    return t.q + 1 - total


@dataclass
class CharacterCache:
    """Per-f_i character rows chi(f_i(x)) and leading-coefficient characters."""

    q: int
    degrees: tuple[int, ...]
    rows: np.ndarray
    lc_chars: tuple[int, ...]
    inf_total: int = 0
    genus: int = 0

    def __post_init__(self):
        k = len(self.degrees)
        total = 0
        for mask in range(1, 2**k):
            members = [i for i in range(k) if mask >> i & 1]
            d = sum(self.degrees[i] for i in members)
            lc = int(np.prod([self.lc_chars[i] for i in members]))
            total += 1 if d % 2 else (2 if lc == 1 else 0)
        self.inf_total = total
        self.genus = genus_fibre(self.degrees)[0]


def build_cache(sys: CurveSystem) -> CharacterCache:
    t = field_tables(sys.spec)
    rows = np.stack([t.chi[t.eval_all(f.indices())] for f in sys.polys])
    lcs = tuple(int(t.chi[f.leading_coeff.index]) for f in sys.polys)
    return CharacterCache(sys.q, sys.degrees, rows, lcs)


def evaluate_candidate(sys: CurveSystem | None, cache: CharacterCache) -> tuple[int, int]:
    """(N, g) from cached character rows, O(q * 2^k)."""
    rows = cache.rows
    k = rows.shape[0]
    if k == 1:
        s = int(rows[0].sum())
    elif k == 2:
        s = int(rows.sum()) + int(rows[0] @ rows[1])
    else:
        prods = [None] * (2**k)
        s = 0
        for mask in range(1, 2**k):
            low = mask & -mask
            r = rows[low.bit_length() - 1]
            prods[mask] = r if mask == low else prods[mask ^ low] * r
            s += int(prods[mask].sum())
    # N = q + 1 - sum_I (1 - S_I - inf_I)
    n_subsets = 2**k - 1
    return cache.q + 1 - n_subsets + s + cache.inf_total, cache.genus


# ---------------------------------------------------------------------------
# leaderboards


Board = list  # list of (N, key tuple)


def merge_boards(boards: Sequence[Board], top: int) -> Board:
    seen: dict[tuple, int] = {}
    for b in boards:
        for n, key in b:
            seen[key] = n
    ranked = sorted(((n, key) for key, n in seen.items()), key=lambda e: (-e[0], e[1]))
    return ranked[:top]


def _batch_board(coeffs: np.ndarray, scores: np.ndarray, valid: np.ndarray, top: int) -> Board:
    idx = np.flatnonzero(valid)
    if idx.size == 0:
        return []
    c, s = coeffs[idx], scores[idx]
    order = np.lexsort(tuple(c[:, j] for j in range(c.shape[1] - 1, -1, -1)) + (-s,))
    board: Board = []
    seen = set()
    for o in order:
        key = tuple(int(v) for v in c[o])
        if key in seen:
            continue
        seen.add(key)
        board.append((int(s[o]), key))
        if len(board) >= top:
            break
    return board


@dataclass
class PartialResult:
    board: Board
    evaluated: int = 0
    skipped: int = 0
    spot_checks: int = 0


def _spot_check(spec: FieldSpec, space: CandidateSpace, key: Sequence[int], n: int) -> None:
    sys = make_system(spec, space.polys(spec, key))
    ref = point_count(sys, with_oracle=False).N
    if ref != n:
        raise InvariantError(f"kernel N = {n} but point_count N = {ref} for {coeff_lists(sys.polys)}")


def _score_rows(cfg: SearchConfig, space: CandidateSpace, coeffs: np.ndarray):
    t = field_tables(cfg.field)
    polys = space.split(coeffs)
    valid = batch_separable(t, polys)
    scores = batch_scores(t, cfg.degrees, polys)
    return scores, valid


def _run_batches(cfg: SearchConfig, batch_ids: Sequence[int], total: int) -> PartialResult:
    space = CandidateSpace(cfg)
    hws = hws_bound(cfg.field.q, cfg.genus)
    res = PartialResult([])
    for b in batch_ids:
        start = b * cfg.batch_size
        stop = min(start + cfg.batch_size, total)
        if cfg.strategy == "exhaustive":
            digits = space.digits_of(np.arange(start, stop, dtype=np.int64))
        else:
            rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed, spawn_key=(b,))))
            digits = space.random_digits(rng, stop - start)
        coeffs = space.coeffs_of(digits)
        scores, valid = _score_rows(cfg, space, coeffs)
        res.evaluated += stop - start
        res.skipped += int((~valid).sum())
        if valid.any() and int(scores[valid].max()) > hws:
            raise InvariantError(f"candidate exceeds the Hasse-Weil-Serre bound {hws}")
        every = cfg.spot_check_every
        if every:
            first = (-start) % every
            for j in range(first, stop - start, every):
                if valid[j]:
                    _spot_check(cfg.field, space, coeffs[j], int(scores[j]))
                    res.spot_checks += 1
        res.board = merge_boards([res.board, _batch_board(coeffs, scores, valid, cfg.top)], cfg.top)
    return res


def _run_batches_star(args):
    return _run_batches(*args)


def _run_hill_climb(cfg: SearchConfig) -> PartialResult:
    space = CandidateSpace(cfg)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed)))
    hws = hws_bound(cfg.field.q, cfg.genus)
    res = PartialResult([])
    mutable = [s for s, r in enumerate(space.radices) if r > 1]
    found: dict[tuple, int] = {}

    def score(digits: np.ndarray) -> tuple[int, bool, tuple]:
        coeffs = space.coeffs_of(digits[None, :])
        scores, valid = _score_rows(cfg, space, coeffs)
        n, ok = int(scores[0]), bool(valid[0])
        key = tuple(int(v) for v in coeffs[0])
        res.evaluated += 1
        if not ok:
            res.skipped += 1
            return n, ok, key
        if n > hws:
            raise InvariantError(f"candidate exceeds the Hasse-Weil-Serre bound {hws}")
        if cfg.spot_check_every and (res.evaluated - 1) % cfg.spot_check_every == 0:
            _spot_check(cfg.field, space, key, n)
            res.spot_checks += 1
        found[key] = n
        return n, ok, key

    current = None
    cur_n = 0
    rejected = 0
    while res.evaluated < cfg.budget:
        if current is None:
            digits = space.random_digits(rng, 1)[0]
            n, ok, _ = score(digits)
            if ok:
                current, cur_n, rejected = digits, n, 0
            continue
        if not mutable:
            break
        cand = current.copy()
        slot = mutable[int(rng.integers(len(mutable)))]
        shift = 1 + int(rng.integers(space.radices[slot] - 1))
        cand[slot] = (cand[slot] + shift) % space.radices[slot]
        n, ok, _ = score(cand)
        if ok and n >= cur_n:
            # plateau moves are accepted but do not reset the stagnation counter
            if n > cur_n:
                rejected = 0
            current, cur_n = cand, n
        else:
            rejected += 1
            if rejected >= cfg.patience:
                current = None
    res.board = merge_boards([[(n, key) for key, n in found.items()]], cfg.top)
    return res


@dataclass
class SearchResult:
    config: SearchConfig
    entries: list[RecordEntry]
    evaluated: int
    skipped: int
    spot_checks: int
    wall_time: float = 0.0
    space_size: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def best(self) -> int | None:
        return self.entries[0].N if self.entries else None

    def summary(self) -> dict:
        return {
            "summary": {
                "strategy": self.config.strategy,
                "field": format_field(self.config.field),
                "degrees": list(self.config.degrees),
                "seed": self.config.seed,
                "space_size": self.space_size,
                "evaluated": self.evaluated,
                "skipped": self.skipped,
                "valid": self.evaluated - self.skipped,
                "spot_checks": self.spot_checks,
                "best_N": self.best,
            }
        }

    def timing(self) -> dict:
        rate = self.evaluated / self.wall_time if self.wall_time > 0 else None
        return {"wall_time_s": round(self.wall_time, 6), "throughput_per_s": rate}

    def jsonl(self) -> str:
        lines = [e.to_json() for e in self.entries]
        lines.append(json.dumps(self.summary(), sort_keys=True))
        return "\n".join(lines) + "\n"


def run_search(cfg: SearchConfig) -> SearchResult:
    space = CandidateSpace(cfg)
    t0 = time.perf_counter()
    if cfg.strategy == "hill-climb":
        res = _run_hill_climb(cfg)
    else:
        if cfg.strategy == "exhaustive":
            if space.size > cfg.cap:
                raise ValidationError(f"exhaustive space of {space.size} candidates exceeds cap {cfg.cap}")
            total = min(space.size, cfg.budget)
        else:
            total = cfg.budget
        n_batches = -(-total // cfg.batch_size)
        if cfg.workers == 1 or n_batches == 1:
            res = _run_batches(cfg, range(n_batches), total)
        else:
            chunks = [list(range(w, n_batches, cfg.workers)) for w in range(cfg.workers)]
            with ProcessPoolExecutor(cfg.workers) as pool:
                parts = list(pool.map(_run_batches_star, [(cfg, c, total) for c in chunks if c]))
            res = PartialResult(
                merge_boards([p.board for p in parts], cfg.top),
                sum(p.evaluated for p in parts),
                sum(p.skipped for p in parts),
                sum(p.spot_checks for p in parts),
            )
    wall = time.perf_counter() - t0
    if not res.board:
        raise ValidationError("no valid candidate found (inseparable products only)")
    g = cfg.genus
    hws = hws_bound(cfg.field.q, g)
    entries = []
    for n, key in res.board:
        polys = space.polys(cfg.field, key)
        entries.append(RecordEntry(cfg.field.q, g, n, format_field(cfg.field), coeff_lists(polys), hws))
    return SearchResult(cfg, entries, res.evaluated, res.skipped, res.spot_checks, wall, space.size)


def attach_records(entries: Sequence[RecordEntry], table) -> None:
    """Fill known bounds and the improvement flag from a RecordsTable."""
    for e in entries:
        row = table.lookup(e.q, e.g)
        if row is None:
            continue
        e.known_lower, e.known_upper = row.lower, row.upper
        e.improved = row.improves(e.N)
        e.discrepancy = row.upper is not None and e.N > row.upper


# ---------------------------------------------------------------------------
# performance probe


def random_systems(spec: FieldSpec, degrees: Sequence[int], count: int, seed: int = 0) -> list[CurveSystem]:
    """Random valid monic systems (used by the probe and by tests)."""
    cfg = SearchConfig(spec, tuple(degrees), "random", budget=1, seed=seed, normalize=False)
    space = CandidateSpace(cfg)
    rng = np.random.Generator(np.random.PCG64(seed))
    out: list[CurveSystem] = []
    while len(out) < count:
        coeffs = space.coeffs_of(space.random_digits(rng, max(16, 2 * count)))
        _, valid = _score_rows(cfg, space, coeffs)
        for row in coeffs[valid]:
            out.append(make_system(spec, space.polys(spec, row)))
            if len(out) == count:
                break
    return out


def throughput_probe(
    spec: FieldSpec, degrees: Sequence[int] = (4, 4), budget: int = 20_000, mode: str = "scalar", seed: int = 0
) -> float:
    """Candidates per second.

    ``scalar`` times evaluate_candidate on character rows precomputed per f_i;
    ``batch`` times the whole search kernel (generation, separability, evaluation).
    """
    if mode == "scalar":
        caches = [build_cache(s) for s in random_systems(spec, degrees, 64, seed)]
        t0 = time.perf_counter()
        for i in range(budget):
            evaluate_candidate(None, caches[i % len(caches)])
        return budget / (time.perf_counter() - t0)
    if mode == "batch":
        cfg = SearchConfig(spec, tuple(degrees), "random", budget=budget, seed=seed, spot_check_every=0)
        t0 = time.perf_counter()
        res = run_search(cfg)
        return res.evaluated / (time.perf_counter() - t0)
    raise ValidationError(f"unknown probe mode {mode!r}")
