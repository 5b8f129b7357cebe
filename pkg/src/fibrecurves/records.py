"""Known-bounds tables and the bundled example fixtures."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import FibreError, ParseError
from .fibre import make_system, point_count
from .finite_field import parse_field
from .polynomial import from_coeff_list

RECORDS_HEADER = ["g", "q", "lower", "upper", "source"]


@dataclass(frozen=True)
class RecordRow:
    g: int
    q_spec: str
    q: int
    lower: int | None
    upper: int
    source: str

    def improves(self, n: int) -> bool:
        if self.lower is not None:
            return n > self.lower
        # an elided lower bound means the best known curve has at most upper/sqrt(2) points
        return n > math.floor(self.upper / math.sqrt(2))


@dataclass
class RecordsTable:
    rows: list[RecordRow] = field(default_factory=list)

    def lookup(self, q: int, g: int) -> RecordRow | None:
        for r in self.rows:
            if r.q == q and r.g == g:
                return r
        return None


def ingest_records(path: str | Path) -> RecordsTable:
    """Parse a ``g,q,lower,upper,source`` CSV; any malformed row aborts."""
    path = Path(path)
    try:
        fh = path.open(newline="", encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    rows = []
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != RECORDS_HEADER:
            raise ParseError(f"{path}:1: expected header {','.join(RECORDS_HEADER)}")
        for lineno, raw in enumerate(reader, start=2):
            if not raw or all(not c.strip() for c in raw):
                continue
            if len(raw) != 5:
                raise ParseError(f"{path}:{lineno}: expected 5 fields, got {len(raw)}")
            g_s, q_s, lo_s, up_s, source = (c.strip() for c in raw)
            try:
                g = int(g_s)
                spec = parse_field(q_s)
                lower = int(lo_s) if lo_s else None
                upper = int(up_s)
            except (ValueError, FibreError) as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
            if lower is not None and lower > upper:
                raise ParseError(f"{path}:{lineno}: lower bound {lower} exceeds upper bound {upper}")
            rows.append(RecordRow(g, q_s, spec.q, lower, upper, source))
    return RecordsTable(rows)


def bundled_records_path() -> Path:
    return Path(str(resources.files("fibrecurves") / "data" / "table1_old.csv"))


# ---------------------------------------------------------------------------
# example fixtures


@dataclass(frozen=True)
class FixtureRow:
    table: str
    genus: int
    field: str
    f1: list
    f2: list
    A: tuple[int, int, int]
    N: int
    consistent: bool
    f1_text: str = ""
    f2_text: str = ""
    table1_N: int | None = None

    @property
    def label(self) -> str:
        return f"{self.table} q={self.field.split(':')[0]}"


def bundled_fixtures_path() -> Path:
    return Path(str(resources.files("fibrecurves") / "data" / "example_fixtures.json"))


def load_fixtures(path: str | Path | None = None) -> list[FixtureRow]:
    path = Path(path) if path else bundled_fixtures_path()
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    rows = []
    try:
        for i, d in enumerate(data):
            A = tuple(int(a) for a in d["A"])
            if len(A) != 3:
                raise ParseError(f"{path}: fixture {i} needs exactly three A-values")
            rows.append(
                FixtureRow(
                    d["table"], int(d["genus"]), d["field"], d["f1"], d["f2"], A, int(d["N"]),
                    bool(d["consistent"]), d.get("f1_text", ""), d.get("f2_text", ""), d.get("table1_N"),
                )
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: malformed fixture ({exc})") from exc
    return rows


@dataclass
class FixtureResult:
    row: FixtureRow
    A: tuple[int, ...]
    N: int
    genus: int
    status: str  # PASS, FAIL or DISCREPANT

    @property
    def matches(self) -> bool:
        return self.A == self.row.A and self.N == self.row.N and self.genus == self.row.genus


def check_fixture(row: FixtureRow) -> FixtureResult:
    spec = parse_field(row.field)
    sys = make_system(spec, [from_coeff_list(row.f1, spec), from_coeff_list(row.f2, spec)])
    rep = point_count(sys)
    A = tuple(s.A_I for s in rep.subsets)
    res = FixtureResult(row, A, rep.N, rep.genus, "")
    if not row.consistent:
        res.status = "DISCREPANT"
    else:
        res.status = "PASS" if res.matches else "FAIL"
    return res


def verify_paper(path: str | Path | None = None) -> list[FixtureResult]:
    return [check_fixture(r) for r in load_fixtures(path)]


def format_results(results: list[FixtureResult]) -> str:
    head = f"{'row':<22} {'status':<10} {'printed A1,A2,A3 / N / g':<28} computed A1,A2,A3 / N / g"
    lines = [head, "-" * len(head)]

    def fmt(A, n, g):
        return f"{','.join(map(str, A))} / {n} / {g}"

    for r in results:
        lines.append(
            f"{r.row.label:<22} {r.status:<10} {fmt(r.row.A, r.row.N, r.row.genus):<28} {fmt(r.A, r.N, r.genus)}"
        )
    disc = [r for r in results if r.status == "DISCREPANT"]
    if disc:
        lines.append("")
        lines.append("Discrepant rows (printed A-values and N disagree: q + 1 - sum A != N):")
        for r in disc:
            q = parse_field(r.row.field).q
            lines.append(
                f"  {r.row.label}: printed q+1-sum(A) = {q + 1 - sum(r.row.A)} vs printed N = {r.row.N};"
                f" computed N = {r.N}"
            )
    t1 = [r for r in results if r.row.table1_N is not None and r.row.table1_N != r.row.N]
    if t1:
        lines.append("")
        lines.append("Summary-table values differing from the example tables:")
        for r in t1:
            lines.append(f"  {r.row.label}: summary N = {r.row.table1_N}, example N = {r.row.N}, computed N = {r.N}")
    n_pass = sum(r.status == "PASS" for r in results)
    n_fail = sum(r.status == "FAIL" for r in results)
    lines.append("")
    lines.append(f"{n_pass} passed, {n_fail} failed, {len(disc)} discrepant")
    return "\n".join(lines)
