"""Acceptance gate: one PASS/FAIL line per criterion, printed even under capture."""

import itertools
import random
import time

import numpy as np
import pytest

from fibrecurves.fibre import affine_oracle, genus_fibre, hws_bound, make_system, point_count, verify_isogeny
from fibrecurves.finite_field import from_index, make_field, parse_field
from fibrecurves.records import check_fixture, format_results, load_fixtures, verify_paper
from fibrecurves.search import SearchConfig, run_search, throughput_probe
from oracles import ODD_PRIME_POWERS, enumerate_monic_pairs, naive_affine, random_system, spec_for


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n:>2}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return emit


# ---------------------------------------------------------------------------
# 1. reproduction of every consistent example row


CONSISTENT = [r for r in load_fixtures() if r.consistent]


@pytest.mark.parametrize("row", CONSISTENT, ids=[r.label for r in CONSISTENT])
def test_row_reproduces(row):
    res = check_fixture(row)
    assert (res.A, res.N, res.genus) == (row.A, row.N, row.genus)


def test_criterion_01_rows_reproduce(report):
    t0 = time.perf_counter()
    results = [check_fixture(r) for r in CONSISTENT]
    elapsed = time.perf_counter() - t0
    bad = [f"{r.row.label} (computed A={r.A}, N={r.N})" for r in results if r.status != "PASS"]
    named = {"genus-5 q=17", "genus-5 q=29", "genus-5 q=47", "genus-5 q=53", "genus-5 q=13^2",
             "genus-5 q=17^2", "genus-6 q=23", "genus-6 q=59"}
    assert named <= {r.label for r in CONSISTENT}
    ok = not bad and elapsed < 5
    detail = f"{len(results) - len(bad)}/{len(results)} rows match in {elapsed:.2f}s"
    if bad:
        detail += "; mismatched: " + "; ".join(bad)
    report(1, ok, detail)


# ---------------------------------------------------------------------------
# 2. genus formula against the subset sum


def test_criterion_02_genus_identity(report):
    t0 = time.perf_counter()
    cases = bad = 0
    for k in range(1, 6):
        vecs = np.array(list(itertools.product(range(1, 9), repeat=k)), dtype=np.int64)
        masks = np.array([[m >> i & 1 for i in range(k)] for m in range(1, 2**k)], dtype=np.int64)
        reference = ((vecs @ masks.T - 1) // 2).sum(axis=1)
        got = np.array([genus_fibre(tuple(v))[0] for v in vecs.tolist()])
        cases += len(vecs)
        bad += int((got != reference).sum())
    elapsed = time.perf_counter() - t0
    report(2, bad == 0 and elapsed < 1, f"{cases} degree vectors, {bad} mismatches, {elapsed:.2f}s")


# ---------------------------------------------------------------------------
# 3-5. the 500-system sample


def _square_lc(spec, rng):
    y = from_index(spec, rng.randrange(1, spec.q))
    return (y * y).index


@pytest.fixture(scope="module")
def sample():
    rng = random.Random(500)
    out = []
    for n in range(500):
        spec = spec_for(rng.choice(ODD_PRIME_POWERS))
        k = rng.choice((1, 2, 3))
        if n % 5 == 0:
            degrees = [rng.choice((2, 4)) for _ in range(k)]
            lcs = [_square_lc(spec, rng) for _ in range(k)]
        else:
            degrees = [rng.randint(1, 4) for _ in range(k)]
            lcs = None
        sys = random_system(spec, degrees, rng, lcs)
        out.append((sys, point_count(sys, with_oracle=False), affine_oracle(sys)))
    return out


def test_criterion_03_oracle_equivalence(report, sample):
    t0 = time.perf_counter()
    bad = [i for i, (sys, _, aff) in enumerate(sample) if naive_affine(sys.spec, sys.polys) != aff]
    elapsed = time.perf_counter() - t0
    ks = sorted({s.k for s, _, _ in sample})
    report(3, not bad and elapsed < 60,
           f"{len(sample)} systems (k in {ks}), {len(bad)} mismatches vs (k+1)-fold enumeration, {elapsed:.1f}s")


def test_criterion_04_decomposition(report, sample):
    bad = [i for i, (sys, rep, aff) in enumerate(sample) if aff != sys.q + sum(s.affine - sys.q for s in rep.subsets)]
    report(4, not bad, f"{len(sample)} systems, {len(bad)} violations")


def test_criterion_05_infinity_range(report, sample):
    out_of_range = [i for i, (_, rep, aff) in enumerate(sample) if not 0 <= rep.N - aff <= rep.geometric_infinity]
    even_square = [
        (sys, rep, aff) for sys, rep, aff in sample
        if all(d % 2 == 0 for d in sys.degrees)
        and all(from_index(sys.spec, f.leading_coeff.index) ** ((sys.q - 1) // 2) == 1 for f in sys.polys)
    ]
    exact = [i for i, (sys, rep, aff) in enumerate(even_square) if rep.N - aff != 2**sys.k]
    ok = not out_of_range and not exact and len(even_square) >= 50
    report(5, ok, f"{len(out_of_range)} out of range; all-even/square-lc subcase: {len(even_square)} systems, "
                  f"{len(exact)} with N - affine != 2^k")


# ---------------------------------------------------------------------------
# 6. numerical isogeny check


def test_criterion_06_isogeny(report):
    rng = random.Random(6)
    vectors = [ds for k in (1, 2, 3) for ds in itertools.product(range(1, 7), repeat=k)
               if 1 <= genus_fibre(ds)[0] <= 4]
    checks = []
    t0 = time.perf_counter()
    while len(checks) < 20:
        spec = make_field(rng.choice((3, 5, 7, 11, 13)))
        sys = random_system(spec, rng.choice(vectors), rng)
        checks.append((sys, verify_isogeny(sys)))
    failed = [(str(s.spec), s.degrees) for s, c in checks if not c.ok]
    genera = sorted({c.genus for _, c in checks})
    report(6, not failed, f"20 systems, genera {genera}, failures {failed}, {time.perf_counter() - t0:.1f}s")


# ---------------------------------------------------------------------------
# 7-8. bounds and search


@pytest.fixture(scope="module")
def q17_search():
    cfg = SearchConfig(make_field(17), (4, 4), "random", budget=10**6, seed=0, top=10)
    return run_search(cfg)


@pytest.fixture(scope="module")
def q5_exhaustive():
    return run_search(SearchConfig(make_field(5), (3, 3), "exhaustive", budget=10**6, top=10))


def test_criterion_07_bound_sanity(report, sample, q17_search, q5_exhaustive):
    seen = []
    seen += [(rep.N, sys.q, rep.genus) for sys, rep, _ in sample]
    seen += [(r.N, parse_field(r.row.field).q, r.genus) for r in verify_paper()]
    seen += [(e.N, e.q, e.g) for e in q17_search.entries + q5_exhaustive.entries]
    over = [s for s in seen if s[0] > hws_bound(s[1], s[2])]
    fixed = hws_bound(17, 5) == 58 and hws_bound(25, 5) == 76
    report(7, not over and fixed, f"{len(seen)} counts checked, {len(over)} above the bound; "
                                  f"hws(17,5)={hws_bound(17, 5)}, hws(25,5)={hws_bound(25, 5)}")


def test_criterion_08_search(report, q17_search, q5_exhaustive):
    truth = max(enumerate_monic_pairs(make_field(5), (3, 3)).values())
    cfg = SearchConfig(make_field(17), (4, 4), "random", budget=50_000, seed=123)
    same = run_search(cfg).jsonl() == run_search(cfg).jsonl()
    ok = q5_exhaustive.best == truth and same and q17_search.best >= 48
    report(8, ok, f"exhaustive q=5 max {q5_exhaustive.best} vs enumeration {truth}; byte-identical reruns {same}; "
                  f"random q=17 budget 1e6 best N = {q17_search.best}")


# ---------------------------------------------------------------------------
# 9. throughput


def test_criterion_09_throughput(report):
    spec = make_field(97)
    scalar = throughput_probe(spec, (4, 4), budget=50_000, mode="scalar")
    batch = throughput_probe(spec, (4, 4), budget=50_000, mode="batch")
    report(9, scalar >= 1e4 and batch >= 1e4,
           f"q=97, k=2: evaluate_candidate {scalar:,.0f}/s, end-to-end batch kernel {batch:,.0f}/s (floor 10,000/s)")


# ---------------------------------------------------------------------------
# 10. discrepancy reporting


def test_criterion_10_discrepancies(report):
    results = verify_paper()
    flagged = {r.row.label for r in results if r.status == "DISCREPANT"}
    printed_wrong = {r.row.label for r in results
                     if parse_field(r.row.field).q + 1 - sum(r.row.A) != r.row.N}
    text = format_results(results)
    shows_both = all(f"computed N = {r.N}" in text and f"printed N = {r.row.N}" in text
                     for r in results if r.status == "DISCREPANT")
    ok = flagged == printed_wrong == {"genus-5 q=79", "genus-5 q=89", "genus-7 q=29"} and shows_both
    report(10, ok, f"flagged {sorted(flagged)}; printed and computed values shown: {shows_both}")
