"""Acceptance suite: one printed pass/fail line per criterion, then the assertion."""

import itertools
import random
import time

import pytest

import dense_oracle as oracle
from dsemion import tqd
from dsemion.anyons import (
    LABELS,
    braid_equation_checks,
    closed_string_phases,
    expected_s_matrix,
    extract_tables,
    measured_data,
    s_matrix,
    yang_baxter_check,
)
from dsemion.category import (
    apply_gauge,
    check_hexagons,
    check_pentagon,
    double_semion_reference,
    gauge_invariants,
    random_gauge,
)
from dsemion.groundstate import (
    CONVENTIONS,
    build_ground_state,
    build_hamiltonian,
    ground_space_dimension,
    select_convention,
    verify_ground_state,
)
from dsemion.purity import (
    dominated_span_check,
    pairing_parity_exhaustive,
    pairing_parity_random,
    schmidt_check,
)

ONE, S, SBAR, B = LABELS


def report(capsys, number, title, ok, detail, elapsed=None, budget=None):
    within = budget is None or elapsed < budget
    passed = bool(ok and within)
    timing = "" if elapsed is None else f" [{elapsed:.1f}s" + (f" / {budget:g}s]" if budget else "]")
    with capsys.disabled():
        print(f"\nACCEPTANCE {number:>2} {'PASS' if passed else 'FAIL'}  {title}: {detail}{timing}")
    assert ok, detail
    assert within, f"took {elapsed:.1f}s, budget {budget}s"


@pytest.fixture(scope="module")
def tables():
    return extract_tables(3, stability=True)


def test_01_operator_oracle(capsys):
    t = time.perf_counter()
    tally = oracle.run_cases(1000, max_edges=10, seed=0)
    dt = time.perf_counter() - t
    cases = sum(v["cases"] for v in tally.values())
    fails = sum(v["failures"] for v in tally.values())
    report(capsys, 1, "operator-algebra oracle", cases == 1000 and fails == 0, f"{cases} cases, {fails} mismatches", dt, 10)


def test_02_ground_state(capsys):
    t = time.perf_counter()
    parts = []
    ok = True
    for n in (1, 2):
        rep = verify_ground_state(build_ground_state(n), build_hamiltonian(n), "loop_count")
        dim = ground_space_dimension(n)
        ok &= rep.passed and dim == 1
        parts.append(f"n={n}: {rep.checks} checks, {len(rep.failures)} failures, dim {dim}")
    sel = select_convention(2)
    winners = [c for c in CONVENTIONS if sel[c]]
    ok &= winners == ["loop_count"]
    parts.append(f"convention winners {winners}")
    report(capsys, 2, "ground state", ok, "; ".join(parts), time.perf_counter() - t, 30)


def test_03_closed_string_invariance(capsys):
    t = time.perf_counter()
    phases = closed_string_phases(3, max_hexes=2)
    bad = [k for k, v in phases.items() if v is None]
    loops = len({i for _, i in phases})
    report(capsys, 3, "closed-string invariance", not bad, f"{loops} oriented loops x 4 labels, {len(bad)} non-eigen", time.perf_counter() - t, 120)


def test_04_s_matrix(capsys):
    t = time.perf_counter()
    rep = s_matrix(3)
    ok = rep.stable and rep.matrix == expected_s_matrix()
    loops = ", ".join(p["name"] for p in rep.probes)
    report(capsys, 4, "S-matrix", ok, f"exact match {rep.matrix == expected_s_matrix()}, stable over {loops}", time.perf_counter() - t, 300)


def test_05_f_symbols(capsys, tables):
    data = measured_data(tables)
    want = {tuple(x.value for x in k): (2 if set(k) <= {S, SBAR} else 0) for k in itertools.product(LABELS, repeat=3)}
    pent = check_pentagon(data)
    ok = data.F == want and pent.passed and pent.checked == 256
    report(capsys, 5, "F-symbols", ok, f"table match {data.F == want}, pentagon {pent.checked - len(pent.failures)}/{pent.checked}")


def test_06_r_symbols(capsys, tables):
    want_eps = {
        (S, S): 1, (S, SBAR): 3, (SBAR, S): 1, (SBAR, SBAR): 3, (S, B): 2, (SBAR, B): 2,
        **{(B, x): 0 for x in LABELS}, **{(ONE, x): 0 for x in LABELS},
    }
    eps_ok = all(tables.epsilon[k] == v for k, v in want_eps.items())
    data = measured_data(tables)
    r_ok = data.R == double_semion_reference().R
    h1, h2 = check_hexagons(data)
    hex_ok = h1.passed and h2.passed and h1.checked == h2.checked == 64
    detail = f"braidings {eps_ok}, R table {r_ok}, hexagons {h1.checked - len(h1.failures)}+{h2.checked - len(h2.failures)}/128"
    report(capsys, 6, "R-symbols and braidings", eps_ok and r_ok and hex_ok, detail)


def test_07_operator_coherence(capsys, tables):
    exp, hook = tables.experiment, tables.hooks[0]
    triples = list(itertools.product(LABELS, repeat=3))
    yb = sum(yang_baxter_check(a, b, c, exp, hook) for a, b, c in triples)
    br = sum(all(braid_equation_checks(a, b, c, exp, hook)) for a, b, c in triples)
    ok = yb == br == len(triples)
    report(capsys, 7, "operator-level Yang-Baxter and braid equations", ok, f"Yang-Baxter {yb}/64, braid pairs {br}/64 at n=3")


def test_08_gauge_invariance(capsys, tables):
    data = measured_data(tables)
    inv = gauge_invariants(data)
    rng = random.Random(2024)
    good = 0
    for _ in range(200):
        g = apply_gauge(data, random_gauge(data.labels, rng))
        good += check_pentagon(g).passed and all(h.passed for h in check_hexagons(g)) and gauge_invariants(g) == inv
    report(capsys, 8, "gauge invariance", good == 200, f"{good}/200 random gauges keep pentagon, hexagons, R(a,a), R(a,b)R(b,a)")


def test_09_twisted_double(capsys, tables):
    phi = tqd.z2_nontrivial_cocycle()
    D = tqd.QuasiDouble(phi)
    rep_data = tqd.rep_category_data(phi)
    checks = {
        "slant 2-cocycle": tqd.slant_is_two_cocycle(phi),
        "associativity 64": not tqd.algebra_associativity_failures(D),
        "coproduct 16": not tqd.coproduct_multiplicativity_failures(D),
        "braiding table": tqd.braiding_table(rep_data) == [list(r) for r in tqd.EXPECTED_BRAIDING],
        "gauge equivalent": tqd.compare(measured_data(tables), rep_data).passed,
    }
    detail = ", ".join(f"{k} {v}" for k, v in checks.items())
    report(capsys, 9, "twisted double", all(checks.values()), detail)


def test_10_schmidt_structure(capsys):
    t = time.perf_counter()
    s1 = schmidt_check(1, stability=True)
    s2 = schmidt_check(2)
    p1 = pairing_parity_exhaustive(1)
    p2 = pairing_parity_exhaustive(2)
    p3 = pairing_parity_random(3, 10_000, seed=0)
    ok = s1.passed and s2.passed and p1.passed and p2.passed and p3.passed and p3.soups_checked == 10_000
    detail = (
        f"n=1 flat x{s1.multiplicity} weight {s1.weight}, n=2 flat x{s2.multiplicity} weight {s2.weight}, "
        f"orthonormal {s1.orthonormal and s2.orthonormal}, bulk {s1.bulk_agreement and s2.bulk_agreement}; "
        f"parity {p1.soups_checked}+{p2.soups_checked} exhaustive, {p3.soups_checked} random at n=3, "
        f"{p1.failures + p2.failures + p3.failures} failures"
    )
    report(capsys, 10, "Schmidt structure", ok, detail, time.perf_counter() - t, 600)


def test_11_dominated_span(capsys):
    t = time.perf_counter()
    rep = dominated_span_check(6, 500, seed=0)
    ok = rep.passed and rep.control_detected == rep.control_trials > 0
    detail = f"dim 6, {rep.trials} trials, {rep.failures} failures, negative controls {rep.control_detected}/{rep.control_trials}"
    report(capsys, 11, "dominated Schmidt span", ok, detail, time.perf_counter() - t)
