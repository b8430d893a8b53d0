import itertools
import random

import pytest

from dsemion.anyons import (
    LABELS,
    SectorExperiment,
    act,
    braid_equation_checks,
    braiding_intertwiner,
    closed_string_phases,
    default_hooks,
    disc_loop,
    excite,
    expected_s_matrix,
    extract_tables,
    f_symbols,
    fusion_conjugation_signs,
    fusion_intertwiner,
    fusion_product,
    fusion_table,
    ground_state,
    hook_path,
    intertwiner_check,
    measured_data,
    r_symbols,
    semion_square_check,
    small_loops,
    yang_baxter_check,
)
from dsemion.category import apply_gauge, double_semion_reference, random_gauge
from dsemion.groundstate import apply, build_hamiltonian, proportionality, verify_ground_state
from dsemion.lattice import hexagon_loop, standard_region
from dsemion.pauli_ops import PhasedXOperator, compose
from dsemion.strings import AnyonLabel, semion_string

ONE, S, SBAR, B = LABELS
TRIPLES = list(itertools.product(LABELS, repeat=3))


@pytest.fixture(scope="module")
def exp():
    return SectorExperiment.standard(3)


@pytest.fixture(scope="module")
def hooks(exp):
    return default_hooks(exp)


def test_fusion_is_z2_squared():
    table = fusion_table()
    assert all(fusion_product(a, a) is ONE for a in LABELS)
    assert fusion_product(S, SBAR) is B and fusion_product(S, B) is SBAR
    for a, b, c in TRIPLES:
        assert table[a, table[b, c]] == table[table[a, b], c]
        assert table[a, b] == table[b, a]


def test_experiment_geometry(exp):
    assert exp.initial_edge in exp.patch.outer
    assert exp.final_edge in exp.patch.index.edges
    d = exp.describe()
    assert d["patch"]["num_hexagons"] == 19 and d["clearance"] == 2


def test_excitation_violates_only_near_endpoint():
    small = SectorExperiment.standard(2)
    psi = excite(2, S)
    rep = verify_ground_state(psi, build_hamiltonian(2))
    assert not rep.passed
    near = {f"W_S{tuple(p)}" for p in standard_region(2) if small.endpoint in hexagon_loop(p).vertices}
    w_fail = {f for f in rep.failures if f.startswith("W_S")}
    assert w_fail and w_fail <= near
    with pytest.raises(ValueError):
        excite(2, S, hexagon_loop(next(iter(standard_region(1)))))


def test_bound_excitation_is_fused_semion_pair(exp):
    a = excite(3, B)
    b = excite(3, S, state=excite(3, SBAR))
    assert proportionality(a, b) is None
    assert proportionality(apply(fusion_intertwiner(S, SBAR, exp), b), a) is not None


def test_closed_small_loops_fix_ground_state():
    phases = closed_string_phases(3)
    assert len(small_loops(3)) == 2 * (7 + 12)
    assert all(k is not None for k in phases.values())
    assert {k for (a, _), k in phases.items() if a in (S, SBAR)} == {2}
    assert {k for (a, _), k in phases.items() if a in (ONE, B)} == {0}
    with pytest.raises(ValueError):
        small_loops(3, max_hexes=3)


def test_disc_loops_enclose_endpoint(exp):
    for r in (2.0, 3.0):
        p = disc_loop(exp, r)
        assert p.loop.closed and p.clearance >= 2
        assert exp.endpoint in p.region.vertices()


def test_expected_s_matrix_is_unitary_and_symmetric():
    s = expected_s_matrix()
    for i, j in itertools.product(range(4), repeat=2):
        assert s[i][j] == s[j][i]
        assert s[i][j].im == 0
        assert sum(s[i][k].re * s[j][k].re for k in range(4)) == (1 if i == j else 0)


def test_intertwiners_relate_composite_strings(exp):
    for a, b in itertools.product(LABELS, repeat=2):
        assert intertwiner_check(a, b, exp) == 0, (a, b)


def test_f_symbols_match_table(exp):
    F = f_symbols(exp)
    for t, k in F.items():
        assert k == (2 if set(t) <= {S, SBAR} else 0), t


def test_braidings_match_table(exp, hooks):
    row = {ONE: 0, S: 1, SBAR: 3, B: 2}
    for hook in hooks:
        for a, b in itertools.product(LABELS, repeat=2):
            _, k = braiding_intertwiner(a, b, exp, hook)
            assert k == (row[b] if a in (S, SBAR) else 0), (a, b)


def test_r_symbols_match_reference(exp, hooks):
    ref = double_semion_reference()
    got = {(a.value, b.value): k for (a, b), k in r_symbols(exp, hooks[0]).items()}
    assert got == ref.R


def test_hooks_are_distinct_and_valid(exp, hooks):
    h1, h2 = hooks
    assert h1.path.edges != h2.path.edges
    assert h1.path.final_edge == exp.final_edge
    assert 0 < h1.shared < len(exp.string)
    with pytest.raises(ValueError):
        hook_path(exp, 0.5)


@pytest.mark.parametrize("a,b,c", TRIPLES)
def test_yang_baxter_and_braid_equations(a, b, c, exp, hooks):
    assert yang_baxter_check(a, b, c, exp, hooks[0])
    assert braid_equation_checks(a, b, c, exp, hooks[0]) == (True, True)


def test_fusion_intertwiner_conjugation(exp):
    signs = fusion_conjugation_signs(exp)
    assert signs == {ONE: 0, S: 2, SBAR: 2, B: 0}
    g = fusion_intertwiner(S, SBAR, exp)
    assert compose(g, g) == PhasedXOperator.identity()
    assert act(ONE, g, exp) == g


def test_semion_square_is_omega_ss(exp):
    assert semion_square_check(exp) == 0


def test_rephased_symbols_equal_gauge_action(exp, hooks):
    measured = measured_data(extract_tables(3, stability=False))
    rng = random.Random(11)
    for _ in range(5):
        chi_str = random_gauge([a.value for a in LABELS], rng, unit="1")
        chi = {(AnyonLabel(a), AnyonLabel(b)): v for (a, b), v in chi_str.items()}
        want = apply_gauge(measured, chi_str)
        F = {tuple(x.value for x in t): k for t, k in f_symbols(exp, chi).items()}
        R = {(a.value, b.value): k for (a, b), k in r_symbols(exp, hooks[0], chi).items()}
        assert F == want.F
        assert R == want.R


def test_extract_tables_stable_and_serialisable():
    tables = extract_tables(3)
    assert tables.stable_radius and tables.stable_patch
    data = tables.to_json()
    assert data["n"] == 3
    assert measured_data(tables).same_as(double_semion_reference())


def test_ground_state_is_cached():
    assert ground_state(2) is ground_state(2)
    psi = ground_state(2)
    w = semion_string(hexagon_loop(next(iter(standard_region(1)))))
    assert proportionality(apply(w, psi), psi) == 2
