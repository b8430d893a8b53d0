import itertools

import pytest

from dsemion import tqd
from dsemion.anyons import extract_tables, measured_data
from dsemion.category import check_all, double_semion_reference, gauge_equivalent, toric_code_data

PHI = tqd.z2_nontrivial_cocycle()
D = tqd.QuasiDouble(PHI)


@pytest.fixture(scope="module")
def measured():
    return measured_data(extract_tables(3, stability=False))


@pytest.mark.parametrize("phi", [PHI, tqd.trivial_cocycle(2), tqd.cyclic_cocycle(3, 1), tqd.cyclic_cocycle(4, 3)])
def test_cocycles_are_normalized_cocycles(phi):
    assert phi.is_normalized()
    assert phi.is_cocycle()


def test_non_cocycle_is_rejected():
    vals = {t: 0 for t in itertools.product((0, 1, 2), repeat=3)}
    vals[(1, 1, 1)] = 3
    bad = tqd.Cocycle3(tqd.CyclicGroup(3), vals, 9)
    assert not bad.is_cocycle()


def test_z2_cocycle_values():
    assert PHI(1, 1, 1) == 2
    assert sum(PHI(*t) for t in itertools.product((0, 1), repeat=3)) == 2
    assert tqd.cyclic_cocycle(2, 1).values == PHI.values


@pytest.mark.parametrize("phi", [PHI, tqd.cyclic_cocycle(3, 2), tqd.cyclic_cocycle(4, 1)])
def test_slant_is_two_cocycle(phi):
    assert tqd.slant_is_two_cocycle(phi)
    G = phi.group.elements
    assert all(tqd.compatibility_defect(phi, *t) == 0 for t in itertools.product(G, repeat=4))


def test_slant_values():
    c1 = tqd.slant(PHI, 1)
    assert c1(1, 1) == 2
    assert c1(0, 1) == c1(1, 0) == c1(0, 0) == 0
    assert all(tqd.slant(PHI, 0)(g, h) == 0 for g, h in itertools.product((0, 1), repeat=2))
    assert tqd.slant_equals_coboundary(D)


@pytest.mark.parametrize("phi", [PHI, tqd.trivial_cocycle(2)])
def test_quasi_hopf_axioms(phi):
    Dphi = tqd.QuasiDouble(phi)
    assert not tqd.algebra_associativity_failures(Dphi)
    assert not tqd.unit_failures(Dphi)
    assert not tqd.coproduct_multiplicativity_failures(Dphi)
    assert not tqd.quasi_coassociativity_failures(Dphi)
    assert not tqd.antipode_failures(Dphi)


def test_inexact_moduli_are_refused():
    with pytest.raises(ValueError):
        tqd.algebra_associativity_failures(tqd.QuasiDouble(tqd.cyclic_cocycle(3, 1)))


def test_check_counts():
    assert len(D.basis) == 4
    assert len(list(itertools.product(D.basis, repeat=3))) == 64


def test_non_cocycle_twist_breaks_associativity():
    class Twisted(tqd.QuasiDouble):
        def c(self, x):
            return lambda f, g: 1 if (x, f, g) == (1, 1, 0) else 0

    assert tqd.algebra_associativity_failures(Twisted(PHI))


def test_antipode_squares_to_identity():
    assert set(tqd.antipode_square_phases(D).values()) == {0}


@pytest.mark.parametrize("phi", [PHI, tqd.trivial_cocycle(2)])
def test_irreps_are_homomorphisms(phi):
    Dphi = tqd.QuasiDouble(phi)
    assert len(tqd.irrep_labels(Dphi)) == 4
    assert not tqd.irrep_homomorphism_failures(Dphi)


def test_twist_cochain_matches_tabulated_epsilon():
    for x, f in itertools.product((0, 1), repeat=2):
        assert tqd.twist_cochain(D, x)(f) == tqd.epsilon(x, f)
    triv = tqd.QuasiDouble(tqd.trivial_cocycle(2))
    assert all(tqd.twist_cochain(triv, x)(f) == 0 for x, f in itertools.product((0, 1), repeat=2))


def test_tensor_products_follow_z2_squared():
    for p, q in itertools.product(tqd.TABLE_ORDER, repeat=2):
        r = tqd.tensor_irreps(D, p, q)
        assert r[0] == (p[0] + q[0]) % 2


def test_braiding_two_routes_agree():
    for p, q in itertools.product(tqd.TABLE_ORDER, repeat=2):
        assert tqd.braiding_value(D, p, q) == tqd.braiding_formula(p, q), (p, q)


def test_braiding_table():
    rep = tqd.rep_category_data(PHI)
    assert tqd.braiding_table(rep) == [list(r) for r in tqd.EXPECTED_BRAIDING]
    assert check_all(rep).passed


def test_rep_category_matches_reference_and_measurement(measured):
    rep = tqd.rep_category_data(PHI)
    cmp = tqd.compare(measured, rep)
    assert cmp.passed
    assert cmp.unique_up_to_swap
    assert [f for f, _ in cmp.equivalences] == [tqd.IDENTIFICATION]
    assert gauge_equivalent(rep, double_semion_reference(), tqd.IDENTIFICATION) is not None
    js = cmp.to_json()
    assert js["passed"] and js["identification"] == tqd.IDENTIFICATION


def test_trivial_cocycle_baseline_fails(measured):
    rep = tqd.rep_category_data(tqd.trivial_cocycle(2))
    assert set(rep.F.values()) == {0}
    assert not tqd.compare(measured, rep).passed
    assert gauge_equivalent(rep, toric_code_data()) is not None


def test_bijection_search(measured):
    assert tqd.bijection_search(measured) == [tqd.IDENTIFICATION]
