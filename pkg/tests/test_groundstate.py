import itertools
from fractions import Fraction

import numpy as np
import pytest

import dense_oracle as oracle
from dsemion.groundstate import (
    CONVENTIONS,
    GaussianRational,
    Patch,
    SizeGuardError,
    SparseState,
    apply,
    build_ground_state,
    build_hamiltonian,
    count_loops,
    count_region_components,
    enumerate_closed_soups,
    expectation,
    ground_space_dimension,
    loop_counts_of_subsets,
    resolve_convention,
    select_convention,
    verify_ground_state,
)
from dsemion.lattice import HexCoord, Region, hex_edges, hexagon_loop, neighbors, standard_region
from dsemion.pauli_ops import PhasedXOperator
from dsemion.strings import semion_string

O = HexCoord(0, 0)


@pytest.mark.parametrize("n,count", [(1, 2), (2, 128)])
def test_soup_counts(n, count):
    soups = enumerate_closed_soups(n)
    assert len(soups) == count
    assert len({s for _, s in soups}) == count
    assert len(build_ground_state(n)) == count


def test_size_guard():
    with pytest.raises(SizeGuardError):
        build_ground_state(3, max_hexes=7)
    with pytest.raises(SizeGuardError):
        enumerate_closed_soups(3, max_hexes=7)


def test_count_loops():
    assert count_loops([]) == 0
    assert count_loops(hex_edges(O)) == 1
    ring = Region(neighbors(O))
    assert count_loops(ring.boundary_edges()) == 2
    assert count_region_components(ring) == 1
    with pytest.raises(ValueError):
        count_loops(list(hex_edges(O))[:3])


def test_vectorised_loop_counts_match_graph_count():
    patch = Patch.standard(2)
    counts = loop_counts_of_subsets(patch)
    for s, (region, soup) in enumerate(enumerate_closed_soups(2)):
        assert counts[s] == count_loops(soup), region


def test_conventions_differ_first_at_n2():
    # a ring of six hexagons is one region but two loops
    assert np.array_equal(build_ground_state(1, "loop_count").re, build_ground_state(1, "region_components").re)
    a, b = build_ground_state(2, "loop_count"), build_ground_state(2, "region_components")
    assert a != b
    assert np.array_equal(a.configs, b.configs)


def test_convention_selection_is_unique():
    assert select_convention(1) == {c: True for c in CONVENTIONS}
    assert select_convention(2) == {"loop_count": True, "region_components": False}
    assert resolve_convention("auto") == "loop_count"
    assert resolve_convention("region_components") == "region_components"
    with pytest.raises(ValueError):
        resolve_convention("bogus")


@pytest.mark.parametrize("n", [1, 2])
def test_ground_state_satisfies_every_term(n):
    psi = build_ground_state(n)
    ham = build_hamiltonian(n)
    rep = verify_ground_state(psi, ham, "loop_count")
    assert rep.passed, rep.failures
    assert rep.checks == len(ham.terms) + len(ham.patch.hexes)
    assert ham.counts()["boundary"] == 6 * n


def test_wrong_sign_fails_verification():
    psi = build_ground_state(2, "region_components")
    rep = verify_ground_state(psi, build_hamiltonian(2))
    assert not rep.passed and rep.failures


def test_ground_state_in_oracle_kernel():
    ham = build_hamiltonian(1)
    psi = build_ground_state(1)
    vec = oracle.state_vector_on(psi, list(ham.patch.index.edges))
    for term in ham.terms:
        t = oracle.term_matrix(term, list(ham.patch.index.edges))
        assert np.allclose(t @ vec, 0)


@pytest.mark.parametrize("boundary_terms,dim", [(True, 1), (False, 32)])
def test_ground_space_dimension_against_oracle(boundary_terms, dim):
    ham = build_hamiltonian(1)
    if not boundary_terms:
        ham = ham.without("boundary")
    assert oracle.ground_space_dimension(ham) == dim
    assert ground_space_dimension(1, boundary_terms=boundary_terms) == dim


def test_ground_space_dimension_n2():
    assert ground_space_dimension(2) == 1
    assert ground_space_dimension(2, boundary_terms=False) > 1


def test_terms_commute_pairwise_at_n1():
    ham = build_hamiltonian(1)
    sites = list(ham.patch.index.edges)
    mats = [oracle.term_matrix(t, sites) for t in ham.terms]
    for a, b in itertools.combinations(mats, 2):
        assert abs(a @ b - b @ a).max() < 1e-12


def test_z_error_violates_exactly_the_adjacent_plaquettes():
    psi = build_ground_state(2)
    (shared,) = set(hex_edges(O)) & set(hex_edges(HexCoord(1, 0)))
    bad = apply(PhasedXOperator.z(shared), psi)
    rep = verify_ground_state(bad, build_hamiltonian(2))
    assert set(rep.failures) == {"B(0, 0)", "B(1, 0)", "W_S(0, 0)", "W_S(1, 0)"}


def test_expectations():
    psi = build_ground_state(2)
    assert psi.norm_sq() == 1
    for p in standard_region(2):
        assert expectation(psi, semion_string(hexagon_loop(p))) == GaussianRational(Fraction(-1))
    outer = Patch.standard(2).outer
    for e in Patch.standard(2).index.edges:
        z = expectation(psi, PhasedXOperator.z(e))
        assert z == GaussianRational(Fraction(1 if e in outer else 0))


def test_outer_edges_empty_in_ground_state():
    psi = build_ground_state(2)
    assert not psi.occupation_bits(sorted(Patch.standard(2).outer)).any()


def test_sparse_state_algebra():
    idx = Patch.standard(1).index
    a = SparseState.basis(idx, hex_edges(O))
    b = SparseState.basis(idx)
    assert (a + b - a) == b
    assert (a + b).norm_sq() == 2
    assert (a.times_phase(1) + a.times_phase(3)).is_zero()
    assert a.inner(a) == GaussianRational(Fraction(1))
    assert a.inner(b) == GaussianRational(Fraction(0))
    assert SparseState.from_dict(idx, {frozenset(): 1j}).to_dict() == {frozenset(): 1j}
