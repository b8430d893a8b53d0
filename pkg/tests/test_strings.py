import itertools

import numpy as np
import pytest

from dsemion.anyons import SectorExperiment
from dsemion.lattice import HexCoord, OrientedPath, Region, boundary_path, classify_path, hex_corners, hex_edges, hexagon_loop, standard_region, vertex_edges
from dsemion.pauli_ops import PhasedXOperator, commutator_phase, compose, conjugate, proportionality, to_dense
from dsemion.strings import (
    LABELS,
    AnyonLabel,
    antisemion_string,
    bound_string,
    omega_ss_string,
    plaquette_flip,
    region_flip,
    semion_string,
    string_operator,
    v_string,
)

O = HexCoord(0, 0)
I = PhasedXOperator.identity()


def support(*ops):
    s = set()
    for op in ops:
        s |= op.support()
    return sorted(s)


def literal_semion_matrix(path, sites, r_coeff=1):
    """X along the path, then the leg and vertex phases read off the flipped configuration."""
    cls = classify_path(path)
    pos = {e: k for k, e in enumerate(sites)}
    flips = sum(1 << pos[e] for e in path.edges)
    dim = 1 << len(sites)
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        row = col ^ flips
        b = lambda e: row >> pos[e] & 1
        k = sum(r_coeff * b(j) for j in cls.r_legs)
        k += sum(2 * b(lv.in_edge) * (1 - b(lv.out_edge)) for lv in cls.l_vertices)
        out[row, col] = 1j ** (k % 4)
    return out


def short_paths():
    """All three-edge open paths starting at a corner of the central hexagon."""
    from dsemion.lattice import vertex_neighbors

    for start in hex_corners(O):
        for a in vertex_neighbors(start):
            for b in vertex_neighbors(a):
                for c in vertex_neighbors(b):
                    if len({start, a, b, c}) == 4:
                        yield OrientedPath((start, a, b, c))


def test_plaquette_and_region_flips():
    assert plaquette_flip(O).xmask == frozenset(hex_edges(O))
    assert len(region_flip(Region([(0, 0), (1, 0)])).xmask) == 10
    assert region_flip(standard_region(2)).xmask == standard_region(2).boundary_edges()


@pytest.mark.parametrize("r_coeff,builder", [(1, semion_string), (3, antisemion_string)])
def test_strings_match_literal_matrices(r_coeff, builder):
    paths = list(short_paths())
    assert len(paths) > 20
    for path in paths + [hexagon_loop(O), hexagon_loop(O).reversed()]:
        op = builder(path)
        sites = support(op)
        assert np.array_equal(to_dense(op, sites), literal_semion_matrix(path, sites, r_coeff)), path


def test_diag_first_order_is_the_conjugate_reading():
    path = next(iter(short_paths()))
    a = semion_string(path, order="flip_first")
    b = semion_string(path, order="diag_first")
    assert a.xmask == b.xmask
    assert a.form.flipped(a.xmask) == b.form
    assert a != b
    with pytest.raises(ValueError):
        semion_string(path, order="sideways")


def test_antisemion_is_semion_times_bound():
    path = SectorExperiment.standard(3).string
    s, sb, b = semion_string(path), antisemion_string(path), bound_string(path)
    assert proportionality(compose(s, b), sb) == 0
    assert proportionality(compose(b, s), sb) == 0


def test_bound_string_is_diagonal_on_legs():
    op = bound_string(hexagon_loop(O))
    assert not op.xmask
    assert op == PhasedXOperator.z(*classify_path(hexagon_loop(O)).r_legs)
    assert len(op.support()) == 6


def test_semion_square_is_omega():
    for path in list(short_paths()) + [SectorExperiment.standard(3).string]:
        w = semion_string(path)
        assert proportionality(compose(w, w), omega_ss_string(path)) == 0


def test_v_string_properties():
    path = SectorExperiment.standard(2).string
    v = v_string(path)
    assert not v.xmask
    assert compose(v, v) == I
    assert compose(v, omega_ss_string(path)) == PhasedXOperator.z(path.initial_edge, path.final_edge)
    with pytest.raises(ValueError):
        v_string(hexagon_loop(O))


def test_closed_strings_commute_with_vertex_terms():
    loops = boundary_path(standard_region(2)) + [hexagon_loop(O), hexagon_loop(HexCoord(1, 0)).reversed()]
    verts = standard_region(3).vertices()
    for loop, a in itertools.product(loops, LABELS):
        w = string_operator(a, loop)
        for v in verts:
            assert commutator_phase(w, PhasedXOperator.z(*vertex_edges(v))) == 0


def test_open_string_anticommutes_only_at_ends():
    path = SectorExperiment.standard(3).string
    w = semion_string(path)
    ends = {path.vertices[0], path.vertices[-1]}
    for v in standard_region(4).vertices():
        k = commutator_phase(w, PhasedXOperator.z(*vertex_edges(v)))
        assert k == (2 if v in ends else 0), v


def test_conjugation_by_string_flips_z_on_path():
    path = SectorExperiment.standard(3).string
    w = semion_string(path)
    for e in path.edges:
        assert conjugate(PhasedXOperator.z(e), w) == PhasedXOperator.z(e).times_phase(2)


def test_label_parsing_and_identity():
    assert AnyonLabel.parse(" SBAR ") is AnyonLabel.SBAR
    assert str(AnyonLabel.B) == "B"
    with pytest.raises(ValueError):
        AnyonLabel.parse("psi")
    assert string_operator("1", hexagon_loop(O)) == I
    assert string_operator(AnyonLabel.B, hexagon_loop(O)) == bound_string(hexagon_loop(O))
