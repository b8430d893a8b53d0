import itertools
import json
import math

import networkx as nx
import pytest
from shapely.geometry import Point

from dsemion.lattice import (
    Cone,
    EdgeId,
    HexCoord,
    OrientedPath,
    Region,
    boundary_path,
    classify_path,
    cone_leg_path,
    dumps,
    edge_hexagons,
    edge_vertices,
    hex_corners,
    hex_distance,
    hex_edges,
    hex_polygon,
    hexagon_loop,
    hexes_overlapping,
    neighbors,
    standard_region,
    to_plane,
    truncated_cone_path,
    vertex_edges,
    vertex_neighbors,
)

O = HexCoord(0, 0)
PATCH_5X5 = [HexCoord(q, r) for q in range(-2, 3) for r in range(-2, 3)]


def xor_boundary(hexes):
    acc = set()
    for h in hexes:
        acc ^= set(hex_edges(h))
    return acc


def loop_components(edges):
    g = nx.Graph()
    g.add_edges_from(edge_vertices(e) for e in edges)
    return nx.number_connected_components(g)


def test_neighbors_are_six_and_symmetric():
    nb = neighbors(O)
    assert len(set(nb)) == 6
    assert all(hex_distance(O, h) == 1 for h in nb)
    assert all(O in neighbors(h) for h in nb)


def test_adjacent_hexagons_share_one_edge():
    for a, b in itertools.combinations(PATCH_5X5, 2):
        shared = set(hex_edges(a)) & set(hex_edges(b))
        assert len(shared) == (1 if hex_distance(a, b) == 1 else 0), (a, b)


def test_edge_incidence_roundtrip():
    for h in PATCH_5X5:
        for e in hex_edges(h):
            assert h in edge_hexagons(e)
            u, v = edge_vertices(e)
            assert u in hex_corners(h) and v in hex_corners(h)


def test_every_vertex_has_degree_three():
    region = standard_region(4)
    for v in region.vertices():
        assert len(set(vertex_edges(v))) == 3
        assert len(set(vertex_neighbors(v))) == 3


@pytest.mark.parametrize("n,size", [(1, 1), (2, 7), (3, 19), (4, 37)])
def test_standard_region_sizes(n, size):
    assert len(standard_region(n)) == size == 3 * n * (n - 1) + 1


def test_standard_regions_nest():
    for n in range(1, 5):
        assert standard_region(n).hexes < standard_region(n + 1).hexes
    with pytest.raises(ValueError):
        standard_region(0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_outer_edge_count_is_enumerated(n):
    region = standard_region(n)
    verts = region.vertices()
    inside = region.edges()
    # brute force: any edge touching the region's vertices that is not a plaquette edge
    touching = {e for h in standard_region(n + 1) for e in hex_edges(h) if set(edge_vertices(e)) & verts}
    brute = touching - inside
    assert region.outer_edges() == brute
    assert len(brute) == 6 * n


def test_boundary_of_single_hexagon():
    (loop,) = boundary_path(Region([O]))
    assert loop.closed and len(loop) == 6
    assert set(loop.edges) == set(hex_edges(O))


def test_boundary_of_two_disjoint_hexagons():
    loops = boundary_path(Region([(0, 0), (3, 0)]))
    assert sorted(len(l) for l in loops) == [6, 6]


def test_ring_with_hole_has_two_loops():
    ring = Region(neighbors(O))
    loops = boundary_path(ring)
    edges = ring.boundary_edges()
    assert len(loops) == loop_components(edges) == 2
    assert {len(l) for l in loops} == {6, 18}


def test_boundary_edges_equal_xor_on_all_subsets():
    patch = [HexCoord(q, r) for q in range(3) for r in range(3)]
    for mask in range(1 << 9):
        hexes = [h for k, h in enumerate(patch) if mask >> k & 1]
        want = xor_boundary(hexes)
        loops = boundary_path(Region(hexes))
        got = [e for l in loops for e in l.edges]
        assert len(got) == len(set(got))
        assert set(got) == want
        assert len(loops) == loop_components(want)


def test_boundary_orientation_keeps_region_on_left():
    region = standard_region(2)
    (loop,) = boundary_path(region)
    pts = [to_plane(v) for v in loop.vertices]
    area2 = sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]))
    assert area2 > 0  # counterclockwise


def test_hexagon_loop_classification():
    loop = hexagon_loop(O)
    c = classify_path(loop)
    assert len(c.r_legs) == 6 and not c.l_vertices
    rev = classify_path(loop.reversed())
    assert not rev.r_legs and len(rev.l_vertices) == 6
    assert {l.leg for l in rev.l_vertices} == set(c.r_legs)


def test_reversal_swaps_every_side():
    region = standard_region(3)
    (loop,) = boundary_path(region)
    fwd = {v: (leg, side) for v, leg, side in classify_path(loop).steps}
    bwd = {v: (leg, side) for v, leg, side in classify_path(loop.reversed()).steps}
    assert fwd.keys() == bwd.keys() == set(loop.vertices)
    for v in fwd:
        assert fwd[v][0] == bwd[v][0]
        assert {fwd[v][1], bwd[v][1]} == {"left", "right"}


def test_open_path_classifies_interior_only():
    a, b, c = hex_corners(O)[:3]
    c2 = classify_path(OrientedPath((a, b, c)))
    assert len(c2.steps) == 1
    (v, leg, _), = c2.steps
    assert v == b and leg not in OrientedPath((a, b, c)).edges


def test_path_rejects_revisited_edge():
    a, b = hex_corners(O)[:2]
    with pytest.raises(ValueError):
        OrientedPath((a, b, a))


def test_path_from_edges_roundtrip():
    loop = hexagon_loop(O)
    again = OrientedPath.from_edges(loop.vertices[0], loop.edges, closed=True)
    assert again == loop
    assert OrientedPath.from_json(json.loads(json.dumps(loop.to_json()))) == loop


def test_overlap_uses_open_interiors():
    poly = hex_polygon(O)
    assert hexes_overlapping(poly) == Region([O])
    assert hexes_overlapping(poly.buffer(0.01)) == Region([O, *neighbors(O)])
    assert len(hexes_overlapping(None)) == 0
    assert len(hexes_overlapping(Point(0, 0).buffer(0))) == 0


def test_narrow_cone_region_has_one_boundary_loop():
    cone = Cone((0.0, 0.0), (0.0, 1.0), math.pi / 3)
    region = hexes_overlapping(cone.polygon(8.0))
    assert len(boundary_path(region)) == 1


def test_truncated_cone_path_runs_away_from_apex():
    apex = (0.3, 0.2)
    path = truncated_cone_path(apex, (0, 1), math.pi / 3, 6)
    cone_hexes = hexes_overlapping(Cone(apex, (0, 1), math.pi / 3).polygon(40))
    assert set(path.edges) <= cone_hexes.boundary_edges()
    dist = [math.dist(to_plane(v), apex) for v in path.vertices]
    assert all(a < b for a, b in zip(dist, dist[1:]))
    assert dist[0] > 2


def test_truncated_cone_path_errors_and_disjointness():
    with pytest.raises(ValueError):
        truncated_cone_path((0.3, 0.2), (0, 1), math.pi / 3, 0)
    up = truncated_cone_path((0.3, 0.2), (0, 1), math.pi / 3, 6)
    down = truncated_cone_path((0.3, 0.2), (0, -1), math.pi / 3, 6)
    assert not set(up.edges) & set(down.edges)


def test_cone_leg_path_needs_overlap():
    cone = Cone((40.0, 40.0), (0, 1), math.pi / 3)
    with pytest.raises(ValueError):
        cone_leg_path(cone, "right", standard_region(2).edges())


def test_json_dumps():
    region = Region([(0, 0), (1, -1)])
    assert json.loads(dumps(region)) == [[0, 0], [1, -1]]
    assert Region.from_json(json.loads(dumps(region))) == region
    with pytest.raises(TypeError):
        dumps(EdgeId(0, 0, 0))
