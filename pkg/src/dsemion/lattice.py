"""Finite honeycomb geometry.

Plaquettes are labelled by axial coordinates ``(q, r)``.  Hexagons are
pointy-top with unit edge length; the centre of ``(q, r)`` sits at
``(sqrt(3) * (q + r / 2), 1.5 * r)``.  Vertices are stored in *scaled*
integer coordinates ``(x, y)`` whose true position is
``(x * sqrt(3) / 2, y / 2)``.  The scaling is a positive diagonal map, so
orientation tests (cross products) can be done on the integers directly.

Edges are identified by ``EdgeId(q, r, d)``: edge ``d`` of hexagon ``(q, r)``
(``d = 0`` faces east, counting counterclockwise), canonicalised to the
lexicographically smaller of the two hexagons sharing it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

import networkx as nx
from shapely.geometry import Polygon
from shapely.geometry.base import BaseGeometry


class HexCoord(NamedTuple):
    q: int
    r: int

    def __add__(self, other):  # type: ignore[override]
        return HexCoord(self.q + other[0], self.r + other[1])


class Vertex(NamedTuple):
    x: int
    y: int


class EdgeId(NamedTuple):
    q: int
    r: int
    d: int

    @property
    def hexagon(self) -> HexCoord:
        return HexCoord(self.q, self.r)


# neighbour steps, counterclockwise from east
DIRECTIONS: tuple[HexCoord, ...] = (
    HexCoord(1, 0),
    HexCoord(0, 1),
    HexCoord(-1, 1),
    HexCoord(-1, 0),
    HexCoord(0, -1),
    HexCoord(1, -1),
)

# corner k sits at angle 30 + 60k degrees, in scaled coordinates
_CORNER_OFFSETS: tuple[tuple[int, int], ...] = (
    (1, 1),
    (0, 2),
    (-1, 1),
    (-1, -1),
    (0, -2),
    (1, -1),
)

# from a vertex with y = 1 (mod 3) the three edges point along these offsets
_UP_OFFSETS = ((0, -2), (-1, 1), (1, 1))
_DOWN_OFFSETS = ((0, 2), (1, -1), (-1, -1))

SQRT3 = math.sqrt(3.0)


def neighbors(h: HexCoord) -> list[HexCoord]:
    """The six hexagons sharing an edge with ``h``, counterclockwise from east."""
    h = HexCoord(*h)
    return [h + d for d in DIRECTIONS]


def hex_distance(a: HexCoord, b: HexCoord) -> int:
    dq, dr = a[0] - b[0], a[1] - b[1]
    return (abs(dq) + abs(dr) + abs(dq + dr)) // 2


def hex_center_scaled(h: HexCoord) -> tuple[int, int]:
    return (2 * h[0] + h[1], 3 * h[1])


def hex_center(h: HexCoord) -> tuple[float, float]:
    return to_plane(hex_center_scaled(h))


def to_plane(p: Sequence[float]) -> tuple[float, float]:
    """Scaled integer coordinates to Euclidean coordinates."""
    return (p[0] * SQRT3 / 2.0, p[1] / 2.0)


def hex_corners(h: HexCoord) -> list[Vertex]:
    cx, cy = hex_center_scaled(h)
    return [Vertex(cx + dx, cy + dy) for dx, dy in _CORNER_OFFSETS]


def edge_id(h: HexCoord, d: int) -> EdgeId:
    d %= 6
    other = HexCoord(*h) + DIRECTIONS[d]
    if tuple(other) < tuple(h):
        return EdgeId(other.q, other.r, (d + 3) % 6)
    return EdgeId(h[0], h[1], d)


def hex_edges(h: HexCoord) -> list[EdgeId]:
    """Edges of ``h`` in counterclockwise order; edge d joins corners d-1 and d."""
    return [edge_id(h, d) for d in range(6)]


def edge_vertices(e: EdgeId) -> tuple[Vertex, Vertex]:
    corners = hex_corners(e.hexagon)
    u, v = corners[(e.d - 1) % 6], corners[e.d]
    return (u, v) if u < v else (v, u)


def edge_hexagons(e: EdgeId) -> tuple[HexCoord, HexCoord]:
    return e.hexagon, e.hexagon + DIRECTIONS[e.d]


def edge_midpoint(e: EdgeId) -> tuple[float, float]:
    u, v = edge_vertices(e)
    return to_plane(((u.x + v.x) / 2.0, (u.y + v.y) / 2.0))


def _is_up(v: Vertex) -> bool:
    return v[1] % 3 == 1


def vertex_neighbors(v: Vertex) -> list[Vertex]:
    offsets = _UP_OFFSETS if _is_up(v) else _DOWN_OFFSETS
    return [Vertex(v[0] + dx, v[1] + dy) for dx, dy in offsets]


def edge_between(u: Vertex, v: Vertex) -> EdgeId:
    """The edge joining two adjacent vertices."""
    if not _is_up(u):
        u, v = v, u
    if not _is_up(u) or _is_up(v):
        raise ValueError(f"{u} and {v} are not adjacent")
    # u is corner 0 of hexagon h0
    r = (u[1] - 1) // 3
    q = (u[0] - 1 - r) // 2
    h0 = HexCoord(q, r)
    off = (v[0] - u[0], v[1] - u[1])
    if off == (0, -2):
        return edge_id(h0, 0)
    if off == (-1, 1):
        return edge_id(h0, 1)
    if off == (1, 1):
        return edge_id(h0 + DIRECTIONS[0], 2)
    raise ValueError(f"{u} and {v} are not adjacent")


def vertex_edges(v: Vertex) -> list[EdgeId]:
    return [edge_between(v, w) for w in vertex_neighbors(v)]


def vertex_hexagons(v: Vertex) -> list[HexCoord]:
    """The three hexagons meeting at ``v``."""
    hexes: set[HexCoord] = set()
    for e in vertex_edges(v):
        hexes.update(edge_hexagons(e))
    return sorted(hexes)


def other_end(e: EdgeId, v: Vertex) -> Vertex:
    a, b = edge_vertices(e)
    if v == a:
        return b
    if v == b:
        return a
    raise ValueError(f"{v} is not an endpoint of {e}")


def _cross(a: Sequence[int], b: Sequence[int]) -> int:
    return a[0] * b[1] - a[1] * b[0]


# --------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class Region:
    """A finite set of hexagonal plaquettes."""

    hexes: frozenset[HexCoord] = field(default_factory=frozenset)

    def __init__(self, hexes: Iterable[Sequence[int]] = ()):
        object.__setattr__(self, "hexes", frozenset(HexCoord(*h) for h in hexes))

    def __len__(self) -> int:
        return len(self.hexes)

    def __iter__(self) -> Iterator[HexCoord]:
        return iter(sorted(self.hexes))

    def __contains__(self, h) -> bool:
        return HexCoord(*h) in self.hexes

    def __xor__(self, other: "Region") -> "Region":
        return Region(self.hexes ^ other.hexes)

    def __or__(self, other: "Region") -> "Region":
        return Region(self.hexes | other.hexes)

    def __and__(self, other: "Region") -> "Region":
        return Region(self.hexes & other.hexes)

    def __sub__(self, other: "Region") -> "Region":
        return Region(self.hexes - other.hexes)

    def components(self) -> list["Region"]:
        """Connected components under edge adjacency."""
        g = nx.Graph()
        g.add_nodes_from(self.hexes)
        for h in self.hexes:
            for n in neighbors(h):
                if n in self.hexes:
                    g.add_edge(h, n)
        comps = [Region(c) for c in nx.connected_components(g)]
        return sorted(comps, key=lambda c: min(c.hexes))

    def edges(self) -> frozenset[EdgeId]:
        """Edges belonging to some plaquette of the region."""
        return frozenset(e for h in self.hexes for e in hex_edges(h))

    def vertices(self) -> frozenset[Vertex]:
        return frozenset(v for h in self.hexes for v in hex_corners(h))

    def boundary_edges(self) -> frozenset[EdgeId]:
        """Symmetric difference of the plaquette boundaries."""
        acc: set[EdgeId] = set()
        for h in self.hexes:
            acc.symmetric_difference_update(hex_edges(h))
        return frozenset(acc)

    def outer_edges(self) -> frozenset[EdgeId]:
        """Edges with exactly one endpoint on the region, sticking out of it."""
        inside = self.edges()
        out = set()
        for v in self.vertices():
            for e in vertex_edges(v):
                if e not in inside:
                    out.add(e)
        return frozenset(out)

    def closure_edges(self) -> frozenset[EdgeId]:
        """Every edge with an endpoint on the region: plaquette edges plus outer edges."""
        return self.edges() | self.outer_edges()

    def to_json(self) -> list[list[int]]:
        return [[h.q, h.r] for h in self]

    @classmethod
    def from_json(cls, data: Iterable[Sequence[int]]) -> "Region":
        return cls(data)


def standard_region(n: int) -> Region:
    """Hexagon of hexagons of radius ``n - 1`` centred at the origin."""
    if n < 1:
        raise ValueError("n must be positive")
    rad = n - 1
    return Region(
        (q, r)
        for q in range(-rad, rad + 1)
        for r in range(-rad, rad + 1)
        if abs(q + r) <= rad
    )


# --------------------------------------------------------------------------
# paths


@dataclass(frozen=True)
class OrientedPath:
    """Edge-self-avoiding walk on the honeycomb.

    ``vertices`` lists the visited vertices in order.  For a closed path the
    first vertex is not repeated at the end; the closing edge is implicit.
    """

    vertices: tuple[Vertex, ...]
    closed: bool = False

    def __post_init__(self):
        verts = tuple(Vertex(*v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) < 2:
            raise ValueError("a path needs at least one edge")
        seen: set[EdgeId] = set()
        for e in self.edges:  # edge_between validates adjacency
            if e in seen:
                raise ValueError(f"path revisits edge {e}")
            seen.add(e)
        if self.closed and len(verts) < 3:
            raise ValueError("a closed path needs at least three edges")

    def _pairs(self) -> list[tuple[Vertex, Vertex]]:
        vs = self.vertices
        pairs = list(zip(vs[:-1], vs[1:]))
        if self.closed:
            pairs.append((vs[-1], vs[0]))
        return pairs

    @cached_property
    def edges(self) -> tuple[EdgeId, ...]:
        return tuple(edge_between(u, v) for u, v in self._pairs())

    @property
    def directed_edges(self) -> list[tuple[Vertex, Vertex]]:
        return self._pairs()

    @property
    def initial_edge(self) -> EdgeId:
        if self.closed:
            raise ValueError("closed path has no initial edge")
        return self.edges[0]

    @property
    def final_edge(self) -> EdgeId:
        if self.closed:
            raise ValueError("closed path has no final edge")
        return self.edges[-1]

    def __len__(self) -> int:
        return len(self.edges)

    def reversed(self) -> "OrientedPath":
        if self.closed:
            vs = (self.vertices[0],) + tuple(reversed(self.vertices[1:]))
            return OrientedPath(vs, closed=True)
        return OrientedPath(tuple(reversed(self.vertices)))

    def to_json(self) -> dict:
        return {"vertices": [list(v) for v in self.vertices], "closed": self.closed}

    @classmethod
    def from_json(cls, data: dict) -> "OrientedPath":
        return cls(tuple(Vertex(*v) for v in data["vertices"]), bool(data["closed"]))

    @classmethod
    def from_edges(cls, start: Vertex, edges: Sequence[EdgeId], closed: bool = False) -> "OrientedPath":
        verts = [Vertex(*start)]
        for e in edges:
            verts.append(other_end(e, verts[-1]))
        if closed:
            if verts[-1] != verts[0]:
                raise ValueError("edges do not close up")
            verts.pop()
        return cls(tuple(verts), closed)


class LVertex(NamedTuple):
    vertex: Vertex
    in_edge: EdgeId
    out_edge: EdgeId
    leg: EdgeId


@dataclass(frozen=True)
class PathStepClass:
    """Leg data for every interior vertex of a path."""

    steps: tuple[tuple[Vertex, EdgeId, str], ...]
    r_legs: tuple[EdgeId, ...]
    l_vertices: tuple[LVertex, ...]


# Which side of the direction of travel carries the R-legs.  Pinned by the
# ground-state and braiding checks; see groundstate.select_convention.
R_SIDE = "right"


def classify_path(path: OrientedPath, r_side: str | None = None) -> PathStepClass:
    """Split the interior vertices of ``path`` into R-legs and L-vertices.

    A vertex whose third edge lies on the ``r_side`` of the direction of
    travel contributes that edge as an R-leg; otherwise it is an L-vertex.
    Endpoints of open paths are not classified.
    """
    r_side = r_side or R_SIDE
    if r_side not in ("right", "left"):
        raise ValueError("r_side must be 'right' or 'left'")
    pairs = path.directed_edges
    edges = path.edges
    steps = []
    r_legs = []
    l_verts = []
    n = len(pairs)
    turns = range(n) if path.closed else range(n - 1)
    for t in turns:
        (a, v), (_, w) = pairs[t], pairs[(t + 1) % n]
        e_in, e_out = edges[t], edges[(t + 1) % n]
        (leg,) = [e for e in vertex_edges(v) if e != e_in and e != e_out]
        leg_end = other_end(leg, v)
        travel = (v[0] - a[0], v[1] - a[1])
        leg_dir = (leg_end[0] - v[0], leg_end[1] - v[1])
        side = "right" if _cross(travel, leg_dir) < 0 else "left"
        steps.append((v, leg, side))
        if side == r_side:
            r_legs.append(leg)
        else:
            l_verts.append(LVertex(v, e_in, e_out, leg))
    return PathStepClass(tuple(steps), tuple(r_legs), tuple(l_verts))


def boundary_path(region: Region) -> list[OrientedPath]:
    """Boundary loops of ``region``, each oriented with the region on its left.

    Outer boundaries therefore run counterclockwise and boundaries of holes
    run clockwise.
    """
    bedges = region.boundary_edges()
    succ: dict[Vertex, tuple[Vertex, EdgeId]] = {}
    for e in bedges:
        u, v = edge_vertices(e)
        h1, h2 = edge_hexagons(e)
        inside = h1 if h1 in region.hexes else h2
        c = hex_center_scaled(inside)
        # orient u -> v so that the inside hexagon lies to the left
        if _cross((v[0] - u[0], v[1] - u[1]), (c[0] - u[0], c[1] - u[1])) < 0:
            u, v = v, u
        if u in succ:
            raise AssertionError("boundary vertex with two outgoing edges")
        succ[u] = (v, e)
    loops = []
    remaining = set(succ)
    while remaining:
        start = min(remaining)
        verts = [start]
        remaining.discard(start)
        cur = succ[start][0]
        while cur != start:
            verts.append(cur)
            remaining.discard(cur)
            cur = succ[cur][0]
        loops.append(OrientedPath(tuple(verts), closed=True))
    return loops


def hexagon_loop(h: HexCoord) -> OrientedPath:
    """Counterclockwise boundary of a single plaquette, starting at corner 0."""
    return OrientedPath(tuple(hex_corners(h)), closed=True)


# --------------------------------------------------------------------------
# geometric sets and cones


def hex_polygon(h: HexCoord) -> Polygon:
    return Polygon([to_plane(v) for v in hex_corners(h)])


def hexes_overlapping(shape: BaseGeometry | None, candidates: Iterable[HexCoord] | None = None) -> Region:
    """Plaquettes whose open interior meets the open interior of ``shape``.

    ``candidates`` restricts the search; by default every hexagon whose
    bounding box meets the shape is tested.
    """
    if shape is None or shape.is_empty:
        return Region()
    if candidates is None:
        minx, miny, maxx, maxy = shape.bounds
        rmin = math.floor(miny / 1.5) - 1
        rmax = math.ceil(maxy / 1.5) + 1
        cands = []
        for r in range(rmin, rmax + 1):
            qmin = math.floor(minx / SQRT3 - r / 2) - 1
            qmax = math.ceil(maxx / SQRT3 - r / 2) + 1
            cands.extend(HexCoord(q, r) for q in range(qmin, qmax + 1))
    else:
        cands = [HexCoord(*h) for h in candidates]
    return Region(h for h in cands if hex_polygon(h).intersection(shape).area > 1e-9)


@dataclass(frozen=True)
class Cone:
    """Open cone {x : (x - apex).axis > |x - apex| cos(angle / 2)}, angle < pi."""

    apex: tuple[float, float]
    axis: tuple[float, float]
    angle: float

    def __post_init__(self):
        if not 0 < self.angle < math.pi:
            raise ValueError("cone opening angle must lie in (0, pi)")
        norm = math.hypot(*self.axis)
        object.__setattr__(self, "axis", (self.axis[0] / norm, self.axis[1] / norm))

    def _ray(self, sign: int) -> tuple[float, float]:
        a = math.atan2(self.axis[1], self.axis[0]) + sign * self.angle / 2
        return (math.cos(a), math.sin(a))

    @property
    def left_ray(self) -> tuple[float, float]:
        return self._ray(+1)

    @property
    def right_ray(self) -> tuple[float, float]:
        return self._ray(-1)

    def halves(self) -> tuple["Cone", "Cone"]:
        """Left and right half-cones sharing the apex."""
        a = math.atan2(self.axis[1], self.axis[0])
        quarter = self.angle / 4
        left = Cone(self.apex, (math.cos(a + quarter), math.sin(a + quarter)), self.angle / 2)
        right = Cone(self.apex, (math.cos(a - quarter), math.sin(a - quarter)), self.angle / 2)
        return left, right

    def polygon(self, radius: float) -> Polygon:
        """The cone cut off by a disc of the given radius around the apex."""
        ax, ay = self.apex
        start = math.atan2(self.axis[1], self.axis[0]) - self.angle / 2
        pts = [(ax, ay)]
        steps = 64
        for k in range(steps + 1):
            t = start + self.angle * k / steps
            pts.append((ax + radius * math.cos(t), ay + radius * math.sin(t)))
        return Polygon(pts)

    def contains(self, p: Sequence[float]) -> bool:
        dx, dy = p[0] - self.apex[0], p[1] - self.apex[1]
        dist = math.hypot(dx, dy)
        return dist > 0 and dx * self.axis[0] + dy * self.axis[1] > dist * math.cos(self.angle / 2)


def _dist(p: Sequence[float], q: Sequence[float]) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def cone_leg_path(
    cone: Cone,
    leg: str,
    within: Iterable[EdgeId],
    clearance: float = 2.0,
    reach: float | None = None,
) -> OrientedPath:
    """The stretch of the counterclockwise boundary of the cone's plaquettes along one leg.

    Edges closer than ``clearance`` to the apex are dropped and the walk is
    cut where it leaves the edge set ``within``.  The left leg runs towards
    the apex, the right leg away from it, as dictated by the orientation.
    """
    within = frozenset(within)
    if not within:
        raise ValueError("empty working region")
    far = reach or (max(_dist(edge_midpoint(e), cone.apex) for e in within) + 6.0)
    region = hexes_overlapping(cone.polygon(far))
    loops = boundary_path(region)
    if len(loops) != 1:
        raise AssertionError("cone region should have a single boundary loop")
    loop = loops[0]
    edges = loop.edges
    n = len(edges)
    near = [_dist(edge_midpoint(e), cone.apex) <= clearance for e in edges]
    if not any(near):
        raise ValueError("cone apex is not near its boundary loop")
    # edges after the apex block follow the right leg, edges before it the left leg
    if leg == "right":
        k = next(i for i in range(n) if near[i] and not near[(i + 1) % n])
        seq = [(k + 1 + i) % n for i in range(n)]
    elif leg == "left":
        k = next(i for i in range(n) if near[i] and not near[i - 1])
        seq = [(k - 1 - i) % n for i in range(n)]
    else:
        raise ValueError("leg must be 'left' or 'right'")
    run = []
    for i in seq:
        if near[i] or edges[i] not in within:
            break
        run.append(i)
    if not run:
        raise ValueError("cone leg does not meet the working region")
    if leg == "left":
        run.reverse()
    start = loop.directed_edges[run[0]][0]
    return OrientedPath.from_edges(start, [edges[i] for i in run])


def truncated_cone_path(
    apex: Sequence[float],
    axis: Sequence[float],
    angle: float,
    depth: int,
    *,
    leg: str = "right",
    clearance: float = 2.0,
) -> OrientedPath:
    """Finite piece of a cone's boundary path along one leg.

    The working region is the hexagon of hexagons of radius ``depth``
    centred on the plaquette containing the apex.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    cone = Cone(tuple(apex), tuple(axis), angle)
    centre = nearest_hexagon(apex)
    work = Region(h + centre for h in standard_region(depth + 1))
    return cone_leg_path(cone, leg, work.edges(), clearance=clearance)


def nearest_hexagon(p: Sequence[float]) -> HexCoord:
    r = p[1] / 1.5
    q = p[0] / SQRT3 - r / 2
    best = None
    for qq in (math.floor(q), math.ceil(q)):
        for rr in (math.floor(r), math.ceil(r)):
            h = HexCoord(qq, rr)
            d = _dist(hex_center(h), p)
            if best is None or d < best[0]:
                best = (d, h)
    return best[1]


def dumps(obj) -> str:
    """JSON for regions and paths."""
    if isinstance(obj, (Region, OrientedPath)):
        return json.dumps(obj.to_json(), sort_keys=True)
    raise TypeError(type(obj))
