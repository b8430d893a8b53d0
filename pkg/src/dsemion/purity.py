"""Boundary conditions, eta-states and the Schmidt structure of restricted ground states."""

from __future__ import annotations

import functools
import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
from scipy import sparse

from .groundstate import (
    EdgeIndex,
    GaussianRational,
    Patch,
    SparseState,
    SizeGuardError,
    apply,
    build_ground_state,
    count_loops,
)
from .lattice import (
    EdgeId,
    Region,
    Vertex,
    boundary_path,
    edge_vertices,
    other_end,
    standard_region,
    vertex_edges,
)
from .pauli_ops import PhasedXOperator


@dataclass(frozen=True)
class BoundaryCycle:
    """Counterclockwise outer boundary of a region with its outer edges in cyclic order."""

    loop_vertices: tuple[Vertex, ...]
    loop_edges: tuple[EdgeId, ...]
    outer_order: tuple[tuple[EdgeId, Vertex], ...]  # (outer edge, vertex where it attaches)

    def arc(self, start: Vertex, stop: Vertex) -> list[EdgeId]:
        """Loop edges walking counterclockwise from ``start`` to ``stop``."""
        n = len(self.loop_vertices)
        i = self.loop_vertices.index(start)
        out = []
        while self.loop_vertices[i % n] != stop:
            out.append(self.loop_edges[i % n])
            i += 1
        return out


def boundary_cycle(region: Region) -> BoundaryCycle:
    loops = boundary_path(region)
    if len(loops) != 1:
        raise ValueError("region must have a single boundary loop")
    loop = loops[0]
    inside = region.edges()
    order = []
    for v in loop.vertices:
        for e in vertex_edges(v):
            if e not in inside:
                order.append((e, v))
    return BoundaryCycle(loop.vertices, loop.edges, tuple(order))


def _marked_in_order(cycle: BoundaryCycle, marked: frozenset[EdgeId]) -> list[tuple[EdgeId, Vertex]]:
    return [(e, v) for e, v in cycle.outer_order if e in marked]


def pairs_for(cycle: BoundaryCycle, marked: frozenset[EdgeId], pairing: int) -> list[tuple[tuple[EdgeId, Vertex], tuple[EdgeId, Vertex]]]:
    """Pair neighbouring marked edges; ``pairing`` 0 starts at the first, 1 shifts by one."""
    seq = _marked_in_order(cycle, marked)
    if len(seq) % 2:
        raise ValueError("boundary condition must mark an even number of edges")
    if pairing not in (0, 1):
        raise ValueError("pairing must be 0 or 1")
    if pairing == 1 and seq:
        seq = seq[1:] + seq[:1]
    return [(seq[k], seq[k + 1]) for k in range(0, len(seq), 2)]


def closing_soup(cycle: BoundaryCycle, marked: frozenset[EdgeId], pairing: int = 0, include_outer: bool = True) -> frozenset[EdgeId]:
    """An even-degree soup realising ``marked``: arcs of the boundary loop join paired edges."""
    acc: set[EdgeId] = set()
    for (e1, v1), (e2, v2) in pairs_for(cycle, marked, pairing):
        acc ^= set(cycle.arc(v1, v2))
    if include_outer:
        acc ^= set(marked)
    return frozenset(acc)


def enumerate_boundary_conditions(n: int) -> list[frozenset[EdgeId]]:
    """All even subsets of the outer edges of the standard region."""
    cycle = boundary_cycle(standard_region(n))
    outer = [e for e, _ in cycle.outer_order]
    out = []
    for k in range(0, len(outer) + 1, 2):
        out.extend(frozenset(c) for c in itertools.combinations(outer, k))
    return out


def boundary_condition_count(n: int) -> int:
    return 2 ** (len(standard_region(n).outer_edges()) - 1)


# --------------------------------------------------------------------------
# soups with a boundary condition


@dataclass(frozen=True)
class InnerPatch:
    """Plaquette edges of the standard region (no outer edges)."""

    n: int
    region: Region
    index: EdgeIndex
    cycle: BoundaryCycle

    @classmethod
    @functools.lru_cache(maxsize=8)
    def standard(cls, n: int) -> "InnerPatch":
        region = standard_region(n)
        return cls(n, region, EdgeIndex(region.edges()), boundary_cycle(region))


def _orbit_configs(inner: InnerPatch, base: frozenset[EdgeId]) -> np.ndarray:
    configs = inner.index.mask(base)[None, :]
    for h in inner.region:
        configs = np.concatenate([configs, configs ^ inner.index.mask(Region([h]).boundary_edges())[None, :]])
    return configs


def soups_with_boundary(n: int, marked: Iterable[EdgeId]) -> list[frozenset[EdgeId]]:
    """Soups on the plaquette edges whose odd vertices are exactly the attachment points of ``marked``."""
    inner = InnerPatch.standard(n)
    base = closing_soup(inner.cycle, frozenset(marked), 0, include_outer=False)
    configs = _orbit_configs(inner, base)
    return [inner.index.decode(row) for row in configs]


def _closure_graph(inner: InnerPatch, marked: frozenset[EdgeId], pairing: int) -> tuple[list[Vertex], list[tuple[int, int]], list[EdgeId]]:
    verts = sorted(inner.region.vertices())
    vpos = {v: k for k, v in enumerate(verts)}
    edges = [(vpos[a], vpos[b]) for a, b in (edge_vertices(e) for e in inner.index.edges)]
    virtual = []
    for (_, v1), (_, v2) in pairs_for(inner.cycle, marked, pairing):
        virtual.append((vpos[v1], vpos[v2]))
    return verts, edges, virtual


def _cycle_counts(nverts: int, edges: Sequence[tuple[int, int]], occ: np.ndarray, always: Sequence[tuple[int, int]] = ()) -> np.ndarray:
    """Number of nontrivial components per row of an occupancy matrix (label propagation)."""
    n = occ.shape[0]
    label = np.tile(np.arange(nverts, dtype=np.int32), (n, 1))
    deg = np.zeros((n, nverts), dtype=np.int32)
    for k, (a, b) in enumerate(edges):
        deg[:, a] += occ[:, k]
        deg[:, b] += occ[:, k]
    for a, b in always:
        deg[:, a] += 1
        deg[:, b] += 1
    all_edges = list(edges) + list(always)
    on = [occ[:, k].astype(bool) for k in range(len(edges))] + [np.ones(n, bool)] * len(always)
    changed = True
    while changed:
        changed = False
        for (a, b), m in zip(all_edges, on):
            lo = np.minimum(label[:, a], label[:, b])
            upd = m & ((label[:, a] != lo) | (label[:, b] != lo))
            if upd.any():
                changed = True
                label[upd, a] = lo[upd]
                label[upd, b] = lo[upd]
    roots = (label == np.arange(nverts)[None, :]) & (deg > 0)
    return roots.sum(axis=1)


def closed_loop_counts(n: int, marked: Iterable[EdgeId], pairing: int, configs: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Loop counts of every soup with the given boundary condition, closed up with ``pairing``.

    Returns (configs, counts) over the plaquette-edge index of the region.
    """
    marked = frozenset(marked)
    inner = InnerPatch.standard(n)
    if configs is None:
        base = closing_soup(inner.cycle, marked, 0, include_outer=False)
        configs = _orbit_configs(inner, base)
    verts, edges, virtual = _closure_graph(inner, marked, pairing)
    occ = inner.index.bits(configs, inner.index.edges)
    return configs, _cycle_counts(len(verts), edges, occ, virtual)


def eta_state(n: int, marked: Iterable[EdgeId], pairing: int = 0) -> SparseState:
    """Uniform superposition of the soups with boundary condition ``marked``, signed by closed-up loop count."""
    marked = frozenset(marked)
    inner = InnerPatch.standard(n)
    configs, counts = closed_loop_counts(n, marked, pairing)
    signs = np.where(counts % 2 == 0, 1, -1).astype(np.int64)
    return SparseState(inner.index, configs, signs, np.zeros_like(signs), len(inner.region))


def closed_up_loop_count(n: int, marked: Iterable[EdgeId], pairing: int, soup: Iterable[EdgeId]) -> int:
    """Loop count of one soup after closing it up, via an explicit graph."""
    marked = frozenset(marked)
    inner = InnerPatch.standard(n)
    g = nx.MultiGraph()
    for e in soup:
        g.add_edge(*edge_vertices(e))
    for (_, v1), (_, v2) in pairs_for(inner.cycle, marked, pairing):
        g.add_edge(v1, v2)
    odd = [v for v, d in g.degree() if d % 2]
    if odd:
        raise ValueError("soup does not satisfy the boundary condition")
    return nx.number_connected_components(g)


def pairing_parity(n: int, marked: Iterable[EdgeId], soup: Iterable[EdgeId]) -> int:
    """Parity of (loops with pairing 0) - (loops with pairing 1)."""
    marked = frozenset(marked)
    soup = list(soup)
    return (closed_up_loop_count(n, marked, 0, soup) - closed_up_loop_count(n, marked, 1, soup)) % 2


def predicted_pairing_parity(num_marked: int) -> int:
    """Odd exactly when the number of marked edges is a positive multiple of four."""
    return int(num_marked > 0 and num_marked % 4 == 0)


@dataclass
class ParityReport:
    n: int
    soups_checked: int = 0
    failures: int = 0
    by_marked_count: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.soups_checked > 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "soups_checked": self.soups_checked,
            "failures": self.failures,
            "passed": self.passed,
            "by_marked_count": {str(k): v for k, v in sorted(self.by_marked_count.items())},
        }


def _tally(report: ParityReport, k: int, parities: np.ndarray) -> None:
    expected = predicted_pairing_parity(k)
    bad = int(np.sum(parities != expected))
    report.soups_checked += len(parities)
    report.failures += bad
    slot = report.by_marked_count.setdefault(k, {"predicted": expected, "checked": 0, "failures": 0})
    slot["checked"] += len(parities)
    slot["failures"] += bad


def _condition_parities(n: int, marked: frozenset) -> np.ndarray:
    _, c0 = closed_loop_counts(n, marked, 0)
    _, c1 = closed_loop_counts(n, marked, 1)
    return (c0 - c1) % 2


def pairing_parity_exhaustive(n: int, jobs: int = 1) -> ParityReport:
    """Check the parity rule on every soup of every boundary condition."""
    report = ParityReport(n)
    conditions = enumerate_boundary_conditions(n)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_condition_parities, [n] * len(conditions), conditions, chunksize=64))
    else:
        results = [_condition_parities(n, b) for b in conditions]
    for marked, parities in zip(conditions, results):
        _tally(report, len(marked), parities)
    return report


def pairing_parity_random(n: int, samples: int, seed: int = 0) -> ParityReport:
    """Check the parity rule on random (boundary condition, soup) pairs."""
    rng = random.Random(seed)
    inner = InnerPatch.standard(n)
    outer = [e for e, _ in inner.cycle.outer_order]
    hexes = list(inner.region)
    verts, edges, _ = _closure_graph(inner, frozenset(), 0)
    vpos = {v: k for k, v in enumerate(verts)}
    rows, marks = [], []
    for _ in range(samples):
        while True:
            marked = frozenset(e for e in outer if rng.random() < 0.5)
            if len(marked) % 2 == 0:
                break
        flips = [h for h in hexes if rng.random() < 0.5]
        soup = closing_soup(inner.cycle, marked, 0, include_outer=False) ^ Region(flips).boundary_edges()
        rows.append(inner.index.mask(soup))
        marks.append(marked)
    occ = inner.index.bits(np.array(rows), inner.index.edges)
    counts = []
    for pairing in (0, 1):
        # every sample's closing edges become extra columns of one batch
        virtual: dict[tuple[int, int], int] = {}
        cells = []
        for r, marked in enumerate(marks):
            for (_, v1), (_, v2) in pairs_for(inner.cycle, marked, pairing):
                key = (vpos[v1], vpos[v2])
                cells.append((r, virtual.setdefault(key, len(virtual))))
        extra = np.zeros((samples, len(virtual)), dtype=occ.dtype)
        for r, c in cells:
            extra[r, c] += 1
        counts.append(_cycle_counts(len(verts), list(edges) + list(virtual), np.hstack([occ, extra])))
    parities = (counts[0] - counts[1]) % 2
    report = ParityReport(n)
    sizes = np.array([len(m) for m in marks])
    for k in sorted(set(sizes.tolist())):
        _tally(report, k, parities[sizes == k])
    return report


# --------------------------------------------------------------------------
# Schmidt structure


@dataclass
class SchmidtReport:
    n: int
    num_boundary_conditions: int
    num_outer_edges: int
    flat: bool = False
    weight: Fraction | None = None
    multiplicity: int = 0
    trace: Fraction | None = None
    orthonormal: bool = False
    bulk_agreement: bool | None = None
    restriction_stable: bool | None = None
    numeric_spectrum: list[float] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        checks = [self.flat, self.orthonormal, self.multiplicity == self.num_boundary_conditions, self.trace == 1]
        checks += [c for c in (self.bulk_agreement, self.restriction_stable) if c is not None]
        return all(checks)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "num_outer_edges": self.num_outer_edges,
            "num_boundary_conditions": self.num_boundary_conditions,
            "flat_spectrum": self.flat,
            "weight": str(self.weight) if self.weight is not None else None,
            "multiplicity": self.multiplicity,
            "trace": str(self.trace) if self.trace is not None else None,
            "eta_orthonormal": self.orthonormal,
            "bulk_agreement": self.bulk_agreement,
            "restriction_stable": self.restriction_stable,
            "numeric_spectrum_distinct": sorted({round(x, 12) for x in self.numeric_spectrum}),
            "passed": self.passed,
            "notes": self.notes,
        }


class ReducedState:
    """Reduced density matrix of a real-amplitude state on a subset of its edges.

    Stored as rho = M M^T * 2^{-m} with an integer matrix M whose rows are
    inner configurations and whose columns are distinct outer configurations.
    """

    def __init__(self, state: SparseState, inner: EdgeIndex):
        if np.any(state.im):
            raise ValueError("reduced states are implemented for real amplitudes")
        outer_edges = [e for e in state.index.edges if e not in inner]
        missing = [e for e in inner.edges if e not in state.index]
        if missing:
            raise ValueError("inner edges must be a subset of the state's edges")
        in_bits = state.occupation_bits(list(inner.edges))
        out_bits = state.occupation_bits(outer_edges)
        in_rows = _pack(in_bits, inner.nwords)
        keys_in, row_idx = np.unique(_void_rows(in_rows), return_inverse=True)
        keys_out, col_idx = np.unique(_void_rows(np.packbits(out_bits, axis=1)), return_inverse=True)
        self.inner = inner
        self.rows = keys_in.view(np.uint64).reshape(len(keys_in), inner.nwords)
        self.m = state.m
        self.matrix = sparse.csr_matrix(
            (state.re, (row_idx.ravel(), col_idx.ravel())), shape=(len(keys_in), len(keys_out)), dtype=np.int64
        )

    def _vector(self, psi: SparseState) -> np.ndarray:
        if psi.index != self.inner:
            raise ValueError("vector lives on a different edge set")
        if np.any(psi.im):
            raise ValueError("expected a real vector")
        vec = np.zeros(self.matrix.shape[0], dtype=np.int64)
        _, i, j = np.intersect1d(_void_rows(self.rows), _void_rows(psi.configs), return_indices=True, assume_unique=True)
        if len(j) != len(psi):
            return None  # support outside the range of rho
        vec[i] = psi.re[j]
        return vec

    def apply_int(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ (self.matrix.T @ vec)

    def trace(self) -> Fraction:
        tot = int(self.matrix.multiply(self.matrix).sum())
        return Fraction(tot) / Fraction(2) ** self.m

    def gram_spectrum(self) -> list[float]:
        """Floating eigenvalues of M^T M (same nonzero spectrum as rho), for display."""
        g = (self.matrix.T @ self.matrix).toarray().astype(float) / 2.0 ** self.m
        return [float(x) for x in np.linalg.eigvalsh(g) if abs(x) > 1e-12]


def _pack(bits: np.ndarray, nwords: int) -> np.ndarray:
    n, k = bits.shape
    out = np.zeros((n, nwords), dtype=np.uint64)
    for j in range(k):
        out[:, j >> 6] |= bits[:, j].astype(np.uint64) << np.uint64(j & 63)
    return out


def _void_rows(rows: np.ndarray) -> np.ndarray:
    c = np.ascontiguousarray(rows)
    return c.view(np.dtype((np.void, c.dtype.itemsize * c.shape[1]))).ravel()


def _eigen_check(rho: ReducedState, eta: SparseState, weight: Fraction) -> bool:
    """rho |eta> == weight |eta>, exactly."""
    vec = rho._vector(eta)
    if vec is None:
        return False
    return _eigen_check_matrix(rho, sparse.csc_matrix(vec[:, None]), weight)


def _eigen_check_matrix(rho: ReducedState, E: sparse.spmatrix, weight: Fraction) -> bool:
    """rho E == weight E column by column, exactly (E holds integer vectors)."""
    lhs = rho.matrix @ (rho.matrix.T @ E)  # times 2^{-rho.m}
    diff = lhs * weight.denominator - E * (weight.numerator << rho.m)
    diff = sparse.csr_matrix(diff)
    diff.eliminate_zeros()
    return diff.nnz == 0


def _stack(rows: np.ndarray, etas: Sequence[SparseState]) -> sparse.csc_matrix | None:
    """Columns are the integer amplitude vectors of ``etas`` over ``rows``; None if one leaves them."""
    keys = _void_rows(rows)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    data, ri, ci = [], [], []
    for k, eta in enumerate(etas):
        if np.any(eta.im):
            raise ValueError("expected real vectors")
        pos = np.searchsorted(sorted_keys, _void_rows(eta.configs))
        pos = np.minimum(pos, len(sorted_keys) - 1)
        if not np.array_equal(sorted_keys[pos], _void_rows(eta.configs)):
            return None
        ri.append(order[pos])
        ci.append(np.full(len(eta), k))
        data.append(eta.re)
    return sparse.csc_matrix(
        (np.concatenate(data), (np.concatenate(ri), np.concatenate(ci))), shape=(len(rows), len(etas)), dtype=np.int64
    )


def schmidt_check(
    n: int,
    *,
    bulk: bool = True,
    stability: bool = False,
    max_hexes: int | None = None,
    convention: str = "loop_count",
) -> SchmidtReport:
    """Exact Schmidt structure of the ground state of size n+1 restricted to the plaquette edges of size n."""
    outer_count = len(standard_region(n).outer_edges())
    conditions = enumerate_boundary_conditions(n)
    report = SchmidtReport(n, len(conditions), outer_count)
    inner = InnerPatch.standard(n)
    big = build_ground_state(n + 1, convention, max_hexes=max_hexes)
    rho = ReducedState(big, inner.index)
    report.trace = rho.trace()
    weight = Fraction(1, len(conditions))
    etas = [eta_state(n, b, 0) for b in conditions]
    report.orthonormal = _orthonormal(etas)
    E = _stack(rho.rows, etas)
    flat = E is not None and _eigen_check_matrix(rho, E, weight)
    report.weight = weight
    report.multiplicity = len(etas) if flat else 0
    if E is None:
        captured = Fraction(0)
    else:
        t = (rho.matrix.T @ E).tocoo()
        captured = Fraction(int(np.sum(t.data.astype(object) ** 2)), 2 ** (rho.m + etas[0].m))
    # trace 1 captured inside span{eta} and rho >= 0 means rho lives on that span
    report.flat = flat and captured == report.trace == 1
    if not report.flat:
        report.notes.append(f"captured weight {captured}, trace {report.trace}")
    if rho.matrix.shape[1] <= 4096:
        report.numeric_spectrum = rho.gram_spectrum()
    if bulk:
        report.bulk_agreement = bulk_agreement(n, conditions, big)
    if stability:
        bigger = build_ground_state(n + 2, convention, max_hexes=max_hexes)
        rho2 = ReducedState(bigger, inner.index)
        E2 = _stack(rho2.rows, etas)
        report.restriction_stable = rho2.trace() == 1 and E2 is not None and _eigen_check_matrix(rho2, E2, weight)
    return report


def _quadratic(rho: ReducedState, eta: SparseState) -> Fraction:
    vec = rho._vector(eta)
    if vec is None:
        return Fraction(0)
    t = rho.matrix.T @ vec
    val = int(np.dot(t.astype(object), t.astype(object)))
    return Fraction(val) / Fraction(2) ** (rho.m + eta.m)


def _orthonormal(etas: Sequence[SparseState]) -> bool:
    """Gram matrix of the eta-states equals the identity, exactly."""
    if len({e.m for e in etas}) != 1:
        raise ValueError("eta-states must share a normalisation")
    rows = np.unique(np.concatenate([e.configs for e in etas]), axis=0)
    E = _stack(rows, etas)
    gram = sparse.csr_matrix(E.T @ E - sparse.identity(len(etas), dtype=np.int64, format="csr") * (1 << etas[0].m))
    gram.eliminate_zeros()
    return gram.nnz == 0


def orthonormal_pairwise(etas: Sequence[SparseState]) -> bool:
    """Same check through pairwise inner products (slow; small cases only)."""
    for a, b in itertools.combinations_with_replacement(range(len(etas)), 2):
        want = GaussianRational(Fraction(int(a == b)))
        if etas[a].inner(etas[b]) != want:
            return False
    return True


def bulk_probe_operators(n: int) -> list[PhasedXOperator]:
    """Operators supported on the plaquette edges of the region of size n - 1."""
    from .lattice import hexagon_loop
    from .strings import plaquette_flip, semion_string, antisemion_string

    if n < 2:
        return [PhasedXOperator.identity()]
    region = standard_region(n - 1)
    edges = sorted(region.edges())
    ops = [PhasedXOperator.identity()]
    ops += [PhasedXOperator.z(e) for e in edges]
    ops += [PhasedXOperator.z(a, b) for a, b in itertools.combinations(edges[:8], 2)]
    ops += [PhasedXOperator.x(e) for e in edges[:4]]
    for h in region:
        ops.append(plaquette_flip(h))
        loop = hexagon_loop(h)
        ops.append(semion_string(loop).restricted(region.edges()))
        ops.append(antisemion_string(loop).restricted(region.edges()))
    return ops


def bulk_agreement(n: int, conditions: Sequence[frozenset], big: SparseState, ops: Sequence[PhasedXOperator] | None = None) -> bool:
    """eta(O) == omega(O) for every probe operator O on the region of size n - 1."""
    from .groundstate import expectation

    ops = list(ops) if ops is not None else bulk_probe_operators(n)
    reference = [expectation(big, o) for o in ops]
    for b in conditions:
        eta = eta_state(n, b, 0)
        for o, ref in zip(ops, reference):
            if expectation(eta, o) != ref:
                return False
    return True


# --------------------------------------------------------------------------
# dominated Schmidt span


def exact_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank over the rationals by fraction-exact row reduction."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][c]
        for r in range(len(m)):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / pv
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def _realify(mat: np.ndarray) -> list[list[int]]:
    """Complex integer matrix to its real 2x2 block form (ranks double)."""
    re, im = mat.real.astype(int), mat.imag.astype(int)
    top = np.hstack([re, -im])
    bot = np.hstack([im, re])
    return np.vstack([top, bot]).tolist()


def span_contained(small: np.ndarray, big: np.ndarray) -> bool:
    """range(small) is a subspace of range(big), for Gaussian-integer matrices."""
    r_big = exact_rank(_realify(big))
    r_both = exact_rank(_realify(np.hstack([big, small])))
    return r_big == r_both


@dataclass
class DominatedSpanReport:
    dim: int
    trials: int
    failures: int = 0
    control_detected: int = 0
    control_trials: int = 0

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "trials": self.trials,
            "failures": self.failures,
            "negative_controls": self.control_trials,
            "negative_controls_detected": self.control_detected,
            "passed": self.passed,
        }


def _random_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.integers(-3, 4, size=(rows, cols)) + 1j * rng.integers(-3, 4, size=(rows, cols))


def dominated_span_check(dim: int, trials: int, seed: int = 0) -> DominatedSpanReport:
    """Random omega >= rho >= 0 (built as rho + positive) and check the span inclusion.

    The range of a positive matrix is the span of its Schmidt vectors, so the
    check compares column spaces exactly.  Every fourth trial also runs a
    negative control with an undominated rho to confirm the checker can fail.
    """
    if dim < 1:
        raise ValueError("dim must be positive")
    rng = np.random.default_rng(seed)
    report = DominatedSpanReport(dim, trials)
    for t in range(trials):
        kind = t % 3
        r_rank = int(rng.integers(1, dim + 1))
        a = _random_gaussian(rng, dim, r_rank)
        rho = a @ a.conj().T
        extra = int(rng.integers(0, dim))
        if kind == 0:
            b = _random_gaussian(rng, dim, max(extra, 0))
            omega = rho + (b @ b.conj().T if extra else 0)
        elif kind == 1:
            omega = 2 * rho  # rho = omega / 2
        else:
            # rho is one Schmidt-type component of omega
            b = _random_gaussian(rng, dim, max(extra, 1))
            omega = rho + b @ b.conj().T
        omega = np.asarray(omega)
        if not span_contained(rho, omega):
            report.failures += 1
        if t % 4 == 0 and dim > 1:
            w = _random_gaussian(rng, dim, 1)
            omega_c = w @ w.conj().T
            v = _random_gaussian(rng, dim, 1)
            rho_c = v @ v.conj().T
            report.control_trials += 1
            if not span_contained(rho_c, omega_c):
                report.control_detected += 1
    return report
