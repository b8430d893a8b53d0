"""Loop-soup ground states, the commuting-projector Hamiltonian and exact sparse states.

Configurations of a finite edge set are stored as rows of packed ``uint64``
words.  A :class:`SparseState` keeps Gaussian-integer amplitudes together
with a shared scale ``2**(-m/2)``, so every state met in practice is
represented exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .lattice import (
    EdgeId,
    HexCoord,
    Region,
    edge_vertices,
    hex_edges,
    hexagon_loop,
    neighbors,
    standard_region,
    vertex_edges,
)
from .pauli_ops import DiagonalForm, PhasedXOperator, adjoint
from .strings import semion_string

DEFAULT_MAX_HEXES = 19
CONVENTIONS = ("region_components", "loop_count")


class SizeGuardError(ValueError):
    """Raised when an enumeration would exceed the configured size guard."""


# --------------------------------------------------------------------------
# edge indexing and packed configurations


class EdgeIndex:
    """Fixed ordering of a finite edge set, mapping edges to bit positions."""

    def __init__(self, edges: Iterable[EdgeId]):
        self.edges: tuple[EdgeId, ...] = tuple(sorted(set(edges)))
        self.pos = {e: k for k, e in enumerate(self.edges)}
        self.nwords = max(1, (len(self.edges) + 63) // 64)

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e) -> bool:
        return e in self.pos

    def __eq__(self, other) -> bool:
        return isinstance(other, EdgeIndex) and self.edges == other.edges

    def __hash__(self) -> int:
        return hash(self.edges)

    def mask(self, edges: Iterable[EdgeId]) -> np.ndarray:
        words = np.zeros(self.nwords, dtype=np.uint64)
        for e in edges:
            try:
                k = self.pos[e]
            except KeyError:
                raise KeyError(f"edge {e} is outside the working patch") from None
            words[k >> 6] |= np.uint64(1) << np.uint64(k & 63)
        return words

    def bits(self, configs: np.ndarray, edges: Sequence[EdgeId]) -> np.ndarray:
        """Bit columns (uint8, shape (N, len(edges))) for the given edges."""
        out = np.empty((configs.shape[0], len(edges)), dtype=np.uint8)
        for col, e in enumerate(edges):
            k = self.pos[e]
            out[:, col] = (configs[:, k >> 6] >> np.uint64(k & 63)) & np.uint64(1)
        return out

    def decode(self, row: np.ndarray) -> frozenset[EdgeId]:
        occ = []
        for k, e in enumerate(self.edges):
            if int(row[k >> 6]) >> (k & 63) & 1:
                occ.append(e)
        return frozenset(occ)


def _void(configs: np.ndarray) -> np.ndarray:
    c = np.ascontiguousarray(configs)
    return c.view(np.dtype((np.void, 8 * c.shape[1]))).ravel()


def _rotate(re: np.ndarray, im: np.ndarray, k: np.ndarray | int) -> tuple[np.ndarray, np.ndarray]:
    """Multiply re + i*im by i^k elementwise."""
    k = np.asarray(k) % 4
    new_re = np.where(k == 0, re, np.where(k == 1, -im, np.where(k == 2, -re, im)))
    new_im = np.where(k == 0, im, np.where(k == 1, re, np.where(k == 2, -im, -re)))
    return new_re.astype(np.int64), new_im.astype(np.int64)


def form_values(index: EdgeIndex, configs: np.ndarray, form: DiagonalForm) -> np.ndarray:
    """Evaluate a diagonal form on every row; returns exponents mod 4."""
    val = np.full(configs.shape[0], form.const, dtype=np.int64)
    if form.lin:
        b = index.bits(configs, [j for j, _ in form.lin])
        # integer matmul has no BLAS path; column sums are much faster
        for col, (_, c) in enumerate(form.lin):
            val += c * b[:, col]
    if form.quad:
        pairs = sorted(form.quad)
        sites = sorted({s for p in pairs for s in p})
        col = {s: i for i, s in enumerate(sites)}
        b = index.bits(configs, sites)
        for j, k in pairs:
            val += 2 * (b[:, col[j]] & b[:, col[k]])
    return val % 4


# --------------------------------------------------------------------------
# sparse states


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __abs__(self):
        raise TypeError("use abs2 for the exact squared modulus")

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, complex):
            return self.re == other.real and self.im == other.imag
        if isinstance(other, (int, Fraction, float)):
            return self.re == other and self.im == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        if not isinstance(other, GaussianRational):
            other = GaussianRational(Fraction(other))
        return GaussianRational(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def phase_exponent(self) -> int | None:
        """k with self = i^k, if self is a fourth root of unity."""
        for k, (a, b) in enumerate(((1, 0), (0, 1), (-1, 0), (0, -1))):
            if self.re == a and self.im == b:
                return k
        return None

    def to_json(self) -> list[str]:
        return [str(self.re), str(self.im)]

    def __repr__(self) -> str:
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


class SparseState:
    """Finite superposition of edge configurations with exact amplitudes.

    Amplitude of row ``k`` is ``(re[k] + 1j * im[k]) * 2**(-m/2)``.
    Rows are kept sorted and unique, and zero amplitudes are dropped.
    """

    __slots__ = ("index", "configs", "re", "im", "m")

    def __init__(self, index: EdgeIndex, configs: np.ndarray, re: np.ndarray, im: np.ndarray, m: int, *, canonical: bool = False):
        self.index = index
        configs = np.asarray(configs, dtype=np.uint64).reshape(-1, index.nwords)
        re = np.asarray(re, dtype=np.int64)
        im = np.asarray(im, dtype=np.int64)
        if not canonical:
            configs, re, im = _canonicalize(configs, re, im)
        self.configs = configs
        self.re = re
        self.im = im
        self.m = int(m)

    # construction ------------------------------------------------------
    @classmethod
    def basis(cls, index: EdgeIndex, occupied: Iterable[EdgeId] = ()) -> "SparseState":
        return cls(index, index.mask(occupied)[None, :], np.array([1]), np.array([0]), 0)

    @classmethod
    def from_dict(cls, index: EdgeIndex, amps: dict, m: int = 0) -> "SparseState":
        rows, re, im = [], [], []
        for occ, amp in amps.items():
            amp = complex(amp)
            rows.append(index.mask(occ))
            re.append(int(amp.real))
            im.append(int(amp.imag))
        if not rows:
            return cls.zero(index)
        return cls(index, np.array(rows), np.array(re), np.array(im), m)

    @classmethod
    def zero(cls, index: EdgeIndex) -> "SparseState":
        return cls(index, np.zeros((0, index.nwords), np.uint64), np.zeros(0, np.int64), np.zeros(0, np.int64), 0, canonical=True)

    # basic properties --------------------------------------------------
    def __len__(self) -> int:
        return self.configs.shape[0]

    def is_zero(self) -> bool:
        return len(self) == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseState):
            return NotImplemented
        if self.index != other.index:
            return False
        try:
            return (self - other).is_zero()
        except ValueError:  # scales differ by an odd power of sqrt 2
            return self.is_zero() and other.is_zero()

    __hash__ = None  # type: ignore[assignment]

    def norm_sq(self) -> Fraction:
        tot = int(np.sum(self.re.astype(object) ** 2 + self.im.astype(object) ** 2)) if len(self) else 0
        return Fraction(tot, 1) / Fraction(2) ** self.m

    def to_dict(self) -> dict[frozenset, complex]:
        """Occupied-edge sets mapped to float amplitudes (for inspection)."""
        scale = 2.0 ** (-self.m / 2)
        return {
            self.index.decode(row): complex(int(a), int(b)) * scale
            for row, a, b in zip(self.configs, self.re, self.im)
        }

    def to_json(self) -> dict:
        return {
            "normalization_exponent": self.m,
            "amplitudes": [
                [sorted(list(e) for e in self.index.decode(row)), [int(a), int(b)]]
                for row, a, b in zip(self.configs, self.re, self.im)
            ],
        }

    # linear algebra ----------------------------------------------------
    def times_phase(self, k: int) -> "SparseState":
        re, im = _rotate(self.re, self.im, k)
        return SparseState(self.index, self.configs, re, im, self.m, canonical=True)

    def rescaled(self, m: int) -> "SparseState":
        """Same vector with scale exponent m (must be >= current and of equal parity)."""
        d = m - self.m
        if d < 0 or d % 2:
            raise ValueError("can only rescale by even non-negative steps")
        f = 1 << (d // 2)
        return SparseState(self.index, self.configs, self.re * f, self.im * f, m, canonical=True)

    def __add__(self, other: "SparseState") -> "SparseState":
        self._check_index(other)
        m = max(self.m, other.m)
        if (self.m - other.m) % 2:
            raise ValueError("cannot add states whose scales differ by an odd power of sqrt 2")
        a, b = self.rescaled(m), other.rescaled(m)
        if a.configs.shape == b.configs.shape and np.array_equal(a.configs, b.configs):
            re, im = a.re + b.re, a.im + b.im
            keep = (re != 0) | (im != 0)
            return SparseState(self.index, a.configs[keep], re[keep], im[keep], m, canonical=True)
        return SparseState(
            self.index,
            np.concatenate([a.configs, b.configs]),
            np.concatenate([a.re, b.re]),
            np.concatenate([a.im, b.im]),
            m,
        )

    def __neg__(self) -> "SparseState":
        return self.times_phase(2)

    def __sub__(self, other: "SparseState") -> "SparseState":
        return self + (-other)

    def half(self) -> "SparseState":
        """Multiply by 1/2."""
        return SparseState(self.index, self.configs, self.re, self.im, self.m + 2, canonical=True)

    def _check_index(self, other: "SparseState") -> None:
        if self.index != other.index:
            raise ValueError("states live on different edge sets")

    def inner(self, other: "SparseState") -> GaussianRational:
        """<self|other>, exact; scales must combine to a rational."""
        self._check_index(other)
        if (self.m + other.m) % 2:
            raise ValueError("inner product would be irrational")
        i, j = _matching_rows(self.configs, other.configs)
        ar, ai, br, bi = self.re[i], self.im[i], other.re[j], other.im[j]
        big = max((int(np.abs(x).max()) if len(x) else 0) for x in (ar, ai, br, bi))
        if big and big * big * len(i) >= 2**62:
            ar, ai, br, bi = (x.astype(object) for x in (ar, ai, br, bi))
        re = int(np.sum(ar * br + ai * bi)) if len(i) else 0
        im = int(np.sum(ar * bi - ai * br)) if len(i) else 0
        den = Fraction(2) ** ((self.m + other.m) // 2)
        return GaussianRational(Fraction(re) / den, Fraction(im) / den)

    def equals(self, other: "SparseState") -> bool:
        """Exact vector equality."""
        return proportionality(self, other) == 0

    def occupation_bits(self, edges: Sequence[EdgeId]) -> np.ndarray:
        return self.index.bits(self.configs, edges)

    def __repr__(self) -> str:
        return f"SparseState({len(self)} configs on {len(self.index)} edges, m={self.m})"


def _matching_rows(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (i, j) with a[i] == b[j]; rows within each array are unique."""
    if a.shape[0] == 0 or b.shape[0] == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty
    if a.shape == b.shape and np.array_equal(a, b):
        every = np.arange(a.shape[0])
        return every, every
    both = np.concatenate([a, b])
    order = np.lexsort(both.T)
    rows = both[order]
    same = np.all(rows[1:] == rows[:-1], axis=1)
    k = np.flatnonzero(same)
    lo, hi = order[k], order[k + 1]
    na = a.shape[0]
    i = np.where(lo < na, lo, hi)
    j = np.where(lo < na, hi, lo) - na
    return i, j


def _canonicalize(configs, re, im):
    if configs.shape[0] == 0:
        return configs, re, im
    order = np.lexsort(configs.T)
    rows = configs[order]
    re, im = re[order], im[order]
    if rows.shape[0] > 1:
        new = np.empty(rows.shape[0], dtype=bool)
        new[0] = True
        np.any(rows[1:] != rows[:-1], axis=1, out=new[1:])
        starts = np.flatnonzero(new)
        if len(starts) < rows.shape[0]:
            rows = rows[starts]
            re = np.add.reduceat(re, starts)
            im = np.add.reduceat(im, starts)
    keep = (re != 0) | (im != 0)
    if not keep.all():
        rows, re, im = rows[keep], re[keep], im[keep]
    return np.ascontiguousarray(rows), re, im


def apply(op: PhasedXOperator, state: SparseState) -> SparseState:
    """op |state>, exactly."""
    idx = state.index
    missing = [e for e in op.support() if e not in idx]
    if missing:
        raise KeyError(f"operator acts outside the patch: {sorted(missing)[:3]}")
    k = form_values(idx, state.configs, op.form)
    re, im = _rotate(state.re, state.im, k)
    configs = state.configs ^ idx.mask(op.xmask)[None, :] if op.xmask else state.configs
    return SparseState(idx, configs, re, im, state.m, canonical=not op.xmask)


def proportionality(a: SparseState, b: SparseState) -> int | None:
    """k with a = i^k b exactly, else None."""
    a._check_index(b)
    if len(a) != len(b) or (a.m - b.m) % 2:
        return None
    if len(a) == 0:
        return 0
    if not np.array_equal(a.configs, b.configs):
        return None
    m = max(a.m, b.m)
    a, b = a.rescaled(m), b.rescaled(m)
    for k in range(4):
        re, im = _rotate(b.re, b.im, k)
        if np.array_equal(re, a.re) and np.array_equal(im, a.im):
            return k
    return None


def expectation(state: SparseState, op: PhasedXOperator) -> GaussianRational:
    """<state|op|state> as an exact Gaussian rational."""
    return state.inner(apply(op, state))


# --------------------------------------------------------------------------
# loop soups and sign conventions


def count_loops(occupied: Iterable[EdgeId]) -> int:
    """Number of closed loops in an even-degree edge configuration."""
    g = nx.Graph()
    for e in occupied:
        g.add_edge(*edge_vertices(e))
    odd = [v for v, d in g.degree() if d % 2]
    if odd:
        raise ValueError(f"configuration has odd-degree vertices, e.g. {odd[0]}")
    return nx.number_connected_components(g)


def count_region_components(region: Region) -> int:
    return len(region.components())


@dataclass(frozen=True)
class Patch:
    """Working patch for the model on the standard region of size n.

    The state space lives on the plaquette edges together with the outer
    edges sticking out of the region.
    """

    n: int
    region: Region
    index: EdgeIndex
    hexes: tuple[HexCoord, ...]
    outer: frozenset[EdgeId]

    @classmethod
    def standard(cls, n: int) -> "Patch":
        return _standard_patch(n)

    @classmethod
    def of_region(cls, region: Region, n: int = 0) -> "Patch":
        return cls(n, region, EdgeIndex(region.closure_edges()), tuple(region), region.outer_edges())

    def hex_masks(self) -> list[np.ndarray]:
        return [self.index.mask(hex_edges(h)) for h in self.hexes]

    def describe(self) -> dict:
        return {
            "n": self.n,
            "hexagons": self.region.to_json(),
            "num_hexagons": len(self.region),
            "num_edges": len(self.index),
            "num_outer_edges": len(self.outer),
        }


@lru_cache(maxsize=None)
def _standard_patch(n: int) -> Patch:
    return Patch.of_region(standard_region(n), n)


def _guard(patch: Patch, max_hexes: int | None) -> None:
    limit = DEFAULT_MAX_HEXES if max_hexes is None else max_hexes
    if len(patch.hexes) > limit:
        raise SizeGuardError(f"{len(patch.hexes)} hexagons exceed the size guard of {limit}")


def _subset_configs(patch: Patch) -> np.ndarray:
    """Row s is the boundary of the plaquette subset with bitmask s."""
    configs = np.zeros((1, patch.index.nwords), dtype=np.uint64)
    for mask in patch.hex_masks():
        configs = np.concatenate([configs, configs ^ mask[None, :]])
    return configs


def _subset_components(patch: Patch) -> np.ndarray:
    """Component counts of every plaquette subset, by label propagation."""
    h = len(patch.hexes)
    pos = {p: k for k, p in enumerate(patch.hexes)}
    pairs = sorted({tuple(sorted((pos[p], pos[q]))) for p in patch.hexes for q in neighbors(p) if q in pos})
    subsets = np.arange(1 << h, dtype=np.int64)
    member = [((subsets >> k) & 1).astype(bool) for k in range(h)]
    dtype = np.int8 if h < 127 else np.int32
    label = [np.where(member[k], k, h).astype(dtype) for k in range(h)]
    both = {(a, b): member[a] & member[b] for a, b in pairs}
    changed = True
    while changed:
        changed = False
        for a, b in pairs:
            lo = np.minimum(label[a], label[b])
            m = both[(a, b)]
            if np.any(m & ((label[a] != lo) | (label[b] != lo))):
                changed = True
                label[a] = np.where(m, lo, label[a])
                label[b] = np.where(m, lo, label[b])
    roots = np.zeros(1 << h, dtype=np.int64)
    for k in range(h):
        roots += label[k] == k
    return roots


def _subset_euler(patch: Patch) -> np.ndarray:
    """Euler characteristic V - E + F of the union of each plaquette subset."""
    h = len(patch.hexes)
    pos = {p: k for k, p in enumerate(patch.hexes)}
    subsets = np.arange(1 << h, dtype=np.int64)
    member = [((subsets >> k) & 1).astype(bool) for k in range(h)]
    faces = np.zeros(1 << h, dtype=np.int64)
    for col in member:
        faces += col

    def touched(cells: dict) -> np.ndarray:
        tot = np.zeros(1 << h, dtype=np.int64)
        for owners in cells.values():
            acc = np.zeros(1 << h, dtype=bool)
            for p in owners:
                if p in pos:
                    acc |= member[pos[p]]
            tot += acc
        return tot

    vcells: dict = {}
    ecells: dict = {}
    for p in patch.hexes:
        for e in hex_edges(p):
            ecells.setdefault(e, set()).add(p)
        for v in hexagon_loop(p).vertices:
            vcells.setdefault(v, set()).add(p)
    return touched(vcells) - touched(ecells) + faces


def loop_counts_of_subsets(patch: Patch) -> np.ndarray:
    """Loop count of the boundary of each plaquette subset.

    Uses loops = 2 * components - Euler characteristic: every component
    contributes one outer loop and every hole one more.
    """
    return 2 * _subset_components(patch) - _subset_euler(patch)


def enumerate_closed_soups(n: int, max_hexes: int | None = None) -> list[tuple[Region, frozenset[EdgeId]]]:
    """All plaquette subsets of the standard region with their boundary soups."""
    patch = Patch.standard(n)
    _guard(patch, max_hexes)
    out = []
    for s in range(1 << len(patch.hexes)):
        sub = Region(p for k, p in enumerate(patch.hexes) if s >> k & 1)
        out.append((sub, sub.boundary_edges()))
    return out


def _signs(patch: Patch, convention: str) -> np.ndarray:
    if convention == "region_components":
        counts = _subset_components(patch)
    elif convention == "loop_count":
        counts = loop_counts_of_subsets(patch)
    else:
        raise ValueError(f"unknown sign convention {convention!r}")
    return np.where(counts % 2 == 0, 1, -1).astype(np.int64)


def build_ground_state(
    n: int,
    convention: str = "loop_count",
    max_hexes: int | None = None,
    patch: Patch | None = None,
) -> SparseState:
    """Uniform signed superposition of all closed soups of the patch."""
    patch = patch or Patch.standard(n)
    _guard(patch, max_hexes)
    configs = _subset_configs(patch)
    signs = _signs(patch, convention)
    return SparseState(patch.index, configs, signs, np.zeros_like(signs), len(patch.hexes))


# --------------------------------------------------------------------------
# Hamiltonian


@dataclass(frozen=True)
class ProjectorFactor:
    """The operator (1 + i^phase U) / 2 for a phased X involution U."""

    unitary: PhasedXOperator
    phase: int = 0

    def apply(self, state: SparseState) -> SparseState:
        return (state + apply(self.unitary, state).times_phase(self.phase)).half()


@dataclass(frozen=True)
class Term:
    """A Hamiltonian term: a product of commuting projector factors, optionally complemented."""

    kind: str
    label: str
    factors: tuple[ProjectorFactor, ...]
    complement: bool = False

    def apply(self, state: SparseState) -> SparseState:
        out = state
        for f in reversed(self.factors):
            out = f.apply(out)
        if self.complement:
            out = state - out
        return out

    def support(self) -> frozenset:
        s: set = set()
        for f in self.factors:
            s |= f.unitary.support()
        return frozenset(s)


@dataclass(frozen=True)
class Hamiltonian:
    patch: Patch
    terms: tuple[Term, ...]

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for t in self.terms:
            out[t.kind] = out.get(t.kind, 0) + 1
        return out

    def without(self, kind: str) -> "Hamiltonian":
        return Hamiltonian(self.patch, tuple(t for t in self.terms if t.kind != kind))


def vertex_projector(v) -> ProjectorFactor:
    """A_v = (1 + Z Z Z) / 2 over the three edges at v."""
    return ProjectorFactor(PhasedXOperator.z(*vertex_edges(v)))


def plaquette_term(p: HexCoord, r_side: str | None = None) -> Term:
    """B_p = (1 + W_S[p]) / 2 times the vertex projectors around p."""
    w = semion_string(hexagon_loop(p), r_side)
    factors = (ProjectorFactor(w),) + tuple(vertex_projector(v) for v in hexagon_loop(p).vertices)
    return Term("plaquette", f"B{tuple(p)}", factors)


def build_hamiltonian(n: int, r_side: str | None = None, patch: Patch | None = None) -> Hamiltonian:
    patch = patch or Patch.standard(n)
    terms: list[Term] = []
    for v in sorted(patch.region.vertices()):
        terms.append(Term("vertex", f"A{tuple(v)}", (vertex_projector(v),), complement=True))
    for p in patch.hexes:
        terms.append(plaquette_term(p, r_side))
    for e in sorted(patch.outer):
        # (1 - Z) / 2 = (1 + i^2 Z) / 2
        terms.append(Term("boundary", f"Z{tuple(e)}", (ProjectorFactor(PhasedXOperator.z(e), 2),)))
    return Hamiltonian(patch, tuple(terms))


@dataclass
class GroundStateReport:
    convention: str
    n: int
    passed: bool
    failures: list[str] = field(default_factory=list)
    checks: int = 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "convention": self.convention,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failures,
        }


def verify_ground_state(
    state: SparseState,
    ham: Hamiltonian,
    convention: str = "",
    r_side: str | None = None,
) -> GroundStateReport:
    """Check H|state> = 0 term by term and W_S[p]|state> = -|state> for every p."""
    failures = []
    checks = 0
    for t in ham.terms:
        checks += 1
        if not t.apply(state).is_zero():
            failures.append(t.label)
    for p in ham.patch.hexes:
        checks += 1
        w = semion_string(hexagon_loop(p), r_side)
        if proportionality(apply(w, state), state) != 2:
            failures.append(f"W_S{tuple(p)}")
    return GroundStateReport(convention, ham.patch.n, not failures, failures, checks)


def select_convention(n: int = 2, r_side: str | None = None) -> dict[str, bool]:
    """Run the eigencondition checks for both sign conventions."""
    ham = build_hamiltonian(n, r_side)
    return {
        c: verify_ground_state(build_ground_state(n, c), ham, c, r_side).passed
        for c in CONVENTIONS
    }


def resolve_convention(requested: str = "auto", n: int = 2) -> str:
    if requested != "auto":
        if requested not in CONVENTIONS:
            raise ValueError(f"unknown convention {requested!r}")
        return requested
    winners = [c for c, ok in select_convention(n).items() if ok]
    if len(winners) != 1:
        raise RuntimeError(f"convention selection is not unique: {winners}")
    return winners[0]


# --------------------------------------------------------------------------
# ground space dimension


def boundary_sector_representatives(patch: Patch) -> list[frozenset[EdgeId]]:
    """One even-degree soup per boundary condition on the outer edges.

    Marked outer edges are paired in cyclic order and joined along the
    counterclockwise boundary loop of the region.
    """
    from .purity import boundary_cycle, closing_soup  # local import, purity builds on this module

    cycle = boundary_cycle(patch.region)
    reps = []
    outer = [o for o, _ in cycle.outer_order]
    for k in range(0, len(outer) + 1, 2):
        for marked in itertools.combinations(outer, k):
            reps.append(closing_soup(cycle, frozenset(marked), 0))
    return reps


def ground_space_dimension(
    n: int,
    boundary_terms: bool = True,
    r_side: str | None = None,
    max_hexes: int | None = None,
) -> int:
    """Dimension of the joint kernel of all terms, by propagating the plaquette constraints.

    Each sector of even-degree soups is an orbit of the plaquette flips.  The
    candidate ``prod_p (1 - W_S[p])`` applied to a representative is the
    only solution of the constraints on that orbit; the sector contributes
    one dimension exactly when the candidate satisfies every constraint.
    """
    patch = Patch.standard(n)
    _guard(patch, max_hexes)
    idx = patch.index
    reps = [frozenset()] if boundary_terms else boundary_sector_representatives(patch)
    psi = SparseState(
        idx,
        np.array([idx.mask(r) for r in reps]),
        np.ones(len(reps), dtype=np.int64),
        np.zeros(len(reps), dtype=np.int64),
        0,
    )
    plaquettes = [semion_string(hexagon_loop(p), r_side) for p in patch.hexes]
    for w in plaquettes:
        psi = psi - apply(w, psi)
    outer = sorted(patch.outer)
    sector_of = _sector_keys(psi, outer)
    bad: set = set()
    for w in plaquettes:
        image = apply(w, psi)
        diff = image + psi
        if not diff.is_zero():
            bad |= set(_sector_keys(diff, outer).tolist())
    sectors = set(sector_of.tolist())
    return len(sectors - bad)


def _sector_keys(state: SparseState, outer: list[EdgeId]) -> np.ndarray:
    if not outer:
        return np.zeros(len(state), dtype=np.int64)
    bits = state.occupation_bits(outer).astype(np.int64)
    return bits @ (1 << np.arange(len(outer), dtype=np.int64))
