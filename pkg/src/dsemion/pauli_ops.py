"""Exact algebra of phased X operators.

A :class:`PhasedXOperator` acts on computational basis states as

    O |b> = i^{f(b)} |b xor xmask>

where ``f`` is a :class:`DiagonalForm`, a polynomial of degree at most two
in the bits with values in Z_4.  Bit ``b_j = 1`` means edge ``j`` is
occupied (sigma^Z_j = -1).  The diagonal is evaluated on the *input*
configuration.  Quadratic coefficients live in Z_2 and carry weight 2, so
the class is closed under products, adjoints and bit flips.

Sites can be any hashable, orderable keys (lattice edges in practice).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

import numpy as np

Site = Hashable


def _pair(j, k) -> tuple:
    return (j, k) if j < k else (k, j)


@dataclass(frozen=True)
class DiagonalForm:
    """f(b) = const + sum_j lin[j] b_j + 2 sum_{j<k} quad[jk] b_j b_k  (mod 4)."""

    const: int = 0
    lin: tuple[tuple[Site, int], ...] = ()
    quad: frozenset[tuple[Site, Site]] = frozenset()

    @classmethod
    def build(
        cls,
        const: int = 0,
        lin: Mapping[Site, int] | Iterable[tuple[Site, int]] = (),
        quad: Iterable[tuple[Site, Site]] = (),
    ) -> "DiagonalForm":
        acc: dict[Site, int] = {}
        items = lin.items() if isinstance(lin, Mapping) else lin
        for j, c in items:
            acc[j] = (acc.get(j, 0) + c) % 4
        q: set[tuple[Site, Site]] = set()
        for j, k in quad:
            if j == k:
                # b_j b_j = b_j
                acc[j] = (acc.get(j, 0) + 2) % 4
            else:
                q ^= {_pair(j, k)}
        return cls(
            const % 4,
            tuple(sorted((j, c) for j, c in acc.items() if c)),
            frozenset(q),
        )

    @property
    def lin_map(self) -> dict[Site, int]:
        return dict(self.lin)

    def support(self) -> frozenset:
        s = {j for j, _ in self.lin}
        for j, k in self.quad:
            s.add(j)
            s.add(k)
        return frozenset(s)

    def __call__(self, bits: Mapping[Site, int] | Iterable[Site]) -> int:
        """Evaluate on a configuration given as a bit map or a set of occupied sites."""
        if isinstance(bits, Mapping):
            occ = {j for j, b in bits.items() if b}
        else:
            occ = set(bits)
        val = self.const
        for j, c in self.lin:
            if j in occ:
                val += c
        for j, k in self.quad:
            if j in occ and k in occ:
                val += 2
        return val % 4

    def __add__(self, other: "DiagonalForm") -> "DiagonalForm":
        return DiagonalForm.build(
            self.const + other.const,
            list(self.lin) + list(other.lin),
            list(self.quad) + list(other.quad),
        )

    def __neg__(self) -> "DiagonalForm":
        # -2 b_j b_k = 2 b_j b_k mod 4, so the quadratic part is unchanged
        return DiagonalForm.build(-self.const, [(j, -c) for j, c in self.lin], self.quad)

    def shift(self, k: int) -> "DiagonalForm":
        return DiagonalForm(
            (self.const + k) % 4, self.lin, self.quad
        )

    def flipped(self, mask: Iterable[Site]) -> "DiagonalForm":
        """The form g(b) = f(b xor mask)."""
        mask = frozenset(mask)
        const = self.const
        lin: list[tuple[Site, int]] = []
        for j, c in self.lin:
            if j in mask:
                const += c
                lin.append((j, -c))
            else:
                lin.append((j, c))
        for j, k in self.quad:
            fj, fk = j in mask, k in mask
            if fj and fk:
                const += 2
                lin += [(j, 2), (k, 2)]
            elif fj:
                lin.append((k, 2))
            elif fk:
                lin.append((j, 2))
        return DiagonalForm.build(const, lin, self.quad)

    def restricted(self, keep: Iterable[Site]) -> "DiagonalForm":
        """Drop every term touching a site outside ``keep`` (those bits set to 0)."""
        keep = frozenset(keep)
        return DiagonalForm(
            self.const,
            tuple((j, c) for j, c in self.lin if j in keep),
            frozenset(p for p in self.quad if p[0] in keep and p[1] in keep),
        )

    def to_json(self) -> dict:
        return {
            "const": self.const,
            "linear": [[_site_json(j), c] for j, c in self.lin],
            "quadratic": sorted([_site_json(j), _site_json(k)] for j, k in self.quad),
        }


def _site_json(j):
    return list(j) if isinstance(j, tuple) else j


@dataclass(frozen=True)
class PhasedXOperator:
    xmask: frozenset = frozenset()
    form: DiagonalForm = DiagonalForm()

    def __post_init__(self):
        object.__setattr__(self, "xmask", frozenset(self.xmask))

    # constructors ---------------------------------------------------------
    @classmethod
    def identity(cls) -> "PhasedXOperator":
        return cls()

    @classmethod
    def x(cls, *sites: Site) -> "PhasedXOperator":
        return cls(frozenset(sites))

    @classmethod
    def z(cls, *sites: Site) -> "PhasedXOperator":
        return cls(frozenset(), DiagonalForm.build(0, [(s, 2) for s in sites]))

    @classmethod
    def scalar(cls, k: int) -> "PhasedXOperator":
        return cls(frozenset(), DiagonalForm(k % 4))

    # algebra -------------------------------------------------------------
    def __matmul__(self, other: "PhasedXOperator") -> "PhasedXOperator":
        return compose(self, other)

    def times_phase(self, k: int) -> "PhasedXOperator":
        """Multiply by i^k."""
        return PhasedXOperator(self.xmask, self.form.shift(k))

    @property
    def is_diagonal(self) -> bool:
        return not self.xmask

    def support(self) -> frozenset:
        return self.xmask | self.form.support()

    def phase_on(self, occupied: Iterable[Site]) -> int:
        return self.form(occupied)

    def act(self, occupied: Iterable[Site]) -> tuple[int, frozenset]:
        """Image of one basis state: (phase exponent, occupied set)."""
        occ = frozenset(occupied)
        return self.form(occ), occ ^ self.xmask

    def restricted(self, keep: Iterable[Site]) -> "PhasedXOperator":
        keep = frozenset(keep)
        return PhasedXOperator(self.xmask & keep, self.form.restricted(keep))

    def to_json(self) -> dict:
        return {"xmask": sorted(_site_json(j) for j in self.xmask), "form": self.form.to_json()}


def compose(a: PhasedXOperator, b: PhasedXOperator) -> PhasedXOperator:
    """The operator product a . b (b acts first)."""
    return PhasedXOperator(a.xmask ^ b.xmask, b.form + a.form.flipped(b.xmask))


def adjoint(a: PhasedXOperator) -> PhasedXOperator:
    return PhasedXOperator(a.xmask, -a.form.flipped(a.xmask))


def conjugate(a: PhasedXOperator, u: PhasedXOperator) -> PhasedXOperator:
    """u . a . u^dagger."""
    return compose(compose(u, a), adjoint(u))


def product(*ops: PhasedXOperator) -> PhasedXOperator:
    """Left-to-right operator product ops[0] . ops[1] . ..."""
    out = PhasedXOperator.identity()
    for op in ops:
        out = compose(out, op)
    return out


def commutator_phase(a: PhasedXOperator, b: PhasedXOperator) -> int | None:
    """k with a b = i^k b a, if the group commutator is a scalar."""
    return proportionality(compose(a, b), compose(b, a))


def proportionality(a: PhasedXOperator, b: PhasedXOperator) -> int | None:
    """Return k with a = i^k b, or None when no such k exists."""
    if a.xmask != b.xmask:
        return None
    diff = a.form + (-b.form)
    if diff.lin or diff.quad:
        return None
    return diff.const


def proportional_away_from(
    a: PhasedXOperator, b: PhasedXOperator, excluded: Iterable[Site]
) -> int | None:
    """Phase k with a = i^k b up to a factor supported on ``excluded``.

    The quotient ``a b^dagger`` must be a scalar times an operator that only
    touches excluded sites; the scalar's exponent is returned.
    """
    excluded = frozenset(excluded)
    q = compose(a, adjoint(b))
    if not q.xmask <= excluded or not q.form.support() <= excluded:
        return None
    return q.form.const


def to_dense(op: PhasedXOperator, sites: list) -> np.ndarray:
    """Dense matrix in the basis ordered by integer bit patterns over ``sites``.

    Site ``sites[k]`` is bit k of the basis index.
    """
    n = len(sites)
    dim = 1 << n
    pos = {s: k for k, s in enumerate(sites)}
    xm = 0
    for s in op.xmask:
        xm |= 1 << pos[s]
    mat = np.zeros((dim, dim), dtype=complex)
    phases = (1, 1j, -1, -1j)
    for idx in range(dim):
        occ = [s for s in sites if idx >> pos[s] & 1]
        mat[idx ^ xm, idx] = phases[op.form(occ)]
    return mat
