"""String and plaquette operators built from oriented paths."""

from __future__ import annotations

import enum
from typing import Iterable

from .lattice import HexCoord, OrientedPath, Region, classify_path, hex_edges
from .pauli_ops import DiagonalForm, PhasedXOperator


class AnyonLabel(str, enum.Enum):
    ONE = "1"
    S = "S"
    SBAR = "Sbar"
    B = "B"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "AnyonLabel":
        aliases = {"1": cls.ONE, "one": cls.ONE, "s": cls.S, "sbar": cls.SBAR, "s̄": cls.SBAR, "b": cls.B}
        try:
            return aliases[text.strip().lower()]
        except KeyError:
            raise ValueError(f"unknown anyon label {text!r}") from None


LABELS: tuple[AnyonLabel, ...] = (AnyonLabel.ONE, AnyonLabel.S, AnyonLabel.SBAR, AnyonLabel.B)


def plaquette_flip(p: HexCoord) -> PhasedXOperator:
    return PhasedXOperator(frozenset(hex_edges(p)))


def region_flip(region: Region) -> PhasedXOperator:
    return PhasedXOperator(region.boundary_edges())


# Whether the R-leg and L-vertex phases of an open or closed semion string are
# read on the configuration before ("diag_first") or after ("flip_first") the
# X flips along the path.  Both satisfy the ground-state eigencondition; only
# "flip_first" reproduces the measured self-statistics eps(S, S) = i.
APPLICATION_ORDER = "flip_first"
ORDERS = ("flip_first", "diag_first")


def _string(path: OrientedPath, r_leg_coeff: int, r_side: str | None, order: str | None = None) -> PhasedXOperator:
    order = order or APPLICATION_ORDER
    if order not in ORDERS:
        raise ValueError(f"order must be one of {ORDERS}")
    cls = classify_path(path, r_side)
    lin = [(j, r_leg_coeff) for j in cls.r_legs]
    quad = []
    for lv in cls.l_vertices:
        # (-1)^{b_j (1 - b_k)} = i^{2 b_j + 2 b_j b_k}
        lin.append((lv.in_edge, 2))
        quad.append((lv.in_edge, lv.out_edge))
    flips = frozenset(path.edges)
    form = DiagonalForm.build(0, lin, quad)
    if order == "flip_first":
        form = form.flipped(flips)
    return PhasedXOperator(flips, form)


def semion_string(path: OrientedPath, r_side: str | None = None, order: str | None = None) -> PhasedXOperator:
    """X along the path, i^{b_j} on each R-leg, (-1)^{b_j(1-b_k)} at each L-vertex."""
    return _string(path, 1, r_side, order)


def antisemion_string(path: OrientedPath, r_side: str | None = None, order: str | None = None) -> PhasedXOperator:
    """As the semion string but with (-i)^{b_j} on the R-legs."""
    return _string(path, 3, r_side, order)


def bound_string(path: OrientedPath, r_side: str | None = None) -> PhasedXOperator:
    """Z on every R-leg."""
    cls = classify_path(path, r_side)
    return PhasedXOperator.z(*cls.r_legs)


def omega_ss_string(path: OrientedPath, r_side: str | None = None) -> PhasedXOperator:
    """Z on the R-legs and on both path edges at every L-vertex."""
    cls = classify_path(path, r_side)
    sites: list = list(cls.r_legs)
    for lv in cls.l_vertices:
        sites += [lv.in_edge, lv.out_edge]
    return PhasedXOperator(frozenset(), DiagonalForm.build(0, [(s, 2) for s in sites]))


def v_string(path: OrientedPath, r_side: str | None = None) -> PhasedXOperator:
    """omega_ss_string times Z on the initial and final edges of an open path."""
    if path.closed:
        raise ValueError("v_string needs an open path")
    ends = PhasedXOperator.z(path.initial_edge, path.final_edge)
    base = omega_ss_string(path, r_side)
    return PhasedXOperator(frozenset(), base.form + ends.form)


def string_operator(
    label: AnyonLabel | str, path: OrientedPath, r_side: str | None = None, order: str | None = None
) -> PhasedXOperator:
    label = AnyonLabel(label) if not isinstance(label, AnyonLabel) else label
    if label is AnyonLabel.ONE:
        return PhasedXOperator.identity()
    if label is AnyonLabel.S:
        return semion_string(path, r_side, order)
    if label is AnyonLabel.SBAR:
        return antisemion_string(path, r_side, order)
    return bound_string(path, r_side)


def z_on(edges: Iterable) -> PhasedXOperator:
    return PhasedXOperator.z(*edges)
