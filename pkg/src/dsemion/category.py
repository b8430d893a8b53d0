"""Skeletal braided fusion categories with abelian fusion rules.

Every simple object is invertible and one-dimensional, so associators and
braidings are plain phases.  Phases are stored as exponents k of
exp(2 pi i k / modulus); the default modulus 4 covers every value met here.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Callable, Iterable, Mapping, Sequence

Label = str


@dataclass(frozen=True)
class AnyonData:
    labels: tuple[Label, ...]
    fusion: Mapping[tuple[Label, Label], Label]
    F: Mapping[tuple[Label, Label, Label], int]
    R: Mapping[tuple[Label, Label], int]
    modulus: int = 4

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "fusion", dict(self.fusion))
        object.__setattr__(self, "F", {k: v % self.modulus for k, v in self.F.items()})
        object.__setattr__(self, "R", {k: v % self.modulus for k, v in self.R.items()})
        problems = group_problems(self.labels, self.fusion)
        if problems:
            raise ValueError("fusion rules are not an abelian group: " + "; ".join(problems[:3]))
        for t in product(self.labels, repeat=3):
            if t not in self.F:
                raise ValueError(f"missing F{t}")
        for t in product(self.labels, repeat=2):
            if t not in self.R:
                raise ValueError(f"missing R{t}")

    @property
    def unit(self) -> Label:
        return _unit(self.labels, self.fusion)

    def mul(self, a: Label, b: Label) -> Label:
        return self.fusion[(a, b)]

    def relabel(self, mapping: Mapping[Label, Label]) -> "AnyonData":
        """Rename objects: a becomes mapping[a]."""
        m = dict(mapping)
        return AnyonData(
            tuple(m[a] for a in self.labels),
            {(m[a], m[b]): m[c] for (a, b), c in self.fusion.items()},
            {tuple(m[x] for x in k): v for k, v in self.F.items()},
            {tuple(m[x] for x in k): v for k, v in self.R.items()},
            self.modulus,
        )

    def same_as(self, other: "AnyonData") -> bool:
        return (
            set(self.labels) == set(other.labels)
            and self.modulus == other.modulus
            and self.fusion == other.fusion
            and self.F == other.F
            and self.R == other.R
        )

    def to_json(self) -> dict:
        labs = list(self.labels)
        return {
            "labels": labs,
            "modulus": self.modulus,
            "fusion": [[self.fusion[(a, b)] for b in labs] for a in labs],
            "F": [[[self.F[(a, b, c)] for c in labs] for b in labs] for a in labs],
            "R": [[self.R[(a, b)] for b in labs] for a in labs],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "AnyonData":
        labs = [str(x) for x in data["labels"]]
        n = len(labs)
        fusion, F, R = {}, {}, {}
        for i, j in product(range(n), repeat=2):
            fusion[(labs[i], labs[j])] = str(data["fusion"][i][j])
            R[(labs[i], labs[j])] = int(data["R"][i][j])
            for k in range(n):
                F[(labs[i], labs[j], labs[k])] = int(data["F"][i][j][k])
        return cls(tuple(labs), fusion, F, R, int(data.get("modulus", 4)))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _unit(labels, fusion) -> Label:
    for e in labels:
        if all(fusion[(e, a)] == a and fusion[(a, e)] == a for a in labels):
            return e
    raise ValueError("no unit object")


def group_problems(labels: Sequence[Label], fusion: Mapping) -> list[str]:
    """Reasons the table fails to be an abelian group (empty if it is one)."""
    out = []
    labs = set(labels)
    for a, b in product(labels, repeat=2):
        c = fusion.get((a, b))
        if c not in labs:
            out.append(f"{a}x{b} undefined")
    if out:
        return out
    for a, b in product(labels, repeat=2):
        if fusion[(a, b)] != fusion[(b, a)]:
            out.append(f"{a}x{b} != {b}x{a}")
    for a, b, c in product(labels, repeat=3):
        if fusion[(fusion[(a, b)], c)] != fusion[(a, fusion[(b, c)])]:
            out.append(f"({a}{b}){c} != {a}({b}{c})")
    try:
        e = _unit(labels, fusion)
    except ValueError:
        return out + ["no unit"]
    for a in labels:
        if not any(fusion[(a, b)] == e for b in labels):
            out.append(f"{a} has no inverse")
    return out


def inverse(d: AnyonData, a: Label) -> Label:
    return next(b for b in d.labels if d.mul(a, b) == d.unit)


# --------------------------------------------------------------------------
# coherence


@dataclass
class CheckReport:
    name: str
    checked: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"name": self.name, "checked": self.checked, "passed": self.passed, "failures": [list(f) for f in self.failures]}


def pentagon_defect(d: AnyonData, a, b, c, e) -> int:
    """Exponent of F(a,b,c) F(a,bc,e) F(b,c,e) / (F(ab,c,e) F(a,b,ce))."""
    m = d.mul
    F = d.F
    return (F[(a, b, c)] + F[(a, m(b, c), e)] + F[(b, c, e)] - F[(m(a, b), c, e)] - F[(a, b, m(c, e))]) % d.modulus


def check_pentagon(d: AnyonData) -> CheckReport:
    rep = CheckReport("pentagon", 0)
    for t in product(d.labels, repeat=4):
        rep.checked += 1
        if pentagon_defect(d, *t):
            rep.failures.append(t)
    return rep


def check_triangle(d: AnyonData) -> CheckReport:
    rep = CheckReport("triangle", 0)
    for a, c in product(d.labels, repeat=2):
        rep.checked += 1
        if d.F[(a, d.unit, c)]:
            rep.failures.append((a, c))
    return rep


def hexagon_defects(d: AnyonData, a, b, c) -> tuple[int, int]:
    """Exponent mismatches of the two hexagon equations at (a, b, c)."""
    m, F, R, N = d.mul, d.F, d.R, d.modulus
    first = (F[(a, b, c)] + F[(c, a, b)] - F[(a, c, b)]) - (R[(a, c)] + R[(b, c)] - R[(m(a, b), c)])
    second = (F[(a, b, c)] + F[(b, c, a)] - F[(b, a, c)]) - (R[(a, m(b, c))] - R[(a, b)] - R[(a, c)])
    return first % N, second % N


def check_hexagons(d: AnyonData) -> tuple[CheckReport, CheckReport]:
    first, second = CheckReport("hexagon 1", 0), CheckReport("hexagon 2", 0)
    for t in product(d.labels, repeat=3):
        h1, h2 = hexagon_defects(d, *t)
        first.checked += 1
        second.checked += 1
        if h1:
            first.failures.append(t)
        if h2:
            second.failures.append(t)
    return first, second


def symbol_yang_baxter(d: AnyonData, a, b, c) -> int:
    """Exponent k with R(a,c) R(b,c) = i^k R(ab,c) F(a,b,c) F(c,a,b) / F(a,c,b).

    This is the first hexagon solved for the braiding of a fused pair; it is
    zero exactly when that hexagon holds.
    """
    m, F, R = d.mul, d.F, d.R
    return (R[(a, c)] + R[(b, c)] - R[(m(a, b), c)] - F[(a, b, c)] - F[(c, a, b)] + F[(a, c, b)]) % d.modulus


# --------------------------------------------------------------------------
# gauge action

Gauge = Mapping[tuple[Label, Label], int]


def coboundary(d: AnyonData, chi: Gauge, a, b, c) -> int:
    """(d chi)(a, b, c) = chi(b,c) chi(a,bc) / (chi(ab,c) chi(a,b)), as an exponent."""
    m = d.mul
    return (chi[(b, c)] + chi[(a, m(b, c))] - chi[(m(a, b), c)] - chi[(a, b)]) % d.modulus


def apply_gauge(d: AnyonData, chi: Gauge) -> AnyonData:
    """Symbols after rephasing every fusion intertwiner Omega(a, b) by chi(a, b).

    Substituting chi(a, b) Omega(a, b) into the defining relations gives
    F' = F / (d chi) and R'(a, b) = chi(b, a) / chi(a, b) R(a, b).
    """
    F = {t: d.F[t] - coboundary(d, chi, *t) for t in product(d.labels, repeat=3)}
    R = {(a, b): d.R[(a, b)] + chi[(b, a)] - chi[(a, b)] for a, b in product(d.labels, repeat=2)}
    return AnyonData(d.labels, d.fusion, F, R, d.modulus)


def trivial_gauge(labels: Iterable[Label]) -> dict:
    labels = list(labels)
    return {(a, b): 0 for a in labels for b in labels}


def random_gauge(labels: Sequence[Label], rng: random.Random, modulus: int = 4, unit: Label | None = None) -> dict:
    """Uniform random chi; with ``unit`` given, chi(1, a) = chi(a, 1) = 0."""
    chi = {(a, b): rng.randrange(modulus) for a in labels for b in labels}
    if unit is not None:
        for a in labels:
            chi[(unit, a)] = chi[(a, unit)] = 0
    return chi


def gauge_invariants(d: AnyonData) -> dict:
    return {
        "self_statistics": {a: d.R[(a, a)] for a in d.labels},
        "double_braiding": {(a, b): (d.R[(a, b)] + d.R[(b, a)]) % d.modulus for a, b in product(d.labels, repeat=2)},
    }


def solve_gauge(d1: AnyonData, d2: AnyonData) -> dict | None:
    """A chi with apply_gauge(d1, chi) == d2 (same labels), or None.

    Backtracking over chi values: the R constraints fix chi(b, a) once
    chi(a, b) is chosen, and every F constraint is tested as soon as its
    four chi values are known.
    """
    if set(d1.labels) != set(d2.labels) or d1.fusion != d2.fusion or d1.modulus != d2.modulus:
        return None
    N, labs, m = d1.modulus, list(d1.labels), d1.mul
    # diagonal first, then the upper triangle; lower entries follow from R
    order = [(a, a) for a in labs] + [(a, b) for i, a in enumerate(labs) for b in labs[i + 1:]]
    slot = {p: k for k, p in enumerate(order)}

    def owner(p):
        a, b = p
        return slot[p] if p in slot else slot[(b, a)]

    # diagonal R values must already agree
    if any(d1.R[(a, a)] != d2.R[(a, a)] for a in labs):
        return None
    cons_at: dict[int, list] = {}
    for t in product(labs, repeat=3):
        a, b, c = t
        need = [(b, c), (a, m(b, c)), (m(a, b), c), (a, b)]
        last = max(owner(p) for p in need)
        cons_at.setdefault(last, []).append(t)
    chi: dict = {}

    def assign(p, v):
        a, b = p
        chi[p] = v % N
        if a != b:
            chi[(b, a)] = (v + d2.R[(a, b)] - d1.R[(a, b)]) % N

    def ok(k):
        for t in cons_at.get(k, ()):
            if (d1.F[t] - coboundary(d1, chi, *t) - d2.F[t]) % N:
                return False
        return True

    def go(k):
        if k == len(order):
            return True
        for v in range(N):
            assign(order[k], v)
            if ok(k) and go(k + 1):
                return True
        return False

    return dict(chi) if go(0) else None


def group_isomorphisms(d1: AnyonData, d2: AnyonData) -> list[dict]:
    """Bijections labels(d1) -> labels(d2) that respect fusion."""
    out = []
    if len(d1.labels) != len(d2.labels):
        return out
    for image in permutations(d2.labels):
        f = dict(zip(d1.labels, image))
        if all(f[d1.mul(a, b)] == d2.mul(f[a], f[b]) for a, b in product(d1.labels, repeat=2)):
            out.append(f)
    return out


def gauge_equivalent(d1: AnyonData, d2: AnyonData, bijection: Mapping[Label, Label] | None = None) -> dict | None:
    """chi with apply_gauge(d1 relabelled along the bijection, chi) == d2."""
    if bijection is None:
        for f in group_isomorphisms(d1, d2):
            chi = gauge_equivalent(d1, d2, f)
            if chi is not None:
                return chi
        return None
    f = dict(bijection)
    if sorted(f) != sorted(d1.labels) or sorted(f.values()) != sorted(d2.labels):
        raise ValueError("bijection must map the labels of d1 onto those of d2")
    moved = d1.relabel(f)
    if moved.fusion != d2.fusion:
        return None
    return solve_gauge(moved, d2)


def all_equivalences(d1: AnyonData, d2: AnyonData) -> list[tuple[dict, dict]]:
    out = []
    for f in group_isomorphisms(d1, d2):
        chi = gauge_equivalent(d1, d2, f)
        if chi is not None:
            out.append((f, chi))
    return out


# --------------------------------------------------------------------------
# cohomology and duality


def subgroups_of_order_two(d: AnyonData) -> list[tuple[Label, Label]]:
    e = d.unit
    return [(e, a) for a in d.labels if a != e and d.mul(a, a) == e]


def restrict(d: AnyonData, sub: Sequence[Label]) -> AnyonData:
    sub = tuple(sub)
    return AnyonData(
        sub,
        {(a, b): d.mul(a, b) for a in sub for b in sub},
        {t: d.F[t] for t in product(sub, repeat=3)},
        {t: d.R[t] for t in product(sub, repeat=2)},
        d.modulus,
    )


def coboundary_witness(d: AnyonData) -> dict | None:
    """Some chi with d chi = F (exhaustive over Z_modulus phases), else None.

    The search has modulus^(|I|^2) candidates, so it is meant for the
    order-two subgroups.
    """
    labs = list(d.labels)
    pairs = [(a, b) for a in labs for b in labs]
    for values in product(range(d.modulus), repeat=len(pairs)):
        chi = dict(zip(pairs, values))
        if all((coboundary(d, chi, *t) - d.F[t]) % d.modulus == 0 for t in product(labs, repeat=3)):
            return chi
    return None


def cohomology_report(d: AnyonData) -> dict:
    """For each order-two subgroup, whether F restricted to it is a coboundary."""
    out = {}
    for sub in subgroups_of_order_two(d):
        out[sub[1]] = coboundary_witness(restrict(d, sub)) is not None
    return out


def check_zigzag(d: AnyonData, ev: Mapping[Label, int], coev: Mapping[Label, int]) -> CheckReport:
    """Both snake identities for self-dual invertible objects.

    (1 x ev) alpha (coev x 1) = 1 and (ev x 1) alpha^-1 (1 x coev) = 1 reduce
    to ev(a) coev(a) F(a, a*, a) = 1 and ev(a) coev(a) / F(a*, a, a*) = 1.
    """
    rep = CheckReport("zig-zag", 0)
    N = d.modulus
    for a in d.labels:
        b = inverse(d, a)
        if b != a:
            raise ValueError("zig-zag check is implemented for self-dual objects only")
        rep.checked += 2
        if (ev[a] + coev[a] + d.F[(a, b, a)]) % N:
            rep.failures.append((a, "left"))
        if (ev[a] + coev[a] - d.F[(b, a, b)]) % N:
            rep.failures.append((a, "right"))
    return rep


# --------------------------------------------------------------------------
# reference data


DS_LABELS = ("1", "S", "Sbar", "B")
_DS_BITS = {"1": (0, 0), "S": (1, 0), "Sbar": (0, 1), "B": (1, 1)}


def _z2z2_fusion(bits: Mapping[Label, tuple[int, int]]) -> dict:
    back = {v: k for k, v in bits.items()}
    return {(a, b): back[(x[0] ^ y[0], x[1] ^ y[1])] for a, x in bits.items() for b, y in bits.items()}


def double_semion_reference() -> AnyonData:
    """The tabulated double semion symbols: F = -1 on semionic triples, R as listed."""
    semionic = {"S", "Sbar"}
    F = {t: 2 if set(t) <= semionic else 0 for t in product(DS_LABELS, repeat=3)}
    row = {"1": 0, "S": 1, "Sbar": 3, "B": 2}
    R = {(a, b): row[b] if a in semionic else 0 for a, b in product(DS_LABELS, repeat=2)}
    return AnyonData(DS_LABELS, _z2z2_fusion(_DS_BITS), F, R)


DS_EVALUATION = {"1": 0, "S": 2, "Sbar": 2, "B": 0}
DS_COEVALUATION = {"1": 0, "S": 0, "Sbar": 0, "B": 0}


def toric_code_data() -> AnyonData:
    """Z2 x Z2 with trivial F and R(a, b) = (-1)^{m(a) e(b)}."""
    bits = {"1": (0, 0), "e": (1, 0), "m": (0, 1), "f": (1, 1)}
    F = {t: 0 for t in product(bits, repeat=3)}
    R = {(a, b): 2 * (bits[a][1] * bits[b][0]) for a, b in product(bits, repeat=2)}
    return AnyonData(tuple(bits), _z2z2_fusion(bits), F, R)


def trivial_data(labels: Sequence[Label] = DS_LABELS) -> AnyonData:
    bits = dict(zip(labels, [(0, 0), (1, 0), (0, 1), (1, 1)]))
    return AnyonData(
        tuple(labels),
        _z2z2_fusion(bits),
        {t: 0 for t in product(labels, repeat=3)},
        {t: 0 for t in product(labels, repeat=2)},
    )


def with_value(d: AnyonData, table: str, key: tuple, value: int) -> AnyonData:
    """Copy of d with one F or R entry replaced."""
    F, R = dict(d.F), dict(d.R)
    {"F": F, "R": R}[table][key] = value
    return AnyonData(d.labels, d.fusion, F, R, d.modulus)


@dataclass
class CategoryReport:
    pentagon: CheckReport
    triangle: CheckReport
    hexagons: tuple[CheckReport, CheckReport]
    invariants: dict
    cohomology: dict

    @property
    def passed(self) -> bool:
        return self.pentagon.passed and self.triangle.passed and all(h.passed for h in self.hexagons)

    def to_json(self) -> dict:
        inv = self.invariants
        return {
            "passed": self.passed,
            "pentagon": self.pentagon.to_json(),
            "triangle": self.triangle.to_json(),
            "hexagons": [h.to_json() for h in self.hexagons],
            "self_statistics": inv["self_statistics"],
            "double_braiding": {f"{a},{b}": v for (a, b), v in inv["double_braiding"].items()},
            "order_two_subgroup_F_is_coboundary": self.cohomology,
        }


def check_all(d: AnyonData) -> CategoryReport:
    return CategoryReport(check_pentagon(d), check_triangle(d), check_hexagons(d), gauge_invariants(d), cohomology_report(d))


def from_tables(labels, fusion: Callable, F: Mapping, R: Mapping) -> AnyonData:
    labels = [str(a) for a in labels]
    return AnyonData(
        tuple(labels),
        {(a, b): str(fusion(a, b)) for a in labels for b in labels},
        {tuple(str(x) for x in k): v for k, v in F.items()},
        {tuple(str(x) for x in k): v for k, v in R.items()},
    )
