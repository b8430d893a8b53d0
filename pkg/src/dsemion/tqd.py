"""The twisted quantum double of a cyclic group, exactly.

Group elements of Z_N are residues 0..N-1 written additively; for N = 2 the
element 1 is the generator written "-" in multiplicative notation.  Phases are
exponents modulo ``4`` when N = 2 (fourth roots of unity suffice) and modulo
``N**2`` in general; cocycle values are stored in the same units.

Algebra elements are dicts from basis labels (x, f), standing for P_x f, to
exact Gaussian rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Callable, Mapping

from .category import AnyonData, all_equivalences, gauge_equivalent
from .groundstate import GaussianRational

Element = dict  # (x, f) -> GaussianRational
Tensor = dict  # ((x, f), (y, g)) -> GaussianRational


@dataclass(frozen=True)
class CyclicGroup:
    order: int = 2

    @property
    def elements(self) -> tuple[int, ...]:
        return tuple(range(self.order))

    def mul(self, a: int, b: int) -> int:
        return (a + b) % self.order

    def inv(self, a: int) -> int:
        return (-a) % self.order

    @property
    def unit(self) -> int:
        return 0


@dataclass(frozen=True)
class Cocycle3:
    """A normalized 3-cochain with values exp(2 pi i k / modulus)."""

    group: CyclicGroup
    values: Mapping[tuple[int, int, int], int]
    modulus: int

    def __call__(self, a: int, b: int, c: int) -> int:
        return self.values[(a, b, c)] % self.modulus

    def is_normalized(self) -> bool:
        e = self.group.unit
        return all(self(a, b, c) == 0 for a, b, c in self._triples() if e in (a, b, c))

    def cocycle_defect(self, a, b, c, d) -> int:
        """Exponent of (d phi)(a, b, c, d)."""
        m = self.group.mul
        return (self(b, c, d) - self(m(a, b), c, d) + self(a, m(b, c), d) - self(a, b, m(c, d)) + self(a, b, c)) % self.modulus

    def is_cocycle(self) -> bool:
        g = self.group.elements
        return all(self.cocycle_defect(*t) == 0 for t in product(g, repeat=4))

    def _triples(self):
        return product(self.group.elements, repeat=3)


def z2_nontrivial_cocycle() -> Cocycle3:
    """phi(-, -, -) = -1 and 1 elsewhere."""
    return Cocycle3(CyclicGroup(2), {t: (2 if t == (1, 1, 1) else 0) for t in product((0, 1), repeat=3)}, 4)


def trivial_cocycle(order: int = 2) -> Cocycle3:
    g = CyclicGroup(order)
    return Cocycle3(g, {t: 0 for t in product(g.elements, repeat=3)}, 4 if order == 2 else order * order)


def cyclic_cocycle(order: int, p: int) -> Cocycle3:
    """The standard representative exp(2 pi i p a (b + c - [b + c]) / N^2) of H^3(Z_N, U(1))."""
    g = CyclicGroup(order)
    vals = {}
    for a, b, c in product(g.elements, repeat=3):
        carry = b + c - (b + c) % order
        vals[(a, b, c)] = p * a * carry
    modulus = order * order
    return Cocycle3(g, vals, modulus)


# --------------------------------------------------------------------------
# slant products


def slant(phi: Cocycle3, f: int) -> Callable[[int, int], int]:
    """c_f(g, h) = phi(f, g, h) phi(g, h, f) / phi(g, f, h), as an exponent."""

    def c(g: int, h: int) -> int:
        return (phi(f, g, h) + phi(g, h, f) - phi(g, f, h)) % phi.modulus

    return c


def two_cocycle_defect(c: Callable[[int, int], int], group: CyclicGroup, modulus: int, f, g, h) -> int:
    """Exponent of c(f, g) c(fg, h) / (c(f, gh) c(g, h))."""
    m = group.mul
    return (c(f, g) + c(m(f, g), h) - c(f, m(g, h)) - c(g, h)) % modulus


def slant_is_two_cocycle(phi: Cocycle3) -> bool:
    G = phi.group
    return all(
        two_cocycle_defect(slant(phi, x), G, phi.modulus, f, g, h) == 0
        for x in G.elements
        for f, g, h in product(G.elements, repeat=3)
    )


def compatibility_defect(phi: Cocycle3, x, y, f, g) -> int:
    """Exponent of c_x(f,g) c_y(f,g) / c_xy(f,g) * c_f(x,y) c_g(x,y) / c_fg(x,y)."""
    m = phi.group.mul
    c = lambda k: slant(phi, k)  # noqa: E731
    return (
        c(x)(f, g) + c(y)(f, g) - c(m(x, y))(f, g) + c(f)(x, y) + c(g)(x, y) - c(m(f, g))(x, y)
    ) % phi.modulus


# --------------------------------------------------------------------------
# the algebra


def _phase(k: int, modulus: int) -> GaussianRational:
    if 4 % modulus == 0 or modulus == 4:
        k = k * (4 // modulus) % 4
        return [GaussianRational(Fraction(1)), GaussianRational(Fraction(0), Fraction(1)),
                GaussianRational(Fraction(-1)), GaussianRational(Fraction(0), Fraction(-1))][k]
    raise ValueError("exact phases are only available for moduli dividing 4")


ZERO = GaussianRational(Fraction(0))
ONE = GaussianRational(Fraction(1))


def _add(acc: dict, key, val: GaussianRational) -> None:
    cur = acc.get(key, ZERO)
    s = GaussianRational(cur.re + val.re, cur.im + val.im)
    if s.re == 0 and s.im == 0:
        acc.pop(key, None)
    else:
        acc[key] = s


@dataclass(frozen=True)
class QuasiDouble:
    phi: Cocycle3

    @property
    def group(self) -> CyclicGroup:
        return self.phi.group

    @property
    def basis(self) -> list[tuple[int, int]]:
        return [(x, f) for x in self.group.elements for f in self.group.elements]

    def c(self, x: int) -> Callable[[int, int], int]:
        return slant(self.phi, x)

    def phase(self, k: int) -> GaussianRational:
        return _phase(k, self.phi.modulus)

    def unit(self) -> Element:
        return {(x, self.group.unit): ONE for x in self.group.elements}

    def basis_element(self, x: int, f: int) -> Element:
        return {(x, f): ONE}

    def multiply(self, a: Element, b: Element) -> Element:
        """Bilinear extension of (P_x f)(P_y g) = delta_{x,y} c_x(f, g) P_x fg."""
        out: Element = {}
        m = self.group.mul
        for (x, f), u in a.items():
            for (y, g), v in b.items():
                if x != y:
                    continue
                _add(out, (x, m(f, g)), u * v * self.phase(self.c(x)(f, g)))
        return out

    def coproduct(self, a: Element) -> Tensor:
        """Delta(P_x f) = sum_{yz = x} c_f(y, z) (P_y f) (x) (P_z f)."""
        out: Tensor = {}
        G = self.group
        for (x, f), u in a.items():
            for y in G.elements:
                z = G.mul(G.inv(y), x)
                _add(out, ((y, f), (z, f)), u * self.phase(self.c(f)(y, z)))
        return out

    def multiply_tensor(self, s: Tensor, t: Tensor) -> Tensor:
        out: Tensor = {}
        for (a1, a2), u in s.items():
            for (b1, b2), v in t.items():
                left = self.multiply({a1: ONE}, {b1: ONE})
                right = self.multiply({a2: ONE}, {b2: ONE})
                for k1, w1 in left.items():
                    for k2, w2 in right.items():
                        _add(out, (k1, k2), u * v * w1 * w2)
        return out

    def counit(self, a: Element) -> GaussianRational:
        """epsilon(P_x f) = delta_{x, 1}."""
        acc = ZERO
        for (x, _f), u in a.items():
            if x == self.group.unit:
                acc = GaussianRational(acc.re + u.re, acc.im + u.im)
        return acc

    def antipode(self, a: Element) -> Element:
        """S(P_x f) = c_{x^-1}(f, f^-1)^-1 c_f(x, x^-1)^-1 P_{x^-1} f^-1."""
        G = self.group
        out: Element = {}
        for (x, f), u in a.items():
            xi, fi = G.inv(x), G.inv(f)
            k = -self.c(xi)(f, fi) - self.c(f)(x, xi)
            _add(out, (xi, fi), u * self.phase(k))
        return out

    def associator(self) -> dict:
        """Phi = sum phi(x, y, z)^-1 P_x (x) P_y (x) P_z, as exponents on (x, y, z)."""
        return {t: (-self.phi(*t)) % self.phi.modulus for t in product(self.group.elements, repeat=3)}

    def r_matrix(self) -> Tensor:
        """R = sum_{x, y} (P_x 1) (x) (P_y x)."""
        e = self.group.unit
        return {((x, e), (y, x)): ONE for x in self.group.elements for y in self.group.elements}


def algebra_associativity_failures(D: QuasiDouble) -> list:
    out = []
    for a, b, c in product(D.basis, repeat=3):
        A, B, C = ({a: ONE}, {b: ONE}, {c: ONE})
        if D.multiply(D.multiply(A, B), C) != D.multiply(A, D.multiply(B, C)):
            out.append((a, b, c))
    return out


def unit_failures(D: QuasiDouble) -> list:
    u = D.unit()
    return [a for a in D.basis if D.multiply(u, {a: ONE}) != {a: ONE} or D.multiply({a: ONE}, u) != {a: ONE}]


def coproduct_multiplicativity_failures(D: QuasiDouble) -> list:
    out = []
    for a, b in product(D.basis, repeat=2):
        A, B = {a: ONE}, {b: ONE}
        if D.coproduct(D.multiply(A, B)) != D.multiply_tensor(D.coproduct(A), D.coproduct(B)):
            out.append((a, b))
    return out


def _multiply_triple(D: QuasiDouble, s: dict, t: dict) -> dict:
    out: dict = {}
    for ka, u in s.items():
        for kb, v in t.items():
            parts = [D.multiply({a: ONE}, {b: ONE}) for a, b in zip(ka, kb)]
            for (k1, w1), (k2, w2), (k3, w3) in product(*(p.items() for p in parts)):
                _add(out, (k1, k2, k3), u * v * w1 * w2 * w3)
    return out


def associator_element(D: QuasiDouble) -> dict:
    e = D.group.unit
    return {((x, e), (y, e), (z, e)): D.phase(k) for (x, y, z), k in D.associator().items()}


def quasi_coassociativity_failures(D: QuasiDouble) -> list:
    """Basis elements violating (id x Delta)Delta(a) Phi = Phi (Delta x id)Delta(a)."""
    phi = associator_element(D)
    out = []
    for a in D.basis:
        left: dict = {}
        right: dict = {}
        for (k1, k2), u in D.coproduct({a: ONE}).items():
            for (m1, m2), v in D.coproduct({k2: ONE}).items():
                _add(left, (k1, m1, m2), u * v)
            for (m1, m2), v in D.coproduct({k1: ONE}).items():
                _add(right, (m1, m2, k2), u * v)
        if _multiply_triple(D, left, phi) != _multiply_triple(D, phi, right):
            out.append(a)
    return out


def antipode_failures(D: QuasiDouble) -> list:
    """Basis elements where S(a_1) a_2 or a_1 S(a_2) differs from epsilon(a) 1, weighted by
    the quasi-Hopf elements alpha = 1 and beta = sum phi(x, x^-1, x) P_x."""
    G = D.group
    beta = {(x, G.unit): D.phase(D.phi(x, G.inv(x), x)) for x in G.elements}
    out = []
    for a in D.basis:
        eps = D.counit({a: ONE})
        target = {k: v * eps for k, v in D.unit().items()} if eps != ZERO else {}
        lhs: dict = {}
        rhs: dict = {}
        for (k1, k2), u in D.coproduct({a: ONE}).items():
            for k, v in D.multiply(D.antipode({k1: ONE}), {k2: ONE}).items():
                _add(lhs, k, u * v)
            for k, v in D.multiply(D.multiply({k1: ONE}, beta), D.antipode({k2: ONE})).items():
                _add(rhs, k, u * v)
        beta_target = {k: v * eps for k, v in beta.items()} if eps != ZERO else {}
        if lhs != target or rhs != beta_target:
            out.append(a)
    return out


def antipode_square_phases(D: QuasiDouble) -> dict:
    """For each basis element a, the exponent k with S(S(a)) = i^k a (None if not proportional)."""
    out = {}
    for a in D.basis:
        img = D.antipode(D.antipode({a: ONE}))
        out[a] = img[a].phase_exponent() if list(img) == [a] else None
    return out


# --------------------------------------------------------------------------
# representations


IrrepLabel = tuple  # (x, character exponent)


def epsilon(x: int, f: int, order: int = 2) -> int:
    """The cochain exp(pi i [x][f] / 2) for Z_2, as an exponent mod 4."""
    if order != 2:
        raise ValueError("epsilon is tabulated for Z_2 only")
    return (x * f) % 4


def coboundary_1(eps: Callable[[int], int], group: CyclicGroup, modulus: int) -> Callable[[int, int], int]:
    """(d eps)(f, g) = eps(fg) / (eps(f) eps(g))."""
    return lambda f, g: (eps(group.mul(f, g)) - eps(f) - eps(g)) % modulus


def slant_equals_coboundary(D: QuasiDouble) -> bool:
    """c_x = d(eps_x) on all pairs, for every x."""
    G = D.group
    for x in G.elements:
        d = coboundary_1(lambda f: epsilon(x, f, G.order), G, D.phi.modulus)
        if any(D.c(x)(f, g) != d(f, g) for f, g in product(G.elements, repeat=2)):
            return False
    return True


def twist_cochain(D: QuasiDouble, x: int) -> Callable[[int], int]:
    """The normalized eps_x with d(eps_x) = c_x and smallest exponents, by exhaustive search."""
    G, N = D.group, D.phi.modulus
    c = D.c(x)
    for tail in product(range(N), repeat=G.order - 1):
        vals = (0,) + tail
        d = coboundary_1(lambda f: vals[f], G, N)
        if all(d(f, g) == c(f, g) for f, g in product(G.elements, repeat=2)):
            return lambda f: vals[f]
    raise ArithmeticError(f"c_{x} is not a coboundary")


def irrep(D: QuasiDouble, x: int, chi: int) -> Callable[[Element], GaussianRational]:
    """Pi_{(x, chi)}(P_y f) = delta_{x,y} eps_x(f) chi(f), chi(f) = (-1)^{chi f}."""
    if D.group.order != 2:
        raise ValueError("irreps are tabulated for Z_2 only")
    eps = twist_cochain(D, x)
    sign = D.phi.modulus // 2

    def rep(a: Element) -> GaussianRational:
        acc = ZERO
        for (y, f), u in a.items():
            if y != x:
                continue
            v = u * D.phase(eps(f) + sign * chi * f)
            acc = GaussianRational(acc.re + v.re, acc.im + v.im)
        return acc

    return rep


def irrep_labels(D: QuasiDouble) -> list[IrrepLabel]:
    return [(x, chi) for x in D.group.elements for chi in (0, 1)]


def irrep_homomorphism_failures(D: QuasiDouble) -> list:
    out = []
    for lab in irrep_labels(D):
        rho = irrep(D, *lab)
        for a, b in product(D.basis, repeat=2):
            A, B = {a: ONE}, {b: ONE}
            if rho(D.multiply(A, B)) != rho(A) * rho(B):
                out.append((lab, a, b))
    return out


def tensor_value(D: QuasiDouble, p: IrrepLabel, q: IrrepLabel, a: Element) -> GaussianRational:
    """(Pi_p (x) Pi_q)(Delta(a))."""
    r1, r2 = irrep(D, *p), irrep(D, *q)
    acc = ZERO
    for (k1, k2), u in D.coproduct(a).items():
        v = u * r1({k1: ONE}) * r2({k2: ONE})
        acc = GaussianRational(acc.re + v.re, acc.im + v.im)
    return acc


def tensor_irreps(D: QuasiDouble, p: IrrepLabel, q: IrrepLabel) -> IrrepLabel:
    """The irrep equal to Pi_p (x) Pi_q on every basis element."""
    matches = [
        lab
        for lab in irrep_labels(D)
        if all(tensor_value(D, p, q, {a: ONE}) == irrep(D, *lab)({a: ONE}) for a in D.basis)
    ]
    if len(matches) != 1:
        raise ArithmeticError(f"{p} (x) {q} is not a single irrep: {matches}")
    return matches[0]


def braiding_value(D: QuasiDouble, p: IrrepLabel, q: IrrepLabel) -> int:
    """Exponent of (Pi_p (x) Pi_q)(R), evaluated from the universal R-matrix."""
    r1, r2 = irrep(D, *p), irrep(D, *q)
    acc = ZERO
    for (k1, k2), u in D.r_matrix().items():
        v = u * r1({k1: ONE}) * r2({k2: ONE})
        acc = GaussianRational(acc.re + v.re, acc.im + v.im)
    k = acc.phase_exponent()
    if k is None:
        raise ArithmeticError("braiding is not a phase")
    return k


def braiding_formula(p: IrrepLabel, q: IrrepLabel) -> int:
    """eps_y(x) sigma(x) for p = (x, chi), q = (y, sigma)."""
    (x, _), (y, sigma) = p, q
    return (epsilon(y, x) + 2 * sigma * x) % 4


IRREP_NAMES = {(0, 0): "(1,1)", (1, 0): "(-1,1)", (1, 1): "(-1,sgn)", (0, 1): "(1,sgn)"}
TABLE_ORDER = ((0, 0), (1, 0), (1, 1), (0, 1))

# the identification of irreps with anyon labels
IDENTIFICATION = {"(1,1)": "1", "(-1,1)": "S", "(-1,sgn)": "Sbar", "(1,sgn)": "B"}


def rep_category_data(phi: Cocycle3 | None = None) -> AnyonData:
    """Rep D^phi(Z_2) as skeletal data: F = phi^-1 on the flux parts, R from the R-matrix."""
    phi = phi or z2_nontrivial_cocycle()
    D = QuasiDouble(phi)
    labs = [IRREP_NAMES[t] for t in TABLE_ORDER]
    fusion, F, R = {}, {}, {}
    for p, q in product(TABLE_ORDER, repeat=2):
        fusion[(IRREP_NAMES[p], IRREP_NAMES[q])] = IRREP_NAMES[tensor_irreps(D, p, q)]
        R[(IRREP_NAMES[p], IRREP_NAMES[q])] = braiding_value(D, p, q)
    for p, q, r in product(TABLE_ORDER, repeat=3):
        F[(IRREP_NAMES[p], IRREP_NAMES[q], IRREP_NAMES[r])] = (-phi(p[0], q[0], r[0])) % phi.modulus
    return AnyonData(tuple(labs), fusion, F, R, phi.modulus)


def braiding_table(d: AnyonData) -> list[list[int]]:
    labs = [IRREP_NAMES[t] for t in TABLE_ORDER]
    return [[d.R[(a, b)] for b in labs] for a in labs]


# Table of braiding phases (exponents of i), rows and columns in TABLE_ORDER.
EXPECTED_BRAIDING = ((0, 0, 0, 0), (0, 1, 3, 2), (0, 1, 3, 2), (0, 0, 0, 0))


@dataclass
class CompareReport:
    identification: dict
    gauge: dict | None
    equivalences: list
    unique_up_to_swap: bool

    @property
    def passed(self) -> bool:
        return self.gauge is not None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "identification": self.identification,
            "gauge": None if self.gauge is None else {f"{a},{b}": v for (a, b), v in sorted(self.gauge.items())},
            "equivalent_bijections": [dict(sorted(f.items())) for f, _ in self.equivalences],
            "unique_up_to_semion_swap": self.unique_up_to_swap,
        }


def compare(measured: AnyonData, rep: AnyonData | None = None, identification: Mapping[str, str] | None = None) -> CompareReport:
    """Search for a gauge between rep data and measured data under the identification,
    and list every bijection that admits one."""
    rep = rep or rep_category_data()
    ident = dict(identification or IDENTIFICATION)
    chi = gauge_equivalent(rep, measured, ident)
    eqs = all_equivalences(rep, measured)
    swap = {**ident, "(-1,1)": ident["(-1,sgn)"], "(-1,sgn)": ident["(-1,1)"]}
    allowed = [ident, swap]
    unique = all(f in allowed for f, _ in eqs)
    return CompareReport(ident, chi, eqs, unique)


def bijection_search(measured: AnyonData, rep: AnyonData | None = None) -> list[dict]:
    """All label bijections, fusion-preserving or not, that admit a gauge."""
    rep = rep or rep_category_data()
    out = []
    for image in permutations(measured.labels):
        f = dict(zip(rep.labels, image))
        try:
            if gauge_equivalent(rep, measured, f) is not None:
                out.append(f)
        except ValueError:
            continue
    return out
