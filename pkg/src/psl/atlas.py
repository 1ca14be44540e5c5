"""Strata of M(4, chi) for 0 < chi <= 4, classification and bookkeeping.

Each stratum is fixed by the triple (h0(F(-1)), h1(F), h0(F (x) Omega(1)))
and carries the free resolution shape of its members and its codimension
in the 17-dimensional moduli space.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cohomology import h0, h0_omega, h1, h_line_bundle
from .errors import NoMatchingStratum, ShapeMismatch, SingularGroupElement
from .field import FieldSpec, Scalar
from .forms import Form, format_form
from .linalg import LinearMap, random_invertible
from .presentation import SheafMorphism, SheafPresentation

MODULI_DIM = 17


@dataclass(frozen=True)
class StratumDescriptor:
    id: str
    chi: int
    triple: tuple[int, int, int]
    source: tuple[int, ...]
    target: tuple[int, ...]
    codim: int

    @property
    def r(self) -> int:
        return 4

    @property
    def shape(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return (self.source, self.target)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "moduli": [4, self.chi],
            "triple": list(self.triple),
            "source": list(self.source),
            "target": list(self.target),
            "codim": self.codim,
        }


def _row(id_: str, chi: int, triple, source, target, codim) -> StratumDescriptor:
    return StratumDescriptor(id_, chi, tuple(triple), tuple(source), tuple(target), codim)


STRATA: tuple[StratumDescriptor, ...] = (
    _row("X0(4,1)", 1, (0, 0, 0), (-2, -2, -2), (-1, -1, 0), 0),
    _row("X1(4,1)", 1, (0, 1, 1), (-3, -1), (0, 0), 2),
    _row("X0(4,2)", 2, (0, 0, 0), (-2, -2), (0, 0), 0),
    _row("X1(4,2)", 2, (0, 0, 1), (-2, -2, -1), (-1, 0, 0), 1),
    _row("X2(4,2)", 2, (1, 1, 3), (-3,), (1,), 3),
    _row("X0(4,3)", 3, (0, 0, 2), (-2, -1, -1), (0, 0, 0), 0),
    _row("X1(4,3)", 3, (1, 0, 3), (-2, -2), (-1, 1), 2),
    _row("X0(4,4)", 4, (0, 0, 4), (-1, -1, -1, -1), (0, 0, 0, 0), 0),
    _row("X1(4,4)", 4, (1, 0, 4), (-2, -1), (0, 1), 1),
)

STRATA_BY_ID = {s.id: s for s in STRATA}


def strata_for(chi: int) -> list[StratumDescriptor]:
    return [s for s in STRATA if s.chi == chi]


def normalizing_twist(r: int, chi: int) -> int:
    """The n with ``0 < chi + r n <= r``."""
    return -((chi - 1) // r)


@dataclass(frozen=True)
class ClassificationReport:
    stratum: StratumDescriptor
    triple: tuple[int, int, int]
    twist: int
    shape_match: bool

    def to_json(self) -> dict:
        return {
            "row": self.stratum.id,
            "moduli": [4, self.stratum.chi],
            "triple": list(self.triple),
            "codim": self.stratum.codim,
            "expected_shape": {"source": list(self.stratum.source), "target": list(self.stratum.target)},
            "shape_match": self.shape_match,
            "normalizing_twist": self.twist,
        }


def stratum_triple(F: SheafPresentation) -> tuple[int, int, int]:
    return (h0(F, -1), h1(F, 0), h0_omega(F, 0))


def classify(phi: SheafMorphism | SheafPresentation) -> ClassificationReport:
    """Locate a presentation with r = 4 in the strata table.

    The sheaf is first twisted so that 0 < chi <= 4.

    Raises:
        NoMatchingStratum: if the computed triple is not in the table.
    """
    F = phi if isinstance(phi, SheafPresentation) else SheafPresentation(phi)
    if F.r != 4:
        raise ValueError(f"the strata table covers multiplicity 4, got {F.r}")
    n = normalizing_twist(F.r, F.chi)
    G = F.twist(n) if n else F
    triple = stratum_triple(G)
    for s in strata_for(G.chi):
        if s.triple == triple:
            match = (tuple(sorted(G.source)), tuple(sorted(G.target))) == (s.source, s.target)
            return ClassificationReport(s, triple, n, match)
    raise NoMatchingStratum(G.chi, triple)


# -- quadric pair map -------------------------------------------------------


SHAPE_W = ((-2, -2, -1), (-1, 0, 0))


@dataclass(frozen=True)
class QuadricPair:
    """A 2x2 matrix of quadratic forms."""

    entries: tuple[tuple[Form, Form], tuple[Form, Form]]

    def __post_init__(self) -> None:
        for row in self.entries:
            for e in row:
                if not e.is_zero() and e.degree != 2:
                    raise ValueError("quadric pair entries must be quadratic")

    @property
    def field(self) -> FieldSpec:
        return self.entries[0][0].field

    def to_json(self) -> list[list[str]]:
        return [[format_form(e) for e in row] for row in self.entries]

    def transform(self, left: LinearMap, right: LinearMap) -> QuadricPair:
        """``left @ self @ right^-1`` with scalar 2x2 matrices."""
        rinv = right.inverse()
        k = self.field

        def lin(mat: LinearMap, forms: Sequence[Form]) -> Form:
            acc = Form.zero(2, k)
            for c, f in zip(mat, forms):
                acc = acc + f.scale(c)
            return acc if not acc.is_zero() else Form.zero(2, k)

        rows = [[lin(left.rows[i], [self.entries[0][j], self.entries[1][j]]) for j in range(2)] for i in range(2)]
        out = [[lin([rinv.rows[0][j], rinv.rows[1][j]], rows[i]) for j in range(2)] for i in range(2)]
        return QuadricPair(((out[0][0], out[0][1]), (out[1][0], out[1][1])))

    def rows_independent(self) -> bool:
        pairs = [self.entries[0][0].vector() + self.entries[0][1].vector(), self.entries[1][0].vector() + self.entries[1][1].vector()]
        cols = [self.entries[0][0].vector() + self.entries[1][0].vector(), self.entries[0][1].vector() + self.entries[1][1].vector()]
        k = self.field
        return LinearMap(pairs, k).rank() == 2 and LinearMap(cols, k).rank() == 2


def _check_shape_w(w: SheafMorphism) -> None:
    if (w.source, w.target) != SHAPE_W:
        raise ShapeMismatch(f"expected {SHAPE_W[0]} -> {SHAPE_W[1]}, got {w.source} -> {w.target}")


def delta_map(w: SheafMorphism) -> QuadricPair:
    """``a Q - Y X`` for ``w = [[X1, X2, a], [Q, Y]]``.

    Row 0 is the O(-1) summand of the target: ``(X1, X2)`` linear and ``a``
    a scalar. ``Q`` is the lower-left 2x2 block of quadrics and ``Y`` the
    lower-right column of linear forms.
    """
    _check_shape_w(w)
    k = w.field
    X = (w.entry(0, 0), w.entry(0, 1))
    a = w.entry(0, 2)
    Y = (w.entry(1, 2), w.entry(2, 2))
    out = []
    for i in range(2):
        row = []
        for j in range(2):
            val = a * w.entry(1 + i, j) - Y[i] * X[j]
            row.append(val if not val.is_zero() else Form.zero(2, k))
        out.append(tuple(row))
    return QuadricPair((out[0], out[1]))


@dataclass(frozen=True)
class GroupElement42:
    """Automorphism pair acting on ``2O(-2)+O(-1) -> O(-1)+2O``.

    ``nu1 = [[alpha, 0], [phi, A]]`` on the target and
    ``nu2 = [[B, 0], [psi, beta]]`` on the source, with ``phi`` a column
    and ``psi`` a row of two linear forms.
    """

    alpha: Scalar
    beta: Scalar
    A: LinearMap
    B: LinearMap
    phi: tuple[Form, Form]
    psi: tuple[Form, Form]

    @property
    def field(self) -> FieldSpec:
        return self.A.field

    def check(self) -> None:
        if self.alpha == 0 or self.beta == 0:
            raise SingularGroupElement("alpha and beta must be nonzero")
        if not self.A.is_invertible() or not self.B.is_invertible():
            raise SingularGroupElement("A and B must be invertible")

    def nu1(self) -> SheafMorphism:
        k = self.field
        A = self.A.rows
        rows = [[Form.constant(self.alpha, k), 0, 0]]
        for i in range(2):
            rows.append([self.phi[i], Form.constant(A[i][0], k), Form.constant(A[i][1], k)])
        return SheafMorphism(SHAPE_W[1], SHAPE_W[1], rows, k)

    def nu2_inverse(self) -> SheafMorphism:
        """``[[B^-1, 0], [-beta^-1 psi B^-1, beta^-1]]``."""
        k = self.field
        binv = self.B.inverse().rows
        beta_inv = k.inv(self.beta)
        rows = [[Form.constant(binv[i][0], k), Form.constant(binv[i][1], k), 0] for i in range(2)]
        last = []
        for j in range(2):
            acc = Form.zero(1, k)
            for l in range(2):
                acc = acc + self.psi[l].scale(binv[l][j])
            last.append(acc.scale(k.neg(beta_inv)))
        rows.append(last + [Form.constant(beta_inv, k)])
        return SheafMorphism(SHAPE_W[0], SHAPE_W[0], rows, k)

    def to_json(self) -> dict:
        k = self.field
        return {
            "alpha": k.format(self.alpha),
            "beta": k.format(self.beta),
            "A": [[k.format(x) for x in r] for r in self.A.rows],
            "B": [[k.format(x) for x in r] for r in self.B.rows],
            "phi": [format_form(f) for f in self.phi],
            "psi": [format_form(f) for f in self.psi],
        }


def act(g: GroupElement42, w: SheafMorphism) -> SheafMorphism:
    """``nu1 o w o nu2^-1``."""
    _check_shape_w(w)
    g.check()
    return g.nu1().compose(w).compose(g.nu2_inverse())


def tau_group_map(g: GroupElement42) -> tuple[LinearMap, LinearMap]:
    """``(alpha beta^-1 A, B)``, acting on quadric pairs by ``M -> L M R^-1``."""
    g.check()
    k = g.field
    return g.A.scale(k.div(g.alpha, g.beta)), g.B


def random_group_element(field: FieldSpec, rng) -> GroupElement42:
    return GroupElement42(
        alpha=field.random(rng, nonzero=True),
        beta=field.random(rng, nonzero=True),
        A=random_invertible(2, field, rng),
        B=random_invertible(2, field, rng),
        phi=(Form.random(1, field, rng), Form.random(1, field, rng)),
        psi=(Form.random(1, field, rng), Form.random(1, field, rng)),
    )


def random_w(field: FieldSpec, rng) -> SheafMorphism:
    """Uniformly random element of the morphism space (not necessarily injective)."""
    rows = []
    for b in SHAPE_W[1]:
        rows.append([Form.random(b - a, field, rng) for a in SHAPE_W[0]])
    return SheafMorphism(SHAPE_W[0], SHAPE_W[1], rows, field)


# -- dimension bookkeeping --------------------------------------------------


def hom_dimension(source: Sequence[int], target: Sequence[int]) -> int:
    return sum(h_line_bundle(0, b - a) for b in target for a in source)


def aut_dimension(twists: Sequence[int]) -> int:
    mult: dict[int, int] = {}
    for t in twists:
        mult[t] = mult.get(t, 0) + 1
    total = sum(m * m for m in mult.values())
    for aj, mj in mult.items():
        for ak, mk in mult.items():
            if ak < aj:
                total += mj * mk * h_line_bundle(0, aj - ak)
    return total


@dataclass(frozen=True)
class DimensionAudit:
    stratum: str
    hom: int
    group: int
    difference: int
    expected: int

    @property
    def ok(self) -> bool:
        return self.difference == self.expected

    def to_json(self) -> dict:
        return {
            "row": self.stratum,
            "dim_hom": self.hom,
            "dim_group": self.group,
            "difference": self.difference,
            "expected": self.expected,
            "ok": self.ok,
        }


def stratum_dimension_audit(stratum: StratumDescriptor) -> DimensionAudit:
    """``dim Hom - dim G`` against ``17 - codim``; G acts modulo scalars."""
    hom = hom_dimension(stratum.source, stratum.target)
    group = aut_dimension(stratum.source) + aut_dimension(stratum.target) - 1
    return DimensionAudit(stratum.id, hom, group, hom - group, MODULI_DIM - stratum.codim)


def dual_shape(source: Sequence[int], target: Sequence[int], chi: int) -> tuple[tuple[int, ...], tuple[int, ...], int, int]:
    """Shape of the dual presentation after twisting into ``0 < chi <= 4``.

    Returns ``(source, target, chi', twist)``.
    """
    src = [-b - 3 for b in target]
    tgt = [-a - 3 for a in source]
    n = normalizing_twist(4, -chi)
    return tuple(sorted(x + n for x in src)), tuple(sorted(x + n for x in tgt)), -chi + 4 * n, n


def duality_stratum_map(stratum: StratumDescriptor) -> StratumDescriptor:
    src, tgt, chi, _ = dual_shape(stratum.source, stratum.target, stratum.chi)
    for s in strata_for(chi):
        if (s.source, s.target) == (src, tgt):
            return s
    raise NoMatchingStratum(chi, stratum.triple)


def vanishing_bounds(r: int, chi: int) -> tuple[Fraction, Fraction]:
    """Thresholds: h0(F(i)) = 0 for i below the first, h1(F(i)) = 0 above the second."""
    if r < 1:
        raise ValueError("r must be positive")
    return Fraction(3 - r, 2) - Fraction(chi, r), Fraction(r - 3, 2) - Fraction(chi, r)
