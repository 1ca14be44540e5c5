"""Sheaves on the plane given as cokernels of matrices of forms.

A morphism ``phi: sum O(a_j) -> sum O(b_i)`` is stored with source twists
``a``, target twists ``b`` and a ``len(b) x len(a)`` matrix whose (i, j)
entry is a form of degree ``b_i - a_j`` (zero when that is negative).
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from typing import Any, Sequence

from .errors import DegreeMismatch, NotInjective, NotOneDimensional, NotSquare
from .field import FieldSpec
from .forms import Form, format_form, parse_form

FormMatrix = list[list[Form]]


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def form_determinant(matrix: FormMatrix, field: FieldSpec, degree: int) -> Form:
    """Leibniz expansion; ``degree`` tags the result when it vanishes."""
    n = len(matrix)
    total = Form.zero(max(degree, 0), field)
    for perm in itertools.permutations(range(n)):
        term = None
        for i, j in enumerate(perm):
            e = matrix[i][j]
            if e.is_zero():
                term = None
                break
            term = e if term is None else term * e
        if term is None:
            continue
        total = total + (term if _perm_sign(perm) > 0 else -term)
    if total.is_zero():
        return Form.zero(max(degree, 0), field)
    return total


def form_matmul(left: FormMatrix, right: FormMatrix, field: FieldSpec, degrees: list[list[int]]) -> FormMatrix:
    """Product of form matrices; ``degrees`` tags zero entries of the result."""
    out = []
    for i, row in enumerate(left):
        new_row = []
        for j in range(len(right[0])):
            acc = Form.zero(degrees[i][j], field)
            for k, a in enumerate(row):
                b = right[k][j]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a * b
            new_row.append(acc if not acc.is_zero() else Form.zero(degrees[i][j], field))
        out.append(new_row)
    return out


class SheafMorphism:
    """A matrix of forms between direct sums of line bundles.

    Entries may be given as :class:`Form` objects or as strings in the
    canonical syntax. Zero entries are retagged with their expected degree.
    Degree consistency is checked by :func:`validate`, not here.
    """

    __slots__ = ("source", "target", "entries", "field")

    def __init__(self, source: Sequence[int], target: Sequence[int], entries: Sequence[Sequence[Any]], field: FieldSpec):
        self.source = tuple(int(a) for a in source)
        self.target = tuple(int(b) for b in target)
        if not self.source or not self.target:
            raise ValueError("twist lists must be nonempty")
        if len(entries) != len(self.target) or any(len(r) != len(self.source) for r in entries):
            raise ValueError(f"entries must form a {len(self.target)}x{len(self.source)} matrix")
        self.field = field
        rows = []
        for i, r in enumerate(entries):
            row = []
            for j, e in enumerate(r):
                d = self.target[i] - self.source[j]
                if isinstance(e, str):
                    e = parse_form(e, field, degree=d if d >= 0 else None)
                elif isinstance(e, int) and e == 0:
                    e = Form.zero(d, field)
                elif not isinstance(e, Form):
                    raise TypeError(f"entry ({i},{j}) is not a Form")
                if e.field != field:
                    raise ValueError(f"entry ({i},{j}) lives over {e.field}, not {field}")
                if e.is_zero():
                    e = Form.zero(d, field)
                row.append(e)
            rows.append(tuple(row))
        self.entries = tuple(rows)

    @property
    def n_rows(self) -> int:
        return len(self.target)

    @property
    def n_cols(self) -> int:
        return len(self.source)

    def expected_degree(self, i: int, j: int) -> int:
        return self.target[i] - self.source[j]

    def entry(self, i: int, j: int) -> Form:
        return self.entries[i][j]

    def matrix(self) -> FormMatrix:
        return [list(r) for r in self.entries]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SheafMorphism):
            return NotImplemented
        return (self.source, self.target, self.field, self.entries) == (other.source, other.target, other.field, other.entries)

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.field, self.entries))

    def __repr__(self) -> str:
        return f"SheafMorphism({self.source} -> {self.target} over {self.field})"

    def is_square(self) -> bool:
        return self.n_rows == self.n_cols

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> SheafMorphism:
        return SheafMorphism(
            [self.source[j] for j in cols],
            [self.target[i] for i in rows],
            [[self.entries[i][j] for j in cols] for i in rows],
            self.field,
        )

    def compose(self, other: SheafMorphism) -> SheafMorphism:
        """``self o other``; requires ``other.target == self.source``."""
        if other.target != self.source:
            raise ValueError("twist lists do not match for composition")
        degrees = [[b - a for a in other.source] for b in self.target]
        prod = form_matmul(self.matrix(), other.matrix(), self.field, degrees)
        return SheafMorphism(other.source, self.target, prod, self.field)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "source": list(self.source),
            "target": list(self.target),
            "entries": [[format_form(e) for e in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> SheafMorphism:
        if isinstance(data, str):
            data = json.loads(data)
        field = FieldSpec.from_json(data["field"])
        return cls(data["source"], data["target"], data["entries"], field)


def validate(phi: SheafMorphism) -> bool:
    """Check that each nonzero entry has degree ``b_i - a_j``.

    Raises:
        DegreeMismatch: for the first offending entry in row-major order.
    """
    for i, row in enumerate(phi.entries):
        for j, e in enumerate(row):
            expected = phi.expected_degree(i, j)
            if not e.is_zero() and e.degree != expected:
                raise DegreeMismatch(i, j, expected, e.degree)
    return True


def chi_line_bundle_poly(d: int) -> tuple[Fraction, Fraction, Fraction]:
    """Coefficients (t^2, t, 1) of chi(O(d)(t)) = (t+d+1)(t+d+2)/2."""
    return (Fraction(1, 2), Fraction(2 * d + 3, 2), Fraction((d + 1) * (d + 2), 2))


def hilbert_poly_coeffs(source: Sequence[int], target: Sequence[int]) -> tuple[Fraction, Fraction, Fraction]:
    acc = [Fraction(0)] * 3
    for b in target:
        for k, c in enumerate(chi_line_bundle_poly(b)):
            acc[k] += c
    for a in source:
        for k, c in enumerate(chi_line_bundle_poly(a)):
            acc[k] -= c
    return acc[0], acc[1], acc[2]


def hilbert_polynomial(phi: SheafMorphism) -> tuple[int, int]:
    """(r, chi) with P(t) = r t + chi for the cokernel.

    Raises:
        NotOneDimensional: unless the t^2 term cancels and r > 0.
    """
    quad, lin, const = hilbert_poly_coeffs(phi.source, phi.target)
    if quad != 0:
        raise NotOneDimensional(f"Hilbert polynomial has t^2 coefficient {quad}")
    if lin <= 0:
        raise NotOneDimensional(f"Hilbert polynomial has multiplicity {lin}")
    return int(lin), int(const)


def determinant(phi: SheafMorphism) -> Form:
    if not phi.is_square():
        raise NotSquare(f"{phi.n_rows}x{phi.n_cols} matrix has no determinant")
    degree = sum(phi.target) - sum(phi.source)
    return form_determinant(phi.matrix(), phi.field, degree)


def maximal_minors(phi: SheafMorphism) -> list[Form]:
    """Maximal minors, indexed by row (or column) subsets in lexicographic order."""
    k = min(phi.n_rows, phi.n_cols)
    out = []
    if phi.n_rows >= phi.n_cols:
        for rows in itertools.combinations(range(phi.n_rows), k):
            out.append(determinant(phi.submatrix(rows, range(phi.n_cols))))
    else:
        for cols in itertools.combinations(range(phi.n_cols), k):
            out.append(determinant(phi.submatrix(range(phi.n_rows), cols)))
    return out


def is_injective(phi: SheafMorphism) -> bool:
    if phi.n_cols > phi.n_rows:
        return False
    if phi.is_square():
        return not determinant(phi).is_zero()
    return any(not m.is_zero() for m in maximal_minors(phi))


def dualize(phi: SheafMorphism) -> SheafMorphism:
    """Presentation of the dual sheaf: transpose, twists b -> -b-3."""
    return SheafMorphism(
        [-b - 3 for b in phi.target],
        [-a - 3 for a in phi.source],
        [list(col) for col in zip(*phi.entries)],
        phi.field,
    )


def twist(phi: SheafMorphism, n: int) -> SheafMorphism:
    return SheafMorphism([a + n for a in phi.source], [b + n for b in phi.target], phi.matrix(), phi.field)


class SheafPresentation:
    """``F = coker(phi)`` for an injective, degree-consistent ``phi``.

    Raises on construction if ``phi`` fails validation, is not injective,
    or has a cokernel that is not one-dimensional.
    """

    __slots__ = ("phi", "r", "chi", "_support")

    def __init__(self, phi: SheafMorphism):
        validate(phi)
        self.r, self.chi = hilbert_polynomial(phi)
        self._support = None
        if phi.is_square():
            det = determinant(phi)
            if det.is_zero():
                raise NotInjective("determinant vanishes")
            self._support = det
        elif not is_injective(phi):
            raise NotInjective("no nonzero maximal minor")
        self.phi = phi

    @property
    def field(self) -> FieldSpec:
        return self.phi.field

    @property
    def source(self) -> tuple[int, ...]:
        return self.phi.source

    @property
    def target(self) -> tuple[int, ...]:
        return self.phi.target

    @property
    def support(self) -> Form | None:
        """The determinant curve, for square presentations."""
        return self._support

    @property
    def hilbert(self) -> tuple[int, int]:
        return (self.r, self.chi)

    def twist(self, n: int) -> SheafPresentation:
        return SheafPresentation(twist(self.phi, n))

    def dual(self) -> SheafPresentation:
        return SheafPresentation(dualize(self.phi))

    def to_json(self) -> dict:
        return self.phi.to_json()

    def __repr__(self) -> str:
        return f"SheafPresentation(r={self.r}, chi={self.chi}, {self.phi.source} -> {self.phi.target})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SheafPresentation):
            return NotImplemented
        return self.phi == other.phi

    def __hash__(self) -> int:
        return hash(self.phi)
