"""Named presentations: structure sheaves of plane curves and normal forms."""

from __future__ import annotations

from typing import Sequence

from .errors import DegeneratePoint, DependentForms, ZeroForm
from .field import FieldSpec, Scalar
from .forms import Form, are_independent
from .linalg import LinearMap
from .presentation import SheafMorphism, SheafPresentation


def make_OC(f: Form, d: int = 0) -> SheafPresentation:
    """``O_C(d)`` for the curve ``C = {f = 0}``, via ``0 -> O(d - deg f) -> O(d)``.

    For a quartic this has Hilbert polynomial ``4t + 4d - 2``.
    """
    if f.is_zero():
        raise ZeroForm("the curve equation must be nonzero")
    if f.degree < 1:
        raise ZeroForm("the curve equation must have positive degree")
    return SheafPresentation(SheafMorphism([d - f.degree], [d], [[f]], f.field))


def _linear(form: Form, name: str) -> None:
    if form.degree != 1 and not form.is_zero():
        raise ValueError(f"{name} must be a linear form")


def normal_form_42(X1: Form, X2: Form, Y1: Form, Y2: Form, quadrics: Sequence[Form]) -> SheafMorphism:
    """``[[X1, X2, 0], [q11, q12, Y1], [q21, q22, Y2]]`` on ``2O(-2)+O(-1) -> O(-1)+2O``.

    Row 0 is the O(-1) summand of the target, column 2 the O(-1) summand of
    the source. ``quadrics`` is ``(q11, q12, q21, q22)``.

    Raises:
        DependentForms: if X1, X2 or Y1, Y2 are linearly dependent.
    """
    for f, name in ((X1, "X1"), (X2, "X2"), (Y1, "Y1"), (Y2, "Y2")):
        _linear(f, name)
    if not are_independent([X1, X2]):
        raise DependentForms(("X1", "X2"))
    if not are_independent([Y1, Y2]):
        raise DependentForms(("Y1", "Y2"))
    q11, q12, q21, q22 = quadrics
    k = X1.field
    return SheafMorphism([-2, -2, -1], [-1, 0, 0], [[X1, X2, 0], [q11, q12, Y1], [q21, q22, Y2]], k)


def _point(P: Sequence[Scalar], field: FieldSpec) -> list[Scalar]:
    p = [field(c) for c in P]
    if len(p) != 3 or not any(p):
        raise DegeneratePoint(f"{P!r} is not a point of the projective plane")
    return p


def vanishing_forms(points: Sequence[Sequence[Scalar]], field: FieldSpec) -> list[Form]:
    """Echelon basis of the linear forms vanishing at every given point."""
    kernel = LinearMap([_point(P, field) for P in points], field).kernel_basis()
    return [Form.linear(v, field) for v in kernel.basis]


def _complete(forms: list[Form], candidates: list[Form]) -> Form:
    for c in candidates:
        if are_independent(forms + [c]):
            return c
    raise DegeneratePoint("could not complete the linear forms to an independent set")


def fiber_forms(P1: Sequence[Scalar], P2: Sequence[Scalar], field: FieldSpec) -> tuple[Form, Form, Form]:
    """(X1, X2, Z) adapted to the point pair.

    Distinct points: Z cuts the line P1P2, X1 vanishes at P1 and X2 at P2,
    each independent of Z. Equal points: X1 and Z vanish at P1 and X2
    completes a basis.
    """
    p1, p2 = _point(P1, field), _point(P2, field)
    same = LinearMap([p1, p2], field).rank() == 1
    coords = [Form.variable(c, field) for c in range(3)]
    if same:
        X1, Z = vanishing_forms([p1], field)
        X2 = _complete([X1, Z], coords)
        return X1, X2, Z
    (Z,) = vanishing_forms([p1, p2], field)
    X1 = _complete([Z], vanishing_forms([p1], field))
    X2 = _complete([Z], vanishing_forms([p2], field))
    return X1, X2, Z


def normal_form_4E4(
    P1: Sequence[Scalar],
    P2: Sequence[Scalar],
    alpha: Scalar,
    beta: Scalar,
    q12: Form,
    q21: Form,
    forms: tuple[Form, Form, Form] | None = None,
) -> SheafMorphism:
    """Member of the fiber of the quadric-pair map over ``(P1, P2)``.

    Distinct points give
    ``[[X1, Z, 0], [alpha X2^2, q12, Z], [q21, beta X1^2, X2]]``; equal
    points give ``[[X1, Z, 0], [alpha X2^2, q12, Z], [q21, beta X2^2, X1]]``.
    ``forms`` overrides the automatically chosen ``(X1, X2, Z)``.
    The result is returned even if it is not injective.
    """
    field = q12.field
    p1, p2 = _point(P1, field), _point(P2, field)
    same = LinearMap([p1, p2], field).rank() == 1
    X1, X2, Z = forms if forms is not None else fiber_forms(p1, p2, field)
    for f, P, name in ((X1, p1, "X1"), (Z, p1, "Z")) + (((X2, p2, "X2"), (Z, p2, "Z")) if not same else ()):
        if f.evaluate(P) != 0:
            raise DegeneratePoint(f"{name} does not vanish at {P}")
    if not are_independent([X1, Z]) or (not same and not are_independent([X2, Z])):
        raise DegeneratePoint("vanishing forms are dependent")
    if same and not are_independent([X1, X2, Z]):
        raise DegeneratePoint("X1, X2, Z must form a basis when the points coincide")
    q12 = q12 if not q12.is_zero() else Form.zero(2, field)
    q21 = q21 if not q21.is_zero() else Form.zero(2, field)
    if same:
        rows = [[X1, Z, 0], [(X2 * X2).scale(alpha), q12, Z], [q21, (X2 * X2).scale(beta), X1]]
    else:
        rows = [[X1, Z, 0], [(X2 * X2).scale(alpha), q12, Z], [q21, (X1 * X1).scale(beta), X2]]
    return SheafMorphism([-2, -2, -1], [-1, 0, 0], rows, field)
