"""Homogeneous polynomials in x0, x1, x2 and their multiplication maps.

Monomials are exponent triples ordered degree-lexicographically with
x0 > x1 > x2, so for degree 2 the order is
x0^2, x0*x1, x0*x2, x1^2, x1*x2, x2^2.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Iterable, Mapping

from .field import FieldSpec, Scalar
from .linalg import LinearMap

Exponent = tuple[int, int, int]

VARIABLES = ("x0", "x1", "x2")


@lru_cache(maxsize=None)
def _monomials(degree: int) -> tuple[Exponent, ...]:
    if degree < 0:
        return ()
    out = []
    for i in range(degree, -1, -1):
        for j in range(degree - i, -1, -1):
            out.append((i, j, degree - i - j))
    return tuple(out)


def monomial_basis(degree: int) -> list[Exponent]:
    return list(_monomials(degree))


@lru_cache(maxsize=None)
def monomial_index(degree: int) -> dict[Exponent, int]:
    return {m: k for k, m in enumerate(_monomials(degree))}


def n_monomials(degree: int) -> int:
    return (degree + 1) * (degree + 2) // 2 if degree >= 0 else 0


class Form:
    """A homogeneous form of fixed degree over an exact field.

    Only nonzero coefficients are stored, so the zero form of degree d is
    ``Form(d, {}, field)``.
    """

    __slots__ = ("degree", "coeffs", "field", "_hash")

    def __init__(self, degree: int, coeffs: Mapping[Exponent, Scalar], field: FieldSpec):
        clean = {}
        for exp, c in coeffs.items():
            if sum(exp) != degree or min(exp) < 0:
                raise ValueError(f"monomial {exp} does not have degree {degree}")
            c = field(c)
            if c != 0:
                clean[tuple(exp)] = c
        if degree < 0 and clean:
            raise ValueError("nonzero form of negative degree")
        self.degree = degree
        self.coeffs = clean
        self.field = field
        self._hash = None

    @classmethod
    def _raw(cls, degree: int, coeffs: dict, field: FieldSpec) -> Form:
        # trusted constructor: coefficients already reduced and nonzero
        obj = cls.__new__(cls)
        obj.degree = degree
        obj.coeffs = coeffs
        obj.field = field
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, degree: int, field: FieldSpec) -> Form:
        return cls._raw(degree, {}, field)

    @classmethod
    def constant(cls, c: Scalar, field: FieldSpec) -> Form:
        return cls(0, {(0, 0, 0): c}, field)

    @classmethod
    def variable(cls, k: int, field: FieldSpec) -> Form:
        exp = [0, 0, 0]
        exp[k] = 1
        return cls._raw(1, {tuple(exp): field.one()}, field)

    @classmethod
    def linear(cls, coefficients: Iterable[Scalar], field: FieldSpec) -> Form:
        a, b, c = coefficients
        return cls(1, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c}, field)

    @classmethod
    def from_vector(cls, degree: int, vector: Iterable[Scalar], field: FieldSpec) -> Form:
        return cls(degree, dict(zip(_monomials(degree), vector)), field)

    @classmethod
    def random(cls, degree: int, field: FieldSpec, rng) -> Form:
        return cls.from_vector(degree, [field.random(rng) for _ in range(n_monomials(degree))], field)

    def vector(self) -> list[Scalar]:
        zero = self.field.zero()
        return [self.coeffs.get(m, zero) for m in _monomials(self.degree)]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def _check(self, other: Form) -> None:
        if self.field != other.field:
            raise ValueError("forms over different fields")

    def __add__(self, other: Form) -> Form:
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degrees {self.degree} and {other.degree}")
        out = dict(self.coeffs)
        p = self.field.p
        for m, c in other.coeffs.items():
            v = out.get(m, 0) + c
            if p is not None:
                v %= p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Form._raw(self.degree, out, self.field)

    def __neg__(self) -> Form:
        f = self.field
        return Form._raw(self.degree, {m: f.neg(c) for m, c in self.coeffs.items()}, f)

    def __sub__(self, other: Form) -> Form:
        return self + (-other)

    def scale(self, c: Scalar) -> Form:
        f = self.field
        c = f(c)
        if c == 0:
            return Form.zero(self.degree, f)
        return Form._raw(self.degree, {m: f.mul(c, v) for m, v in self.coeffs.items()}, f)

    def __mul__(self, other):
        if not isinstance(other, Form):
            return self.scale(other)
        self._check(other)
        degree = self.degree + other.degree
        if self.is_zero() or other.is_zero():
            return Form.zero(max(degree, 0), self.field)
        p = self.field.p
        out: dict = {}
        for (a0, a1, a2), c in self.coeffs.items():
            for (b0, b1, b2), d in other.coeffs.items():
                m = (a0 + b0, a1 + b1, a2 + b2)
                out[m] = out.get(m, 0) + c * d
        if p is not None:
            out = {m: v % p for m, v in out.items()}
        return Form._raw(degree, {m: v for m, v in out.items() if v}, self.field)

    __rmul__ = scale

    def __pow__(self, n: int) -> Form:
        result = Form.constant(1, self.field)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        if self.field != other.field or self.coeffs != other.coeffs:
            return False
        return self.degree == other.degree or not self.coeffs

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.degree if self.coeffs else None, frozenset(self.coeffs.items()), self.field))
        return self._hash

    def evaluate(self, point: Iterable[Scalar]) -> Scalar:
        x = [self.field(v) for v in point]
        f = self.field
        total = f.zero()
        for (i, j, k), c in self.coeffs.items():
            term = c * x[0] ** i * x[1] ** j * x[2] ** k
            total = total + term
        return f(total) if f.p is not None else total

    def divides(self, other: Form) -> bool:
        return divide(other, self) is not None

    def __repr__(self) -> str:
        return f"Form({self.degree}, {format_form(self)!r}, {self.field})"

    def __str__(self) -> str:
        return format_form(self)


# -- string syntax -----------------------------------------------------------


def format_form(form: Form) -> str:
    if form.is_zero():
        return "0"
    f = form.field
    parts: list[str] = []
    for m in _monomials(form.degree):
        c = form.coeffs.get(m)
        if c is None:
            continue
        factors = []
        for name, e in zip(VARIABLES, m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        negative = f.p is None and c < 0
        mag = -c if negative else c
        if factors and mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([f.format(mag)] + factors)
        if not parts:
            parts.append(("-" if negative else "") + body)
        else:
            parts.append(("- " if negative else "+ ") + body)
    return " ".join(parts)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_VAR = re.compile(r"^x([012])(?:(?:\^|\*\*)(\d+))?$")


def parse_form(text: str, field: FieldSpec, degree: int | None = None) -> Form:
    """Parse ``c*x0^i*x1^j*x2^k`` terms joined by ``+``/``-``.

    ``degree`` is required to tag the zero form and is checked otherwise.
    """
    s = text.strip().replace("**", "^")
    if not s:
        raise ValueError("empty form string")
    tokens = _TERM_SPLIT.split(s)
    if tokens[0] == "":
        tokens = tokens[1:]
    else:
        tokens = ["+"] + tokens
    coeffs: dict[Exponent, Scalar] = {}
    found_degree = None
    for sign, term in zip(tokens[0::2], tokens[1::2]):
        if not term:
            raise ValueError(f"malformed form {text!r}")
        coeff = field.one()
        exp = [0, 0, 0]
        for factor in term.split("*"):
            factor = factor.strip()
            mv = _VAR.match(factor)
            if mv:
                exp[int(mv.group(1))] += int(mv.group(2) or 1)
            else:
                try:
                    coeff = field.mul(coeff, field(factor))
                except (ValueError, ZeroDivisionError) as exc:
                    raise ValueError(f"bad factor {factor!r} in {text!r}") from exc
        if sign == "-":
            coeff = field.neg(coeff)
        if coeff == 0 and not any(exp):
            continue
        d = sum(exp)
        if found_degree is None:
            found_degree = d
        elif d != found_degree:
            raise ValueError(f"{text!r} is not homogeneous")
        key = tuple(exp)
        coeffs[key] = field.add(coeffs.get(key, field.zero()), coeff)
    coeffs = {m: c for m, c in coeffs.items() if c != 0}
    if not coeffs:
        return Form.zero(degree if degree is not None else (found_degree or 0), field)
    if degree is not None and found_degree != degree:
        raise ValueError(f"{text!r} has degree {found_degree}, expected {degree}")
    return Form._raw(found_degree, coeffs, field)


# -- linear algebra on forms ---------------------------------------------------


def multiplication_map(f: Form, d: int) -> LinearMap:
    """Matrix of s -> f*s from degree-d forms to degree-(d + deg f) forms."""
    e = f.degree
    if e < 0:
        raise ValueError("multiplication by a form of negative degree")
    src = _monomials(d)
    tgt_index = monomial_index(d + e)
    field = f.field
    rows = [[field.zero()] * len(src) for _ in range(n_monomials(d + e))]
    for col, (a0, a1, a2) in enumerate(src):
        for (b0, b1, b2), c in f.coeffs.items():
            rows[tgt_index[(a0 + b0, a1 + b1, a2 + b2)]][col] = c
    return LinearMap(rows, field, n_cols=len(src))


def divide(f: Form, g: Form) -> Form | None:
    """Return h with g*h == f, or None if g does not divide f."""
    if g.is_zero():
        return None if not f.is_zero() else Form.zero(0, f.field)
    if f.is_zero():
        return Form.zero(max(f.degree - g.degree, 0), f.field)
    d = f.degree - g.degree
    if d < 0:
        return None
    sol = multiplication_map(g, d).try_solve(f.vector())
    if sol is None:
        return None
    return Form.from_vector(d, sol, f.field)


def are_independent(forms: list[Form]) -> bool:
    """Linear independence of same-degree forms over the base field."""
    if not forms:
        return True
    if any(f.is_zero() for f in forms):
        return False
    degree = forms[0].degree
    if any(f.degree != degree for f in forms):
        raise ValueError("independence test needs forms of one degree")
    m = LinearMap([f.vector() for f in forms], forms[0].field)
    return m.rank() == len(forms)
