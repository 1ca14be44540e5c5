"""Exact base fields: the rationals and prime fields F_p with p <= 97."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

Scalar = Union[int, Fraction]

MAX_PRIME = 97


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either ``FieldSpec(None)`` for Q or ``FieldSpec(p)`` for F_p.

    Prime-field elements are plain ints in ``range(p)``; rationals are
    :class:`fractions.Fraction`.
    """

    p: int | None = None

    def __post_init__(self) -> None:
        if self.p is not None:
            if not _is_prime(self.p) or self.p > MAX_PRIME:
                raise ValueError(f"prime field characteristic must be a prime <= {MAX_PRIME}, got {self.p}")

    @classmethod
    def rationals(cls) -> FieldSpec:
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> FieldSpec:
        return cls(p)

    @property
    def is_prime_field(self) -> bool:
        return self.p is not None

    @property
    def order(self) -> int | None:
        return self.p

    def __str__(self) -> str:
        return "Q" if self.p is None else f"F{self.p}"

    # -- element handling -------------------------------------------------

    def zero(self) -> Scalar:
        return 0 if self.p is not None else Fraction(0)

    def one(self) -> Scalar:
        return 1 if self.p is not None else Fraction(1)

    def __call__(self, value: Any) -> Scalar:
        """Coerce an int, Fraction or ``"a/b"`` string into the field."""
        if isinstance(value, str):
            value = Fraction(value.strip())
        if self.p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            num = value.numerator % self.p
            den = value.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"{value} has no image in F{self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        return (a + b) % self.p if self.p is not None else a + b

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        return (a - b) % self.p if self.p is not None else a - b

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        return (a * b) % self.p if self.p is not None else a * b

    def neg(self, a: Scalar) -> Scalar:
        return (-a) % self.p if self.p is not None else -a

    def inv(self, a: Scalar) -> Scalar:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(int(a), -1, self.p) if self.p is not None else 1 / Fraction(a)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def elements(self) -> list[int]:
        if self.p is None:
            raise ValueError("Q is infinite")
        return list(range(self.p))

    def format(self, a: Scalar) -> str:
        if self.p is not None:
            return str(int(a))
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def random(self, rng, nonzero: bool = False) -> Scalar:
        """Uniform in F_p, or an integer in [-9, 9] for Q."""
        while True:
            if self.p is None:
                value: Scalar = Fraction(int(rng.integers(-9, 10)))
            else:
                value = int(rng.integers(0, self.p))
            if not nonzero or value != 0:
                return value

    # -- serialization ----------------------------------------------------

    def to_json(self) -> Any:
        return "Q" if self.p is None else {"Fp": self.p}

    @classmethod
    def from_json(cls, data: Any) -> FieldSpec:
        if data == "Q":
            return cls(None)
        if isinstance(data, dict) and "Fp" in data:
            return cls(int(data["Fp"]))
        if isinstance(data, str):
            return parse_field(data)
        raise ValueError(f"unrecognized field {data!r}")


QQ = FieldSpec(None)


def parse_field(text: str) -> FieldSpec:
    """Parse ``Q``, ``QQ``, ``F7`` or ``GF7``."""
    t = text.strip().upper()
    if t in ("Q", "QQ"):
        return QQ
    for prefix in ("GF", "F"):
        if t.startswith(prefix) and t[len(prefix):].isdigit():
            return FieldSpec(int(t[len(prefix):]))
    raise ValueError(f"unrecognized field {text!r}; use Q or Fp such as F7")
