"""Exception types shared across the package."""

from __future__ import annotations

from .linalg import BudgetExceeded, InconsistentSystem  # noqa: F401  (re-exported)


class PSLError(Exception):
    pass


class DegreeMismatch(PSLError, ValueError):
    def __init__(self, i: int, j: int, expected: int, found: int):
        super().__init__(f"entry ({i},{j}) has degree {found}, expected {expected}")
        self.i, self.j, self.expected, self.found = i, j, expected, found


class NotOneDimensional(PSLError, ValueError):
    pass


class NotSquare(PSLError, ValueError):
    pass


class NotInjective(PSLError, ValueError):
    pass


class ZeroForm(PSLError, ValueError):
    pass


class DependentForms(PSLError, ValueError):
    def __init__(self, names: tuple[str, str]):
        super().__init__(f"{names[0]} and {names[1]} are linearly dependent")
        self.names = names


class DegeneratePoint(PSLError, ValueError):
    pass


class ShapeMismatch(PSLError, ValueError):
    pass


class NegativeDimension(PSLError, ArithmeticError):
    pass


class InconsistentMonad(PSLError, ArithmeticError):
    def __init__(self, lhs, rhs):
        super().__init__(f"monad Euler characteristic {lhs} differs from Hilbert polynomial {rhs}")
        self.lhs, self.rhs = lhs, rhs


class MalformedPolarization(PSLError, ValueError):
    pass


class ModeUnavailable(PSLError, ValueError):
    pass


class OutOfStratum(PSLError, ValueError):
    pass


class SingularGroupElement(PSLError, ValueError):
    pass


class NoMatchingStratum(PSLError):
    """The computed cohomology triple is absent from the table for (4, chi)."""

    def __init__(self, chi: int, triple: tuple[int, int, int]):
        super().__init__(f"no stratum of M(4,{chi}) has triple {triple}")
        self.chi, self.triple = chi, triple


class GenericityExhausted(PSLError, RuntimeError):
    def __init__(self, predicate: str, tries: int):
        super().__init__(f"predicate {predicate!r} failed {tries} times in a row")
        self.predicate, self.tries = predicate, tries
