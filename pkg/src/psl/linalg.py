"""Dense exact linear algebra over Q and F_p.

Matrices are lists of rows. Over F_p entries are ints in ``range(p)``,
over Q they are Fractions. Everything here is plain Gaussian elimination;
at the sizes this package needs (a few dozen rows) that is fast enough.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .field import FieldSpec, Scalar


class InconsistentSystem(ValueError):
    """``solve`` was asked for a preimage that does not exist."""


class BudgetExceeded(RuntimeError):
    """A subspace enumeration would exceed its configured budget."""

    def __init__(self, bound: int, budget: int):
        super().__init__(f"enumeration needs up to {bound} items, budget is {budget}; use a smaller field")
        self.bound = bound
        self.budget = budget


DEFAULT_BUDGET = 10**5


def _rref(rows: list[list[Scalar]], ncols: int, p: int | None, full: bool = True) -> tuple[list[list[Scalar]], list[int]]:
    """Row-reduce a copy of ``rows``.

    Returns the nonzero rows and their pivot columns. With ``full=False``
    only forward elimination is done (enough for rank).
    """
    rows = [list(r) for r in rows]
    nrows = len(rows)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pr = rows[r]
        lead = pr[c]
        if p is not None:
            if lead != 1:
                inv = pow(lead, -1, p)
                pr = [(x * inv) % p for x in pr]
        elif lead != 1:
            pr = [x / lead for x in pr]
        rows[r] = pr
        start = 0 if full else r + 1
        for i in range(start, nrows):
            if i == r:
                continue
            f = rows[i][c]
            if f:
                ri = rows[i]
                if p is not None:
                    rows[i] = [(a - f * b) % p for a, b in zip(ri, pr)]
                else:
                    rows[i] = [a - f * b for a, b in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def _coerce_rows(rows: Iterable[Iterable], field: FieldSpec) -> list[list[Scalar]]:
    if field.p is None:
        return [[x if isinstance(x, Fraction) else Fraction(x) for x in r] for r in rows]
    p = field.p
    return [[int(x) % p if not isinstance(x, Fraction) else field(x) for x in r] for r in rows]


class LinearMap:
    """An ``n_rows x n_cols`` matrix over a :class:`FieldSpec`.

    Acts on column vectors, so a map from an m-dimensional space to an
    n-dimensional one has n rows and m columns.
    """

    __slots__ = ("rows", "n_rows", "n_cols", "field", "_rank")

    def __init__(self, rows: Sequence[Sequence[Scalar]], field: FieldSpec, n_cols: int | None = None):
        rows = _coerce_rows(rows, field)
        if n_cols is None:
            if not rows:
                raise ValueError("n_cols is required for a matrix with no rows")
            n_cols = len(rows[0])
        for r in rows:
            if len(r) != n_cols:
                raise ValueError(f"row of length {len(r)} in a matrix with {n_cols} columns")
        self.rows = rows
        self.n_rows = len(rows)
        self.n_cols = n_cols
        self.field = field
        self._rank: int | None = None

    @classmethod
    def _trusted(cls, rows: list[list[Scalar]], field: FieldSpec, n_cols: int) -> LinearMap:
        obj = cls.__new__(cls)
        obj.rows = rows
        obj.n_rows = len(rows)
        obj.n_cols = n_cols
        obj.field = field
        obj._rank = None
        return obj

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int, field: FieldSpec) -> LinearMap:
        z = field.zero()
        return cls._trusted([[z] * n_cols for _ in range(n_rows)], field, n_cols)

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> LinearMap:
        m = cls.zeros(n, n, field)
        for i in range(n):
            m.rows[i][i] = field.one()
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def entry(self, i: int, j: int) -> Scalar:
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self.rows == other.rows

    def __repr__(self) -> str:
        return f"LinearMap({self.n_rows}x{self.n_cols} over {self.field})"

    def transpose(self) -> LinearMap:
        cols = [list(c) for c in zip(*self.rows)] if self.n_rows else [[] for _ in range(self.n_cols)]
        return LinearMap._trusted(cols, self.field, self.n_rows)

    def __matmul__(self, other: LinearMap) -> LinearMap:
        if self.n_cols != other.n_rows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        p = self.field.p
        cols = list(zip(*other.rows)) if other.n_rows else [()] * other.n_cols
        out = []
        for r in self.rows:
            row = [sum(a * b for a, b in zip(r, c)) for c in cols]
            if p is not None:
                row = [x % p for x in row]
            else:
                row = [Fraction(x) for x in row]
            out.append(row)
        return LinearMap._trusted(out, self.field, other.n_cols)

    def apply(self, vector: Sequence[Scalar]) -> list[Scalar]:
        if len(vector) != self.n_cols:
            raise ValueError("vector length does not match column count")
        p = self.field.p
        out = [sum(a * b for a, b in zip(r, vector)) for r in self.rows]
        return [x % p for x in out] if p is not None else [Fraction(x) for x in out]

    def scale(self, c: Scalar) -> LinearMap:
        f = self.field
        return LinearMap._trusted([[f.mul(c, x) for x in r] for r in self.rows], f, self.n_cols)

    def rref(self) -> tuple[list[list[Scalar]], list[int]]:
        return _rref(self.rows, self.n_cols, self.field.p)

    def rank(self) -> int:
        if self._rank is None:
            self._rank = len(_rref(self.rows, self.n_cols, self.field.p, full=False)[1])
        return self._rank

    def kernel_basis(self) -> Subspace:
        """Null space in the column coordinate space, as an echelon basis."""
        reduced, pivots = self.rref()
        f = self.field
        pivset = set(pivots)
        vectors = []
        for free in range(self.n_cols):
            if free in pivset:
                continue
            v = [f.zero()] * self.n_cols
            v[free] = f.one()
            for row, pc in zip(reduced, pivots):
                if row[free]:
                    v[pc] = f.neg(row[free])
            vectors.append(v)
        return Subspace.span(vectors, self.n_cols, f)

    def image_basis(self) -> Subspace:
        """Column space, as an echelon basis."""
        return Subspace.span(self.transpose().rows, self.n_rows, self.field)

    def solve(self, vector: Sequence[Scalar]) -> list[Scalar]:
        """One solution x of ``self @ x == vector``; free variables are set to zero.

        Raises:
            InconsistentSystem: if ``vector`` is not in the image.
        """
        if len(vector) != self.n_rows:
            raise ValueError("right-hand side length does not match row count")
        f = self.field
        vec = _coerce_rows([vector], f)[0]
        aug = [r + [b] for r, b in zip(self.rows, vec)]
        reduced, pivots = _rref(aug, self.n_cols + 1, f.p)
        if pivots and pivots[-1] == self.n_cols:
            raise InconsistentSystem("inconsistent")
        x = [f.zero()] * self.n_cols
        for row, pc in zip(reduced, pivots):
            x[pc] = row[-1]
        return x

    def try_solve(self, vector: Sequence[Scalar]) -> list[Scalar] | None:
        try:
            return self.solve(vector)
        except InconsistentSystem:
            return None

    def is_invertible(self) -> bool:
        return self.n_rows == self.n_cols and self.rank() == self.n_rows

    def inverse(self) -> LinearMap:
        if not self.n_rows == self.n_cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.n_rows
        f = self.field
        ident = LinearMap.identity(n, f).rows
        reduced, pivots = _rref([r + e for r, e in zip(self.rows, ident)], 2 * n, f.p)
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return LinearMap._trusted([r[n:] for r in reduced], f, n)


def hstack(maps: Sequence[LinearMap], field: FieldSpec, n_rows: int) -> LinearMap:
    """Place matrices side by side; all must have ``n_rows`` rows."""
    rows = [[] for _ in range(n_rows)]
    n_cols = 0
    for m in maps:
        if m.n_rows != n_rows:
            raise ValueError("row counts differ in hstack")
        for acc, r in zip(rows, m.rows):
            acc.extend(r)
        n_cols += m.n_cols
    return LinearMap._trusted(rows, field, n_cols)


def vstack(maps: Sequence[LinearMap], field: FieldSpec, n_cols: int) -> LinearMap:
    rows = []
    for m in maps:
        if m.n_cols != n_cols:
            raise ValueError("column counts differ in vstack")
        rows.extend(list(r) for r in m.rows)
    return LinearMap._trusted(rows, field, n_cols)


def block_matrix(blocks: Sequence[Sequence[LinearMap]], field: FieldSpec, row_sizes: Sequence[int], col_sizes: Sequence[int]) -> LinearMap:
    """Assemble a block matrix; ``None`` blocks are zero."""
    z = field.zero()
    rows: list[list[Scalar]] = []
    for bi, rs in enumerate(row_sizes):
        band = [[] for _ in range(rs)]
        for bj, cs in enumerate(col_sizes):
            blk = blocks[bi][bj]
            if blk is None:
                for acc in band:
                    acc.extend([z] * cs)
            else:
                if blk.shape != (rs, cs):
                    raise ValueError(f"block ({bi},{bj}) has shape {blk.shape}, expected {(rs, cs)}")
                for acc, r in zip(band, blk.rows):
                    acc.extend(r)
        rows.extend(band)
    return LinearMap._trusted(rows, field, sum(col_sizes))


class Subspace:
    """A subspace of F^n stored by its reduced echelon basis.

    Two subspaces are equal exactly when their bases coincide.
    """

    __slots__ = ("ambient_dim", "basis", "pivots", "field")

    def __init__(self, ambient_dim: int, basis: Sequence[Sequence[Scalar]], pivots: Sequence[int], field: FieldSpec):
        self.ambient_dim = ambient_dim
        self.basis = tuple(tuple(v) for v in basis)
        self.pivots = tuple(pivots)
        self.field = field

    @classmethod
    def span(cls, vectors: Iterable[Sequence[Scalar]], ambient_dim: int, field: FieldSpec) -> Subspace:
        vectors = _coerce_rows(vectors, field)
        reduced, pivots = _rref(vectors, ambient_dim, field.p)
        return cls(ambient_dim, reduced, pivots, field)

    @classmethod
    def zero(cls, ambient_dim: int, field: FieldSpec) -> Subspace:
        return cls(ambient_dim, [], [], field)

    @classmethod
    def full(cls, ambient_dim: int, field: FieldSpec) -> Subspace:
        return cls(ambient_dim, LinearMap.identity(ambient_dim, field).rows, range(ambient_dim), field)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim {self.dim} in {self.ambient_dim}, {[list(v) for v in self.basis]})"

    def contains(self, vector: Sequence[Scalar]) -> bool:
        v = _coerce_rows([vector], self.field)[0]
        f = self.field
        for row, pc in zip(self.basis, self.pivots):
            c = v[pc]
            if c:
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return not any(v)

    def contains_subspace(self, other: Subspace) -> bool:
        return all(self.contains(v) for v in other.basis)

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace.span(list(self.basis) + list(other.basis), self.ambient_dim, self.field)

    def to_json(self) -> list[list[str]]:
        return [[self.field.format(x) for x in v] for v in self.basis]


def gaussian_binomial(m: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^m."""
    if k < 0 or k > m:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (m - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def enumerate_subspaces(m: int, k: int, field: FieldSpec, budget: int = DEFAULT_BUDGET) -> Iterator[Subspace]:
    """Every k-dimensional subspace of F_p^m once, in a fixed order.

    Pivot tuples are visited lexicographically, then free entries in
    lexicographic order of their values.

    Raises:
        BudgetExceeded: if the subspace count exceeds ``budget``.
    """
    if field.p is None:
        raise ValueError("subspace enumeration needs a prime field")
    if k < 0 or k > m:
        return
    p = field.p
    bound = gaussian_binomial(m, k, p)
    if bound > budget:
        raise BudgetExceeded(bound, budget)
    yield from _subspaces_unchecked(m, k, p, field)


def _subspaces_unchecked(m: int, k: int, p: int, field: FieldSpec) -> Iterator[Subspace]:
    for pivots in itertools.combinations(range(m), k):
        pivset = set(pivots)
        free = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, m) if c not in pivset]
        for values in itertools.product(range(p), repeat=len(free)):
            basis = [[0] * m for _ in range(k)]
            for i, pc in enumerate(pivots):
                basis[i][pc] = 1
            for (i, c), v in zip(free, values):
                basis[i][c] = v
            yield Subspace(m, basis, pivots, field)


def all_subspaces(m: int, field: FieldSpec, budget: int = DEFAULT_BUDGET, include_zero: bool = True) -> list[Subspace]:
    """All subspaces of F_p^m, by increasing dimension."""
    if field.p is None:
        raise ValueError("subspace enumeration needs a prime field")
    total = sum(gaussian_binomial(m, k, field.p) for k in range(m + 1))
    if total > budget:
        raise BudgetExceeded(total, budget)
    out = []
    for k in range(0 if include_zero else 1, m + 1):
        out.extend(_subspaces_unchecked(m, k, field.p, field))
    return out


def random_invertible(n: int, field: FieldSpec, rng) -> LinearMap:
    """Rejection-sample an invertible n x n matrix."""
    while True:
        m = LinearMap([[field.random(rng) for _ in range(n)] for _ in range(n)], field)
        if m.is_invertible():
            return m
