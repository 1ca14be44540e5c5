"""Stability of Kronecker modules and of morphisms between sums of line bundles.

Everything exhaustive runs over prime fields by enumerating subspaces; the
subspace order is deterministic so the first violation found is also the
reported witness.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Sequence

from .errors import MalformedPolarization, ModeUnavailable, OutOfStratum, ShapeMismatch
from .field import FieldSpec
from .forms import Form, are_independent, divide, format_form, monomial_index
from .linalg import DEFAULT_BUDGET, BudgetExceeded, LinearMap, Subspace, all_subspaces, gaussian_binomial, random_invertible
from .presentation import SheafMorphism, maximal_minors


class Status(str, enum.Enum):
    STABLE = "stable"
    STRICTLY_SEMISTABLE = "strictly_semistable"
    SEMISTABLE = "semistable"
    UNSTABLE = "unstable"
    NO_INSTABILITY_FOUND = "no_instability_found"

    @property
    def semistable(self) -> bool:
        return self is not Status.UNSTABLE


@dataclass(frozen=True)
class StabilityVerdict:
    status: Status
    witness: dict | None = None
    field: str = ""
    detail: dict = dc_field(default_factory=dict)

    @property
    def is_stable(self) -> bool:
        return self.status is Status.STABLE

    def to_json(self) -> dict:
        out: dict[str, Any] = {"status": self.status.value, "field": self.field}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.detail:
            out["detail"] = self.detail
        return out


# -- Kronecker modules ------------------------------------------------------


@dataclass(frozen=True)
class KroneckerModule:
    """``tau: F^m (x) L -> F^n`` as ``q = dim L`` matrices of shape ``n x m``."""

    m: int
    n: int
    slices: tuple[LinearMap, ...]
    field: FieldSpec

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1 or not self.slices:
            raise ValueError("Kronecker module needs m, n >= 1 and at least one slice")
        for s in self.slices:
            if s.shape != (self.n, self.m) or s.field != self.field:
                raise ValueError("all slices must be n x m over one field")

    @property
    def q(self) -> int:
        return len(self.slices)

    def image_span(self, H: Subspace) -> Subspace:
        vectors = [s.apply(list(h)) for s in self.slices for h in H.basis]
        return Subspace.span(vectors, self.n, self.field)

    def transform(self, g_source: LinearMap, g_target: LinearMap) -> KroneckerModule:
        """``g_target o tau o g_source^-1`` slice by slice."""
        inv = g_source.inverse()
        return KroneckerModule(self.m, self.n, tuple(g_target @ s @ inv for s in self.slices), self.field)

    def scale(self, c) -> KroneckerModule:
        return KroneckerModule(self.m, self.n, tuple(s.scale(c) for s in self.slices), self.field)


def coefficient_slices(entries: Sequence[Sequence[Form]], degree: int, field: FieldSpec) -> list[LinearMap]:
    """One scalar matrix per monomial of ``degree``: its coefficients in each entry."""
    index = monomial_index(degree)
    n_rows, n_cols = len(entries), len(entries[0])
    mats = [[[field.zero()] * n_cols for _ in range(n_rows)] for _ in index]
    for i, row in enumerate(entries):
        for j, e in enumerate(row):
            for mono, c in e.coeffs.items():
                mats[index[mono]][i][j] = c
    return [LinearMap(m, field, n_cols=n_cols) for m in mats]


def kronecker_from_morphism(phi: SheafMorphism) -> KroneckerModule:
    """Kronecker module of ``m O(a) -> n O(b)``; L is the space of degree b - a forms."""
    if len(set(phi.source)) != 1 or len(set(phi.target)) != 1:
        raise ShapeMismatch("Kronecker modules need a single source twist and a single target twist")
    e = phi.target[0] - phi.source[0]
    if e < 1:
        raise ShapeMismatch("entries must have positive degree")
    return KroneckerModule(phi.n_cols, phi.n_rows, tuple(coefficient_slices(phi.entries, e, phi.field)), phi.field)


def _require_prime(field: FieldSpec) -> None:
    if field.p is None:
        raise ModeUnavailable("exhaustive subspace enumeration needs a prime field")


def kronecker_semistable(tau: KroneckerModule, budget: int = DEFAULT_BUDGET) -> StabilityVerdict:
    """Subspace test: ``dim K / dim H >= n / m`` (``>`` for stable).

    ``K`` is taken minimal, the span of all slice images of ``H``. The pair
    (whole space, whole space) is not a test case.
    """
    _require_prime(tau.field)
    m, n = tau.m, tau.n
    equality = None
    for H in all_subspaces(m, tau.field, budget, include_zero=False):
        K = tau.image_span(H)
        if H.dim == m and K.dim == n:
            continue
        lhs, rhs = K.dim * m, n * H.dim
        if lhs < rhs:
            return StabilityVerdict(Status.UNSTABLE, _hk_witness(H, K), str(tau.field))
        if lhs == rhs and equality is None:
            equality = (H, K)
    if equality is not None:
        return StabilityVerdict(Status.STRICTLY_SEMISTABLE, _hk_witness(*equality), str(tau.field))
    return StabilityVerdict(Status.STABLE, None, str(tau.field))


def _hk_witness(H: Subspace, K: Subspace) -> dict:
    return {"H": H.to_json(), "K": K.to_json(), "dim_H": H.dim, "dim_K": K.dim}


def verify_kronecker_witness(tau: KroneckerModule, verdict: StabilityVerdict) -> bool:
    """Recheck inclusion and slope for a reported (H, K) from scratch."""
    w = verdict.witness
    if w is None:
        return verdict.status in (Status.STABLE, Status.SEMISTABLE, Status.NO_INSTABILITY_FOUND)
    k = tau.field
    H = Subspace.span([[k(x) for x in v] for v in w["H"]], tau.m, k)
    K = Subspace.span([[k(x) for x in v] for v in w["K"]], tau.n, k)
    if H.dim == 0 or not all(K.contains(s.apply(list(h))) for s in tau.slices for h in H.basis):
        return False
    lhs, rhs = K.dim * tau.m, tau.n * H.dim
    if verdict.status is Status.UNSTABLE:
        return lhs < rhs
    if verdict.status is Status.STRICTLY_SEMISTABLE:
        return lhs == rhs and not (H.dim == tau.m and K.dim == tau.n)
    return False


def kronecker_moduli_dim(q: int, m: int, n: int) -> int | None:
    """``qmn - m^2 - n^2 + 1`` when the Kronecker moduli space is positive dimensional.

    The condition ``x_q < m/n < 1/x_q`` on the roots of ``X^2 - qX + 1``
    is equivalent to ``m^2 - qmn + n^2 < 0``. Returns ``None`` otherwise.
    """
    if q < 1 or m < 1 or n < 1:
        raise ValueError("q, m, n must be positive")
    excess = q * m * n - m * m - n * n
    return excess + 1 if excess > 0 else None


def maximal_minors_nonzero(phi: SheafMorphism) -> bool:
    return all(not f.is_zero() for f in maximal_minors(phi))


def minors_criterion_23(phi: SheafMorphism) -> bool:
    """Stability test for ``2O(-1) -> 3O`` through the maximal minors.

    Returns True iff the three quadratic minors are linearly independent.
    Mere non-vanishing of each minor is not invariant under row operations
    (see :func:`maximal_minors_nonzero`), independence is, and it matches
    the Kronecker subspace test exactly.
    """
    if phi.n_rows != 3 or phi.n_cols != 2 or len(set(phi.source)) != 1 or len(set(phi.target)) != 1:
        raise ShapeMismatch("expected a 3x2 matrix 2O(a) -> 3O(a+1)")
    if phi.target[0] - phi.source[0] != 1:
        raise ShapeMismatch("expected linear entries")
    return are_independent(maximal_minors(phi))


def reducibility_44(phi: SheafMorphism, budget: int = DEFAULT_BUDGET) -> StabilityVerdict:
    """Stability of ``coker(4O(-1) -> 4O)`` via its Kronecker module.

    A destabilizing H of dimension k with dim K <= k is the same thing as a
    row/column change putting phi in block form with a zero k x (4-k) corner.
    """
    if phi.n_rows != 4 or phi.n_cols != 4 or set(phi.source) != {phi.source[0]} or set(phi.target) != {phi.source[0] + 1}:
        raise ShapeMismatch("expected 4O(a) -> 4O(a+1) with linear entries")
    return kronecker_semistable(kronecker_from_morphism(phi), budget)


def stability_5C(phi: SheafMorphism) -> StabilityVerdict:
    """``O(-2)+O(-1) -> O+O(1)``: not stable iff phi12 divides phi11 or phi22.

    phi12 is the linear entry, phi11 and phi22 are the two quadratic ones.
    """
    if phi.source != (phi.source[0], phi.source[0] + 1) or phi.target != (phi.source[0] + 2, phi.source[0] + 3):
        raise ShapeMismatch("expected O(a)+O(a+1) -> O(a+2)+O(a+3)")
    p11, p12, p22 = phi.entry(0, 0), phi.entry(0, 1), phi.entry(1, 1)
    if p12.is_zero():
        raise OutOfStratum("phi12 = 0 is outside this stratum")
    for name, target in (("phi11", p11), ("phi22", p22)):
        quotient = divide(target, p12)
        if quotient is not None:
            return StabilityVerdict(
                Status.STRICTLY_SEMISTABLE,
                {"divides": name, "phi12": format_form(p12), "quotient": format_form(quotient)},
                str(phi.field),
            )
    return StabilityVerdict(Status.STABLE, None, str(phi.field))


# -- polarized morphisms ----------------------------------------------------


def block_structure(twists: Sequence[int]) -> list[tuple[int, int]]:
    """Group consecutive equal twists into (twist, multiplicity) blocks."""
    out: list[tuple[int, int]] = []
    for t in twists:
        if out and out[-1][0] == t:
            out[-1] = (t, out[-1][1] + 1)
        else:
            out.append((t, 1))
    return out


@dataclass(frozen=True)
class Polarization:
    """Weights for source blocks (lambdas) and target blocks (mus)."""

    lambdas: tuple[Fraction, ...]
    mus: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lambdas", tuple(Fraction(x) for x in self.lambdas))
        object.__setattr__(self, "mus", tuple(Fraction(x) for x in self.mus))
        if any(x <= 0 for x in self.lambdas + self.mus):
            raise MalformedPolarization("polarization weights must be positive")

    def check(self, ms: Sequence[int], ns: Sequence[int]) -> None:
        if len(ms) != len(self.lambdas) or len(ns) != len(self.mus):
            raise MalformedPolarization(
                f"polarization has {len(self.lambdas)}+{len(self.mus)} weights for {len(ms)}+{len(ns)} blocks"
            )
        if sum(l * m for l, m in zip(self.lambdas, ms)) != 1 or sum(u * n for u, n in zip(self.mus, ns)) != 1:
            raise MalformedPolarization("weights must satisfy sum lambda_i m_i = sum mu_j n_j = 1")

    def to_json(self) -> list[str]:
        return [str(x) for x in self.lambdas + self.mus]


def parse_polarization(text: str, n_source_blocks: int) -> Polarization:
    values = [Fraction(t.strip()) for t in text.split(",") if t.strip()]
    return Polarization(tuple(values[:n_source_blocks]), tuple(values[n_source_blocks:]))


def polarization_42(mu: Fraction = Fraction(2, 5)) -> Polarization:
    """((1-mu)/2, mu, mu, (1-mu)/2) for ``2O(-2)+O(-1) -> O(-1)+2O``."""
    mu = Fraction(mu)
    return Polarization(((1 - mu) / 2, mu), (mu, (1 - mu) / 2))


class _BlockData:
    """Coefficient slices of phi between source block i and target block j."""

    def __init__(self, phi: SheafMorphism):
        self.phi = phi
        self.field = phi.field
        self.src = block_structure(phi.source)
        self.tgt = block_structure(phi.target)
        self.ms = [m for _, m in self.src]
        self.ns = [n for _, n in self.tgt]
        src_off = list(itertools.accumulate([0] + self.ms))
        tgt_off = list(itertools.accumulate([0] + self.ns))
        self.slices: dict[tuple[int, int], list[LinearMap]] = {}
        for i, (a, m) in enumerate(self.src):
            for j, (b, n) in enumerate(self.tgt):
                e = b - a
                if e < 0:
                    continue
                sub = [[phi.entries[r][c] for c in range(src_off[i], src_off[i] + m)] for r in range(tgt_off[j], tgt_off[j] + n)]
                mats = [s for s in coefficient_slices(sub, e, self.field) if any(any(row) for row in s.rows)]
                if mats:
                    self.slices[(i, j)] = mats

    def minimal_targets(self, Ms: Sequence[Subspace]) -> list[Subspace]:
        out = []
        for j, n in enumerate(self.ns):
            vecs = []
            for i, M in enumerate(Ms):
                for s in self.slices.get((i, j), ()):
                    vecs.extend(s.apply(list(v)) for v in M.basis)
            out.append(Subspace.span(vecs, n, self.field))
        return out

    def subspace_tuples(self, budget: int) -> list[tuple[Subspace, ...]]:
        p = self.field.p
        total = 1
        for m in self.ms:
            total *= sum(gaussian_binomial(m, k, p) for k in range(m + 1))
        if total > budget:
            raise BudgetExceeded(total, budget)
        per_block = [all_subspaces(m, self.field, budget) for m in self.ms]
        return [t for t in itertools.product(*per_block) if any(M.dim for M in t)]


def _mn_witness(Ms: Sequence[Subspace], Ns: Sequence[Subspace]) -> dict:
    return {
        "M": [M.to_json() for M in Ms],
        "N": [N.to_json() for N in Ns],
        "dims": [[M.dim for M in Ms], [N.dim for N in Ns]],
    }


def gred_semistable(phi: SheafMorphism, sigma: Polarization, budget: int = DEFAULT_BUDGET) -> StabilityVerdict:
    """Polarized semistability under the reductive part of the automorphism group.

    For every tuple of subspaces ``M_i`` the smallest ``N_j`` receiving
    ``phi(sum E_i (x) M_i)`` is computed; when some ``N_j`` is proper the
    inequality ``sum lambda_i dim M_i <= sum mu_j dim N_j`` is tested
    (strictly for stability).
    """
    _require_prime(phi.field)
    data = _BlockData(phi)
    sigma.check(data.ms, data.ns)
    equality = None
    for Ms in data.subspace_tuples(budget):
        Ns = data.minimal_targets(Ms)
        if all(N.dim == n for N, n in zip(Ns, data.ns)):
            continue
        lhs = sum(l * M.dim for l, M in zip(sigma.lambdas, Ms))
        rhs = sum(u * N.dim for u, N in zip(sigma.mus, Ns))
        if lhs > rhs:
            return StabilityVerdict(Status.UNSTABLE, _mn_witness(Ms, Ns), str(phi.field))
        if lhs == rhs and equality is None:
            equality = (Ms, Ns)
    if equality is not None:
        return StabilityVerdict(Status.STRICTLY_SEMISTABLE, _mn_witness(*equality), str(phi.field))
    return StabilityVerdict(Status.STABLE, None, str(phi.field))


def verify_gred_witness(phi: SheafMorphism, sigma: Polarization, verdict: StabilityVerdict) -> bool:
    w = verdict.witness
    if w is None:
        return verdict.status is not Status.UNSTABLE
    data = _BlockData(phi)
    k = phi.field
    Ms = [Subspace.span([[k(x) for x in v] for v in basis], m, k) for basis, m in zip(w["M"], data.ms)]
    Ns = [Subspace.span([[k(x) for x in v] for v in basis], n, k) for basis, n in zip(w["N"], data.ns)]
    if not any(M.dim for M in Ms) or all(N.dim == n for N, n in zip(Ns, data.ns)):
        return False
    for N, N_min in zip(Ns, data.minimal_targets(Ms)):
        if not N.contains_subspace(N_min):
            return False
    lhs = sum(l * M.dim for l, M in zip(sigma.lambdas, Ms))
    rhs = sum(u * N.dim for u, N in zip(sigma.mus, Ns))
    if verdict.status is Status.UNSTABLE:
        return lhs > rhs
    return lhs == rhs


# Configurations (dim M1, dim M2) -> (dim N1, dim N2) that destabilize the
# 2O(-2)+O(-1) -> O(-1)+2O shape for every mu in (1/3, 1/2).
FORBIDDEN_42 = (
    ((2, 0), (1, 0)),
    ((2, 0), (0, 1)),
    ((0, 1), (0, 1)),
    ((1, 1), (0, 2)),
    ((1, 1), (1, 0)),
    ((1, 0), (0, 0)),
    ((0, 1), (0, 0)),
)

SHAPE_42 = ((-2, -2, -1), (-1, 0, 0))


def _is_shape_42(phi: SheafMorphism) -> bool:
    a = phi.source[0] + 2
    return phi.source == tuple(x + a for x in SHAPE_42[0]) and phi.target == tuple(x + a for x in SHAPE_42[1])


def _exact_list(phi: SheafMorphism, budget: int) -> StabilityVerdict:
    data = _BlockData(phi)
    for Ms in data.subspace_tuples(budget):
        Ns = data.minimal_targets(Ms)
        dm = (Ms[0].dim, Ms[1].dim)
        dn = (Ns[0].dim, Ns[1].dim)
        for fm, fn in FORBIDDEN_42:
            if dm == fm and dn[0] <= fn[0] and dn[1] <= fn[1]:
                w = _mn_witness(Ms, Ns)
                w["configuration"] = [list(fm), list(fn)]
                return StabilityVerdict(Status.UNSTABLE, w, str(phi.field), {"mode": "exact"})
    return StabilityVerdict(Status.SEMISTABLE, None, str(phi.field), {"mode": "exact"})


def random_automorphism(twists: Sequence[int], field: FieldSpec, rng, unipotent: bool = False) -> SheafMorphism:
    """Random automorphism of ``sum O(t)``.

    Entries from lower twists to higher twists are random forms; the
    diagonal blocks are identities (``unipotent``) or random invertible
    matrices.
    """
    blocks = block_structure(twists)
    n = len(twists)
    rows: list[list[Any]] = [[0] * n for _ in range(n)]
    for i, ti in enumerate(twists):
        for j, tj in enumerate(twists):
            if ti > tj:
                rows[i][j] = Form.random(ti - tj, field, rng)
    off = 0
    for t, m in blocks:
        if unipotent:
            g = LinearMap.identity(m, field)
        else:
            g = random_invertible(m, field, rng)
        for r in range(m):
            for c in range(m):
                rows[off + r][off + c] = Form.constant(g.rows[r][c], field) if g.rows[r][c] else Form.zero(0, field)
        off += m
    return SheafMorphism(twists, twists, rows, field)


def g_semistable(
    phi: SheafMorphism,
    sigma: Polarization | None = None,
    mode: str = "exact",
    samples: int = 200,
    rng=None,
    budget: int = DEFAULT_BUDGET,
) -> StabilityVerdict:
    """Semistability under the full (non-reductive) group.

    ``mode="exact"`` applies the finite list of forbidden configurations and
    is only available for ``2O(-2)+O(-1) -> O(-1)+2O`` with a polarization
    in the open range (1/3, 1/2). ``mode="mc"`` runs :func:`gred_semistable`
    on ``samples`` random unipotent translates; it can only ever prove
    instability.
    """
    _require_prime(phi.field)
    if mode == "exact":
        if not _is_shape_42(phi):
            raise ModeUnavailable("exact-list mode is only available for 2O(-2)+O(-1) -> O(-1)+2O")
        if sigma is not None:
            sigma.check([2, 1], [1, 2])
            mu = sigma.lambdas[1]
            if sigma != polarization_42(mu) or not Fraction(1, 3) < mu < Fraction(1, 2):
                raise ModeUnavailable("exact-list mode needs ((1-mu)/2, mu, mu, (1-mu)/2) with 1/3 < mu < 1/2")
        return _exact_list(phi, budget)
    if mode != "mc":
        raise ModeUnavailable(f"unknown mode {mode!r}")
    if sigma is None:
        raise MalformedPolarization("monte-carlo mode needs a polarization")
    if rng is None:
        raise ValueError("monte-carlo mode needs a random generator")
    for t in range(samples):
        g_src = random_automorphism(phi.source, phi.field, rng, unipotent=True)
        g_tgt = random_automorphism(phi.target, phi.field, rng, unipotent=True)
        translate = g_tgt.compose(phi).compose(g_src)
        verdict = gred_semistable(translate, sigma, budget)
        if verdict.status is Status.UNSTABLE:
            w = dict(verdict.witness or {})
            w["translate"] = translate.to_json()
            w["sample"] = t
            return StabilityVerdict(Status.UNSTABLE, w, str(phi.field), {"mode": "mc", "samples": t + 1})
    return StabilityVerdict(Status.NO_INSTABILITY_FOUND, None, str(phi.field), {"mode": "mc", "samples": samples})
