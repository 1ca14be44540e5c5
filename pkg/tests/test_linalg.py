import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from psl.field import QQ, FieldSpec
from psl.harness import trial_rng
from psl.linalg import (
    BudgetExceeded,
    InconsistentSystem,
    LinearMap,
    Subspace,
    all_subspaces,
    block_matrix,
    enumerate_subspaces,
    gaussian_binomial,
    hstack,
    random_invertible,
    vstack,
)

from strategies import fields, matrices, prime_fields, seeds

F2, F3, F5 = FieldSpec(2), FieldSpec(3), FieldSpec(5)


def test_identity_rank_and_kernel():
    ident = LinearMap.identity(3, QQ)
    assert ident.rank() == 3
    assert ident.kernel_basis().dim == 0


def test_zero_map_kernel():
    assert LinearMap.zeros(2, 5, F3).kernel_basis().dim == 5


def test_rank_invariant_under_row_operations():
    rng = trial_rng(7)
    for _ in range(20):
        m = LinearMap([[F5.random(rng) for _ in range(6)] for _ in range(4)], F5)
        g = random_invertible(4, F5, rng)
        assert (g @ m).rank() == m.rank()


def test_solve_and_inconsistent():
    m = LinearMap([[1, 2], [2, 4]], QQ)
    x = m.solve([3, 6])
    assert m.apply(x) == [3, 6]
    with pytest.raises(InconsistentSystem, match="inconsistent"):
        m.solve([1, 0])
    assert m.try_solve([1, 0]) is None


def test_inverse_round_trip_over_q():
    m = LinearMap([[2, 1], [Fraction(1, 2), 3]], QQ)
    assert m @ m.inverse() == LinearMap.identity(2, QQ)
    with pytest.raises(ZeroDivisionError):
        LinearMap([[1, 2], [2, 4]], QQ).inverse()


def test_kernel_and_image_are_echelon_canonical():
    m = LinearMap([[1, 1, 0], [0, 0, 1], [1, 1, 1]], F3)
    ker = m.kernel_basis()
    assert ker.basis == ((1, 2, 0),)
    img = m.image_basis()
    assert img == Subspace.span([[1, 0, 1], [0, 1, 1]], 3, F3)


def test_stacking():
    a = LinearMap([[1, 2]], QQ)
    b = LinearMap([[3]], QQ)
    assert hstack([a, b], QQ, 1).rows == [[1, 2, 3]]
    assert vstack([a, a], QQ, 2).shape == (2, 2)
    blk = block_matrix([[a, None], [None, b]], QQ, [1, 1], [2, 1])
    assert blk.rows == [[1, 2, 0], [0, 0, 3]]
    with pytest.raises(ValueError):
        block_matrix([[b]], QQ, [1], [2])


def test_subspace_operations():
    U = Subspace.span([[1, 0, 0]], 3, F2)
    V = Subspace.span([[0, 1, 1]], 3, F2)
    W = U + V
    assert W.dim == 2
    assert W.contains([1, 1, 1])
    assert not W.contains([0, 0, 1])
    assert W.contains_subspace(U)
    assert Subspace.full(3, F2).dim == 3
    assert Subspace.zero(3, F2).dim == 0


@pytest.mark.parametrize("m,k,q,count", [(2, 1, 2, 3), (4, 2, 2, 35), (3, 0, 2, 1)])
def test_subspace_examples(m, k, q, count):
    subs = list(enumerate_subspaces(m, k, FieldSpec(q)))
    assert len(subs) == count
    if k == 0:
        assert subs[0].dim == 0


def _ordered_bases(m, k, q):
    # independent oracle: ordered independent k-tuples over |GL_k|
    num = den = 1
    for i in range(k):
        num *= q**m - q**i
        den *= q**k - q**i
    return num // den


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("m", [0, 1, 2, 3, 4])
def test_counts_match_gaussian_binomial(m, q):
    k_field = FieldSpec(q)
    for k in range(m + 1):
        subs = list(enumerate_subspaces(m, k, k_field))
        assert len(subs) == gaussian_binomial(m, k, q) == _ordered_bases(m, k, q)
        assert len(set(subs)) == len(subs)
        assert all(s.dim == k for s in subs)


def test_brute_force_spans_over_f2():
    # every 2-dim subspace of F_2^4 arises as a span of two vectors, and only those
    vecs = list(itertools.product(range(2), repeat=4))
    spans = {Subspace.span([u, v], 4, F2) for u, v in itertools.combinations(vecs, 2)}
    spans = {s for s in spans if s.dim == 2}
    assert spans == set(enumerate_subspaces(4, 2, F2))


def test_budget_exceeded_carries_bound():
    with pytest.raises(BudgetExceeded) as info:
        list(enumerate_subspaces(4, 2, F3, budget=10))
    assert info.value.bound == gaussian_binomial(4, 2, 3)
    with pytest.raises(BudgetExceeded):
        all_subspaces(4, F3, budget=10)


def test_enumeration_needs_prime_field():
    with pytest.raises(ValueError):
        list(enumerate_subspaces(2, 1, QQ))


@given(st.data())
def test_rank_nullity(data):
    k = data.draw(fields)
    m = data.draw(matrices(k))
    assert m.rank() + m.kernel_basis().dim == m.n_cols
    assert m.image_basis().dim == m.rank()
    for v in m.kernel_basis().basis:
        assert not any(m.apply(list(v)))


@given(st.data())
def test_transpose_preserves_rank(data):
    k = data.draw(fields)
    m = data.draw(matrices(k))
    assert m.transpose().rank() == m.rank()


@given(prime_fields, seeds)
def test_random_invertible_is_invertible(k, seed):
    g = random_invertible(3, k, trial_rng(seed))
    assert g @ g.inverse() == LinearMap.identity(3, k)
