from fractions import Fraction

import pytest
from hypothesis import given

from psl.atlas import (
    STRATA,
    STRATA_BY_ID,
    GroupElement42,
    QuadricPair,
    act,
    aut_dimension,
    classify,
    delta_map,
    dual_shape,
    duality_stratum_map,
    hom_dimension,
    normalizing_twist,
    random_group_element,
    random_w,
    strata_for,
    stratum_dimension_audit,
    tau_group_map,
    vanishing_bounds,
)
from psl.cohomology import beilinson_table
from psl.constructors import make_OC
from psl.errors import NoMatchingStratum, ShapeMismatch, SingularGroupElement
from psl.field import QQ, FieldSpec
from psl.forms import Form, parse_form
from psl.harness import sample_stratum, trial_rng
from psl.linalg import LinearMap
from psl.presentation import SheafMorphism, SheafPresentation
from psl.stability import Status, g_semistable

from strategies import seeds

F7 = FieldSpec(7)


def test_table_has_rows_per_moduli_space():
    assert [len(strata_for(chi)) for chi in (1, 2, 3, 4)] == [2, 3, 2, 2]
    assert len(STRATA) == 9


@pytest.mark.parametrize("r,chi,n", [(4, 1, 0), (4, 4, 0), (4, 5, -1), (4, 0, 1), (4, -2, 1), (4, -4, 2), (3, 7, -2)])
def test_normalizing_twist(r, chi, n):
    assert normalizing_twist(r, chi) == n
    assert 0 < chi + r * n <= r


def test_classify_examples():
    rep = classify(sample_stratum("X0(4,2)", F7, trial_rng(1)).phi)
    assert (rep.stratum.id, rep.triple, rep.stratum.codim) == ("X0(4,2)", (0, 0, 0), 0)
    rep = classify(make_OC(parse_form("x0^4 + x1^3*x2 + x2^4", F7), 1))
    assert (rep.stratum.id, rep.triple, rep.stratum.codim) == ("X2(4,2)", (1, 1, 3), 3)
    rep = classify(sample_stratum("X0(4,4)", F7, trial_rng(2)))
    assert (rep.stratum.id, rep.triple, rep.stratum.codim, rep.shape_match) == ("X0(4,4)", (0, 0, 4), 0, True)


def test_classify_normalizes_chi():
    F = sample_stratum("X1(4,3)", F7, trial_rng(3))
    rep = classify(F.twist(2))
    assert rep.stratum.id == "X1(4,3)" and rep.twist == -2


def test_classify_rejects_other_multiplicity():
    with pytest.raises(ValueError):
        classify(make_OC(parse_form("x0^3 + x1^3 + x2^3", F7)))


def test_classify_non_matching_triple():
    # O_L(2) + O_E for a line L and a cubic E: chi = 3, destabilized by O_L(2)
    phi = SheafMorphism((1, -3), (2, 0), [["x0", 0], [0, "x0^3 + x1^3 + x2^3"]], F7)
    with pytest.raises(NoMatchingStratum) as info:
        classify(phi)
    assert (info.value.chi, info.value.triple) == (3, (2, 1, 5))


def test_delta_degenerates_to_Q():
    rng = trial_rng(4)
    Q = [[Form.random(2, F7, rng) for _ in range(2)] for _ in range(2)]
    w = SheafMorphism((-2, -2, -1), (-1, 0, 0), [[0, 0, "1"], [Q[0][0], Q[0][1], 0], [Q[1][0], Q[1][1], 0]], F7)
    assert delta_map(w) == QuadricPair(((Q[0][0], Q[0][1]), (Q[1][0], Q[1][1])))


def test_delta_without_constant_has_rank_one():
    rng = trial_rng(5)
    for _ in range(10):
        w = random_w(F7, rng)
        rows = [list(r) for r in w.entries]
        rows[0][2] = Form.zero(0, F7)
        w = SheafMorphism(w.source, w.target, rows, F7)
        d = delta_map(w).entries
        # outer product -Y X: the 2x2 determinant vanishes identically
        assert (d[0][0] * d[1][1] - d[0][1] * d[1][0]).is_zero()


def test_delta_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        delta_map(SheafMorphism((-2, -2), (0, 0), [["x0^2", 0], [0, "x1^2"]], F7))


def _group(alpha, beta, A, B, k=QQ):
    z = Form.zero(1, k)
    return GroupElement42(alpha, beta, LinearMap(A, k), LinearMap(B, k), (z, z), (z, z))


def test_tau_identity_and_scalar():
    I = [[1, 0], [0, 1]]
    L, R = tau_group_map(_group(1, 1, I, I))
    assert L == LinearMap(I, QQ) and R == LinearMap(I, QQ)
    L, R = tau_group_map(_group(2, 1, I, I))
    assert L == LinearMap([[2, 0], [0, 2]], QQ)
    rng = trial_rng(6)
    M = QuadricPair(tuple(tuple(Form.random(2, QQ, rng) for _ in range(2)) for _ in range(2)))
    assert M.transform(L, R) == QuadricPair(tuple(tuple(e.scale(2) for e in row) for row in M.entries))


def test_singular_group_element():
    I = [[1, 0], [0, 1]]
    with pytest.raises(SingularGroupElement):
        tau_group_map(_group(0, 1, I, I))
    with pytest.raises(SingularGroupElement):
        tau_group_map(_group(1, 1, [[1, 1], [1, 1]], I))


@pytest.mark.parametrize("k", [F7, QQ], ids=["F7", "Q"])
def test_delta_equivariance_sample(k):
    for t in range(50):
        rng = trial_rng(77, t)
        g, w = random_group_element(k, rng), random_w(k, rng)
        L, R = tau_group_map(g)
        assert delta_map(act(g, w)) == delta_map(w).transform(L, R)


def test_delta_image_independent_on_semistable_samples():
    for t in range(30):
        F = sample_stratum("X1(4,2)", F7, trial_rng(8, t))
        assert g_semistable(F.phi).status is Status.SEMISTABLE
        assert delta_map(F.phi).rows_independent()


EXPECTED_AUDIT = {
    "X0(4,1)": (36, 19),
    "X1(4,1)": (26, 11),
    "X0(4,2)": (24, 7),
    "X1(4,2)": (37, 21),
    "X2(4,2)": (15, 1),
    "X0(4,3)": (36, 19),
    "X1(4,3)": (26, 11),
    "X0(4,4)": (48, 31),
    "X1(4,4)": (25, 9),
}


@pytest.mark.parametrize("row", STRATA, ids=lambda s: s.id)
def test_dimension_audit(row):
    a = stratum_dimension_audit(row)
    assert (a.hom, a.group) == EXPECTED_AUDIT[row.id]
    assert a.ok and a.difference == 17 - row.codim


def test_aut_dimension_by_hand():
    # O(-2)+O(-1): two scalars plus the 3 linear forms below the diagonal
    assert aut_dimension((-2, -1)) == 5
    assert aut_dimension((0, 0, 0)) == 9
    assert hom_dimension((-2, -1), (0, 1)) == 6 + 3 + 10 + 6


@pytest.mark.parametrize(
    "a,b",
    [("X0(4,3)", "X0(4,1)"), ("X1(4,1)", "X1(4,3)"), ("X0(4,2)", "X0(4,2)"), ("X1(4,2)", "X1(4,2)"), ("X2(4,2)", "X2(4,2)"), ("X1(4,4)", "X1(4,4)")],
)
def test_duality_map(a, b):
    assert duality_stratum_map(STRATA_BY_ID[a]).id == b


def test_duality_map_is_involution():
    for s in STRATA:
        assert duality_stratum_map(duality_stratum_map(s)) == s


def test_duality_map_matches_classification():
    for s in STRATA:
        for t in range(5):
            F = sample_stratum(s, F7, trial_rng(9, t))
            assert classify(F.dual()).stratum == duality_stratum_map(s)


def test_dual_shape():
    src, tgt, chi, n = dual_shape((-2, -1, -1), (0, 0, 0), 3)
    assert (src, tgt, chi, n) == ((-2, -2, -2), (-1, -1, 0), 1, 1)


@pytest.mark.parametrize(
    "r,chi,bounds",
    [((4, 1), None, (Fraction(-3, 4), Fraction(1, 4))), ((4, 4), None, (Fraction(-3, 2), Fraction(-1, 2))), ((1, 1), None, (Fraction(0), Fraction(-2)))],
)
def test_vanishing_bounds(r, chi, bounds):
    assert vanishing_bounds(*r) == bounds


@given(seeds)
def test_tables_respect_strata(seed):
    rng = trial_rng(seed)
    s = STRATA[int(rng.integers(len(STRATA)))]
    F = sample_stratum(s, F7, rng)
    assert beilinson_table(F).triple == s.triple
