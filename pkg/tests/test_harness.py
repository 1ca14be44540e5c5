import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psl.atlas import STRATA, classify
from psl.cohomology import h0, h1
from psl.errors import GenericityExhausted
from psl.field import QQ, FieldSpec
from psl.harness import (
    SAMPLERS,
    ScanConfig,
    _violation,
    analytic_equality_cases,
    census,
    clifford_bound,
    clifford_scan,
    exit_code,
    sample_stratum,
    trial_rng,
    vanishing_scan,
)
from psl.presentation import SheafMorphism, SheafPresentation, maximal_minors
from psl.stability import minors_criterion_23

from strategies import seeds

F7 = FieldSpec(7)


def test_sampler_for_every_row():
    assert set(SAMPLERS) == {s.id for s in STRATA}


def test_sample_X0_41_has_independent_minors():
    F = sample_stratum("X0(4,1)", F7, trial_rng(1))
    phi = F.phi
    assert F.source == (-2, -2, -2) and F.target == (-1, -1, 0)
    lin = SheafMorphism((-1, -1), (0, 0, 0), [[phi.entries[i][j] for i in range(2)] for j in range(3)], F7)
    assert minors_criterion_23(lin)
    assert all(not m.is_zero() for m in maximal_minors(lin))


def test_sample_X1_41_shape():
    F = sample_stratum("X1(4,1)", F7, trial_rng(2))
    assert (F.source, F.target) == ((-3, -1), (0, 0))


def test_sample_X1_44_linear_entry_nonzero():
    F = sample_stratum("X1(4,4)", F7, trial_rng(3))
    assert (F.source, F.target) == ((-2, -1), (0, 1))
    assert not F.phi.entry(0, 1).is_zero()


def test_genericity_exhausted_names_predicate():
    original = SAMPLERS["X2(4,2)"]
    try:
        SAMPLERS["X2(4,2)"] = (lambda k, rng: (None, False), "never")
        with pytest.raises(GenericityExhausted) as info:
            sample_stratum("X2(4,2)", F7, trial_rng(0))
        assert info.value.tries == 100
        assert "never" in str(info.value)
    finally:
        SAMPLERS["X2(4,2)"] = original


def test_census_single_trial_and_chi_restriction():
    rep = census(ScanConfig(trials=1))
    assert rep["rows_passed"] == rep["rows_total"] == 9
    assert exit_code(rep) == 0
    rep2 = census(ScanConfig(trials=3, chi_list=(2,)))
    assert [r["row"] for r in rep2["rows"]] == ["X0(4,2)", "X1(4,2)", "X2(4,2)"]


def test_reports_are_deterministic():
    cfg = ScanConfig(trials=4, seed=17)
    for fn in (census, vanishing_scan, clifford_scan):
        assert json.dumps(fn(cfg)) == json.dumps(fn(cfg))


def test_seed_recorded_and_no_runtime_by_default():
    rep = census(ScanConfig(trials=1, seed=99))
    assert rep["config"]["seed"] == 99
    assert "runtime_seconds" not in rep
    assert "runtime_seconds" in census(ScanConfig(trials=1), timing=True)


def test_config_rejects_zero_trials():
    with pytest.raises(ValueError):
        ScanConfig(trials=0)


def test_vanishing_scan_small():
    rep = vanishing_scan(ScanConfig(trials=30, seed=1))
    assert rep["violations"] == []
    assert set(rep["spaces"]) == {"M(4,1)", "M(4,2)", "M(4,4)"}
    assert exit_code(rep) == 0


def test_clifford_bound_values():
    assert clifford_bound(4, 2) == 3
    assert clifford_bound(4, 1) == 2 + 0.5
    assert clifford_bound(3, 0) == 1


def test_analytic_equality_cases():
    cases = {c["case"]: c for c in analytic_equality_cases(F7)}
    cubic = cases["O_C, cubic"]
    assert (cubic["r"], cubic["chi"], cubic["h0"], cubic["equality"]) == (3, 0, 1, True)
    quartic = cases["O_C(1), quartic"]
    assert (quartic["r"], quartic["chi"], quartic["h0"], quartic["h1"], quartic["equality"]) == (4, 2, 3, 1, True)


def test_clifford_scan_small():
    rep = clifford_scan(ScanConfig(trials=40, seed=2))
    assert rep["violations"] == []
    assert set(rep["per_chi"]) == {"0", "1", "2", "3"}
    assert set(rep["equality_cases"]) <= {"X2(4,2)"}
    # chi = 1 closed stratum: h0 = 2, h1 = 1
    assert rep["per_chi"]["1"]["h0_h1"].get("2,1", 0) > 0


def test_chi0_values_follow_from_chi4_by_twist():
    for t in range(10):
        rng = trial_rng(3, t)
        s = STRATA[7 + t % 2]
        F = sample_stratum(s, F7, rng)
        G = F.twist(-1)
        assert G.chi == 0
        assert h0(G) - h1(G) == F.chi - F.r
        assert (h0(G), h1(G)) == (h0(F, -1), h1(F, -1))


def test_violation_artifact_reverifies():
    F = sample_stratum("X1(4,1)", F7, trial_rng(4))
    art = json.loads(json.dumps(_violation("X1(4,1)", 0, F, "h1 <= 1", h1(F))))
    again = SheafPresentation(SheafMorphism.from_json(art["morphism"]))
    assert h1(again) == art["value"]
    assert classify(again).stratum.id == art["row"]


def test_exit_code_for_failed_rows():
    assert exit_code({"rows_total": 2, "rows_passed": 1}) == 2
    assert exit_code({"violations": [{}]}) == 2
    assert exit_code({"violations": []}) == 0


def test_rational_samplers():
    for s in STRATA:
        F = sample_stratum(s, QQ, trial_rng(5))
        assert classify(F).stratum == s


@settings(max_examples=15)
@given(seeds, st.sampled_from([s.id for s in STRATA]))
def test_samples_land_in_their_row(seed, row):
    assert classify(sample_stratum(row, F7, trial_rng(seed))).stratum.id == row
