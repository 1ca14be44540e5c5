"""Random stratum members and the large scans built on them.

Every trial draws from its own generator, keyed by ``(seed, row, trial)``,
so a report depends only on its configuration.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .atlas import STRATA, StratumDescriptor, classify, strata_for
from .cohomology import h0, h1
from .constructors import make_OC, normal_form_42
from .errors import GenericityExhausted, NoMatchingStratum
from .field import FieldSpec
from .forms import Form, are_independent
from .presentation import SheafMorphism, SheafPresentation, is_injective
from .stability import (
    Status,
    g_semistable,
    kronecker_from_morphism,
    kronecker_semistable,
    minors_criterion_23,
)

SCHEMA_VERSION = 1
MAX_TRIES = 100


@dataclass(frozen=True)
class ScanConfig:
    field: FieldSpec = FieldSpec(7)
    trials: int = 100
    seed: int = 0
    chi_list: tuple[int, ...] = (0, 1, 2, 3, 4)

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError("trials must be at least 1")

    def to_json(self) -> dict:
        return {"field": str(self.field), "trials": self.trials, "seed": self.seed, "chi_list": list(self.chi_list)}


def trial_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(keys)))


def _random_matrix(source, target, field: FieldSpec, rng) -> list[list[Form]]:
    return [[Form.random(b - a, field, rng) if b >= a else Form.zero(b - a, field) for a in source] for b in target]


def _sample_X0_41(k, rng):
    m = _random_matrix((-2, -2, -2), (-1, -1, 0), k, rng)
    phi = SheafMorphism((-2, -2, -2), (-1, -1, 0), m, k)
    phi11 = SheafMorphism((-1, -1), (0, 0, 0), [[m[i][j] for i in range(2)] for j in range(3)], k)
    return phi, minors_criterion_23(phi11)


def _sample_X1_41(k, rng):
    m = _random_matrix((-3, -1), (0, 0), k, rng)
    return SheafMorphism((-3, -1), (0, 0), m, k), are_independent([m[0][1], m[1][1]])


def _sample_X0_42(k, rng):
    phi = SheafMorphism((-2, -2), (0, 0), _random_matrix((-2, -2), (0, 0), k, rng), k)
    if k.p is None:
        return phi, True
    return phi, kronecker_semistable(kronecker_from_morphism(phi)).status is not Status.UNSTABLE


def _sample_X1_42(k, rng):
    X1, X2, Y1, Y2 = (Form.random(1, k, rng) for _ in range(4))
    if not are_independent([X1, X2]) or not are_independent([Y1, Y2]):
        return None, False
    phi = normal_form_42(X1, X2, Y1, Y2, [Form.random(2, k, rng) for _ in range(4)])
    if k.p is None:
        return phi, True
    return phi, g_semistable(phi).status is not Status.UNSTABLE


def _sample_X2_42(k, rng):
    f = Form.random(4, k, rng)
    return SheafMorphism((-3,), (1,), [[f]], k), not f.is_zero()


def _sample_X0_43(k, rng):
    m = _random_matrix((-2, -1, -1), (0, 0, 0), k, rng)
    phi12 = SheafMorphism((-1, -1), (0, 0, 0), [row[1:] for row in m], k)
    return SheafMorphism((-2, -1, -1), (0, 0, 0), m, k), minors_criterion_23(phi12)


def _sample_X1_43(k, rng):
    m = _random_matrix((-2, -2), (-1, 1), k, rng)
    return SheafMorphism((-2, -2), (-1, 1), m, k), are_independent([m[0][0], m[0][1]])


def _sample_X0_44(k, rng):
    return SheafMorphism((-1,) * 4, (0,) * 4, _random_matrix((-1,) * 4, (0,) * 4, k, rng), k), True


def _sample_X1_44(k, rng):
    m = _random_matrix((-2, -1), (0, 1), k, rng)
    return SheafMorphism((-2, -1), (0, 1), m, k), not m[0][1].is_zero()


# (sampler, name of the genericity predicate it enforces besides injectivity)
SAMPLERS: dict[str, tuple[Callable, str]] = {
    "X0(4,1)": (_sample_X0_41, "linear 2x3 block has independent maximal minors"),
    "X1(4,1)": (_sample_X1_41, "linear column entries independent"),
    "X0(4,2)": (_sample_X0_42, "Kronecker module semistable"),
    "X1(4,2)": (_sample_X1_42, "X and Y pairs independent, no forbidden configuration"),
    "X2(4,2)": (_sample_X2_42, "quartic nonzero"),
    "X0(4,3)": (_sample_X0_43, "linear 3x2 block has independent maximal minors"),
    "X1(4,3)": (_sample_X1_43, "linear row entries independent"),
    "X0(4,4)": (_sample_X0_44, "none"),
    "X1(4,4)": (_sample_X1_44, "linear entry nonzero"),
}


def sample_stratum(row: StratumDescriptor | str, field: FieldSpec, rng) -> SheafPresentation:
    """Draw a member of ``row`` by rejection sampling.

    Raises:
        GenericityExhausted: after ``MAX_TRIES`` consecutive rejections.
    """
    row_id = row if isinstance(row, str) else row.id
    sampler, predicate = SAMPLERS[row_id]
    for _ in range(MAX_TRIES):
        phi, ok = sampler(field, rng)
        if ok and is_injective(phi):
            return SheafPresentation(phi)
    raise GenericityExhausted(f"{row_id}: {predicate}, injective", MAX_TRIES)


def _row_index(row_id: str) -> int:
    return [s.id for s in STRATA].index(row_id)


def _samples(cfg: ScanConfig, rows: list[StratumDescriptor], tag: int) -> Iterable[tuple[int, StratumDescriptor, SheafPresentation]]:
    """``cfg.trials`` samples cycling through ``rows``."""
    for t in range(cfg.trials):
        row = rows[t % len(rows)]
        rng = trial_rng(cfg.seed, tag, _row_index(row.id), t)
        yield t, row, sample_stratum(row, cfg.field, rng)


def _report(command: str, cfg: ScanConfig, body: dict, started: float | None) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "command": command, "config": cfg.to_json()}
    out.update(body)
    if started is not None:
        out["runtime_seconds"] = round(time.perf_counter() - started, 3)
    return out


def census(cfg: ScanConfig, timing: bool = False) -> dict:
    """Classify ``cfg.trials`` samples of every row with chi in ``cfg.chi_list``."""
    started = time.perf_counter() if timing else None
    rows_out = []
    for row in STRATA:
        if row.chi not in cfg.chi_list:
            continue
        observed: Counter = Counter()
        wrong_row = 0
        no_match = 0
        shape_mismatch = 0
        for t in range(cfg.trials):
            F = sample_stratum(row, cfg.field, trial_rng(cfg.seed, 0, _row_index(row.id), t))
            try:
                rep = classify(F)
            except NoMatchingStratum as exc:
                no_match += 1
                observed[",".join(map(str, exc.triple))] += 1
                continue
            observed[",".join(map(str, rep.triple))] += 1
            if rep.stratum.id != row.id:
                wrong_row += 1
            if not rep.shape_match:
                shape_mismatch += 1
        rows_out.append(
            {
                "row": row.id,
                "moduli": [4, row.chi],
                "expected_triple": list(row.triple),
                "codim": row.codim,
                "observed": dict(sorted(observed.items())),
                "no_matching_stratum": no_match,
                "wrong_row": wrong_row,
                "shape_mismatch": shape_mismatch,
                "pass": no_match == 0 and wrong_row == 0 and shape_mismatch == 0,
            }
        )
    body = {
        "rows": rows_out,
        "rows_passed": sum(r["pass"] for r in rows_out),
        "rows_total": len(rows_out),
    }
    return _report("census", cfg, body, started)


# -- vanishing statements ------------------------------------------------------


def _violation(row: str, trial: int, F: SheafPresentation, what: str, value) -> dict:
    return {"row": row, "trial": trial, "check": what, "value": value, "morphism": F.to_json()}


def vanishing_scan(cfg: ScanConfig, timing: bool = False) -> dict:
    """Per moduli space with chi in {1, 2, 4} (intersected with ``chi_list``):

    * chi = 1: h1(F) <= 1;
    * chi = 2: h1(F) = 0 except on the structure-sheaf row;
    * chi = 4: h0(F(-1)) <= 1, and equal to 1 only on the closed stratum.
    """
    started = time.perf_counter() if timing else None
    spaces = {}
    violations = []
    for chi in (1, 2, 4):
        if chi not in cfg.chi_list:
            continue
        counts: Counter = Counter()
        for t, row, F in _samples(cfg, strata_for(chi), 1):
            if chi == 1:
                v = h1(F)
                counts[f"h1={v}"] += 1
                if v > 1:
                    violations.append(_violation(row.id, t, F, "h1 <= 1", v))
            elif chi == 2:
                v = h1(F)
                counts[f"h1={v}"] += 1
                if v != 0 and row.id != "X2(4,2)":
                    violations.append(_violation(row.id, t, F, "h1 = 0 off the O_C(1) locus", v))
            else:
                v = h0(F, -1)
                counts[f"h0(F(-1))={v}"] += 1
                if v > 1 or (v == 1) != (row.id == "X1(4,4)"):
                    violations.append(_violation(row.id, t, F, "h0(F(-1)) <= 1, equality only on X1(4,4)", v))
        spaces[f"M(4,{chi})"] = {"samples": cfg.trials, "observed": dict(sorted(counts.items()))}
    return _report("vanishing-scan", cfg, {"spaces": spaces, "violations": violations}, started)


# -- Clifford bound ------------------------------------------------------------


def clifford_bound(r: int, chi: int) -> Fraction:
    return 1 + Fraction(chi, 2) + Fraction(r * (r - 3), 4)


def analytic_equality_cases(field: FieldSpec) -> list[dict]:
    """The structure sheaf of a smooth-looking cubic and O_C(1) of a quartic."""
    x0, x1, x2 = (Form.variable(c, field) for c in range(3))
    cases = []
    for name, f, d in (("O_C, cubic", x0**3 + x1**3 + x2**3, 0), ("O_C(1), quartic", x0**4 + x1**4 + x2**4, 1)):
        F = make_OC(f, d)
        value, bound = h0(F), clifford_bound(F.r, F.chi)
        cases.append(
            {
                "case": name,
                "r": F.r,
                "chi": F.chi,
                "h0": value,
                "h1": h1(F),
                "bound": str(bound),
                "equality": value == bound,
            }
        )
    return cases


def clifford_scan(cfg: ScanConfig, timing: bool = False) -> dict:
    """Check ``h0(F) <= 2 + chi/2`` when ``h1(F) > 0``, chi in {0, 1, 2, 3}.

    chi = 0 members are chi = 4 members twisted by -1. Equality cases must
    classify as the O_C(1) row.
    """
    started = time.perf_counter() if timing else None
    per_chi = {}
    violations = []
    equalities: Counter = Counter()
    for chi in (0, 1, 2, 3):
        if chi not in cfg.chi_list:
            continue
        rows = strata_for(4 if chi == 0 else chi)
        pairs: Counter = Counter()
        for t, row, F in _samples(cfg, rows, 2 + chi):
            if chi == 0:
                F = F.twist(-1)
            a, b = h0(F), h1(F)
            pairs[f"{a},{b}"] += 1
            if b == 0:
                continue
            bound = clifford_bound(F.r, F.chi)
            if a > bound:
                violations.append(_violation(row.id, t, F, "h0 <= 2 + chi/2", a))
            elif a == bound:
                where = classify(F).stratum.id
                equalities[where] += 1
                if where != "X2(4,2)":
                    violations.append(_violation(row.id, t, F, "equality only for O_C(1)", a))
        per_chi[str(chi)] = {"samples": cfg.trials, "bound": str(clifford_bound(4, chi)), "h0_h1": dict(sorted(pairs.items()))}
    body = {
        "per_chi": per_chi,
        "equality_cases": dict(sorted(equalities.items())),
        "analytic_cases": analytic_equality_cases(cfg.field),
        "violations": violations,
    }
    return _report("clifford-scan", cfg, body, started)


def exit_code(report: dict) -> int:
    if report.get("violations"):
        return 2
    if report.get("rows_total") is not None and report.get("rows_passed") != report.get("rows_total"):
        return 2
    return 0


__all__ = [
    "SCHEMA_VERSION",
    "ScanConfig",
    "analytic_equality_cases",
    "census",
    "clifford_bound",
    "clifford_scan",
    "exit_code",
    "sample_stratum",
    "trial_rng",
    "vanishing_scan",
]
