"""``psl`` command line entry point."""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from . import __version__
from .atlas import (
    STRATA,
    act,
    classify,
    delta_map,
    random_group_element,
    random_w,
    tau_group_map,
    vanishing_bounds,
)
from .cohomology import beilinson_table, h0, h1, monad_check
from .errors import BudgetExceeded, GenericityExhausted, NoMatchingStratum, PSLError
from .field import parse_field
from .harness import SCHEMA_VERSION, ScanConfig, census, clifford_scan, exit_code, trial_rng, vanishing_scan
from .presentation import SheafMorphism, SheafPresentation
from .stability import (
    SHAPE_42,
    g_semistable,
    gred_semistable,
    kronecker_from_morphism,
    kronecker_semistable,
    parse_polarization,
    polarization_42,
    reducibility_44,
    stability_5C,
    block_structure,
)

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION, EXIT_EXHAUSTED = 0, 1, 2, 3


def _twist_sum(twists: Sequence[int]) -> str:
    parts = []
    for t, m in block_structure(sorted(twists)):
        bundle = "O" if t == 0 else f"O({t})"
        parts.append(bundle if m == 1 else f"{m}{bundle}")
    return "+".join(parts)


def _shape(source, target) -> str:
    return f"{_twist_sum(source)} -> {_twist_sum(target)}"


def _load_morphism(path: str) -> SheafMorphism:
    if path == "-":
        return SheafMorphism.from_json(json.load(sys.stdin))
    with open(path, encoding="utf-8") as fh:
        return SheafMorphism.from_json(json.load(fh))


def _emit(report: dict, args, table: str | None = None) -> None:
    text = table if (args.format == "table" and table is not None) else json.dumps(report, indent=2, sort_keys=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _render(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


# -- subcommands -------------------------------------------------------------


def cmd_classify(args) -> int:
    phi = _load_morphism(args.input)
    try:
        rep = classify(phi)
    except NoMatchingStratum as exc:
        report = {"schema_version": SCHEMA_VERSION, "command": "classify", "no_matching_stratum": True, "triple": list(exc.triple), "chi": exc.chi}
        _emit(report, args)
        return EXIT_VIOLATION
    report = {"schema_version": SCHEMA_VERSION, "command": "classify"}
    report.update(rep.to_json())
    s = rep.stratum
    table = _render(
        ["row", "M(r,chi)", "h0(F(-1))", "h1(F)", "h0(F(x)Om(1))", "resolution", "codim", "shape match", "twist"],
        [[s.id, f"M(4,{s.chi})", *rep.triple, _shape(s.source, s.target), s.codim, rep.shape_match, rep.twist]],
    )
    _emit(report, args, table)
    return EXIT_OK


def _vanishing_ok(F: SheafPresentation, window: int = 3) -> bool:
    low, high = vanishing_bounds(F.r, F.chi)
    below = math.ceil(low) - 1
    above = math.floor(high) + 1
    ok = all(h0(F, i) == 0 for i in range(below - window, below + 1))
    return ok and all(h1(F, i) == 0 for i in range(above, above + window + 1))


def cmd_cohomology(args) -> int:
    F = SheafPresentation(_load_morphism(args.input))
    table = beilinson_table(F, verify=args.verify)
    monad = monad_check(F, table)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "cohomology",
        "r": F.r,
        "chi": F.chi,
        "table": table.to_json(),
        "monad": monad.to_json(),
        "vanishing_ok": _vanishing_ok(F),
    }
    text = _render(
        ["", "O(-2) column", "O(-1) column", "O column"],
        [["h1", *table.top_row], ["h0", *table.bottom_row]],
    )
    _emit(report, args, text)
    return EXIT_OK if report["vanishing_ok"] else EXIT_VIOLATION


def cmd_stability(args) -> int:
    phi = _load_morphism(args.input)
    src_blocks = block_structure(phi.source)
    a = phi.source[0]
    if args.polarization:
        sigma = parse_polarization(args.polarization, len(src_blocks))
    elif (phi.source, phi.target) == tuple(tuple(x + a + 2 for x in t) for t in SHAPE_42):
        sigma = polarization_42()
    else:
        sigma = None
    kind: str
    if len(set(phi.source)) == 1 and len(set(phi.target)) == 1:
        if phi.n_rows == 4 and phi.n_cols == 4 and phi.target[0] - a == 1:
            kind, verdict = "reducibility_44", reducibility_44(phi)
        else:
            kind, verdict = "kronecker", kronecker_semistable(kronecker_from_morphism(phi))
    elif phi.source == (a, a + 1) and phi.target == (a + 2, a + 3):
        kind, verdict = "stability_5C", stability_5C(phi)
    else:
        if sigma is None:
            raise PSLError("this shape needs --polarization")
        if args.mode == "exact":
            kind, verdict = "g_semistable_exact", g_semistable(phi, sigma, mode="exact")
        elif args.mode == "mc":
            kind, verdict = "g_semistable_mc", g_semistable(phi, sigma, mode="mc", samples=args.trials, rng=trial_rng(args.seed, 0))
        else:
            kind, verdict = "gred_semistable", gred_semistable(phi, sigma)
    report = {"schema_version": SCHEMA_VERSION, "command": "stability", "test": kind, "seed": args.seed}
    if sigma is not None:
        report["polarization"] = sigma.to_json()
    report.update(verdict.to_json())
    _emit(report, args, _render(["test", "status", "field"], [[kind, verdict.status.value, verdict.field]]))
    return EXIT_OK


def cmd_delta_check(args) -> int:
    field = parse_field(args.field)
    failures = []
    for t in range(args.trials):
        rng = trial_rng(args.seed, t)
        g = random_group_element(field, rng)
        w = random_w(field, rng)
        L, R = tau_group_map(g)
        lhs = delta_map(act(g, w))
        rhs = delta_map(w).transform(L, R)
        if lhs != rhs:
            failures.append({"trial": t, "g": g.to_json(), "w": w.to_json(), "lhs": lhs.to_json(), "rhs": rhs.to_json()})
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "delta-check",
        "config": {"field": str(field), "trials": args.trials, "seed": args.seed},
        "agreements": args.trials - len(failures),
        "violations": failures,
    }
    _emit(report, args, _render(["field", "trials", "agreements"], [[str(field), args.trials, report["agreements"]]]))
    return EXIT_VIOLATION if failures else EXIT_OK


def _scan_config(args) -> ScanConfig:
    chis = tuple(int(c) for c in args.chi.split(",")) if args.chi else (0, 1, 2, 3, 4)
    return ScanConfig(field=parse_field(args.field), trials=args.trials, seed=args.seed, chi_list=chis)


def cmd_census(args) -> int:
    report = census(_scan_config(args), timing=args.timing)
    rows = []
    by_id = {s.id: s for s in STRATA}
    for r in report["rows"]:
        s = by_id[r["row"]]
        rows.append([s.id, f"M(4,{s.chi})", *s.triple, _shape(s.source, s.target), s.codim, sum(r["observed"].values()), "pass" if r["pass"] else "FAIL"])
    table = _render(["row", "M(r,chi)", "h0(F(-1))", "h1(F)", "h0(F(x)Om(1))", "resolution", "codim", "samples", "result"], rows)
    _emit(report, args, table)
    return exit_code(report)


def cmd_vanishing(args) -> int:
    report = vanishing_scan(_scan_config(args), timing=args.timing)
    rows = [[name, d["samples"], ", ".join(f"{k}: {v}" for k, v in d["observed"].items())] for name, d in report["spaces"].items()]
    _emit(report, args, _render(["space", "samples", "observed"], rows) + f"violations: {len(report['violations'])}\n")
    return exit_code(report)


def cmd_clifford(args) -> int:
    report = clifford_scan(_scan_config(args), timing=args.timing)
    rows = [[chi, d["samples"], d["bound"], ", ".join(f"({k}): {v}" for k, v in d["h0_h1"].items())] for chi, d in report["per_chi"].items()]
    _emit(report, args, _render(["chi", "samples", "bound", "(h0,h1) counts"], rows) + f"violations: {len(report['violations'])}\n")
    return exit_code(report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="psl", description="Exact computations with sheaves on the projective plane supported on quartics.")
    parser.add_argument("--version", action="version", version=f"psl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input: bool):
        if needs_input:
            p.add_argument("--input", required=True, help="morphism JSON file, or - for stdin")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "table"), default="json")

    def scan(p, default_trials: int):
        p.add_argument("--field", default="F7")
        p.add_argument("--trials", type=int, default=default_trials)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--chi", help="comma separated subset of 0,1,2,3,4")
        p.add_argument("--timing", action="store_true", help="include wall-clock runtime in the report")

    p = sub.add_parser("classify", help="locate a presentation in the strata table")
    common(p, True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("cohomology", help="Beilinson tableau and monad of a presentation")
    common(p, True)
    p.add_argument("--verify", action="store_true", help="also run the long exact sequence for h1 of the cotangent twist")
    p.set_defaults(func=cmd_cohomology)

    p = sub.add_parser("stability", help="stability verdict for a morphism")
    common(p, True)
    p.add_argument("--polarization", help="comma separated weights, source blocks first, e.g. 3/10,2/5,2/5,3/10")
    p.add_argument("--mode", choices=("exact", "exhaustive", "mc"), default="exact")
    p.add_argument("--trials", type=int, default=200, help="translates sampled in mc mode")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("delta-check", help="equivariance of the quadric pair map")
    common(p, False)
    p.add_argument("--field", default="F7")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_delta_check)

    for name, func, trials, help_ in (
        ("census", cmd_census, 500, "classify random members of every stratum"),
        ("vanishing-scan", cmd_vanishing, 10_000, "scan the vanishing statements"),
        ("clifford-scan", cmd_clifford, 10_000, "scan the Clifford-type bound"),
    ):
        p = sub.add_parser(name, help=help_)
        common(p, False)
        scan(p, trials)
        p.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceeded, GenericityExhausted) as exc:
        print(f"psl: {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (PSLError, ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"psl: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
