"""Command-line driver.

Exit codes: 0 when every check passes, 1 when a check ran and failed, 2 for
usage errors. Output goes to stdout unless ``--output`` is given; a
relative output path is placed under ``$QWEYL_OUTPUT_DIR`` when that is
set, and with no ``--output`` at all the report is written there as
``<command>.<ext>``.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path

from .report import Report

__all__ = ["main", "build_parser"]

_EXT = {"json": "json", "text": "txt", "latex": "tex"}
OUTPUT_DIR_ENV = "QWEYL_OUTPUT_DIR"


class UsageError(Exception):
    pass


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _real(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None
    if v != v or v in (float("inf"), float("-inf")):
        raise argparse.ArgumentTypeError("must be finite")
    return v


def _positive_real(text: str) -> float:
    v = _real(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _coord(text: str) -> int:
    if text not in ("1", "2", "3"):
        raise argparse.ArgumentTypeError("coordinate must be 1, 2 or 3")
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "latex"), default="text")
    common.add_argument("--output", help="write the report to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="qweyl", description="Exact algebra checks for A_q(3).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-aq", parents=[common], help="check the algebra relations on the realization")
    p.add_argument("--mode", choices=("series", "numeric", "both"), default="series")
    p.add_argument("--order", type=_nonneg_int, action="append",
                   help="truncation order for series mode (repeatable, default 2)")
    p.add_argument("--theta", type=_real, action="append",
                   help="theta sample for numeric mode (repeatable, default 0.3 and 0.05)")
    p.add_argument("--cutoff", type=_nonneg_int, default=5)
    p.add_argument("--tol", type=_positive_real, default=1e-10)

    p = sub.add_parser("expand", parents=[common], help="print a truncated operator")
    p.add_argument("target", choices=("beta", "qpower", "X", "dX", "P"))
    p.add_argument("--coord", type=_coord, default=1)
    p.add_argument("--order", type=_nonneg_int, default=2)
    p.add_argument("--indices", help="comma-separated coordinates for qpower (default: those after --coord)")

    p = sub.add_parser("derive", parents=[common], help="free-particle momentum, potential and field")
    p.add_argument("stage", choices=("momentum", "gauge", "bfield"))
    p.add_argument("--order", type=_nonneg_int, default=2)
    p.add_argument("--skip-oracle", action="store_true", help="omit the numeric re-check of each step")

    p = sub.add_parser("check-spq6", parents=[common], help="Sp_q(6) covariance residuals")
    p.add_argument("--mutate", action="store_true",
                   help="perturb one R-matrix entry to show that the check is sensitive")
    p.add_argument("--q-special", type=_rational, help="also report residuals with q set to this value")

    p = sub.add_parser("oracle-convergence", parents=[common], help="error slopes of truncated operators")
    p.add_argument("--order", type=_nonneg_int, action="append", help="repeatable, default 1 2 3")
    p.add_argument("--theta", type=_real, action="append",
                   help="repeatable, default 1e-1 1e-2 1e-3")
    p.add_argument("--max-exp", type=_nonneg_int, default=4)
    return parser


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_verify_aq(args) -> Report:
    from .realization import verify_relations_numeric, verify_relations_series

    if args.cutoff < 1:
        raise UsageError("--cutoff must be at least 1")
    orders = args.order or [2]
    thetas = args.theta or [0.3, 0.05]
    rows = []
    if args.mode in ("series", "both"):
        for d in orders:
            rows.extend(r.to_dict() for r in verify_relations_series(d))
    if args.mode in ("numeric", "both"):
        for t in thetas:
            rows.extend(r.to_dict() for r in verify_relations_numeric(t, args.cutoff, args.tol))
    config = {"mode": args.mode, "cutoff": args.cutoff, "tol": args.tol}
    if args.mode != "numeric":
        config["order"] = orders
    if args.mode != "series":
        config["theta"] = thetas
    return Report("verify-aq", config, {"relations": rows}, [], all(r["pass"] for r in rows))


def _audited(names: list[str], order: int) -> tuple[list[dict], dict, bool]:
    from .reference import audit, compare

    comps = [compare(n, order) for n in names]
    result = audit(comps)
    disc = [t.to_dict() for c in comps for t in c.terms if t.status == "mismatch"]
    disc.extend({"expression": s["expression"], "term": s["term"], "status": "stale-curated-entry"}
                for s in result["stale"])
    summary = {c.expression: c.to_dict() | {"differences": len(c.terms)} for c in comps}
    return disc, {"reference_comparison": summary,
                  "uncurated_mismatches": len(result["uncurated"]),
                  "stale_curated_entries": len(result["stale"])}, result["pass"]


def cmd_expand(args) -> Report:
    from .freeparticle import apply_to_plane_wave, PlaneWaveState
    from .realization import beta_series, build_realized, qpower_series

    j, d = args.coord, args.order
    if args.indices is not None and args.target != "qpower":
        raise UsageError("--indices only applies to qpower")
    config = {"target": args.target, "coord": j, "order": d}
    results: dict = {}
    disc: list = []
    ok = True
    if args.target == "beta":
        op = beta_series(j, d)
        label = f"beta_{j}"
        disc, extra, ok = _audited([label], d)
        results.update(extra)
    elif args.target == "qpower":
        if args.indices is None:
            idx = list(range(j + 1, 4))
        else:
            try:
                idx = sorted({int(s) for s in args.indices.split(",") if s.strip()})
            except ValueError:
                raise UsageError("--indices must be a comma-separated list of 1, 2, 3") from None
            if any(i not in (1, 2, 3) for i in idx):
                raise UsageError("--indices must be a comma-separated list of 1, 2, 3")
        config["indices"] = idx
        op = qpower_series(idx, d)
        label = "q^{M_{" + ",".join(map(str, idx)) + "}}"
    else:
        op = build_realized(args.target, j, d)
        label = f"{args.target}_{j}"
        if args.target == "P":
            amp = apply_to_plane_wave(op, PlaneWaveState.plane_wave(d)).amplitude
            name = "P_" + "XYZ"[j - 1]
            results["plane_wave_amplitude"] = str(amp)
            disc, extra, ok = _audited([name], d)
            results.update(extra)
    results["operator"] = str(op)
    results["terms"] = len(op)
    results["expressions"] = {label: str(op)}
    return Report("expand", config, results, disc, ok)


def cmd_derive(args) -> Report:
    from .freeparticle import curl, decompose, divergence, gauge_potential, momentum_amplitudes

    d = args.order
    amps = momentum_amplitudes(d)
    results: dict = {"order": d}
    exprs = {f"P_{c}": str(a) for c, a in zip("XYZ", amps)}
    results["momentum_amplitudes"] = dict(exprs)
    names = ["P_X", "P_Y", "P_Z"]
    ok = True
    if args.stage in ("gauge", "bfield"):
        pot = gauge_potential(d)
        results["A"] = [str(a) for a in pot]
        exprs.update({f"A_{c}": str(a) for c, a in zip("xyz", pot)})
    if args.stage == "bfield":
        field = curl(pot)
        dec = decompose(field, d)
        div = divergence(field)
        results["B"] = [str(b) for b in field]
        results["divergence"] = str(div)
        results["decomposition"] = dec.to_dict()
        exprs.update({f"B_{c}": str(b) for c, b in zip("xyz", field)})
        names += ["B_x", "B_y", "B_z"]
        ok = ok and not div and dec.reconstructs()
        if not args.skip_oracle:
            from .oracle import chain_check

            steps = chain_check(d, symbolic=(amps, pot, field, dec))
            results["numeric_chain"] = steps
            ok = ok and all(s["pass"] for s in steps)
    results["expressions"] = exprs
    disc, extra, audit_ok = _audited(names, d)
    if args.stage == "bfield" and d >= 2 and not dec.structured_matches_imaginary_constant():
        disc.append({
            "expression": "B",
            "claim": "constant imaginary part of B at theta^2 equals -(i*theta/2) times the first-order field",
            "engine": [str(p) for p in dec.imaginary_constant_second_order],
            "reference": [str(p) for p in dec.expected_imaginary_constant],
            "status": "mismatch",
        })
    results.update(extra)
    return Report("derive", {"stage": args.stage, "order": d}, results, disc, ok and audit_ok)


def cmd_check_spq6(args) -> Report:
    from .scalars import LaurentQ
    from .spq6 import (all_residuals, braid_defect, characteristic_defect, metric, mutated,
                       r_matrix, reduced_indices, reduced_relation_residual)

    rm = r_matrix()
    config = {"mutate": args.mutate}
    if args.mutate:
        key = (1, 1, 1, 1)
        rm = mutated(key)
        config["mutated_entry"] = list(key)
    pairs = all_residuals(rm)
    results: dict = {
        "convention": (
            "standard FRT symplectic R-matrix, rho = (3, 2, 1, -1, -2, -3), i' = 7 - i, "
            "Rhat = P R, C^i_j = eps_j q^rho_j delta_{i,7-j}"
        ),
        "pairs": [p.to_dict() for p in pairs],
        "all_pass": all(p.passed for p in pairs),
        "r_matrix_nonzero_entries": len(rm),
        "metric": {f"{i},{j}": str(v) for (i, j), v in sorted(metric().items())},
        "braid_defect_entries": len(braid_defect(rm)),
        "characteristic_defect_entries": len(characteristic_defect(rm)),
    }
    reduced = {}
    for base in (4, 7):
        reduced[f"{base}-j"] = [
            {"j": j, "residual": str(reduced_relation_residual(j, base))}
            for j in reduced_indices(base)
        ]
    results["reduced_relations"] = reduced
    if args.q_special is not None:
        if args.q_special == 0:
            raise UsageError("--q-special must be nonzero (q carries negative powers)")
        qv = args.q_special
        config["q_special"] = str(qv)

        def spec(el):
            return str(el.specialize(q=qv))

        results["specialized"] = {
            "q": str(qv),
            "pairs_nonzero": [
                {"i": p.i, "j": p.j, "residual": spec(p.residual)} for p in pairs if p.residual.specialize(q=qv)
            ],
            "reduced_relations": {
                f"{base}-j": [
                    {"j": j, "residual": spec(reduced_relation_residual(j, base))}
                    for j in reduced_indices(base)
                ]
                for base in (4, 7)
            },
        }
    disc = []
    nonzero_printed = [r for r in reduced["4-j"] if r["residual"] != "0"]
    if nonzero_printed:
        disc.append({
            "expression": "reduced relation, conjugate index 4-j",
            "status": "mismatch",
            "engine": nonzero_printed,
            "reference": "0",
        })
    ok = results["all_pass"] and not results["braid_defect_entries"] and not results["characteristic_defect_entries"]
    return Report("check-spq6", config, results, disc, ok)


def cmd_oracle_convergence(args) -> Report:
    from .oracle import convergence_table

    orders = args.order or [1, 2, 3]
    thetas = args.theta or [1e-1, 1e-2, 1e-3]
    if any(t <= 0 for t in thetas):
        raise UsageError("--theta samples must be positive (the fit takes logarithms)")
    if len(thetas) < 2:
        raise UsageError("need at least two --theta samples")
    if any(o < 1 for o in orders):
        raise UsageError("--order must be at least 1")
    rows, slopes = convergence_table(orders=tuple(orders), thetas=tuple(thetas), max_exp=args.max_exp)
    config = {"order": orders, "theta": thetas, "max_exp": args.max_exp}
    results = {"rows": [r.to_dict() for r in rows], "slopes": slopes}
    return Report("oracle-convergence", config, results, [], all(s["pass"] for s in slopes))


COMMANDS = {
    "verify-aq": cmd_verify_aq,
    "expand": cmd_expand,
    "derive": cmd_derive,
    "check-spq6": cmd_check_spq6,
    "oracle-convergence": cmd_oracle_convergence,
}


def _destination(args) -> Path | None:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if args.output:
        path = Path(args.output)
        if base and not path.is_absolute():
            path = Path(base) / path
        return path
    if base:
        return Path(base) / f"{args.command}.{_EXT[args.format]}"
    return None


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"qweyl: error: {exc}", file=sys.stderr)
        return 2
    text = report.render(args.format)
    dest = _destination(args)
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text, encoding="utf-8")
    return 0 if report.passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
