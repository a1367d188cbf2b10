"""Command line interface.

One subcommand per diagnostic, plus OLS and the perturbation
experiment.  Data comes from a CSV file with explicit role flags or
from a built-in fixture.  Text output mirrors the labeled-section
layout of classic regression software; json output carries the same
numbers at full double precision.

Exit codes: 0 ok, 1 problematic collinearity found and
--fail-on-problematic set, 2 usage or data error.
"""

import argparse
import dataclasses
import json
import os
import sys

from .dataset import ColumnRole, Dataset, design_matrix, load_csv, response_vector
from .diagnostics import (
    DEFAULT_THRESHOLDS,
    SlmReport,
    Thresholds,
    cn_severity,
    cns,
    coefficient_of_variation,
    condition_number,
    correlation_matrix,
    multicol,
    slm,
    stewart_index,
    vif,
)
from .fixtures import FIXTURE_NAMES, fixture
from .linalg import SingularMatrixError
from .ols import ols_fit, significance_contradiction
from .perturb import PerturbConfig, perturb_n

__all__ = ["main", "build_parser"]

SCHEMA_VERSION = 1
THRESHOLDS_ENV = "COLLIN_DIAG_THRESHOLDS"

NO_THRESHOLD_NOTE = "NOTE: no established threshold"


class CliError(Exception):
    """Usage or data error; reported on stderr with exit code 2."""


def _fmt(v) -> str:
    """Numbers rendered with 7 significant digits for text mode."""
    return format(float(v), ".7g")


# ---------------------------------------------------------------------------
# argument parsing


def _positions(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_argument_group("data source")
    source.add_argument("--data", metavar="PATH", help="CSV file to analyze")
    source.add_argument("--fixture", choices=FIXTURE_NAMES,
                        help="use a built-in dataset instead of --data")
    source.add_argument("--response", metavar="LABEL",
                        help="response column (required for ols and perturb)")
    source.add_argument("--dummy", action="append", default=[], metavar="LABEL",
                        help="declare a 0/1 column; repeatable")
    source.add_argument("--quant", action="append", default=[], metavar="LABEL",
                        help="declare a quantitative column; repeatable; when omitted, "
                             "every column not named by --response/--dummy is quantitative")
    source.add_argument("--no-intercept", action="store_true",
                        help="do not synthesize the intercept column")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--fail-on-problematic", action="store_true",
                        help="exit 1 when the diagnostic flags problematic collinearity")

    parser = argparse.ArgumentParser(
        prog="collindiag",
        description="Detect and characterize near multicollinearity in regression designs.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    sub.add_parser("rdetr", parents=[common],
                   help="correlation matrix of quantitative regressors and det(R)")
    sub.add_parser("vif", parents=[common], help="variance inflation factors")
    sub.add_parser("cn", parents=[common], help="condition number of the design")
    sub.add_parser("cns", parents=[common],
                   help="condition numbers with and without intercept")
    sub.add_parser("ki", parents=[common],
                   help="Stewart indexes and the essential/nonessential split")
    sub.add_parser("cv", parents=[common],
                   help="coefficients of variation of quantitative regressors")
    sub.add_parser("slm", parents=[common],
                   help="simple linear model diagnostics (intercept + one regressor)")
    sub.add_parser("multicol", parents=[common], help="every applicable measure at once")

    p_ols = sub.add_parser("ols", parents=[common], help="OLS fit with inference summary")
    p_ols.add_argument("--alpha", type=float, default=0.05,
                       help="significance level for the contradiction verdict")

    p_pert = sub.add_parser("perturb", parents=[common],
                            help="Monte Carlo perturbation of quantitative regressors")
    p_pert.add_argument("--tol", type=float, default=0.01,
                        help="relative perturbation magnitude")
    p_pert.add_argument("--iterations", type=int, default=5000)
    p_pert.add_argument("--noise-mean", type=float, default=10.0)
    p_pert.add_argument("--noise-sd", type=float, default=10.0)
    p_pert.add_argument("--seed", type=int, default=None)
    p_pert.add_argument("--pos", type=_positions, default=None, metavar="i,j,...",
                        help="1-based positions of regressors to perturb, counted "
                             "excluding the intercept; default: all quantitative")
    return parser


# ---------------------------------------------------------------------------
# dataset loading


def _read_header(path) -> list[str]:
    import csv

    try:
        fh = open(path, newline="", encoding="utf-8")
    except FileNotFoundError:
        raise CliError(f"data file not found: {path}") from None
    with fh:
        try:
            header = next(csv.reader(fh))
        except StopIteration:
            raise CliError(f"{path}: no header row (empty file)") from None
    return [h.strip() for h in header]


def _roles_from_flags(header: list[str], args) -> dict[str, ColumnRole]:
    roles: dict[str, ColumnRole] = {}

    def declare(label: str, role: ColumnRole):
        if label not in header:
            raise CliError(f"column {label!r} not present in the CSV header")
        if label in roles:
            raise CliError(f"column {label!r} declared with more than one role")
        roles[label] = role

    if args.response:
        declare(args.response, ColumnRole.RESPONSE)
    for label in args.dummy:
        declare(label, ColumnRole.DUMMY)
    if args.quant:
        for label in args.quant:
            declare(label, ColumnRole.QUANTITATIVE)
    else:
        for label in header:
            if label not in roles:
                roles[label] = ColumnRole.QUANTITATIVE
    return roles


def _load_dataset(args) -> Dataset:
    if bool(args.data) == bool(args.fixture):
        raise CliError("exactly one of --data or --fixture is required")
    if args.fixture:
        if args.response or args.dummy or args.quant:
            raise CliError("role flags (--response/--dummy/--quant) apply only to --data")
        ds = fixture(args.fixture)
        if args.no_intercept:
            ds = dataclasses.replace(ds, add_intercept=False)
        return ds
    header = _read_header(args.data)
    roles = _roles_from_flags(header, args)
    return load_csv(args.data, roles, add_intercept=not args.no_intercept)


def _thresholds_from_env() -> Thresholds:
    path = os.environ.get(THRESHOLDS_ENV)
    if not path:
        return DEFAULT_THRESHOLDS
    valid = {f.name for f in dataclasses.fields(Thresholds)}
    overrides: dict[str, float] = {}
    try:
        fh = open(path, encoding="utf-8")
    except FileNotFoundError:
        raise CliError(f"{THRESHOLDS_ENV} points to a missing file: {path}") from None
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key:
                raise CliError(f"{path}:{lineno}: expected key=value")
            if key not in valid:
                raise CliError(f"{path}:{lineno}: unknown threshold {key!r}")
            try:
                overrides[key] = float(value)
            except ValueError:
                raise CliError(f"{path}:{lineno}: not a number: {value!r}") from None
    try:
        return dataclasses.replace(DEFAULT_THRESHOLDS, **overrides)
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# text rendering helpers


def _aligned_rows(pairs, render) -> list[str]:
    width = max(len(label) for label, _ in pairs)
    return [f"  {label.ljust(width)}  {render(value)}" for label, value in pairs]


def _value_rows(pairs) -> list[str]:
    return _aligned_rows(pairs, lambda v: _fmt(v) if v is not None
                         else "undefined (centered variable)")


def _matrix_lines(labels, rows) -> list[str]:
    cells = [[_fmt(v) for v in row] for row in rows]
    label_w = max(len(l) for l in labels)
    col_w = [max(len(labels[j]), max(len(r[j]) for r in cells)) for j in range(len(labels))]
    lines = ["  " + " " * label_w + "  " +
             "  ".join(labels[j].rjust(col_w[j]) for j in range(len(labels)))]
    for i, row in enumerate(cells):
        lines.append("  " + labels[i].ljust(label_w) + "  " +
                     "  ".join(row[j].rjust(col_w[j]) for j in range(len(labels))))
    return lines


def _cn_verdict(cn: float, th: Thresholds) -> tuple[str, bool]:
    severity = cn_severity(cn, th)
    if severity == "severe":
        return f"PROBLEMATIC: CN={_fmt(cn)} > {_fmt(th.cn_severe)}", True
    if severity == "moderate":
        return (f"MODERATE: CN={_fmt(cn)} in [{_fmt(th.cn_moderate)}, "
                f"{_fmt(th.cn_severe)}]"), False
    return f"OK: CN={_fmt(cn)} < {_fmt(th.cn_moderate)}", False


# ---------------------------------------------------------------------------
# command payload builders; each returns (result, text_lines, problematic)


def _corr_result(rep, th: Thresholds):
    result = {
        "labels": list(rep.labels),
        "correlation_matrix": [[float(v) for v in row] for row in rep.r],
        "det_r": float(rep.det_r),
        "det_threshold": float(rep.det_threshold),
        "pairwise_threshold": float(th.pairwise_corr),
        "flagged_pairs": [{"a": a, "b": b, "r": r} for a, b, r in rep.flagged_pairs],
        "problematic_pairs": rep.problematic_pairs,
        "problematic_det": rep.problematic_det,
    }
    lines = ["Correlation matrix"]
    lines += _matrix_lines(rep.labels, rep.r)
    lines += ["", "Correlation matrix's determinant", f"  {_fmt(rep.det_r)}"]
    if rep.flagged_pairs:
        for a, b, r in rep.flagged_pairs:
            lines.append(f"PROBLEMATIC: |r({a}, {b})|={_fmt(abs(r))} "
                         f"> threshold {_fmt(th.pairwise_corr)}")
    else:
        lines.append(f"OK: no pairwise |r| above threshold {_fmt(th.pairwise_corr)}")
    if rep.problematic_det:
        lines.append(f"PROBLEMATIC: det(R)={_fmt(rep.det_r)} "
                     f"< threshold {_fmt(rep.det_threshold)}")
    else:
        lines.append(f"OK: det(R)={_fmt(rep.det_r)} >= threshold {_fmt(rep.det_threshold)}")
    return result, lines, rep.problematic


def _vif_result(vifs, th: Thresholds):
    flagged = [(label, v) for label, v in vifs if v > th.vif_limit]
    result = {
        "vif": [{"label": label, "value": float(v)} for label, v in vifs],
        "limit": float(th.vif_limit),
        "problematic": bool(flagged),
    }
    lines = ["Variance Inflation Factors"]
    lines += _value_rows(vifs)
    if flagged:
        for label, v in flagged:
            lines.append(f"PROBLEMATIC: VIF({label})={_fmt(v)} > limit {_fmt(th.vif_limit)}")
    else:
        lines.append(f"OK: no VIF above limit {_fmt(th.vif_limit)}")
    return result, lines, bool(flagged)


def _cn_result(X, th: Thresholds):
    value = condition_number(X)
    verdict, problematic = _cn_verdict(value, th)
    result = {"cn": float(value), "severity": cn_severity(value, th)}
    lines = ["Condition Number", f"  {_fmt(value)}", verdict]
    return result, lines, problematic


def _cns_result(X, th: Thresholds):
    rep = cns(X)
    verdict, problematic = _cn_verdict(rep.cn_with, th)
    result = {
        "without": float(rep.cn_without),
        "with": float(rep.cn_with),
        "increase_pct": float(rep.increase_pct),
        "severity": cn_severity(rep.cn_with, th),
    }
    lines = [
        "Condition Number without intercept", f"  {_fmt(rep.cn_without)}",
        "", "Condition Number with intercept", f"  {_fmt(rep.cn_with)}",
        "", "Increase (in percentage)", f"  {_fmt(rep.increase_pct)}",
        verdict,
    ]
    return result, lines, problematic


def _stewart_result(rep):
    result = {
        "labels": list(rep.labels),
        "k2": [float(v) for v in rep.k2],
        "essential_pct": None if rep.essential_pct is None
        else [float(v) for v in rep.essential_pct],
        "nonessential_pct": None if rep.nonessential_pct is None
        else [float(v) for v in rep.nonessential_pct],
    }
    lines = ["Stewart index"]
    lines += _value_rows(list(zip(rep.labels, rep.k2)))
    if rep.essential_pct is not None:
        quant = [l for l in rep.labels if l != "intercept"]
        lines += ["", "Proportion of essential collinearity (in percentage)"]
        lines += _value_rows(list(zip(quant, rep.essential_pct)))
        lines += ["", "Proportion of non-essential collinearity (in percentage)"]
        lines += _value_rows(list(zip(quant, rep.nonessential_pct)))
    lines.append(f"{NO_THRESHOLD_NOTE} for the Stewart index")
    return result, lines, False


def _cv_result(entries, th: Thresholds):
    flagged = [(label, v) for label, v in entries if v is not None and v < th.cv_limit]
    result = {
        "cv": [{"label": label, "value": None if v is None else float(v),
                "below_limit": v is not None and v < th.cv_limit}
               for label, v in entries],
        "limit": float(th.cv_limit),
        "problematic": bool(flagged),
    }
    lines = ["Coefficients of Variation"]
    lines += _value_rows(entries)
    if flagged:
        for label, v in flagged:
            lines.append(f"PROBLEMATIC: CV({label})={_fmt(v)} < threshold "
                         f"{_fmt(th.cv_limit)} (nonessential collinearity)")
    else:
        lines.append(f"OK: no CV below threshold {_fmt(th.cv_limit)}")
    return result, lines, bool(flagged)


def _dummy_pct_result(entries):
    result = [{"label": label, "ones_pct": float(v)} for label, v in entries]
    lines = ["Proportion of ones in the dummy variable"]
    lines += _value_rows(entries)
    for label, v in entries:
        if v in (0.0, 100.0):
            lines.append(f"WARNING: dummy {label} is degenerate "
                         f"({'all ones duplicates the intercept' if v else 'all zeros'})")
    return result, lines, False


def _slm_result(rep: SlmReport, th: Thresholds):
    problematic = False
    if rep.is_dummy:
        result = {"kind": "dummy", "label": rep.label,
                  "ones_pct": float(rep.ones_pct), "cn": float(rep.cn)}
        lines = ["Proportion of ones in the dummy variable", f"  {_fmt(rep.ones_pct)}",
                 "", "Condition Number", f"  {_fmt(rep.cn)}"]
    else:
        result = {"kind": "quantitative", "label": rep.label, "cv": float(rep.cv),
                  "vif": float(rep.vif), "cn": float(rep.cn),
                  "k2": [float(rep.k2[0]), float(rep.k2[1])]}
        lines = ["Coefficient of Variation", f"  {_fmt(rep.cv)}",
                 "", "Variance Inflation Factor", f"  {_fmt(rep.vif)}",
                 "", "Condition Number", f"  {_fmt(rep.cn)}",
                 "", "Stewart index", f"  {_fmt(rep.k2[0])} {_fmt(rep.k2[1])}"]
        if rep.cv < th.cv_limit:
            lines.append(f"PROBLEMATIC: CV={_fmt(rep.cv)} < threshold {_fmt(th.cv_limit)} "
                         f"(nonessential collinearity)")
            problematic = True
    verdict, severe = _cn_verdict(rep.cn, th)
    lines.append(verdict)
    result["severity"] = cn_severity(rep.cn, th)
    return result, lines, problematic or severe


def _multicol_result(X, th: Thresholds):
    report = multicol(X, th)
    if isinstance(report, SlmReport):
        result, lines, problematic = _slm_result(report, th)
        return {"slm": result}, lines, problematic

    result: dict = {"notes": dict(report.notes)}
    lines: list[str] = []
    problematic = False

    if report.cv is None:
        lines += ["Coefficients of Variation", f"  {report.notes['cv']}", ""]
        result["cv"] = None
    else:
        section, section_lines, flag = _cv_result(report.cv, th)
        result["cv"] = section
        lines += section_lines + [""]
        problematic = problematic or flag

    if report.dummy_pct is None:
        lines += ["Proportion of ones in the dummy variable",
                  f"  {report.notes['dummy_pct']}", ""]
        result["dummy_pct"] = None
    else:
        section, section_lines, _ = _dummy_pct_result(report.dummy_pct)
        result["dummy_pct"] = section
        lines += section_lines + [""]

    if report.correlation is None:
        lines += ["Correlation matrix", f"  {report.notes['correlation']}", ""]
        result["correlation"] = None
        result["vif"] = None
    else:
        section, section_lines, flag = _corr_result(report.correlation, th)
        result["correlation"] = section
        lines += section_lines + [""]
        problematic = problematic or flag
        section, section_lines, flag = _vif_result(report.vifs, th)
        result["vif"] = section
        lines += section_lines + [""]
        problematic = problematic or flag

    if report.cn is None:
        lines += ["Condition Number", f"  {report.notes['cn']}", ""]
        result["cn"] = None
    else:
        section, section_lines, flag = _cns_result(X, th)
        result["cn"] = section
        lines += section_lines + [""]
        problematic = problematic or flag

    if report.stewart is None:
        lines += ["Stewart index", f"  {report.notes['stewart']}"]
        result["stewart"] = None
    else:
        section, section_lines, _ = _stewart_result(report.stewart)
        result["stewart"] = section
        lines += section_lines

    return result, lines, problematic


def _ols_result(y, X, alpha: float):
    fit = ols_fit(y, X)
    verdict = significance_contradiction(fit, alpha)
    result = {
        "labels": list(fit.labels),
        "beta": [float(v) for v in fit.beta],
        "se": [float(v) for v in fit.se],
        "t": [float(v) for v in fit.t],
        "p": [float(v) for v in fit.p],
        "sigma": float(fit.sigma),
        "df_resid": int(fit.df_resid),
        "r2": float(fit.r2),
        "adj_r2": float(fit.adj_r2),
        "f_stat": float(fit.f_stat),
        "f_p": float(fit.f_p),
        "contradiction": {
            "contradiction": verdict.contradiction,
            "alpha": float(verdict.alpha),
            "f_p": float(verdict.f_p),
            "min_coef_p": float(verdict.min_coef_p),
            "description": verdict.description,
        },
    }
    header = ["", "Estimate", "Std. Error", "t value", "Pr(>|t|)"]
    rows = [
        [label, _fmt(b), _fmt(s), _fmt(t), _fmt(p)]
        for label, b, s, t, p in zip(fit.labels, fit.beta, fit.se, fit.t, fit.p)
    ]
    widths = [max(len(r[j]) for r in [header] + rows) for j in range(5)]
    lines = ["Coefficients",
             "  " + "  ".join(header[j].rjust(widths[j]) for j in range(5))]
    for r in rows:
        lines.append("  " + r[0].ljust(widths[0]) + "  " +
                      "  ".join(r[j].rjust(widths[j]) for j in range(1, 5)))
    k = len(fit.labels)
    lines += [
        "",
        f"Residual standard error: {_fmt(fit.sigma)} on {fit.df_resid} degrees of freedom",
        f"Multiple R-squared: {_fmt(fit.r2)}, Adjusted R-squared: {_fmt(fit.adj_r2)}",
        f"F-statistic: {_fmt(fit.f_stat)} on {k - 1} and {fit.df_resid} DF, "
        f"p-value: {_fmt(fit.f_p)}",
    ]
    if verdict.contradiction:
        lines.append(f"PROBLEMATIC: {verdict.description}")
    else:
        lines.append(f"OK: {verdict.description} at alpha={verdict.alpha:g}")
    return result, lines, verdict.contradiction


def _perturb_result(y, X, args):
    cfg = PerturbConfig(
        tol=args.tol,
        iterations=args.iterations,
        noise_mean=args.noise_mean,
        noise_sd=args.noise_sd,
        positions=args.pos if args.pos is not None else (),
        seed=args.seed,
    )
    derived = tuple(
        pos for pos, idx in enumerate(X.non_intercept_idx, start=1)
        if idx in X.quantitative_idx
    )
    if args.pos is not None and tuple(sorted(args.pos)) != derived:
        print(f"note: --pos {','.join(map(str, args.pos))} overrides the role-derived "
              f"positions {','.join(map(str, derived))}", file=sys.stderr)
    res = perturb_n(y, X, cfg)
    perturbed = (X.quantitative_labels if not cfg.positions
                 else tuple(X.labels[X.non_intercept_idx[p - 1]] for p in cfg.positions))

    def stats(s):
        return {"mean": s.mean, "sd": s.sd, "min": s.min, "max": s.max,
                "q2_5": s.q2_5, "q97_5": s.q97_5}

    result = {
        "tol": cfg.tol,
        "iterations": cfg.iterations,
        "noise_mean": cfg.noise_mean,
        "noise_sd": cfg.noise_sd,
        "seed": cfg.seed,
        "perturbed": list(perturbed),
        "achieved_pct": stats(res.achieved_summary),
        "change_pct": stats(res.change_summary),
    }
    header = ["", "mean", "sd", "min", "max", "q2.5", "q97.5"]
    rows = []
    for name, s in (("achieved_pct", res.achieved_summary), ("change_pct", res.change_summary)):
        rows.append([name, _fmt(s.mean), _fmt(s.sd), _fmt(s.min), _fmt(s.max),
                     _fmt(s.q2_5), _fmt(s.q97_5)])
    widths = [max(len(r[j]) for r in [header] + rows) for j in range(7)]
    lines = [
        f"Perturbation experiment: tol={cfg.tol:g}, iterations={cfg.iterations}, "
        f"noise ~ Normal({cfg.noise_mean:g}, {cfg.noise_sd:g})"
        + (f", seed={cfg.seed}" if cfg.seed is not None else ""),
        f"Perturbed regressors: {', '.join(perturbed)}",
        "",
        "  " + "  ".join(header[j].rjust(widths[j]) for j in range(7)),
    ]
    for r in rows:
        lines.append("  " + r[0].ljust(widths[0]) + "  " +
                      "  ".join(r[j].rjust(widths[j]) for j in range(1, 7)))
    lines.append(f"{NO_THRESHOLD_NOTE} for the coefficient change")
    return result, lines, False


# ---------------------------------------------------------------------------


def _run(args) -> tuple[dict, list[str], bool, str]:
    th = _thresholds_from_env()
    ds = _load_dataset(args)
    X = design_matrix(ds)

    if args.command == "rdetr":
        result, lines, problematic = _corr_result(correlation_matrix(X, th), th)
    elif args.command == "vif":
        result, lines, problematic = _vif_result(vif(X), th)
    elif args.command == "cn":
        result, lines, problematic = _cn_result(X, th)
    elif args.command == "cns":
        result, lines, problematic = _cns_result(X, th)
    elif args.command == "ki":
        result, lines, problematic = _stewart_result(stewart_index(X))
    elif args.command == "cv":
        if not X.quantitative_idx:
            raise CliError("no quantitative regressors; nothing to compute a CV for")
        entries = []
        for i in X.quantitative_idx:
            try:
                entries.append((X.labels[i], coefficient_of_variation(X.X[:, i])))
            except ValueError:
                entries.append((X.labels[i], None))
        result, lines, problematic = _cv_result(tuple(entries), th)
    elif args.command == "slm":
        result, lines, problematic = _slm_result(slm(X, th), th)
    elif args.command == "multicol":
        result, lines, problematic = _multicol_result(X, th)
    elif args.command == "ols":
        result, lines, problematic = _ols_result(response_vector(ds), X, args.alpha)
    elif args.command == "perturb":
        result, lines, problematic = _perturb_result(response_vector(ds), X, args)
    else:  # unreachable: argparse restricts the choices
        raise CliError(f"unknown command {args.command!r}")
    return result, lines, problematic, ds.name


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, lines, problematic, dataset_name = _run(args)
    except (CliError, ValueError, FileNotFoundError, SingularMatrixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.format == "json":
        envelope = {
            "schema_version": SCHEMA_VERSION,
            "command": args.command,
            "dataset": dataset_name,
            "problematic": problematic,
            "result": result,
        }
        print(json.dumps(envelope, indent=2))
    else:
        print("\n".join(lines))
    return 1 if problematic and args.fail_on_problematic else 0


if __name__ == "__main__":
    sys.exit(main())
