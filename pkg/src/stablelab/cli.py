"""Command-line front end for the verification suite.

Every stochastic subcommand takes an explicit ``--seed``; there is no
environment fallback and no clock anywhere, so a fixed argument vector
produces a byte-identical report body.  Reports are JSON objects (or
single-row CSV with a fixed header) carrying the echoed config plus the
fields of the verification outcome; absent fields are omitted from JSON
and left empty in CSV.  Exit status: 0 pass, 1 a verification ran and
failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from .complexity_harness import (
    TableFormatError,
    gen_instance,
    table_from_json,
    table_to_json,
    verify_corollary_p2,
    verify_lemma_instance,
    verify_scalar_contraction,
    verify_vector_contraction,
)
from .counterexample import (
    counterexample_exact,
    counterexample_mc,
    divergence_table,
    sphere_family_case,
)
from .empirical_sums import (
    CoefVector,
    c_pr_estimate,
    contraction_constant,
    lr_truncation_convergence,
    verify_stability_law,
)
from .results import VerificationReport, inequality_report
from .rng import CounterStream
from .stable_core import (
    DomainError,
    StableParams,
    abs_moment,
    cf,
    sample_range,
    tail_asymptote,
)

# fixed column order for single-report CSV bodies
_REPORT_COLUMNS = ("command", "lhs", "lhs_err", "rhs", "rhs_err", "constant",
                   "statistic", "p_value", "verdict", "seed", "trials",
                   "config")


# ---------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _seed_type(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be nonnegative")
    return value


def _float_list(text: str) -> list:
    try:
        return [float(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma list of numbers: {text!r}")


def _int_list(text: str) -> list:
    try:
        return [int(tok) for tok in text.split(",") if tok]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma list of integers: {text!r}")


# ---------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    return str(value)


def _csv_body(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _json_body(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _report_doc(command: str, config: dict, rep: VerificationReport,
                trials=None) -> dict:
    doc = {"command": command, "config": config}
    fields = rep.to_dict()
    for drop in ("name", "lhs_trials", "rhs_trials"):
        fields.pop(drop, None)
    doc.update(fields)
    if trials is not None:
        doc["trials"] = trials
    return doc


def _report_body(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return _json_body(doc)
    row = [doc.get(col) for col in _REPORT_COLUMNS]
    return _csv_body(_REPORT_COLUMNS, [row])


def _points_body(pairs) -> str:
    return _csv_body(("x", "y"), pairs)


def _write(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as handle:
            handle.write(text)


def _verdict_exit(doc: dict) -> int:
    verdict = doc.get("verdict")
    if verdict is None or verdict == "pass":
        return 0
    return 1


# ---------------------------------------------------------------------
# subcommand runners: each returns (body, points-or-None, exit code)
# ---------------------------------------------------------------------


def _run_sample(args):
    params = StableParams(alpha=args.alpha, beta=args.beta,
                          gamma=args.gamma, delta=args.delta)
    values = sample_range(params, args.seed, 0, args.count)
    config = {"alpha": args.alpha, "beta": args.beta, "gamma": args.gamma,
              "delta": args.delta, "count": args.count, "seed": args.seed}
    if args.format == "json":
        doc = {"command": "sample", "config": config, "seed": args.seed,
               "trials": args.count, "values": values.tolist()}
        body = _json_body(doc)
    else:
        body = _csv_body(("x",), [(float(v),) for v in values])
    return body, None, 0


def _run_cf_check(args):
    params = StableParams(alpha=args.alpha, beta=args.beta,
                          gamma=args.gamma, delta=args.delta)
    n = args.trials
    values = sample_range(params, args.seed, 0, n)
    diffs = []
    for t in args.tpoints:
        emp = complex(float(np.cos(t * values).mean()),
                      float(np.sin(t * values).mean()))
        diffs.append((t, abs(emp - cf(params, t))))
    lhs = max(d for _, d in diffs)
    config = {"alpha": args.alpha, "beta": args.beta, "gamma": args.gamma,
              "delta": args.delta, "tpoints": args.tpoints,
              "trials": n, "seed": args.seed}
    rep = inequality_report("cf-check", lhs=lhs, rhs=4.0 / math.sqrt(n),
                            constant=1.0, seed=args.seed, lhs_trials=n,
                            statistic=lhs)
    doc = _report_doc("cf-check", config, rep, trials=n)
    return _report_body(doc, args.format), _points_body(diffs), _verdict_exit(doc)


def _run_tail_check(args):
    params = StableParams(alpha=args.alpha, beta=args.beta,
                          gamma=args.gamma, delta=args.delta)
    n = args.trials
    values = sample_range(params, args.seed, 0, n)
    cut = float(np.quantile(values, 1.0 - args.level))
    if cut <= 0.0:
        raise DomainError("upper quantile is not positive; "
                          "increase trials or lower --level")
    empirical = float((values > cut).mean())
    ratio = empirical / tail_asymptote(params, cut)
    config = {"alpha": args.alpha, "beta": args.beta, "gamma": args.gamma,
              "delta": args.delta, "level": args.level,
              "tolerance": args.tolerance, "trials": n, "seed": args.seed}
    rep = inequality_report("tail-check", lhs=abs(ratio - 1.0),
                            rhs=args.tolerance, constant=1.0, seed=args.seed,
                            lhs_trials=n, statistic=ratio)
    doc = _report_doc("tail-check", config, rep, trials=n)
    return _report_body(doc, args.format), None, _verdict_exit(doc)


def _run_stability(args):
    v = CoefVector(entries=tuple(args.coefs), p=args.p)
    base = StableParams(alpha=args.p, beta=0.0, gamma=1.0, delta=0.0)
    rep = verify_stability_law(v, base, args.samples, args.seed)
    config = {"p": args.p, "coefs": args.coefs, "samples": args.samples,
              "seed": args.seed}
    doc = _report_doc("stability", config, rep, trials=args.samples)
    return _report_body(doc, args.format), None, _verdict_exit(doc)


def _run_moments(args):
    if args.coefs is None:
        value = contraction_constant(args.p)
        config = {"p": args.p}
        doc = {"command": "moments", "config": config, "statistic": value,
               "verdict": "pass"}
        return _report_body(doc, args.format), None, 0
    if args.trials is None or args.seed is None:
        raise DomainError("--coefs mode needs --trials and --seed")
    v = CoefVector(entries=tuple(args.coefs), p=args.p)
    est = c_pr_estimate(args.p, args.r, v, args.trials, args.seed)
    unit = StableParams(alpha=args.p, beta=0.0, gamma=1.0, delta=0.0)
    target = abs_moment(unit, args.r) ** (1.0 / args.r)
    config = {"p": args.p, "r": args.r, "coefs": args.coefs,
              "trials": args.trials, "seed": args.seed}
    rep = inequality_report("moments", lhs=abs(est.estimate - target),
                            rhs=est.stderr, constant=3.0, seed=args.seed,
                            lhs_trials=args.trials, statistic=est.estimate)
    doc = _report_doc("moments", config, rep, trials=args.trials)
    return _report_body(doc, args.format), None, _verdict_exit(doc)


def _run_truncation(args):
    if (args.coefs is None) == (args.harmonic is None):
        raise DomainError("give exactly one of --coefs or --harmonic")
    if args.harmonic is not None:
        entries = tuple(1.0 / k for k in range(1, args.harmonic + 1))
    else:
        entries = tuple(args.coefs)
    v = CoefVector(entries=entries, p=args.p)
    cutoffs = sorted(set(args.cutoffs))
    rows = lr_truncation_convergence(v, args.r, cutoffs, args.trials, args.seed)
    errors = [res.estimate for _, res in rows]
    verdict = "pass" if all(b < a for a, b in zip(errors, errors[1:])) \
        else "fail"
    config = {"p": args.p, "r": args.r, "cutoffs": cutoffs,
              "terms": len(entries), "trials": args.trials, "seed": args.seed}
    if args.harmonic is not None:
        config["harmonic"] = args.harmonic
    else:
        config["coefs"] = list(entries)
    if args.format == "json":
        doc = {"command": "truncation", "config": config,
               "points": [[k, res.estimate, res.stderr] for k, res in rows],
               "statistic": errors[-1], "verdict": verdict,
               "seed": args.seed, "trials": args.trials}
        body = _json_body(doc)
    else:
        body = _csv_body(("K", "error", "stderr"),
                         [(k, res.estimate, res.stderr) for k, res in rows])
    points = _points_body([(k, res.estimate) for k, res in rows])
    return body, points, 0 if verdict == "pass" else 1


def _load_table(path):
    try:
        with open(path) as handle:
            text = handle.read()
    except OSError as exc:
        raise TableFormatError(f"cannot read table file: {exc}")
    return table_from_json(text)


def _run_contraction(args):
    table = _load_table(args.table)
    if args.sub == "vector":
        rep = verify_vector_contraction(table, args.trials, args.seed)
        config = {"table": args.table, "p": table.p, "n": table.n,
                  "K": table.K, "m": table.m, "trials": args.trials,
                  "seed": args.seed}
        doc = _report_doc("contraction-vector", config, rep, trials=args.trials)
    elif args.sub == "corollary":
        rep = verify_corollary_p2(table, args.trials, args.seed)
        config = {"table": args.table, "p": table.p, "n": table.n,
                  "K": table.K, "m": table.m, "trials": args.trials,
                  "seed": args.seed}
        doc = _report_doc("contraction-corollary", config, rep,
                          trials=args.trials)
    elif args.sub == "lemma":
        if table.n != 1:
            raise DomainError("lemma mode needs a single-row table (n = 1)")
        offset = np.zeros(table.m) if args.offset is None \
            else np.asarray(args.offset, dtype=np.float64)
        rep = verify_lemma_instance(table.psi[0], table.phi[0], offset,
                                    table.p, args.trials, args.seed)
        config = {"table": args.table, "p": table.p, "K": table.K,
                  "m": table.m, "offset": offset.tolist(),
                  "trials": args.trials, "seed": args.seed}
        doc = _report_doc("contraction-lemma", config, rep, trials=args.trials)
    else:
        h_funcs, bound = _scalar_family(args.h, table.psi, args.seed)
        level = args.L if args.L is not None else bound
        rep = verify_scalar_contraction(table.psi, h_funcs, level,
                                        trials=args.trials, seed=args.seed)
        config = {"table": args.table, "h": args.h, "L": level,
                  "n": table.n, "m": table.m, "seed": args.seed}
        if args.trials is not None:
            config["trials"] = args.trials
        doc = _report_doc("contraction-scalar", config, rep,
                          trials=args.trials)
    return _report_body(doc, args.format), None, _verdict_exit(doc)


def _scalar_family(name: str, values: np.ndarray, seed):
    """One h per row of the value grid plus its Lipschitz level."""
    n = values.shape[0]
    if name == "abs":
        return [np.abs] * n, 1.0
    if name == "clamp":
        return [lambda x: np.clip(x, -1.0, 1.0)] * n, 1.0
    if name == "identity":
        return [lambda x: np.asarray(x, dtype=np.float64)] * n, 1.0
    if seed is None:
        raise DomainError("--h pwl needs --seed")
    from .complexity_harness import _random_pwl
    stream = CounterStream(seed)
    funcs = []
    for i in range(n):
        lo = float(values[i].min()) - 0.5
        hi = float(values[i].max()) + 0.5
        funcs.append(_random_pwl(stream.child(i), lo, hi))
    return funcs, 1.0


def _run_counterexample(args):
    if args.sub == "exact":
        row = counterexample_exact(args.n, args.p)
        config = {"n": args.n, "p": args.p}
        doc = {"command": "counterexample-exact", "config": config,
               "lhs": row.lhs, "rhs": row.rhs_bound, "statistic": row.ratio}
        return _report_body(doc, args.format), None, 0
    if args.sub == "mc":
        row, est = counterexample_mc(args.n, args.p, args.trials, args.seed)
        config = {"n": args.n, "p": args.p, "trials": args.trials,
                  "seed": args.seed}
        rep = inequality_report("counterexample-mc",
                                lhs=abs(est.estimate - row.lhs),
                                rhs=est.stderr, constant=3.0, seed=args.seed,
                                lhs_trials=args.trials, statistic=est.estimate)
        doc = _report_doc("counterexample-mc", config, rep, trials=args.trials)
        return _report_body(doc, args.format), None, _verdict_exit(doc)
    if args.sub == "table":
        rows = divergence_table(args.ns, args.p)
        config = {"ns": args.ns, "p": args.p}
        if args.format == "json":
            doc = {"command": "counterexample-table", "config": config,
                   "rows": [{"n": r.n, "p": r.p, "lhs": r.lhs,
                             "rhs_bound": r.rhs_bound, "ratio": r.ratio,
                             "divergent": r.divergent} for r in rows]}
            body = _json_body(doc)
        else:
            body = _csv_body(
                ("n", "p", "lhs", "rhs_bound", "ratio", "divergent"),
                [(r.n, r.p, r.lhs, r.rhs_bound, r.ratio, r.divergent)
                 for r in rows])
        points = _points_body([(r.n, r.ratio) for r in rows])
        return body, points, 0
    lhs, rhs = sphere_family_case(args.n)
    verdict = "pass" if lhs == 0.0 else "fail"
    config = {"n": args.n}
    doc = {"command": "counterexample-sphere", "config": config, "lhs": lhs,
           "rhs": rhs, "verdict": verdict}
    return _report_body(doc, args.format), None, 0 if verdict == "pass" else 1


def _run_gen_instance(args):
    table = gen_instance(args.n, args.K, args.m, args.p, args.seed)
    return table_to_json(table), None, 0


# ---------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------


def _add_output_flags(sub, default_format="json"):
    sub.add_argument("--output", default=None,
                     help="write the report body here instead of stdout")
    sub.add_argument("--format", choices=("json", "csv"),
                     default=default_format, help="report body format")


def _add_law_flags(sub):
    sub.add_argument("--alpha", type=float, required=True,
                     help="stability index in (0, 2]")
    sub.add_argument("--beta", type=float, default=0.0,
                     help="skewness in [-1, 1]")
    sub.add_argument("--gamma", type=float, default=1.0, help="scale > 0")
    sub.add_argument("--delta", type=float, default=0.0, help="location")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stablelab",
        description="Stable-law numerics and inequality verification. "
                    "Seeds are always explicit; identical invocations "
                    "produce byte-identical reports.")
    subs = parser.add_subparsers(dest="cmd", required=True)

    sub = subs.add_parser("sample", help="draw from a stable law")
    _add_law_flags(sub)
    sub.add_argument("--count", type=_positive_int, required=True)
    sub.add_argument("--seed", type=_seed_type, required=True)
    _add_output_flags(sub)

    sub = subs.add_parser(
        "cf-check", help="empirical characteristic function vs the exact one")
    _add_law_flags(sub)
    sub.add_argument("--tpoints", type=_float_list, default=[0.25, 0.5, 1.0, 2.0],
                     help="comma list of evaluation points")
    sub.add_argument("--trials", type=_positive_int, required=True)
    sub.add_argument("--seed", type=_seed_type, required=True)
    sub.add_argument("--emit-points", default=None,
                     help="write (t, |difference|) CSV pairs here")
    _add_output_flags(sub)

    sub = subs.add_parser(
        "tail-check", help="empirical tail mass vs the power-law asymptote")
    _add_law_flags(sub)
    sub.add_argument("--level", type=float, default=1e-3,
                     help="tail mass at which to compare (default 1e-3)")
    sub.add_argument("--tolerance", type=float, default=0.15,
                     help="allowed relative deviation of the ratio from 1")
    sub.add_argument("--trials", type=_positive_int, required=True)
    sub.add_argument("--seed", type=_seed_type, required=True)
    _add_output_flags(sub)

    sub = subs.add_parser(
        "stability", help="KS check of the weighted-sum stability law")
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--coefs", type=_float_list, required=True)
    sub.add_argument("--samples", type=_positive_int, required=True)
    sub.add_argument("--seed", type=_seed_type, required=True)
    _add_output_flags(sub)

    sub = subs.add_parser(
        "moments",
        help="moment-ratio constant: Monte Carlo vs quadrature, or the "
             "contraction constant alone when --coefs is omitted")
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--r", type=float, default=1.0)
    sub.add_argument("--coefs", type=_float_list, default=None)
    sub.add_argument("--trials", type=_positive_int, default=None)
    sub.add_argument("--seed", type=_seed_type, default=None)
    _add_output_flags(sub)

    sub = subs.add_parser(
        "truncation", help="L_r truncation error of the weighted sum per cutoff")
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--r", type=float, default=1.0)
    sub.add_argument("--coefs", type=_float_list, default=None)
    sub.add_argument("--harmonic", type=_positive_int, default=None,
                     help="use coefficients 1/k for k = 1..N")
    sub.add_argument("--cutoffs", type=_int_list, required=True)
    sub.add_argument("--trials", type=_positive_int, required=True)
    sub.add_argument("--seed", type=_seed_type, required=True)
    sub.add_argument("--emit-points", default=None,
                     help="write (K, error) CSV pairs here")
    _add_output_flags(sub)

    sub = subs.add_parser("contraction",
                          help="comparison inequalities on a function table")
    csubs = sub.add_subparsers(dest="sub", required=True)
    for name, blurb in (
            ("vector", "exact sign side vs stable Monte Carlo side"),
            ("corollary", "p = 2 variant with doubly indexed signs"),
            ("lemma", "single-row table with an offset inside the sup")):
        c = csubs.add_parser(name, help=blurb)
        c.add_argument("--table", required=True, help="table JSON path")
        c.add_argument("--trials", type=_positive_int, required=True)
        c.add_argument("--seed", type=_seed_type, required=True)
        if name == "lemma":
            c.add_argument("--offset", type=_float_list, default=None,
                           help="comma list of offsets, one per column")
        _add_output_flags(c)
    c = csubs.add_parser(
        "scalar", help="row-wise Lipschitz image vs the original values")
    c.add_argument("--table", required=True,
                   help="table JSON path; the psi block is the value grid")
    c.add_argument("--h", choices=("abs", "clamp", "identity", "pwl"),
                   default="abs", help="scalar map applied to every row")
    c.add_argument("--L", type=float, default=None,
                   help="Lipschitz level to verify at (default: the family's)")
    c.add_argument("--trials", type=_positive_int, default=None,
                   help="Monte Carlo trials; omit for exact enumeration")
    c.add_argument("--seed", type=_seed_type, default=None,
                   help="required for --trials or --h pwl")
    _add_output_flags(c)

    sub = subs.add_parser("counterexample",
                          help="coordinate-family divergence arithmetic")
    csubs = sub.add_subparsers(dest="sub", required=True)
    c = csubs.add_parser("exact", help="one dimension, exact closed forms")
    c.add_argument("--n", type=_positive_int, required=True)
    c.add_argument("--p", type=float, required=True)
    _add_output_flags(c)
    c = csubs.add_parser("mc", help="Monte Carlo check of the exact left side")
    c.add_argument("--n", type=_positive_int, required=True)
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--trials", type=_positive_int, required=True)
    c.add_argument("--seed", type=_seed_type, required=True)
    _add_output_flags(c)
    c = csubs.add_parser("table", help="ratio table along a dimension schedule")
    c.add_argument("--ns", type=_int_list, required=True,
                   help="comma list of dimensions")
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--emit-points", default=None,
                   help="write (n, ratio) CSV pairs here")
    _add_output_flags(c, default_format="csv")
    c = csubs.add_parser("sphere",
                         help="all-ones singleton family, exact enumeration")
    c.add_argument("--n", type=_positive_int, required=True)
    _add_output_flags(c)

    sub = subs.add_parser("gen-instance",
                          help="emit a random valid table as JSON")
    sub.add_argument("--n", type=_positive_int, required=True)
    sub.add_argument("--K", type=_positive_int, required=True)
    sub.add_argument("--m", type=_positive_int, required=True)
    sub.add_argument("--p", type=float, required=True)
    sub.add_argument("--seed", type=_seed_type, required=True)
    sub.add_argument("--output", default=None)

    return parser


_RUNNERS = {
    "sample": _run_sample,
    "cf-check": _run_cf_check,
    "tail-check": _run_tail_check,
    "stability": _run_stability,
    "moments": _run_moments,
    "truncation": _run_truncation,
    "contraction": _run_contraction,
    "counterexample": _run_counterexample,
    "gen-instance": _run_gen_instance,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        body, points, code = _RUNNERS[args.cmd](args)
        _write(body, args.output)
        if points is not None and getattr(args, "emit_points", None):
            _write(points, args.emit_points)
    except (DomainError, TableFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
