"""Command-line interface.

Subcommands: estimate, ci, test, samc (all on a CSV of observations) and
simulate (coverage study of the asymptotic confidence interval). Output
is a machine-readable JSON record by default; every record echoes the
resolved configuration for reproducibility.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric degeneracy.
"""

from __future__ import annotations

import argparse
import csv
import json
import statistics as pystats
import sys
import time
import warnings

import numpy as np

from . import __version__
from .asymptotics import asymptotic_ci, full_estimate, z_statistic, z_test_pvalue
from .datagen import (
    ComponentDistribution,
    CovarianceCase,
    SigmaSpec,
    build_sigma,
    replication_rng,
    sample_icm,
    solve_phi_for_psi,
)
from .exceptions import DataError, InvalidParameterError, NumericError, PsicorrError
from .linalg import sqrt_psd
from .resampling import ResamplePlan, bootstrap_ci, null_resample_pvalue
from .samc import SamcConfig, samc_pvalue

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def ingest_csv(path, has_header=True):
    """Strict numeric CSV reader: rectangular, no missing cells, p >= 2.

    Returns (matrix, column_names). Any non-numeric cell aborts with a
    row/column-indexed error; no imputation is attempted.
    """
    rows = []
    names = None
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot open {path}: {exc}") from exc
    with fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row:
                continue
            if has_header and names is None:
                names = [c.strip() for c in row]
                continue
            parsed = []
            for j, cell in enumerate(row):
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise DataError(
                        f"non-numeric cell {cell!r} at row {lineno}, "
                        f"column {names[j] if names and j < len(names) else j + 1}"
                    ) from None
            rows.append(parsed)
    if not rows:
        raise DataError(f"{path} contains no data rows")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise DataError(f"ragged rows: widths {sorted(widths)}")
    p = widths.pop()
    if p < 2:
        raise DataError(f"need at least 2 columns, got {p}")
    if names is not None and len(names) != p:
        raise DataError(f"header has {len(names)} fields but rows have {p}")
    if names is None:
        names = [f"X{j + 1}" for j in range(p)]
    X = np.asarray(rows, dtype=float)
    if not np.all(np.isfinite(X)):
        i, j = np.argwhere(~np.isfinite(X))[0]
        raise DataError(f"non-finite value at data row {i + 1}, column {names[j]}")
    return X, names


def _estimate_record(X, args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        est = full_estimate(X, center_kappa=not args.zero_mean)
    warns = list(est.warnings) + [str(w.message) for w in caught]
    record = {
        "n": est.n,
        "p": est.p,
        "psi_hat": est.psi_hat,
        "psi_bc": est.psi_bc,
        "kappa_hat": est.kappa_hat,
        "tau_hat": est.tau_hat,
        "eta_hat": est.eta_hat,
        "delta_hat": est.delta_hat,
        "sigma_hat": est.sigma_hat,
        "ci": None,
        "test": None,
        "warnings": warns,
        "seed": args.seed,
    }
    return est, record


def cmd_estimate(args):
    X, _ = ingest_csv(args.input, has_header=args.header)
    _, record = _estimate_record(X, args)
    return record


def cmd_ci(args):
    X, _ = ingest_csv(args.input, has_header=args.header)
    est, record = _estimate_record(X, args)
    if args.method == "asymptotic":
        ci = asymptotic_ci(est.psi_bc, est.sigma_hat, level=args.level)
    else:
        ci = bootstrap_ci(X, B=args.reps, level=args.level, seed=args.seed)
    record["ci"] = {
        "lower": ci.lower,
        "upper": ci.upper,
        "level": ci.level,
        "method": args.method,
    }
    return record


def cmd_test(args):
    X, _ = ingest_csv(args.input, has_header=args.header)
    est, record = _estimate_record(X, args)
    if args.method == "asymptotic":
        z = z_statistic(est.psi_hat, est.n, est.p)
        result = z_test_pvalue(z)
        record["test"] = {"z": result.z, "p_value": result.p_value,
                          "method": "asymptotic", "degenerate": result.degenerate}
    elif args.method in ("permutation", "bootstrap"):
        plan = ResamplePlan(method=args.method, B=args.reps, seed=args.seed)
        pvalue, z1 = null_resample_pvalue(X, plan, return_details=True)
        record["test"] = {"z": z1, "p_value": pvalue,
                          "method": args.method, "B": args.reps}
    else:
        record["test"] = _run_samc(X, args)
    return record


def _run_samc(X, args):
    chains = []
    for c in range(args.chains):
        config = SamcConfig(m=args.m, t0=args.t0, T=args.T, varpi=args.varpi,
                            seed=args.seed + c)
        res = samc_pvalue(X, config)
        chains.append(res)
    return {
        "z": chains[0].z1_abs,
        "p_value": pystats.median(r.p_value for r in chains),
        "method": "samc",
        "chains": [
            {
                "p_value": r.p_value,
                "acceptance_rate": r.acceptance_rate,
                "empty_regions": r.empty_regions,
                "seed": args.seed + i,
            }
            for i, r in enumerate(chains)
        ],
        "m": args.m,
        "t0": args.t0,
        "T": args.T,
        "varpi": args.varpi,
    }


def cmd_samc(args):
    X, _ = ingest_csv(args.input, has_header=args.header)
    record = {"n": X.shape[0], "p": X.shape[1], "seed": args.seed,
              "test": _run_samc(X, args), "warnings": []}
    return record


def simulate_coverage(case, psi_target, n, p=None, q=None, dist="normal",
                      reps=1000, level=0.95, seed=0):
    """Coverage/length study of the asymptotic confidence interval.

    Either a fixed dimension ``p`` or a ratio ``q = p/n`` must be given.
    Each replication uses an independent seeded stream, so results do not
    depend on execution order.
    """
    if (p is None) == (q is None):
        raise InvalidParameterError("give exactly one of p or q")
    if q is not None:
        p = int(round(q * n))
    case = CovarianceCase(case)
    dist = ComponentDistribution(dist)
    phi = solve_phi_for_psi(case, p, psi_target)
    spec = SigmaSpec(case=case, phi=phi, p=p)
    sigma_sqrt = sqrt_psd(build_sigma(spec))
    start = time.perf_counter()
    covered = 0
    lengths = np.empty(reps)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for rep in range(reps):
            rng = replication_rng(seed, rep)
            X = sample_icm(n, spec, dist, rng=rng, sigma_sqrt=sigma_sqrt)
            est = full_estimate(X)
            ci = asymptotic_ci(est.psi_bc, est.sigma_hat, level=level)
            covered += ci.contains(psi_target)
            lengths[rep] = ci.upper - ci.lower
    coverage = covered / reps
    return {
        "case": case.value,
        "psi_target": psi_target,
        "phi": phi,
        "n": n,
        "p": p,
        "q": q,
        "dist": dist.value,
        "reps": reps,
        "level": level,
        "seed": seed,
        "coverage_pct": 100.0 * coverage,
        "avg_length": float(lengths.mean()),
        "mc_stderr": float(np.sqrt(coverage * (1.0 - coverage) / reps)),
        "runtime_sec": time.perf_counter() - start,
    }


def cmd_simulate(args):
    return simulate_coverage(
        case=args.case, psi_target=args.psi, n=args.n, p=args.p, q=args.q,
        dist=args.dist, reps=args.reps, level=args.level, seed=args.seed,
    )


def _emit(record, fmt):
    if fmt == "json":
        print(json.dumps(record, indent=2, sort_keys=True, allow_nan=True))
    elif fmt == "csv":
        flat = _flatten(record)
        writer = csv.writer(sys.stdout)
        writer.writerow(flat.keys())
        writer.writerow(flat.values())
    else:
        for key, value in sorted(_flatten(record).items()):
            print(f"{key:24s} {value}")


def _flatten(record, prefix=""):
    out = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, prefix=f"{name}."))
        elif isinstance(value, list):
            out[name] = json.dumps(value)
        else:
            out[name] = value
    return out


def _add_io_args(sub):
    sub.add_argument("--input", required=True, help="CSV file, rows = observations")
    header = sub.add_mutually_exclusive_group()
    header.add_argument("--header", dest="header", action="store_true", default=True)
    header.add_argument("--no-header", dest="header", action="store_false")
    sub.add_argument("--zero-mean", action="store_true",
                     help="treat data as zero-mean when estimating kappa")


def _add_common_args(sub):
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--output", choices=("json", "csv", "table"), default="json")


def _add_samc_args(sub):
    sub.add_argument("--varpi", type=float, default=0.2)
    sub.add_argument("--m", type=int, default=300)
    sub.add_argument("--t0", type=int, default=1000)
    sub.add_argument("--T", type=int, default=1_000_000)
    sub.add_argument("--chains", type=int, default=1)


def build_parser():
    parser = _Parser(prog="psicorr",
                     description="Dependent-variable-free multiple correlation")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    est = subs.add_parser("estimate", help="point estimates from a CSV")
    _add_io_args(est)
    _add_common_args(est)
    est.set_defaults(func=cmd_estimate)

    ci = subs.add_parser("ci", help="confidence interval for the coefficient")
    _add_io_args(ci)
    _add_common_args(ci)
    ci.add_argument("--method", choices=("asymptotic", "bootstrap"),
                    default="asymptotic")
    ci.add_argument("--level", type=float, default=0.95)
    ci.add_argument("--reps", type=int, default=2000,
                    help="bootstrap replications")
    ci.set_defaults(func=cmd_ci)

    test = subs.add_parser("test", help="test the independence hypothesis")
    _add_io_args(test)
    _add_common_args(test)
    test.add_argument("--method",
                      choices=("asymptotic", "permutation", "bootstrap", "samc"),
                      default="asymptotic")
    test.add_argument("--reps", type=int, default=2000,
                      help="resampling replications")
    _add_samc_args(test)
    test.set_defaults(func=cmd_test)

    samc = subs.add_parser("samc", help="adaptive Monte Carlo p-value with diagnostics")
    _add_io_args(samc)
    _add_common_args(samc)
    _add_samc_args(samc)
    samc.set_defaults(func=cmd_samc)

    sim = subs.add_parser("simulate", help="coverage study of the asymptotic CI")
    _add_common_args(sim)
    sim.add_argument("--case", choices=[c.value for c in CovarianceCase],
                     required=True)
    sim.add_argument("--psi", type=float, required=True)
    sim.add_argument("--p", type=int, default=None)
    sim.add_argument("--q", type=float, default=None,
                     help="dimension ratio p/n (alternative to --p)")
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--dist", choices=[d.value for d in ComponentDistribution],
                     default="normal")
    sim.add_argument("--reps", type=int, default=1000)
    sim.add_argument("--level", type=float, default=0.95)
    sim.add_argument("--threads", type=int, default=1,
                     help="reserved; replications already use per-rep streams")
    sim.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        record = args.func(args)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PsicorrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(record, args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
