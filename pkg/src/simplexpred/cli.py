"""Command-line front end: ``predict``, ``evaluate`` and ``validate``.

Tables go to stdout (TSV for predictions and reports, CSV for validation),
logs go to stderr. Exit codes: 0 ok, 2 usage, 3 data error, 4 not enough
data to answer.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import fields, replace

from . import __version__
from ._engine import FeatureEngine
from ._parallel import default_jobs
from .errors import (
    DataError,
    InsufficientData,
    InsufficientDataError,
    InvalidDimension,
    SimplexNotPresent,
)
from .estimator import KernelParams, build_index, build_slice_counts, confidence_interval, estimate
from .evaluation import ExperimentConfig, run_experiment
from .ingestion import load_named, slice_log
from .synthetic import (
    SyntheticConfig,
    consistency_csv,
    consistency_experiment,
    normality_csv,
    normality_experiment,
    parse_ground_truth,
)

log = logging.getLogger("simplexpred")

EXIT_USAGE, EXIT_DATA, EXIT_INSUFFICIENT = 2, 3, 4


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _window(text: str):
    # "all" is kept as a marker so it can override a config-file value
    return "all" if text.lower() in ("none", "all") else int(text)


def _data_flags(p: argparse.ArgumentParser) -> None:
    # defaults are None so that --config values can fill the gaps
    g = p.add_argument_group("data and features")
    g.add_argument("--config", help="flat key=value file; explicit flags override it")
    g.add_argument("--data", help="dataset name (enron, eu, contact, ndc) or path prefix (default: enron)")
    g.add_argument("--data-dir", help="directory holding datasets (default: $SIMPLEXPRED_DATA or ./data)")
    g.add_argument("--T", type=int, help="number of time slices (default: 20)")
    g.add_argument("--d", type=int, help="dimension of the simplices to extend (default: 1)")
    g.add_argument("--k", type=int, help="neighbourhood radius in hops (default: 1)")
    g.add_argument("--D", type=int, help="face-vector length (default: d+2)")
    g.add_argument("--delta", type=int, help="kernel L1 radius (default: 1)")
    g.add_argument("--p", type=_window, help="window length in slices, or 'all' (default: all)")
    g.add_argument("--seed", type=int, help="random seed (default: 0)")


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: available cores)")
    p.add_argument("-v", "--verbose", action="count", default=0, help="more logging on stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simplexpred",
        description="Kernel estimation of higher-order arrival probabilities in temporal simplicial complexes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("predict", help="rank candidate vertices for d-simplices at the last slice")
    _data_flags(pr)
    pr.add_argument("--simplex", type=_int_list, help="comma-separated vertex ids; default: every d-simplex")
    pr.add_argument("--beta", type=float, default=1.0, help="smoothing weight (default: 1)")
    pr.add_argument("--top", type=int, help="print at most this many rows")
    pr.add_argument("--interval", type=float, help="add a block-bootstrap interval at this level, e.g. 0.9")
    pr.add_argument("--n-boot", type=int, default=500, help="bootstrap resamples (default: 500)")
    pr.add_argument("--block-length", type=int, default=1, help="bootstrap block length in slices (default: 1)")
    _common_flags(pr)

    ev = sub.add_parser("evaluate", help="AUC and runtime on a dataset, averaged over repeats")
    _data_flags(ev)
    ev.add_argument("--method", choices=["ours", "aa", "jc", "pa"], help="scorer (default: ours)")
    ev.add_argument("--beta-grid", type=_float_list, help="beta values tried by cross-validation (default: 0.01,0.1,1,10)")
    ev.add_argument("--K", type=int, help="cross-validation folds (default: 3)")
    ev.add_argument("--repeats", type=int, help="independent sampling repeats (default: 10)")
    ev.add_argument("--n-per-class", type=int, help="positives and negatives sampled per repeat (default: 100)")
    ev.add_argument("--format", choices=["table", "json"], default="table", help="output format (default: table)")
    _common_flags(ev)

    va = sub.add_parser("validate", help="Monte Carlo checks of consistency and asymptotic normality")
    va.add_argument("check", choices=["consistency", "normality"])
    va.add_argument("--T-grid", type=_int_list, default=(25, 100, 400), help="slice counts for the consistency check")
    va.add_argument("--T", type=int, default=500, help="slice count for the normality check (default: 500)")
    va.add_argument("--replicates", type=int, help="Monte Carlo replicates (default: 50 / 200)")
    va.add_argument("--beta", type=float, help="fixed smoothing weight (default: 1/T or T^-0.6)")
    va.add_argument("--delta", type=int, default=1, help="kernel L1 radius (default: 1)")
    va.add_argument("--d", type=int, default=1, help="simplex dimension (default: 1)")
    va.add_argument("--k", type=int, default=2, help="neighbourhood radius (default: 2)")
    va.add_argument("--D", type=int, help="face-vector length (default: d+2)")
    va.add_argument("--n-vertices", type=int, default=40, help="vertices in the starting complex (default: 40)")
    va.add_argument("--immigration", type=float, default=0.5, help="mean fresh strips per slice (default: 0.5)")
    va.add_argument("--ground-truth", default="gated_ball(scale=1.2)", help="g family, e.g. 'score_step(high=0.3)'")
    va.add_argument("--z-out", help="also write replicate,z_value CSV here (normality only)")
    va.add_argument("--seed", type=int, default=0, help="random seed (default: 0)")
    _common_flags(va)
    return parser


def _experiment_config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_file(args.config) if args.config else ExperimentConfig()
    flag_names = {
        "data": "data", "data_dir": "data_dir", "T": "T", "d": "d", "k": "k", "D": "D",
        "delta": "delta", "p": "p", "seed": "seed", "method": "method", "beta_grid": "betas",
        "K": "K", "repeats": "repeats", "n_per_class": "n_per_class",
    }
    known = {f.name for f in fields(ExperimentConfig)}
    updates = {}
    for flag, key in flag_names.items():
        value = getattr(args, flag, None)
        if value is not None and key in known:
            updates[key] = None if value == "all" else value
    return replace(cfg, **updates)


def cmd_predict(args, out) -> int:
    cfg = _experiment_config(args)
    D = cfg.d + 2 if cfg.D is None else cfg.D
    f = slice_log(load_named(cfg.data, cfg.data_dir), cfg.T)
    T_train = f.T - 2
    index = build_index(f, T=T_train, p=cfg.p, d=cfg.d, k=cfg.k, D=D)
    params = KernelParams(args.beta, cfg.delta)
    engine = FeatureEngine(cfg.d, cfg.k, D, track_counts=False)
    for group in f.slice_arrivals:
        engine.advance(group)
    engine.refresh()
    if args.simplex is not None:
        sigma = tuple(sorted(set(args.simplex)))
        if len(sigma) != cfg.d + 1:
            raise InvalidDimension(f"--simplex has {len(sigma)} vertices, --d {cfg.d} needs {cfg.d + 1}")
        if sigma not in engine.cache:
            raise SimplexNotPresent(f"simplex {list(sigma)} is not in the complex at the last slice")
        targets = [sigma]
    else:
        targets = sorted(engine.cache)
    counts = None
    if args.interval is not None:
        counts = build_slice_counts(f, T=T_train, p=cfg.p, d=cfg.d, k=cfg.k, D=D)
    rows = []
    for sigma in targets:
        fvec, cands = engine.cache[sigma]
        for v, h in cands.items():
            tau = tuple(sorted(sigma + (v,)))
            if engine.trie.has(tau):
                continue  # already closed, cannot arrive
            F = fvec + (h,)
            try:
                g = estimate(index, F, params)
            except InsufficientData as exc:
                g = exc.fallback
            rows.append((g, sigma, v, F))
    rows.sort(key=lambda r: (-r[0], r[1], r[2]))
    if args.top is not None:
        rows = rows[: max(args.top, 0)]
    header = ["simplex", "candidate", "feature", "estimate"]
    if counts is not None:
        header += ["lower", "upper"]
    print("\t".join(header), file=out)
    for g, sigma, v, F in rows:
        cells = [",".join(map(str, sigma)), str(v), ",".join(map(str, F)), f"{g:.6g}"]
        if counts is not None:
            try:
                lo, hi = confidence_interval(
                    counts, F, params, args.interval,
                    n_boot=args.n_boot, block_length=args.block_length, seed=cfg.seed,
                )
                cells += [f"{lo:.6g}", f"{hi:.6g}"]
            except InsufficientData:
                cells += ["nan", "nan"]
        print("\t".join(cells), file=out)
    return 0


def cmd_evaluate(args, out) -> int:
    cfg = _experiment_config(args)
    report = run_experiment(cfg, jobs=args.jobs)
    print(report.to_json() if args.format == "json" else report.to_table(), file=out)
    return 0


def cmd_validate(args, out) -> int:
    config = SyntheticConfig(
        n_vertices=args.n_vertices,
        d=args.d,
        k=args.k,
        D=args.D,
        ground_truth=parse_ground_truth(args.ground_truth),
        seed=args.seed,
        immigration=args.immigration,
    )
    if args.check == "consistency":
        replicates = 50 if args.replicates is None else args.replicates
        kwargs = {"delta": args.delta, "jobs": args.jobs}
        if args.beta is not None:
            kwargs["beta_rule"] = _Fixed(args.beta)
        rows = consistency_experiment(config, args.T_grid, replicates, **kwargs)
        out.write(consistency_csv(rows))
        return 0
    replicates = 200 if args.replicates is None else args.replicates
    result = normality_experiment(
        config, args.T, replicates, beta=args.beta, delta=args.delta, jobs=args.jobs
    )
    print("ks_statistic,p_value,empirical_variance,probe", file=out)
    probe = " ".join(map(str, result.probe))
    print(f"{result.ks_statistic:.6g},{result.p_value:.6g},{result.empirical_variance:.6g},{probe}", file=out)
    if args.z_out:
        with open(args.z_out, "w") as fh:
            fh.write(normality_csv(result))
    return 0


class _Fixed:
    """Constant beta schedule (picklable, unlike a lambda)."""

    def __init__(self, beta: float):
        self.beta = beta

    def __call__(self, T: int) -> float:
        return self.beta


COMMANDS = {"predict": cmd_predict, "evaluate": cmd_evaluate, "validate": cmd_validate}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.jobs is None:
        args.jobs = default_jobs()
    try:
        return COMMANDS[args.command](args, out)
    except InsufficientDataError as exc:
        log.error("%s", exc)
        return EXIT_INSUFFICIENT
    except (DataError, FileNotFoundError) as exc:
        log.error("%s", exc)
        return EXIT_DATA
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
