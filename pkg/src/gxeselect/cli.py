"""Command-line surface: simulate, fit, replicate, benchmark, defaults.

Every command echoes its resolved configuration next to its outputs so a
run can be reproduced from the echo alone.  Exit codes: 0 success, 2
configuration error, 3 data error, 4 numerical error, 5 convergence-gate
failure.
"""

from __future__ import annotations

import argparse
import configparser
import dataclasses
import os
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError, ConvergenceError, DataError, NumericalError
from .gibbs import ChainSettings, MethodVariant
from .inference import SelectionReport
from .metrics import DEFAULT_GRID
from .model import Hyperparameters, read_dataset_csv, write_dataset_csv
from .rng import DEFAULT_SEED, make_generator
from .simulate import example_dataset, write_truth_csv
from .study import StudyConfig, benchmark_timings, fit_dataset, run_replicates

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4
EXIT_CONVERGENCE = 5

_HYPER_KEYS = [f.name for f in dataclasses.fields(Hyperparameters)]


def default_config() -> configparser.ConfigParser:
    cfg = configparser.ConfigParser()
    cfg["run"] = {
        "method": "BSSVC-SI",
        "example": "1",
        "n": "500",
        "p": "100",
        "replicates": "100",
        "seed": str(DEFAULT_SEED),
        "threads": str(os.cpu_count() or 1),
    }
    cfg["spline"] = {"degree": "2", "knots": "2"}
    cfg["chain"] = {"iterations": "10000", "burnin": "5000", "thin": "1", "chains": "3"}
    cfg["hyper"] = {k: str(getattr(Hyperparameters(), k)) for k in _HYPER_KEYS}
    return cfg


def _load_config(path: str | None) -> configparser.ConfigParser:
    cfg = default_config()
    if path:
        if not Path(path).exists():
            raise ConfigError(f"config file not found: {path}")
        cfg.read(path)
    return cfg


def _echo_config(cfg: configparser.ConfigParser, outdir: Path) -> None:
    outdir.mkdir(parents=True, exist_ok=True)
    with open(outdir / "config_echo.ini", "w") as fh:
        cfg.write(fh)


def _resolve(args, cfg, section, key, cast, flag=None):
    """CLI flag wins over config file, which wins over the defaults."""
    value = getattr(args, flag or key, None)
    if value is not None:
        cfg[section][key] = str(value)
    return cast(cfg[section][key])


def _hyper_from_config(cfg) -> Hyperparameters:
    return Hyperparameters(**{k: float(cfg["hyper"][k]) for k in _HYPER_KEYS})


def _write_selection(report: SelectionReport, outdir: Path) -> None:
    report.frame().to_csv(outdir / "selection.csv", index=False)
    curves = outdir / "curves"
    curves.mkdir(exist_ok=True)
    if report.intercept_curve is not None:
        report.intercept_curve.frame().to_csv(curves / "intercept.csv", index=False)
    for j, curve in report.curves.items():
        curve.frame().to_csv(curves / f"gene_{j + 1:04d}.csv", index=False)


# ---------------------------------------------------------------------------
# subcommands

def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    n = _resolve(args, cfg, "run", "n", int)
    p = _resolve(args, cfg, "run", "p", int)
    seed = _resolve(args, cfg, "run", "seed", int)
    outdir = Path(args.out)
    rng = make_generator(seed, stream_id=0)
    kwargs = {}
    if args.example == 3:
        if args.maf1 is not None:
            kwargs["q1"] = args.maf1
        if args.maf2 is not None:
            kwargs["q2"] = args.maf2
        if args.ld_r is not None:
            kwargs["r"] = args.ld_r
    data, truth = example_dataset(
        args.example, n, p, rng, genotype_path=args.genotypes, **kwargs
    )
    outdir.mkdir(parents=True, exist_ok=True)
    write_dataset_csv(data, outdir / "dataset.csv")
    write_truth_csv(truth, outdir / "truth.csv")
    cfg["run"]["example"] = str(args.example)
    _echo_config(cfg, outdir)
    print(f"wrote {outdir / 'dataset.csv'} ({n} rows, {p} genes) and truth.csv")
    return EXIT_OK


def cmd_fit(args) -> int:
    cfg = _load_config(args.config)
    method = MethodVariant.parse(_resolve(args, cfg, "run", "method", str))
    seed = _resolve(args, cfg, "run", "seed", int)
    degree = _resolve(args, cfg, "spline", "degree", int)
    knots = _resolve(args, cfg, "spline", "knots", int)
    iterations = _resolve(args, cfg, "chain", "iterations", int, flag="iters")
    burn_in = _resolve(args, cfg, "chain", "burnin", int)
    thin = _resolve(args, cfg, "chain", "thin", int)
    n_chains = _resolve(args, cfg, "chain", "chains", int)
    hyper = _hyper_from_config(cfg)

    data = read_dataset_csv(args.data)
    settings = ChainSettings(
        iterations=iterations, burn_in=burn_in, thin=thin, seed=seed, n_chains=n_chains
    )
    result = fit_dataset(
        data, method, settings, hyper, degree=degree, interior_knots=knots,
        grid=DEFAULT_GRID,
    )

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    chain_dir = outdir / "chains"
    chain_dir.mkdir(exist_ok=True)
    for c in result.chains:
        c.save(chain_dir / f"chain_{c.chain_id}.npz")
    result.pooled.summary_frame().to_csv(outdir / "summary.csv", index=False)
    _write_selection(result.report, outdir)
    if result.psrf is not None:
        result.psrf.frame().to_csv(outdir / "psrf.csv", index=False)
    _echo_config(cfg, outdir)

    if result.psrf is not None:
        print(f"max gated PSRF: {result.psrf.max_gated:.4f} "
              f"({'converged' if result.psrf.converged else 'NOT converged'})")
        if not result.converged and not args.no_psrf_gate:
            raise ConvergenceError(
                f"PSRF gate failed: max {result.psrf.max_gated:.4f} > "
                f"{result.psrf.threshold}"
            )
    print(f"outputs in {outdir}")
    return EXIT_OK


def cmd_replicate(args) -> int:
    cfg = _load_config(args.config)
    seed = _resolve(args, cfg, "run", "seed", int)
    methods = tuple(m.strip() for m in args.methods.split(","))
    for m in methods:
        MethodVariant.parse(m)  # validate early
    config = StudyConfig(
        example=args.example,
        methods=methods,
        replicates=_resolve(args, cfg, "run", "replicates", int),
        n=_resolve(args, cfg, "run", "n", int),
        p=_resolve(args, cfg, "run", "p", int),
        degree=_resolve(args, cfg, "spline", "degree", int),
        interior_knots=_resolve(args, cfg, "spline", "knots", int),
        iterations=_resolve(args, cfg, "chain", "iterations", int, flag="iters"),
        burn_in=_resolve(args, cfg, "chain", "burnin", int),
        thin=_resolve(args, cfg, "chain", "thin", int),
        seed=seed,
        genotype_path=args.genotypes,
        hyper=_hyper_from_config(cfg),
    )
    workers = _resolve(args, cfg, "run", "threads", int)
    result = run_replicates(config, workers=workers)

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    result.table.to_csv(outdir / "replicate_table.csv")
    _echo_config(cfg, outdir)
    if result.failures:
        print(f"WARNING: {len(result.failures)} replicate(s) failed: {result.failures}")
    print(result.table.to_string())
    print(f"aggregated over {config.replicates - len(result.failures)} replicates "
          f"-> {outdir / 'replicate_table.csv'}")
    return EXIT_OK


def cmd_benchmark(args) -> int:
    n_list = [int(v) for v in args.n.split(",")]
    p_list = [int(v) for v in args.p.split(",")]
    table = benchmark_timings(n_list, p_list, iterations=args.iters, seed=args.seed)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    table.to_csv(outdir / "benchmark.csv", index=False)
    print(table.to_string(index=False))
    return EXIT_OK


def cmd_defaults(args) -> int:
    default_config().write(sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gxeselect",
        description="Bayesian variable selection for gene-environment interactions",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="generate a benchmark dataset")
    sim.add_argument("--example", type=int, required=True, choices=(1, 2, 3, 4))
    sim.add_argument("--n", type=int)
    sim.add_argument("--p", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--genotypes", help="genotype CSV for example 4")
    sim.add_argument("--maf1", type=float, help="minor allele frequency, example 3")
    sim.add_argument("--maf2", type=float, help="second-locus MAF, example 3")
    sim.add_argument("--ld-r", type=float, help="adjacent-locus correlation, example 3")
    sim.add_argument("--config")
    sim.add_argument("--out", required=True)
    sim.set_defaults(func=cmd_simulate)

    fit = sub.add_parser("fit", help="fit one dataset")
    fit.add_argument("--data", required=True, help="dataset CSV")
    fit.add_argument("--method")
    fit.add_argument("--iters", type=int)
    fit.add_argument("--burnin", type=int)
    fit.add_argument("--thin", type=int)
    fit.add_argument("--chains", type=int)
    fit.add_argument("--degree", type=int)
    fit.add_argument("--knots", type=int)
    fit.add_argument("--seed", type=int)
    fit.add_argument("--config")
    fit.add_argument("--out", required=True)
    fit.add_argument("--no-psrf-gate", action="store_true")
    fit.set_defaults(func=cmd_fit)

    rep = sub.add_parser("replicate", help="replicate study with scoring tables")
    rep.add_argument("--example", type=int, required=True, choices=(1, 2, 3, 4))
    rep.add_argument("--methods", default="BSSVC-SI",
                     help="comma-separated method labels")
    rep.add_argument("--replicates", type=int)
    rep.add_argument("--n", type=int)
    rep.add_argument("--p", type=int)
    rep.add_argument("--iters", type=int)
    rep.add_argument("--burnin", type=int)
    rep.add_argument("--thin", type=int)
    rep.add_argument("--degree", type=int)
    rep.add_argument("--knots", type=int)
    rep.add_argument("--seed", type=int)
    rep.add_argument("--threads", type=int)
    rep.add_argument("--genotypes")
    rep.add_argument("--config")
    rep.add_argument("--out", required=True)
    rep.set_defaults(func=cmd_replicate)

    bench = sub.add_parser("benchmark", help="sampler timing table")
    bench.add_argument("--n", default="500", help="comma-separated sample sizes")
    bench.add_argument("--p", default="100", help="comma-separated gene counts")
    bench.add_argument("--iters", type=int, default=10_000)
    bench.add_argument("--seed", type=int, default=DEFAULT_SEED)
    bench.add_argument("--out", required=True)
    bench.set_defaults(func=cmd_benchmark)

    dflt = sub.add_parser("defaults", help="print the default configuration")
    dflt.set_defaults(func=cmd_defaults)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ConvergenceError as exc:
        print(f"convergence gate: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
