"""Command-line front end.

Each subcommand maps onto a harness config; flags are long-form only.
Exit codes: 0 success, 1 usage or config error, 2 numerical failure
(orthogonality or degeneracy), 3 I/O error.  ``HGC_WORKERS`` provides
the default for ``--workers``.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import theory
from .coupling import gram_schmidt_couple
from .errors import ConfigError, DegeneracyError, DomainError, NumericalError
from .harness import (
    ExperimentConfig,
    Report,
    config_from_json,
    default_trials,
    emit,
    run,
    sweep,
)
from .rng import Seed, sample_gaussian
from .selftest import run_selftest

_KIND_OF_COMMAND = {
    "rownorms": "row-norms",
    "gh": "gh-split",
    "epsilon": "epsilon",
    "compare": "coupling-compare",
    "borel": "borel",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hgc",
        description=(
            "Couple Gaussian random matrices with Haar orthogonal ones and "
            "check the concentration laws of Y - sqrt(n) U empirically."
        ),
    )
    parser.add_argument(
        "--config",
        help="run one experiment from a JSON config file (no subcommand needed)",
    )
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def experiment_flags(p, need_n=True):
        p.add_argument("--n", type=int, required=need_n, help="matrix dimension")
        p.add_argument("--m", type=int, help="truncation size m")
        p.add_argument("--alpha", type=float, help="size as m = floor(alpha n)")
        p.add_argument("--beta", type=float, help="size as m = floor(beta n / ln n)")
        p.add_argument("--trials", type=int, help="trial count (default 5; borel 200)")
        p.add_argument("--seed", type=int, default=0, help="root seed (default 0)")
        p.add_argument(
            "--coupling",
            choices=("plain-gs", "randomized"),
            default="plain-gs",
            help="which coupling produces the reported statistics",
        )
        p.add_argument("--out", help="output file path")
        p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
        p.add_argument(
            "--workers",
            type=int,
            default=int(os.environ.get("HGC_WORKERS", "1")),
            help="parallel trial processes (default $HGC_WORKERS or 1)",
        )
        p.add_argument(
            "--deterministic",
            choices=("on", "off"),
            default="on",
            help="zero wall-time fields for byte-identical output (default on)",
        )

    p = sub.add_parser("couple", help="run one coupling and print its diagnostics")
    p.add_argument("--n", type=int, required=True, help="matrix dimension")
    p.add_argument("--seed", type=int, default=0, help="root seed (default 0)")

    for cmd, kind in _KIND_OF_COMMAND.items():
        p = sub.add_parser(cmd, help=f"run the {kind} experiment")
        experiment_flags(p)

    p = sub.add_parser("sweep", help="run a grid of experiments over n")
    p.add_argument("--kind", default="row-norms",
                   choices=("row-norms", "gh-split", "epsilon", "coupling-compare", "borel"),
                   help="experiment kind for every grid cell")
    p.add_argument("--n", required=True, help="comma-separated dimensions, e.g. 256,512")
    p.add_argument("--m", type=int, help="truncation size m")
    p.add_argument("--alpha", type=float, help="size as m = floor(alpha n)")
    p.add_argument("--beta", type=float, help="size as m = floor(beta n / ln n)")
    p.add_argument("--trials", type=int, help="trial count per cell")
    p.add_argument("--seed", type=int, default=0, help="root seed (default 0)")
    p.add_argument("--coupling", choices=("plain-gs", "randomized"), default="plain-gs")
    p.add_argument("--out", help="output file path")
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    p.add_argument("--workers", type=int,
                   default=int(os.environ.get("HGC_WORKERS", "1")))
    p.add_argument("--deterministic", choices=("on", "off"), default="on")

    p = sub.add_parser("bounds", help="print analytic tail bounds / run dominance checks")
    p.add_argument("--t", type=float, help="Gaussian tail threshold t > 0")
    p.add_argument("--n", type=int, help="ambient dimension for chi/projection bounds")
    p.add_argument("--eps", type=float, help="chi norm deviation parameter in (0,1)")
    p.add_argument("--k", type=int, help="subspace dimension for projection bounds")
    p.add_argument("--rho", type=float, help="projection deviation parameter in (0,1)")
    p.add_argument("--beta", type=float, help="print the (sqrt(beta), sqrt(2 beta)) window")
    p.add_argument("--m", type=int, help="with --n: print the eps_n(m) envelope")
    p.add_argument("--slack", type=float, default=0.0, help="envelope slack (default 0)")
    p.add_argument("--check", action="store_true",
                   help="run the Monte Carlo bound-dominance battery")
    p.add_argument("--seed", type=int, default=0, help="root seed for --check")
    p.add_argument("--out", help="output file path for --check")
    p.add_argument("--format", choices=("csv", "json", "svg"), default="csv")

    p = sub.add_parser("selftest", help="run the acceptance checks at reduced scale")
    p.add_argument("--seed", type=int, default=0, help="root seed (default 0)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return _dispatch(parser, ns)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DegeneracyError, NumericalError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


def _dispatch(parser: argparse.ArgumentParser, ns: argparse.Namespace) -> int:
    if ns.config:
        if ns.command is not None:
            raise ConfigError("--config replaces the subcommand; give one or the other")
        with open(ns.config, "r", encoding="utf-8") as fh:
            config = config_from_json(fh)
        return _run_and_report(config)
    if ns.command is None:
        parser.print_usage(sys.stderr)
        return 1
    if ns.command == "couple":
        return _cmd_couple(ns)
    if ns.command == "sweep":
        return _cmd_sweep(ns)
    if ns.command == "bounds":
        return _cmd_bounds(ns)
    if ns.command == "selftest":
        return 0 if run_selftest(seed=ns.seed) else 2
    kind = _KIND_OF_COMMAND[ns.command]
    trials = ns.trials if ns.trials is not None else default_trials(kind, ns.n)
    config = ExperimentConfig(
        kind=kind,
        n=ns.n,
        m=ns.m,
        alpha=ns.alpha,
        beta=ns.beta,
        trials=trials,
        seed=ns.seed,
        coupling=ns.coupling,
        out=ns.out,
        format=ns.format,
        workers=ns.workers,
        deterministic=ns.deterministic == "on",
    )
    return _run_and_report(config)


def _run_and_report(config: ExperimentConfig) -> int:
    report = run(config)
    print(_summary(report))
    if config.out:
        emit(report)
    return 0


def _cmd_couple(ns) -> int:
    pair = gram_schmidt_couple(sample_gaussian(ns.n, ns.n, Seed(ns.seed, (0,))))
    orth = float(np.abs(pair.u.T @ pair.u - np.eye(ns.n)).max())
    recon = pair.y - pair.u @ np.triu(pair.trace)
    rel = float(
        (np.linalg.norm(recon, axis=0) / np.linalg.norm(pair.y, axis=0)).max()
    )
    r = pair.residual_norms
    print(
        f"couple: n={ns.n} seed={ns.seed} | orthogonality max|U^T U - I|={orth:.3e}, "
        f"column reconstruction rel err={rel:.3e}, residual norms "
        f"min={r.min():.4f} max={r.max():.4f} (chi law: r_j^2 ~ chi2(n-j+1))."
    )
    return 0 if orth <= 1e-10 else 2


def _cmd_sweep(ns) -> int:
    try:
        dims = [int(tok) for tok in ns.n.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad --n list {ns.n!r}: {exc}") from exc
    if not dims:
        raise ConfigError("empty --n list")
    configs = []
    for n in dims:
        trials = ns.trials if ns.trials is not None else default_trials(ns.kind, n)
        configs.append(
            ExperimentConfig(
                kind=ns.kind,
                n=n,
                m=ns.m,
                alpha=ns.alpha,
                beta=ns.beta,
                trials=trials,
                seed=ns.seed,
                coupling=ns.coupling,
                out=ns.out,
                format=ns.format,
                workers=ns.workers,
                deterministic=ns.deterministic == "on",
            )
        )
    table = sweep(configs)
    ok = sum(1 for cell in table.cells if cell["error"] is None)
    print(f"sweep: {ok}/{len(table.cells)} cells ok over n={dims} (kind={ns.kind}).")
    for cell in table.cells:
        if cell["error"]:
            print(f"  n={cell['config'].n}: {cell['error']}")
    if ns.out:
        emit(table, ns.format, ns.out)
    return 0


def _cmd_bounds(ns) -> int:
    printed = False
    if ns.t is not None:
        lower, upper = theory.gaussian_tail_bounds(ns.t)
        print(f"gaussian tail t={ns.t:g}: {lower:.6f} <= P(Z > t) <= {upper:.6f}")
        printed = True
    if ns.n is not None and ns.eps is not None:
        bound = theory.chi_norm_tail(ns.n, ns.eps)
        print(
            f"gaussian norm n={ns.n} eps={ns.eps:g}: each deviation event "
            f"has probability <= {bound:.6f}"
        )
        printed = True
    if ns.k is not None:
        if ns.n is None or ns.rho is None:
            raise ConfigError("--k needs --n and --rho")
        t = ns.t if ns.t is not None and ns.t > 1 else None
        tails = theory.projection_tails(ns.k, ns.n, ns.rho, t)
        print(
            f"projection k={ns.k} n={ns.n} rho={ns.rho:g}: two-sided bounds "
            f"{tails.gaussian_upper:.6f} (Gaussian vector), "
            f"{tails.unit_upper:.6f} (unit vector)"
            + (f", t-bound {tails.unit_t:.6g}" if tails.unit_t is not None else "")
        )
        printed = True
    if ns.beta is not None:
        low, high = theory.beta_interval(ns.beta)
        print(f"beta={ns.beta:g}: eps_n(m) window ({low:.6f}, {high:.6f})")
        printed = True
    if ns.n is not None and ns.m is not None:
        low, high = theory.epsilon_envelope(ns.n, ns.m, ns.slack)
        target = theory.predicted_row_norm(ns.n, ns.m)
        print(
            f"envelope n={ns.n} m={ns.m} slack={ns.slack:g} (leading order): "
            f"eps in [{low:.6f}, {high:.6f}], row-norm target {target:.6f}"
        )
        printed = True
    if ns.check:
        config = ExperimentConfig(
            kind="bounds-check", n=1, seed=ns.seed, out=ns.out, format=ns.format
        )
        report = run(config)
        print(_summary(report))
        if ns.out:
            emit(report)
        if not report.aggregate["all_dominated"]:
            return 2
        printed = True
    if not printed:
        raise ConfigError(
            "nothing to print; give --t, --n/--eps, --k/--rho, --beta, "
            "--n/--m, or --check"
        )
    return 0


def _summary(report: Report) -> str:
    cfg = report.config
    agg = report.aggregate
    head = f"{cfg.kind}: n={cfg.n}"
    if "m" in agg:
        head += f" m={agg['m']} alpha={agg['alpha']:.4g}"
    if cfg.beta is not None:
        head += f" beta={cfg.beta:g}"
    head += f" trials={agg['trials']} seed={cfg.seed} coupling={cfg.coupling} |"
    bits = []
    if cfg.kind == "bounds-check":
        worst = max(agg["checks"], key=lambda c: c["ratio"])
        verdict = "all dominated" if agg["all_dominated"] else "VIOLATED"
        bits.append(
            f"{len(agg['checks'])} tail bounds vs Monte Carlo: {verdict}; "
            f"worst ratio {worst['ratio']:.3f} ({worst['label']}: frequency "
            f"{worst['frequency']:.6g} vs bound {worst['bound']:.6g})"
        )
    elif cfg.kind == "borel":
        crit = 1.63 / math.sqrt(agg["trials"])
        bits.append(
            f"pooled sqrt(n) u_11: KS distance to N(0,1) = {agg['ks']:.4f} "
            f"(1% critical {crit:.4f}), sample mean {agg['borel']['mean']:.4f}"
        )
    else:
        if "sup_F" in agg:
            pred = agg["theory"]["predicted"]
            bits.append(
                f"row norms q50: sup={agg['sup_F']['q50']:.4f} "
                f"inf={agg['inf_F']['q50']:.4f} vs target {pred:.4f} "
                f"(ratio_sup={agg['ratio_sup']['q50']:.4f}, "
                f"ratio_inf={agg['ratio_inf']['q50']:.4f})"
            )
        if "g2_over_m" in agg:
            bits.append(
                f"split q50: |G|^2/m={agg['g2_over_m']['q50']:.5f} "
                f"(alpha/2={agg['alpha'] / 2:.5f}), "
                f"|H|^2/m={agg['h2_over_m']['q50']:.5f}, "
                f"max|<G,H>|/m={agg['max_cross_over_m']['q50']:.5f}"
            )
        if "eps" in agg:
            env = agg["theory"]
            window = (
                f" vs leading-order envelope [{env['eps_lower']:.4f}, "
                f"{env['eps_upper']:.4f}]"
                if "eps_lower" in env
                else ""
            )
            bits.append(f"eps q50={agg['eps']['q50']:.4f}{window}")
        if "eps_randomized" in agg:
            wins = sum(
                1
                for r in report.results
                if r.eps_randomized.eps < r.eps.eps
            )
            bits.append(
                f"randomized eps q50={agg['eps_randomized']['q50']:.4f}, "
                f"improved in {wins}/{agg['trials']} trials"
            )
    return head + " " + "; ".join(bits) + "."
