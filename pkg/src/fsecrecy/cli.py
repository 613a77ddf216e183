"""Command-line front end: ``fsecrecy sweep | eval | verify``.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace

from . import montecarlo, secrecy, verify
from .errors import NumericalError
from .fading import db_to_linear
from .montecarlo import SimConfig
from .sweep import (METHOD_NAMES, PRESETS, CellError, ConfigError, build_config, format_config,
                    parse_scenario, read_config_text, run_sweep)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--metric", choices=secrecy.METRICS)
    p.add_argument("--rs", type=float, help="target secrecy rate r_s in nats (theta = exp(r_s))")
    p.add_argument("--eve-snr-db", type=float, help="gamma_bar_E in dB (default 5)")
    p.add_argument("--lambda-unit", choices=("dB", "linear"),
                   help="unit of lambda values (default dB)")
    p.add_argument("--seed", type=int, help="Monte Carlo seed")
    p.add_argument("--n", type=int, help="Monte Carlo sample count")
    p.add_argument("--bits", action="store_true", default=None, help="report ASC in bits instead of nats")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fsecrecy", description="Secrecy metrics over Fisher-Snedecor F fading.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sw = sub.add_parser("sweep", help="sweep lambda and write a CSV (and optional SVG)")
    _add_common(sw)
    sw.add_argument("--preset", choices=tuple(PRESETS))
    sw.add_argument("--config", help="key=value configuration file; flags override it")
    sw.add_argument("--lambda", dest="lambda_grid", help="grid a:step:b or comma list")
    sw.add_argument("--scenario", action="append", help="m_D,m_sD,m_E,m_sE (repeatable)")
    sw.add_argument("--methods", help="comma list from closed,quad,mc")
    sw.add_argument("--out", help="CSV output path")
    sw.add_argument("--svg", help="SVG plot output path")
    sw.add_argument("--jobs", type=int, help="worker processes for sweep cells")
    sw.add_argument("--print-config", action="store_true",
                    help="print the expanded configuration and exit")

    ev = sub.add_parser("eval", help="evaluate one metric at one point")
    _add_common(ev)
    ev.add_argument("--scenario", required=True, help="m_D,m_sD,m_E,m_sE")
    group = ev.add_mutually_exclusive_group(required=True)
    group.add_argument("--lambda-db", type=float, help="lambda in dB")
    group.add_argument("--lambda", dest="lambda_value", type=float,
                       help="lambda in --lambda-unit (default dB)")
    ev.add_argument("--method", choices=tuple(METHOD_NAMES), default="closed")

    ve = sub.add_parser("verify", help="run a self-verification suite")
    ve.add_argument("suite", choices=tuple(verify.SUITES))
    return parser


def _sweep_values(args) -> dict:
    values = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                values = read_config_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    flag_map = {"preset": args.preset, "metric": args.metric, "lambda": args.lambda_grid,
                "lambda_unit": args.lambda_unit, "eve_snr_db": args.eve_snr_db, "r_s": args.rs,
                "methods": args.methods, "n": args.n, "seed": args.seed, "out": args.out,
                "svg": args.svg, "jobs": args.jobs}
    for key, value in flag_map.items():
        if value is not None:
            values[key] = str(value)
    if args.bits:
        values["bits"] = "true"
    if args.scenario:
        values["scenario"] = [parse_scenario(s) for s in args.scenario]
    return values


def cmd_sweep(args) -> int:
    try:
        cfg = build_config(_sweep_values(args))
    except ConfigError as exc:
        print(f"fsecrecy: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.print_config:
        sys.stdout.write(format_config(cfg))
        return EXIT_OK
    try:
        rows = run_sweep(cfg)
    except CellError as exc:
        print(f"fsecrecy: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"fsecrecy: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {len(rows)} rows to {cfg.output_path}", file=sys.stderr)
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        m_d, m_sd, m_e, m_se = parse_scenario(args.scenario)
        if args.lambda_db is not None:
            ratio = db_to_linear(args.lambda_db)
        elif (args.lambda_unit or "dB") == "dB":
            ratio = db_to_linear(args.lambda_value)
        else:
            ratio = args.lambda_value
        metric = args.metric or "asc"
        s = secrecy.WiretapScenario.from_ratio(
            m_d, m_sd, m_e, m_se, ratio, db_to_linear(5.0 if args.eve_snr_db is None else args.eve_snr_db),
            0.0 if args.rs is None else args.rs)
        mc = SimConfig(n_samples=args.n or SimConfig.n_samples,
                       seed=SimConfig.seed if args.seed is None else args.seed)
    except (ConfigError, ValueError) as exc:
        print(f"fsecrecy: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.method == "mc":
            result = montecarlo.simulate(s, mc, (metric,))[metric].to_result()
        else:
            result = secrecy.evaluate(metric, s, METHOD_NAMES[args.method])
    except (NumericalError, ArithmeticError, ValueError) as exc:
        print(f"fsecrecy: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    unit = "nats"
    if metric == "asc" and args.bits:
        result = replace(result, value=result.value / math.log(2),
                         abs_error_estimate=result.abs_error_estimate / math.log(2))
        unit = "bits"
    unit_field = f" unit={unit}" if metric == "asc" else ""
    print(f"metric={metric} method={result.method.value} value={result.value:.12g} "
          f"err={result.abs_error_estimate:.3g}{unit_field} flags={';'.join(sorted(result.flags)) or '-'}")
    return EXIT_OK


def cmd_verify(args) -> int:
    checks = verify.run_suite(args.suite, report=print)
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_VERIFY if failed else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"sweep": cmd_sweep, "eval": cmd_eval, "verify": cmd_verify}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
