#!/usr/bin/env python3
"""
Command-line interface for subclock.

It parses arguments, layers flags over an optional run-config
file and the persisted defaults, and dispatches to the
pipeline.

Commands:
- `subclock fit`: fit a model to a date,value CSV
- `subclock simulate`: write synthetic draws from a model
- `subclock density`: write the FFT density table of a law
- `subclock diagnose`: PIT tests of a parameter set on data
- `subclock moments`: model moments next to sample moments
- `subclock config [args]`: view or change persisted defaults
"""
# ========================= STANDARDS =======================
from typing import NoReturn, Callable
from pathlib import Path
import argparse
import warnings
import json
import sys

# ========================== LOCALS =========================
from .pipeline import RunConfig, FORMS, run_fit, simulate, ingest
from .pipeline import emit_density, emit_moment_table
from .estimation import get_model, covering_grid, loglik_fft
from .errors import ConfigError, SubclockError, SubclockWarning
from .diagnostics import run_diagnostics
from .reporters.report import write_json
from .help_menu import main as subclock
from .numerics import FFTConfig
from .config import config_cmd
from .reporters import console
from .docs import cli
from . import utils


__doc__ = cli


def parse_args(argv: list[str]) -> argparse.Namespace:
    """
    Parse command-line arguments for the subclock CLI.

    Args:
        argv (list): Command-line arguments without the program
                     name

    Returns:
        argparse.Namespace: Parsed arguments; `cmd` names the
                            subcommand
    """
    p   = argparse.ArgumentParser(prog="subclock",
          description=subclock())
    sub = p.add_subparsers(dest="cmd")

    # flags every verb accepts
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--color", action="store_true")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--grid-size", type=int)
    grid.add_argument("--x-span", type=float)

    law = argparse.ArgumentParser(add_help=False)
    law.add_argument("--model", required=True)
    law.add_argument("--params", required=True,
                     help="JSON object, inline or a file path")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--transform", default="log-return",
                      choices=utils.TRANSFORMS)
    data.add_argument("--missing", default=None,
                      choices=["fail", "drop"])

    # fit
    fit = sub.add_parser("fit", parents=[common, grid])
    fit.add_argument("--config")
    fit.add_argument("--model")
    fit.add_argument("--input")
    fit.add_argument("--transform", choices=utils.TRANSFORMS)
    fit.add_argument("--missing", choices=["fail", "drop"])
    fit.add_argument("--seed", type=int)
    fit.add_argument("--fix", action="append", default=[],
                     metavar="K=V")
    fit.add_argument("--report")
    fit.add_argument("--density")
    fit.add_argument("--moments")
    fit.add_argument("--pwf")
    fit.add_argument("--restarts", type=int)
    fit.add_argument("--max-evals", type=int)
    fit.add_argument("--tolerance", type=float)
    fit.add_argument("--workers", type=int)
    fit.add_argument("--ecf-count", type=int)
    fit.add_argument("--ecf-span", type=float)
    fit.add_argument("--ecf-weight", choices=utils.WEIGHTS)

    # simulate
    sim = sub.add_parser("simulate", parents=[common, law])
    sim.add_argument("output")
    sim.add_argument("--n", type=int, default=10_000)
    sim.add_argument("--seed", type=int, default=utils.SEED)
    sim.add_argument("--form", default="raw", choices=FORMS)

    # density
    den = sub.add_parser("density", parents=[common, grid, law,
          data])
    den.add_argument("output")
    den.add_argument("--input")

    # diagnose
    diag = sub.add_parser("diagnose", parents=[common, grid, law,
           data])
    diag.add_argument("--input", required=True)
    diag.add_argument("--report")

    # moments
    mom = sub.add_parser("moments", parents=[common, law, data])
    mom.add_argument("--input")
    mom.add_argument("--output")

    # config
    config = sub.add_parser("config")
    config.add_argument("args", nargs="*")

    return p.parse_args(argv)


# ========================= HELPERS =========================
def _params(text: str) -> dict:
    """JSON object given inline or as a path to a file."""
    source = Path(text)
    try:
        raw  = source.read_text() if source.is_file() else text
        data = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ConfigError(f"--params is not JSON: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError("--params must be a JSON object")
    try: return {k: float(v) for k, v in data.items()}
    except (TypeError, ValueError):
        raise ConfigError("--params values must be numbers") from None


def _fixes(items: list[str]) -> dict | None:
    """`k=v` pairs; v=none frees a gauge default."""
    if not items: return None
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--fix expects k=v, got '{item}'")
        value = value.strip()
        if value.lower() == "none": out[key.strip()] = None
        else:
            try: out[key.strip()] = float(value)
            except ValueError:
                raise ConfigError(f"--fix {key}: '{value}' is not a "
                                + "number") from None
    return out


def _drop_none(mapping: dict) -> dict:
    return {k: v for k, v in mapping.items() if v is not None}


def _fft(args) -> FFTConfig:
    return FFTConfig(**_drop_none({"grid_size": args.grid_size,
           "x_span": args.x_span}))


def _law(args):
    model = get_model(args.model)
    theta = {**model.gauge, **_params(args.params)}
    return model, model.law(theta)


def _data(args):
    if not args.input: return None
    return ingest(args.input, args.transform, args.missing or
           "fail").values


# ========================= COMMANDS ========================
def fit_cmd(args) -> int:
    ecf = _drop_none({"restarts": args.restarts, "max_evals":
          args.max_evals, "tolerance": args.tolerance, "workers":
          args.workers, "count": args.ecf_count, "span":
          args.ecf_span, "weight": args.ecf_weight})
    fft = _drop_none({"grid_size": args.grid_size, "x_span":
          args.x_span})
    outputs = _drop_none({"report": args.report, "density":
              args.density, "moments": args.moments, "pwf":
              args.pwf})

    cfg = RunConfig.load(args.config, model=args.model, input=
          args.input, transform=args.transform, missing=
          args.missing, seed=args.seed, fixed=_fixes(args.fix),
          ecf=ecf or None, fft=fft or None, outputs=outputs or None)
    report = run_fit(cfg)

    console.fit_summary(report.fit, cfg.input)
    console.tests_summary(report.diagnostics)
    console.moments_summary(report.moments)
    for key, path in cfg.outputs.items():
        utils.transmit(f"{key} {utils.SEP} {utils.show_path(path)}",
                       _list=True)
    utils.newline()
    return utils.OK


def simulate_cmd(args) -> int:
    series = simulate(args.model, _params(args.params), args.n,
             args.output, args.seed, args.form)
    utils.transmit(f"wrote {series.count} {args.form} values from "
                 + f"{args.model} to {utils.show_path(args.output)}\n")
    return utils.OK


def density_cmd(args) -> int:
    _, law = _law(args)
    out    = emit_density(law, args.output, _fft(args), _data(args))
    utils.transmit(f"density on {out['points']} points to "
                 + f"{utils.show_path(out['path'])}")
    if out["kde_path"]:
        utils.transmit(f"kde {utils.SEP} "
                     + f"{utils.show_path(out['kde_path'])}",
                     _list=True)
    utils.newline()
    return utils.OK


def diagnose_cmd(args) -> int:
    model, law = _law(args)
    data  = _data(args)
    grid  = covering_grid(law.chf, data, _fft(args))
    tests = {k: t.to_dict() for k, t in run_diagnostics(grid,
             data).items()}
    loglik = loglik_fft(law.chf, data, grid=grid)

    utils.transmit(f"{model.tag} on {utils.show_path(args.input)}: "
                 + f"loglik {loglik:.4f}\n")
    console.tests_summary(tests)
    if args.report:
        write_json({"model": model.tag, "loglik": loglik,
                    "diagnostics": tests}, args.report)
    return utils.OK


def moments_cmd(args) -> int:
    _, law = _law(args)
    table  = emit_moment_table(law, _data(args))
    console.moments_summary(table)
    if args.output: write_json(table, args.output)
    return utils.OK


COMMANDS: dict[str, Callable] = {
    "fit":      fit_cmd,
    "simulate": simulate_cmd,
    "density":  density_cmd,
    "diagnose": diagnose_cmd,
    "moments":  moments_cmd,
    "config":   lambda args: config_cmd(args.args),
}


def main() -> NoReturn:
    """
    Entry point for the subclock CLI.

    Parses arguments, runs the verb with subclock warnings
    captured, reports them in yellow and exits with 0 on
    success, 2 on configuration errors, 3 on data errors and 4
    on numerical failures.
    """
    if len(sys.argv) == 1: sys.argv.append("--help")

    args      = parse_args(sys.argv[1:])
    exit_code = utils.OK
    if args.cmd is None:
        sys.argv[1:] = ["--help"]
        subclock()

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", SubclockWarning)
        try: exit_code = COMMANDS[args.cmd](args)
        except SubclockError as e:
            utils.transmit(f"{e}\n", utils.BAD)
            exit_code = e.exit_code
        except KeyboardInterrupt:
            utils.transmit("user aborted\n", utils.BAD)
            exit_code = 1
    console.warnings_summary([w for w in caught if issubclass(
        w.category, SubclockWarning)])

    sys.exit(exit_code)


if __name__ == "__main__": main()
