"""Command-line subcommands and their shared flag groups."""

from __future__ import annotations

import argparse
from typing import Tuple

from ..models import FoliationLabel, IcLine, ModelKind


def vector3(text: str) -> Tuple[float, float, float]:
    """Parse ``a,b,c`` into a 3-tuple of floats."""
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    try:
        return float(parts[0]), float(parts[1]), float(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}") from None


def _group_parser() -> argparse.ArgumentParser:
    return argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)


def add_command(subparsers, name: str, **kwargs) -> argparse.ArgumentParser:
    """Sub-parser whose unset flags stay out of the namespace, like the shared groups."""
    return subparsers.add_parser(name, argument_default=argparse.SUPPRESS, **kwargs)


def common_flags() -> argparse.ArgumentParser:
    parser = _group_parser()
    parser.add_argument("--config", metavar="PATH", help="flat key=value file applied below the flags")
    parser.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING (default) or ERROR")
    return parser


def model_flags() -> argparse.ArgumentParser:
    parser = _group_parser()
    group = parser.add_argument_group("model")
    group.add_argument("--model", choices=[m.value for m in ModelKind], help="flow model (default twowave)")
    group.add_argument("--mu", type=float, help="two-wave: amplitude of the first wave (default 0)")
    group.add_argument("--nu", type=float, help="two-wave: relative amplitude of the second wave (default 1)")
    group.add_argument("--k", type=int, help="two-wave: wavenumber of the second wave (default 1)")
    group.add_argument("--q", type=int, help="Q-flow: fold symmetry (default 4)")
    group.add_argument("--eps", type=float, help="Q-flow: perturbation amplitude (default 0)")
    group.add_argument(
        "--foliation",
        choices=[f.value for f in FoliationLabel],
        help="foliation generator (default r for twowave, qpsi for qflow)",
    )
    return parser


def initial_condition_flags() -> argparse.ArgumentParser:
    parser = _group_parser()
    group = parser.add_argument_group("initial condition")
    for name, model in (("q0", "two-wave"), ("p0", "two-wave"), ("t0", "two-wave")):
        group.add_argument(f"--{name}", type=float, help=f"{model} initial {name[0]}")
    for name in ("x0", "y0", "z0"):
        group.add_argument(f"--{name}", type=float, help=f"Q-flow initial {name[0]}")
    return parser


def control_flags() -> argparse.ArgumentParser:
    parser = _group_parser()
    group = parser.add_argument_group("integration")
    group.add_argument("--tmax", type=float, help="integration horizon (default 150)")
    group.add_argument("--rtol", type=float, help="relative tolerance (default 1e-8)")
    group.add_argument("--atol", type=float, help="absolute tolerance (default 1e-10)")
    group.add_argument("--h-init", dest="h_init", type=float, help="initial step (default 1e-3)")
    group.add_argument("--h-max", dest="h_max", type=float, help="largest step (default 0.1)")
    group.add_argument("--h-min", dest="h_min", type=float, help="smallest step before aborting (default 1e-12)")
    group.add_argument(
        "--singular-tol", dest="singular_tol", type=float, help="gradient norm below which a point is singular"
    )
    return parser


def grid_flags() -> argparse.ArgumentParser:
    parser = _group_parser()
    group = parser.add_argument_group("grid")
    group.add_argument("--axis1", metavar="NAME:LO:HI:N", help="model parameter axis (mu, nu or eps)")
    group.add_argument("--axis2", metavar="NAME:LO:HI:N", help="initial condition axis (p0, u0, y0 or x0)")
    group.add_argument("--ic-line", dest="ic_line", choices=[line.value for line in IcLine], help="line of initial conditions")
    group.add_argument("--workers", type=int, help="worker processes (default 1)")
    return parser
