"""``verify``: seeded property suites."""

from __future__ import annotations

from ..config import VERIFY_SUITES, RunConfig
from ..services.verification import run_verify, summarize
from . import add_command, common_flags


def register(subparsers) -> None:
    parser = add_command(
        subparsers,
        "verify",
        help="check geometric identities, gradients, residual orders and invariances",
        parents=[common_flags()],
    )
    parser.add_argument("suite", nargs="?", default="all", choices=VERIFY_SUITES, help="suite to run (default all)")
    parser.add_argument("--seed", type=int, help="RNG seed (default 0)")
    parser.add_argument("--samples", type=int, help="sample count override for every suite")


def run(cfg: RunConfig) -> int:
    reports = run_verify(cfg.suite, seed=cfg.seed, samples=cfg.samples)
    for report in reports:
        print(f"[{report.suite}] seed={report.seed}")
        for check in report.checks:
            flag = "PASS" if check.passed else "FAIL"
            line = f"  {flag}  {check.name}: worst {check.worst_error:.3e} (tolerance {check.tolerance:.1e})"
            if check.detail:
                line += f"  {check.detail}"
            print(line)
    passed, total = summarize(reports)
    print(f"{passed}/{total} properties passed")
    return 0 if passed == total else 1
