"""Command-line entry point: ``grassvol <command> ...``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage, configuration or input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from common.basemodel import ConvergenceEntry, HolonomyReport, VerificationRecord, VolumeReport
from common.context import MC_LAWS, ConfigError, Context
from common.utils import matrix_from_json, matrix_to_payload

from . import checks, families, flags, grassmann, holonomy
from .report import ReportError, emit_report, render_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    """Raised for arguments that parse but cannot be honoured."""


def _global_options() -> argparse.ArgumentParser:
    # SUPPRESS keeps subcommand copies from overwriting values given before the command.
    parent = argparse.ArgumentParser(add_help=False)
    group = parent.add_argument_group("global options")
    group.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="base random seed")
    group.add_argument(
        "--tol", type=float, default=argparse.SUPPRESS, help="predicate tolerance"
    )
    group.add_argument(
        "--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output"
    )
    group.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="worker threads")
    group.add_argument(
        "--config", type=Path, default=argparse.SUPPRESS, help="key=value configuration file"
    )
    group.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=argparse.SUPPRESS,
        help="log progress to stderr (-vv for debug)",
    )
    return parent


def build_parser() -> argparse.ArgumentParser:
    """Assemble the argument parser with every subcommand."""
    common = _global_options()
    parser = argparse.ArgumentParser(
        prog="grassvol",
        description="Verify Grassmannian volumes, gate identities and holonomies.",
        parents=[common],
    )
    commands = parser.add_subparsers(dest="command", required=True)

    grassmann_cmd = commands.add_parser("grassmann", help="Grassmannian volumes", parents=[common])
    grassmann_sub = grassmann_cmd.add_subparsers(dest="action", required=True)
    volume = grassmann_sub.add_parser(
        "verify-volume", help="Monte-Carlo volume against the closed form", parents=[common]
    )
    volume.add_argument("--k", type=int, required=True)
    volume.add_argument("--n", type=int, required=True)
    volume.add_argument("--samples", type=int, default=None)
    volume.add_argument(
        "--law", choices=MC_LAWS, default=None, help="Monte-Carlo sampling law (default: mc_law)"
    )
    quadrature = grassmann_sub.add_parser(
        "quadrature", help="deterministic k=1 volume pipeline", parents=[common]
    )
    quadrature.add_argument("--n", type=int, required=True)
    quadrature.add_argument("--grid", type=int, default=64)
    quadrature.add_argument("--nodes", type=int, default=8)

    flag_cmd = commands.add_parser("flag", help="kernel classification", parents=[common])
    flag_sub = flag_cmd.add_subparsers(dest="action", required=True)
    classify = flag_sub.add_parser("classify", help="classify a Hermitian matrix", parents=[common])
    classify.add_argument("--input", required=True, help="matrix JSON file, or - for stdin")

    gates_cmd = commands.add_parser("gates", help="qubit gate identities", parents=[common])
    gates_sub = gates_cmd.add_subparsers(dest="action", required=True)
    gates_verify = gates_sub.add_parser("verify", help="run the gate identities", parents=[common])
    gates_verify.add_argument("--t", type=int, required=True, help="largest wire count")

    pauli_cmd = commands.add_parser("pauli", help="clock and shift identities", parents=[common])
    pauli_sub = pauli_cmd.add_subparsers(dest="action", required=True)
    pauli_verify = pauli_sub.add_parser("verify", help="run the clock/shift identities", parents=[common])
    pauli_verify.add_argument("--n", type=int, required=True, help="largest dimension")

    synth_cmd = commands.add_parser("synth", help="controlled-gate synthesis", parents=[common])
    synth_sub = synth_cmd.add_subparsers(dest="action", required=True)
    synth_verify = synth_sub.add_parser("verify", help="compare against direct matrices", parents=[common])
    synth_verify.add_argument("--controls", type=int, choices=(2, 3), required=True)
    synth_verify.add_argument("--trials", type=int, default=None)

    holonomy_cmd = commands.add_parser("holonomy", help="adiabatic holonomy", parents=[common])
    holonomy_sub = holonomy_cmd.add_subparsers(dest="action", required=True)
    run = holonomy_sub.add_parser("run", help="holonomy of a built-in family", parents=[common])
    run.add_argument("--family", choices=sorted(families.BUILTIN_FAMILIES), required=True)
    run.add_argument("--loop", choices=("circle", "rectangle"), default="circle")
    run.add_argument("--radius", type=float, default=None)
    run.add_argument("--steps", type=int, default=None)
    run.add_argument("--axes", type=int, nargs=2, default=(0, 1), metavar=("A", "B"))
    run.add_argument("--doublings", type=int, default=3)

    verify_all = commands.add_parser("verify-all", help="run the full suite", parents=[common])
    verify_all.add_argument("--output", type=Path, default=None)
    verify_all.add_argument("--format", choices=("json", "csv"), default="json")
    verify_all.add_argument(
        "--select", nargs="+", default=["all"], help="check ids or dotted prefixes"
    )
    return parser


def _context(args: argparse.Namespace) -> Context:
    return Context.from_sources(
        config_path=getattr(args, "config", None),
        seed=getattr(args, "seed", None),
        predicate_tol=getattr(args, "tol", None),
        workers=getattr(args, "workers", None),
    )


def _configure_logging(args: argparse.Namespace, ctx: Context) -> None:
    verbosity = getattr(args, "verbose", 0)
    level = {0: ctx.log_level.upper(), 1: "INFO"}.get(verbosity, "DEBUG")
    logging.basicConfig(
        level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True
    )


def _print_records(records: list[VerificationRecord], as_json: bool) -> None:
    if as_json:
        sys.stdout.write(render_report(records, "json"))
        return
    for record in records:
        sys.stdout.write(
            f"{record.status.upper():4}  {record.check_id:40} max_error={record.max_error:.3e}\n"
        )


def _suite(selection: Sequence[str], ctx: Context, as_json: bool) -> int:
    records = checks.run_suite(selection, ctx)
    _print_records(records, as_json)
    return EXIT_OK if checks.all_passed(records) else EXIT_FAILED


def _grassmann(args: argparse.Namespace, ctx: Context, as_json: bool) -> int:
    if args.action == "quadrature":
        value = grassmann.projective_volume_quadrature(args.n, args.grid, args.nodes)
        target = grassmann.grassmann_volume(1, args.n)
        relative = abs(value - target) / target
        if as_json:
            payload = {"n": args.n, "quadrature": value, "closed_form": target, "relative_error": relative}
            sys.stdout.write(json.dumps(payload, indent=2) + "\n")
        else:
            sys.stdout.write(
                f"Vol(G_1,{args.n}) = {value:.15g} (closed form {target:.15g}, rel {relative:.2e})\n"
            )
        return EXIT_OK if relative <= 1e-8 else EXIT_FAILED

    samples = args.samples or ctx.mc_samples
    target = grassmann.grassmann_volume(args.k, args.n)
    estimate = grassmann.mc_volume(
        args.k,
        args.n,
        samples,
        ctx.seed,
        workers=ctx.workers,
        chunk=ctx.mc_chunk,
        law=args.law or ctx.mc_law,
    )
    z = grassmann.z_score(estimate, target)
    report = VolumeReport(
        k=args.k,
        n=args.n,
        closed_form=target,
        mc_mean=estimate.mean,
        mc_stderr=estimate.standard_error,
        z_score=z,
        samples=estimate.samples,
        seed=estimate.seed,
        law=estimate.law,
        max_weight_share=estimate.max_weight_share,
    )
    if as_json:
        sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    else:
        sys.stdout.write(
            f"Vol(G_{args.k},{args.n}): closed form {target:.10g}, "
            f"MC {estimate.mean:.10g} +- {estimate.standard_error:.2e} (z = {z:.2f}), "
            f"{estimate.law} law, max weight share {estimate.max_weight_share:.1e}\n"
        )
    return EXIT_OK if abs(z) <= 3.0 else EXIT_FAILED


def _read_matrix(source: str) -> str:
    if source == "-":
        return sys.stdin.read()
    return Path(source).read_text(encoding="utf-8")


def _flag(args: argparse.Namespace, ctx: Context, as_json: bool) -> int:
    matrix = matrix_from_json(_read_matrix(args.input))
    report = flags.classify(matrix, ctx.kernel_tol)
    if as_json:
        sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    elif report.in_kernel:
        sys.stdout.write(
            f"in kernel: spectral type {report.spectral_type}, flag U({sum(report.blocks or [])})/"
            + "x".join(f"U({d})" for d in report.blocks or [])
            + f", complex dimension {report.complex_dimension}\n"
        )
    else:
        sys.stdout.write("not in kernel\n")
    return EXIT_OK


def _holonomy(args: argparse.Namespace, ctx: Context, as_json: bool) -> int:
    spec = families.get_family(args.family)
    family, vac = spec.build(), spec.frame()
    a, b = args.axes
    if not (0 <= a < family.param_dim and 0 <= b < family.param_dim and a != b):
        raise UsageError(f"axes {a} {b} invalid for a {family.param_dim}-parameter family")
    radius = spec.default_radius if args.radius is None else args.radius
    steps = args.steps or ctx.holonomy_steps

    def build(count: int) -> holonomy.ParameterLoop:
        if args.loop == "circle":
            return holonomy.circle_loop(family.base_point, radius, count, axes=(a, b))
        return holonomy.rectangle_loop(family.base_point, (radius, radius), count, axes=(a, b))

    result = holonomy.holonomy_run(family, vac, build(steps), ctx.fd_step, ctx.workers)
    table = holonomy.convergence_table(
        family, vac, build, max(4, steps >> args.doublings), args.doublings, ctx.fd_step, ctx.workers
    )
    report = HolonomyReport(
        family=args.family,
        loop=args.loop,
        steps=result.steps,
        gamma=matrix_to_payload(result.gamma),
        unitarity_deviation=result.unitarity_deviation,
        euler_deviation=result.euler_deviation,
        max_residue=result.max_residue,
        convergence=[
            ConvergenceEntry(
                steps=row.steps,
                unitarity_deviation=row.unitarity_deviation,
                euler_deviation=row.euler_deviation,
                distance_to_finest=row.distance_to_finest,
            )
            for row in table
        ],
    )
    if as_json:
        sys.stdout.write(report.model_dump_json(indent=2) + "\n")
        return EXIT_OK
    sys.stdout.write(f"Gamma ({args.family}, {args.loop}, {result.steps} steps):\n")
    for row in result.gamma:
        sys.stdout.write("  " + "  ".join(f"{z.real:+.10f}{z.imag:+.10f}i" for z in row) + "\n")
    sys.stdout.write(
        f"unitarity deviation {result.unitarity_deviation:.3e}, "
        f"first-order deviation {result.euler_deviation:.3e}, residue {result.max_residue:.3e}\n"
    )
    for row in table:
        sys.stdout.write(
            f"  steps {row.steps:7d}  first-order deviation {row.euler_deviation:.3e}"
            f"  distance to finest {row.distance_to_finest:.3e}\n"
        )
    return EXIT_OK


def _verify_all(args: argparse.Namespace, ctx: Context) -> int:
    records = checks.run_suite(args.select, ctx)
    text = emit_report(records, args.format, args.output)
    if args.output is None:
        sys.stdout.write(text)
    return EXIT_OK if checks.all_passed(records) else EXIT_FAILED


def dispatch(args: argparse.Namespace, ctx: Context) -> int:
    """Run the parsed command and return its exit status."""
    as_json = bool(getattr(args, "json", False))
    if args.command == "grassmann":
        return _grassmann(args, ctx, as_json)
    if args.command == "flag":
        return _flag(args, ctx, as_json)
    if args.command == "gates":
        return _suite(["gates"], ctx.with_overrides(suite_qubits=args.t), as_json)
    if args.command == "pauli":
        if args.n < 2:
            raise UsageError(f"--n must be at least 2, got {args.n}")
        return _suite(["pauli"], ctx.with_overrides(max_pauli_dim=args.n), as_json)
    if args.command == "synth":
        selection = ["synth.ccu.random" if args.controls == 2 else "synth.cccu.random"]
        selection += ["synth.mod2", "synth.toffoli", "synth.gate-count"]
        return _suite(selection, ctx.with_overrides(trials=args.trials), as_json)
    if args.command == "holonomy":
        return _holonomy(args, ctx, as_json)
    return _verify_all(args, ctx)


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run the command and return the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        ctx = _context(args)
    except ConfigError as e:
        sys.stderr.write(f"grassvol: configuration error: {e}\n")
        return EXIT_USAGE
    _configure_logging(args, ctx)
    logger.debug(f"effective configuration: {ctx}")

    if args.command == "gates" and not 1 <= args.t <= ctx.max_qubits:
        sys.stderr.write(f"grassvol: --t must lie in [1, {ctx.max_qubits}]\n")
        return EXIT_USAGE
    try:
        return dispatch(args, ctx)
    except (ValueError, ValidationError, ReportError, OSError, KeyError) as e:
        logger.debug("command failed", exc_info=True)
        sys.stderr.write(f"grassvol: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
