"""
weakgraph command line

Usage:
    weakgraph <generate|simulate|infer|feasibility|reproduce> (--config PATH | --preset NAME)
              [--seed N] [--out DIR]
    weakgraph schema
"""
import argparse
import json
import logging
import sys

from weakgraph import __version__
from weakgraph.cli import cmd_feasibility, cmd_generate, cmd_infer, cmd_reproduce, cmd_simulate
from weakgraph.cli.generate import GenerateResult
from weakgraph.cli.infer import InferResult
from weakgraph.core.config import get_settings
from weakgraph.core.exceptions import EXIT_INFEASIBLE, EXIT_OK, handle_error
from weakgraph.core.logging import configure_logging
from weakgraph.services.experiment import apply_overrides, available_presets, load_config, load_preset
from weakgraph.services.experiment.schemas import ExperimentConfig
from weakgraph.services.topology import FeasibilityReport

logger = logging.getLogger(__name__)

COMMAND_HELP = {
    "generate": "Draw the weak graph and write limits, aggregate weights and analytical predictions",
    "simulate": "Run social learning on the generated graph and write the belief trajectory",
    "infer": "Estimate aggregate weights from the recorded receiving-agent beliefs",
    "feasibility": "Rank analysis: can the topology be learned from this divergence matrix?",
    "reproduce": "generate, simulate, infer and feasibility in one call",
}


def _fmt(values) -> str:
    return "[" + ", ".join(f"{v:.4f}" for v in values) + "]"


def _print_generate(result: GenerateResult) -> None:
    print(f"✅ Weak graph generated: {result.matrix.partition.describe()}")
    for entry in result.report.agents:
        choice = entry.theta_star if entry.unique else "tie"
        region = f" ({entry.region})" if entry.region else ""
        print(f"   agent {entry.agent}: x={_fmt(entry.aggregate_weights)} theta*={choice}{region}")
    print(f"📁 Artifacts written to {result.out}")


def _print_infer(result: InferResult) -> None:
    print(f"✅ Topology estimates: {len(result.estimates)}")
    for estimate in result.estimates:
        status = "feasible" if estimate.result.feasible else f"rank {estimate.result.numerical_rank}"
        error = "" if estimate.error is None else f" error={estimate.error:.4g}"
        print(f"   agent {estimate.agent} i={estimate.iteration}: x_hat={_fmt(estimate.result.x_hat)} "
              f"[{status}]{error}")
    if not result.feasible:
        print("⚠️  Topology learning is infeasible for this configuration (rank(C) < S)")


def _print_feasibility(report: FeasibilityReport) -> None:
    verdict = "feasible" if report.feasible else "infeasible"
    print(f"✅ Feasibility: H={report.H} S={report.S} ranks={report.ranks} -> {verdict}")
    if not report.necessary_condition:
        print(f"⚠️  H={report.H} < S={report.S}: necessary condition fails")


def _run(command: str, config: ExperimentConfig, args: argparse.Namespace) -> int:
    if command == "generate":
        _print_generate(cmd_generate(config))
        return EXIT_OK
    if command == "simulate":
        traj = cmd_simulate(config)
        print(f"✅ Simulated {config.T} rounds, {len(traj.iterations)} snapshots of {len(traj.agents)} agents")
        return EXIT_OK
    if command == "infer":
        result = cmd_infer(config, args.at)
        _print_infer(result)
        return EXIT_OK if result.feasible else EXIT_INFEASIBLE
    if command == "feasibility":
        report = cmd_feasibility(config)
        _print_feasibility(report)
        return EXIT_OK if report.feasible else EXIT_INFEASIBLE

    result = cmd_reproduce(config)
    _print_generate(result.generated)
    print(f"✅ Simulated {config.T} rounds")
    if result.inference is not None:
        _print_infer(result.inference)
    _print_feasibility(result.feasibility)
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="weakgraph",
        description="Social learning over weakly-connected graphs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name, help_text in COMMAND_HELP.items():
        sub = subparsers.add_parser(name, help=help_text)
        source = sub.add_mutually_exclusive_group(required=True)
        source.add_argument("--config", help="Experiment configuration (JSON)")
        source.add_argument("--preset", choices=available_presets(), help="Bundled experiment preset")
        sub.add_argument("--seed", type=int, help="Override the master seed")
        sub.add_argument("--out", help="Output directory (default: WEAKGRAPH_OUTPUT_DIR)")
        sub.add_argument("--log-level", help="Logging level (default: WEAKGRAPH_LOG_LEVEL)")
        if name == "infer":
            sub.add_argument("--at", type=int, nargs="+", help="Iterations to estimate at")

    subparsers.add_parser("schema", help="Print the JSON schema of the experiment configuration")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "schema":
        print(json.dumps(ExperimentConfig.model_json_schema(), indent=2))
        return EXIT_OK

    configure_logging(args.log_level or get_settings().log_level)
    try:
        config = load_config(args.config) if args.config else load_preset(args.preset)
        config = apply_overrides(config, seed=args.seed, out=args.out)
        return _run(args.command, config, args)
    except Exception as exc:
        code, message = handle_error(exc)
        logger.debug("[cli] %s failed", args.command, exc_info=True)
        print(f"❌ {message}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
