"""Command implementations behind the `weakgraph` entry point"""
from weakgraph.cli.feasibility import cmd_feasibility
from weakgraph.cli.generate import GenerateResult, cmd_generate
from weakgraph.cli.infer import InferResult, cmd_infer
from weakgraph.cli.reproduce import ReproduceResult, cmd_reproduce
from weakgraph.cli.simulate import cmd_simulate

__all__ = [
    "GenerateResult",
    "InferResult",
    "ReproduceResult",
    "cmd_feasibility",
    "cmd_generate",
    "cmd_infer",
    "cmd_reproduce",
    "cmd_simulate",
]
