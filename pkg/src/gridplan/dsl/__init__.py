"""Parsers and printers for the three input formats plus the deployment
output format, and the assembler that ties them into a DeploymentProblem."""

from .appmodel import ActorDecl, AppModel, parse_app_model, print_app_model
from .assemble import assemble_problem
from .depl import DeplFile, emit_depl, matrix_from_depl, parse_depl
from .dspec import DspecFile, parse_dspec, print_dspec
from .hwspec import (
    HardwareRecord,
    HardwareSpecFile,
    parse_hwspec,
    print_hwspec,
)

__all__ = [
    "ActorDecl",
    "AppModel",
    "DeplFile",
    "DspecFile",
    "HardwareRecord",
    "HardwareSpecFile",
    "assemble_problem",
    "emit_depl",
    "matrix_from_depl",
    "parse_app_model",
    "parse_depl",
    "parse_dspec",
    "parse_hwspec",
    "print_app_model",
    "print_dspec",
    "print_hwspec",
]
