"""gridplan: constraint-based actor placement, power dispatch, and
group fault-tolerance simulation for distributed grid applications."""

__version__ = "0.1.0"

from .model import (
    ActorSpec,
    DeploymentMatrix,
    DeploymentProblem,
    NodeSpec,
    PlacementRules,
    ResourceEnvelope,
    Violation,
    ViolationReport,
    check_deployment,
    copies_of,
    nodes_used,
    validate_problem,
)

__all__ = [
    "ActorSpec",
    "DeploymentMatrix",
    "DeploymentProblem",
    "NodeSpec",
    "PlacementRules",
    "ResourceEnvelope",
    "Violation",
    "ViolationReport",
    "check_deployment",
    "copies_of",
    "nodes_used",
    "validate_problem",
    "__version__",
]
