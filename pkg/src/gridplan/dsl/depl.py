"""Deployment file emission and parsing.

The output format is this artifact's own::

    app <Name> {
      on (<node>) <Actor>;
      ...
    }

One line per placed copy, ordered by node index then actor index, so a
feasible matrix serializes deterministically and round-trips exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InfeasibleMatrix, ParseError
from ..model import DeploymentMatrix, DeploymentProblem, check_deployment
from .scan import Scanner


@dataclass(frozen=True)
class DeplFile:
    app_name: str
    assignments: tuple[tuple[str, str], ...] = ()  # (node, actor)


def emit_depl(problem: DeploymentProblem, m: DeploymentMatrix) -> str:
    """Serialize a feasible matrix; refuses violating ones."""
    report = check_deployment(problem, m)
    if not report.ok:
        raise InfeasibleMatrix(
            "matrix violates constraints: " +
            "; ".join(v.message for v in report.violations[:3]) +
            ("..." if len(report) > 3 else ""))
    lines = [f"app {problem.app_name} {{"]
    for i, node in enumerate(problem.nodes):
        for j, actor in enumerate(problem.actors):
            if m.x[i][j]:
                lines.append(f"  on ({node.id}) {actor.id};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_depl(text: str) -> DeplFile:
    s = Scanner(text)
    s.expect_keyword("app")
    app_name = s.expect_word("application name")
    s.expect("{")
    assignments: list[tuple[str, str]] = []
    while not s.match("}"):
        if s.at_end():
            s.error("missing closing '}'")
        s.expect_keyword("on")
        s.expect("(")
        node = s.expect_word("node id")
        s.expect(")")
        actor = s.expect_word("actor name")
        s.expect(";")
        if (node, actor) in assignments:
            s.error(f"duplicate assignment of {actor!r} to {node!r}")
        assignments.append((node, actor))
    if not s.at_end():
        s.error(f"trailing content after app block: {s.peek()!r}")
    return DeplFile(app_name=app_name, assignments=tuple(assignments))


def matrix_from_depl(problem: DeploymentProblem, depl: DeplFile) -> DeploymentMatrix:
    """Rebuild the assignment matrix; unknown names raise UnknownActor/Node."""
    return DeploymentMatrix.from_assignments(problem, list(depl.assignments))
