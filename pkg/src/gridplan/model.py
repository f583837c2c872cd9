"""Domain types, problem validation, and the deployment constraint checker.

The checker evaluates an assignment matrix directly against every active
constraint family (redundancy counts, host pins, colocation, separation,
and per-node CPU/memory/disk/network budgets), independently of any search
engine, so it doubles as the ground truth for solver results.

Unit conventions, fixed here once for the whole toolkit:

* actor CPU is declared as a percentage of one core (``cpu max 35``);
  internally both sides are fractions of a core, so a node's CPU budget is
  ``max_cpu * cores``.
* memory / disk budgets are ``capacity_mb * max_fraction``.
* the network budget is ``0.95 * nic_rate_kbps``; the row usage is the sum
  of assigned actors' average rates plus the largest burst headroom
  ``max(ceil - rate)`` over the actors assigned to that node (0 when the
  node is empty).
* budget comparisons are strict: usage must stay at or below
  ``budget - EPSILON``, so a row that lands exactly on its budget counts
  as a violation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .errors import (
    BadEnvelope,
    ContradictoryRules,
    DimensionMismatch,
    DuplicateId,
    UnknownActor,
    UnknownNode,
)

EPSILON = 1e-9

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class ResourceEnvelope:
    """Worst-case resource declaration for one actor."""

    cpu_pct: float = 0.0
    mem_mb: float = 0.0
    spc_mb: float = 0.0
    net_rate_kbps: float = 0.0
    net_ceil_kbps: float = 0.0

    @property
    def cpu_cores(self) -> float:
        """CPU load as a fraction of one core."""
        return self.cpu_pct / 100.0

    @property
    def net_burst_kbps(self) -> float:
        return self.net_ceil_kbps - self.net_rate_kbps


ZERO_ENVELOPE = ResourceEnvelope()


@dataclass(frozen=True)
class ActorSpec:
    """An actor with its redundancy count, optional host pin and envelope.

    ``host_pin`` holds the node ids the actor is restricted to; a bare
    string is accepted and coerced to a 1-tuple. When present, validation
    requires ``len(host_pin) == copies`` (one copy on each listed node,
    and only there).
    """

    id: str
    copies: int = 1
    host_pin: tuple[str, ...] | None = None
    env: ResourceEnvelope = ZERO_ENVELOPE

    def __post_init__(self):
        if isinstance(self.host_pin, str):
            object.__setattr__(self, "host_pin", (self.host_pin,))
        elif self.host_pin is not None:
            object.__setattr__(self, "host_pin", tuple(self.host_pin))


@dataclass(frozen=True)
class NodeSpec:
    """A computing node's capacities and utilization caps."""

    id: str
    cores: int = 1
    max_cpu: float = 1.0
    mem_mb: float = 1024.0
    max_mem: float = 1.0
    spc_mb: float = 1024.0
    max_spc: float = 1.0
    nic_rate_kbps: float = 100_000.0
    nic_ceil_kbps: float = 100_000.0

    @property
    def cpu_budget_cores(self) -> float:
        return self.max_cpu * self.cores

    @property
    def mem_budget_mb(self) -> float:
        return self.mem_mb * self.max_mem

    @property
    def spc_budget_mb(self) -> float:
        return self.spc_mb * self.max_spc

    @property
    def net_budget_kbps(self) -> float:
        return 0.95 * self.nic_rate_kbps

    def capacity_key(self) -> tuple:
        """Everything but the id; equal keys mean interchangeable nodes."""
        return (self.cores, self.max_cpu, self.mem_mb, self.max_mem,
                self.spc_mb, self.max_spc, self.nic_rate_kbps, self.nic_ceil_kbps)


@dataclass(frozen=True)
class PlacementRules:
    colocate_sets: tuple[tuple[str, ...], ...] = ()
    separate_sets: tuple[tuple[str, ...], ...] = ()
    limits_enabled: bool = False
    limits_hardware_key: str | None = None
    limits_targets: str | tuple[str, ...] = "all"

    def __post_init__(self):
        object.__setattr__(self, "colocate_sets",
                           tuple(tuple(s) for s in self.colocate_sets))
        object.__setattr__(self, "separate_sets",
                           tuple(tuple(s) for s in self.separate_sets))
        if self.limits_targets != "all":
            object.__setattr__(self, "limits_targets", tuple(self.limits_targets))


@dataclass(frozen=True)
class DeploymentProblem:
    actors: tuple[ActorSpec, ...]
    nodes: tuple[NodeSpec, ...]
    rules: PlacementRules = PlacementRules()
    app_name: str = "App"

    def __post_init__(self):
        object.__setattr__(self, "actors", tuple(self.actors))
        object.__setattr__(self, "nodes", tuple(self.nodes))

    @property
    def actor_ids(self) -> list[str]:
        return [a.id for a in self.actors]

    @property
    def node_ids(self) -> list[str]:
        return [n.id for n in self.nodes]

    def actor_index(self, actor_id: str) -> int:
        try:
            return self.actor_ids.index(actor_id)
        except ValueError:
            raise UnknownActor(f"unknown actor {actor_id!r}") from None

    def node_index(self, node_id: str) -> int:
        try:
            return self.node_ids.index(node_id)
        except ValueError:
            raise UnknownNode(f"unknown node {node_id!r}") from None

    def limited_node_indices(self) -> list[int]:
        """Indices of nodes whose resource budgets are enforced."""
        if not self.rules.limits_enabled:
            return []
        if self.rules.limits_targets == "all":
            return list(range(len(self.nodes)))
        return [self.node_index(nid) for nid in self.rules.limits_targets]


@dataclass(frozen=True)
class DeploymentMatrix:
    """Binary assignment matrix indexed [node][actor]."""

    x: Matrix

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(tuple(int(v) for v in row) for row in self.x))
        for row in self.x:
            for v in row:
                if v not in (0, 1):
                    raise DimensionMismatch(f"matrix entries must be 0 or 1, got {v}")

    @classmethod
    def zeros(cls, num_nodes: int, num_actors: int) -> "DeploymentMatrix":
        return cls(tuple((0,) * num_actors for _ in range(num_nodes)))

    @classmethod
    def from_assignments(cls, problem: DeploymentProblem,
                         pairs: list[tuple[str, str]]) -> "DeploymentMatrix":
        """Build a matrix from (node_id, actor_id) pairs."""
        grid = [[0] * len(problem.actors) for _ in range(len(problem.nodes))]
        for node_id, actor_id in pairs:
            grid[problem.node_index(node_id)][problem.actor_index(actor_id)] = 1
        return cls(tuple(tuple(row) for row in grid))

    @property
    def num_nodes(self) -> int:
        return len(self.x)

    @property
    def num_actors(self) -> int:
        return len(self.x[0]) if self.x else 0


@dataclass(frozen=True)
class Violation:
    kind: str
    subjects: tuple[str, ...]
    lhs: float
    budget: float
    message: str


@dataclass(frozen=True)
class ViolationReport:
    violations: tuple[Violation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "violations", tuple(self.violations))

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_kind(self, kind: str) -> list[Violation]:
        return [v for v in self.violations if v.kind == kind]

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)


def _check_envelope(actor: ActorSpec) -> None:
    env = actor.env
    for name in ("cpu_pct", "mem_mb", "spc_mb", "net_rate_kbps", "net_ceil_kbps"):
        v = getattr(env, name)
        if not (v >= 0):
            raise BadEnvelope(f"actor {actor.id!r}: {name} must be non-negative, got {v}")
    if env.net_ceil_kbps < env.net_rate_kbps:
        raise BadEnvelope(
            f"actor {actor.id!r}: net ceiling {env.net_ceil_kbps} below rate {env.net_rate_kbps}")
    if actor.copies < 1:
        raise BadEnvelope(f"actor {actor.id!r}: copies must be >= 1, got {actor.copies}")


def _check_node(node: NodeSpec) -> None:
    for name in ("cores", "mem_mb", "spc_mb", "nic_rate_kbps", "nic_ceil_kbps"):
        v = getattr(node, name)
        if not (v > 0):
            raise BadEnvelope(f"node {node.id!r}: {name} must be positive, got {v}")
    for name in ("max_cpu", "max_mem", "max_spc"):
        v = getattr(node, name)
        if not (0 < v <= 1):
            raise BadEnvelope(f"node {node.id!r}: {name} must be in (0, 1], got {v}")
    if node.nic_ceil_kbps < node.nic_rate_kbps:
        raise BadEnvelope(
            f"node {node.id!r}: NIC ceiling {node.nic_ceil_kbps} below rate {node.nic_rate_kbps}")


def validate_problem(problem: DeploymentProblem) -> DeploymentProblem:
    """Check every structural invariant and return a canonicalized problem.

    Colocate/separate sets come back deduplicated and sorted by actor
    index. Raises UnknownActor / UnknownNode for dangling references,
    ContradictoryRules for rule combinations that can never hold, and
    BadEnvelope / DuplicateId for malformed specs.
    """
    actor_ids = problem.actor_ids
    node_ids = problem.node_ids
    if len(set(actor_ids)) != len(actor_ids):
        dupes = sorted({a for a in actor_ids if actor_ids.count(a) > 1})
        raise DuplicateId(f"duplicate actor ids: {', '.join(dupes)}")
    if len(set(node_ids)) != len(node_ids):
        dupes = sorted({n for n in node_ids if node_ids.count(n) > 1})
        raise DuplicateId(f"duplicate node ids: {', '.join(dupes)}")

    for actor in problem.actors:
        _check_envelope(actor)
        if actor.host_pin is not None:
            for nid in actor.host_pin:
                if nid not in node_ids:
                    raise UnknownNode(f"actor {actor.id!r} pinned to unknown node {nid!r}")
            if len(set(actor.host_pin)) != len(actor.host_pin):
                raise ContradictoryRules(f"actor {actor.id!r}: repeated node in host pin")
            if len(actor.host_pin) != actor.copies:
                raise ContradictoryRules(
                    f"actor {actor.id!r}: pinned to {len(actor.host_pin)} node(s) "
                    f"but declares {actor.copies} copies")
    for node in problem.nodes:
        _check_node(node)

    total_copies = sum(a.copies for a in problem.actors)
    if total_copies > len(problem.nodes) * len(problem.actors):
        raise ContradictoryRules(
            f"total copies {total_copies} exceed matrix capacity "
            f"{len(problem.nodes)}x{len(problem.actors)}")

    rules = problem.rules

    def canonical(sets: tuple[tuple[str, ...], ...], what: str) -> tuple[tuple[str, ...], ...]:
        out = []
        for group in sets:
            for aid in group:
                if aid not in actor_ids:
                    raise UnknownActor(f"{what} set references unknown actor {aid!r}")
            dedup = sorted(set(group), key=actor_ids.index)
            if len(dedup) < 2:
                raise ContradictoryRules(f"{what} set needs at least 2 distinct actors: {group}")
            out.append(tuple(dedup))
        return tuple(out)

    colocate = canonical(rules.colocate_sets, "colocate")
    separate = canonical(rules.separate_sets, "separate")

    separated_pairs = set()
    for group in separate:
        separated_pairs.update(frozenset(p) for p in itertools.combinations(group, 2))
    for group in colocate:
        for pair in itertools.combinations(group, 2):
            if frozenset(pair) in separated_pairs:
                raise ContradictoryRules(
                    f"actors {pair[0]!r} and {pair[1]!r} are both colocated and separated")
        copies = {problem.actors[actor_ids.index(a)].copies for a in group}
        if len(copies) > 1:
            raise ContradictoryRules(
                f"colocated actors {group} declare unequal copies {sorted(copies)}")

    if rules.limits_targets != "all":
        for nid in rules.limits_targets:
            if nid not in node_ids:
                raise UnknownNode(f"limits directive targets unknown node {nid!r}")

    return replace(problem, rules=replace(rules, colocate_sets=colocate,
                                          separate_sets=separate))


def check_deployment(problem: DeploymentProblem, m: DeploymentMatrix) -> ViolationReport:
    """Evaluate a matrix against every active constraint.

    Produces exactly one entry per violated constraint instance. Resource
    rows are only evaluated when limits are enabled, and only for the
    targeted nodes. An empty report means the deployment is feasible.
    """
    n, a = len(problem.nodes), len(problem.actors)
    if m.num_nodes != n or (n and m.num_actors != a):
        raise DimensionMismatch(
            f"matrix is {m.num_nodes}x{m.num_actors}, problem needs {n}x{a}")

    x = m.x
    actor_ids = problem.actor_ids
    out: list[Violation] = []

    for j, actor in enumerate(problem.actors):
        placed = sum(x[i][j] for i in range(n))
        if placed != actor.copies:
            out.append(Violation(
                "redundancy", (actor.id,), float(placed), float(actor.copies),
                f"actor {actor.id!r} placed {placed} times, needs exactly {actor.copies}"))

    for j, actor in enumerate(problem.actors):
        if actor.host_pin is None:
            continue
        allowed = {problem.node_index(nid) for nid in actor.host_pin}
        for i in range(n):
            if i not in allowed and x[i][j]:
                out.append(Violation(
                    "host_pin", (actor.id, problem.nodes[i].id), 1.0, 0.0,
                    f"actor {actor.id!r} pinned to {','.join(actor.host_pin)} "
                    f"but assigned to {problem.nodes[i].id!r}"))

    for group in problem.rules.colocate_sets:
        idx = [problem.actor_index(aid) for aid in group]
        for i in range(n):
            for jm, jn in itertools.permutations(idx, 2):
                if x[i][jm] and not x[i][jn]:
                    out.append(Violation(
                        "colocation", (actor_ids[jm], actor_ids[jn], problem.nodes[i].id),
                        1.0, 0.0,
                        f"{actor_ids[jm]!r} on {problem.nodes[i].id!r} "
                        f"without colocated {actor_ids[jn]!r}"))

    for group in problem.rules.separate_sets:
        idx = [problem.actor_index(aid) for aid in group]
        for i in range(n):
            for jm, jn in itertools.combinations(idx, 2):
                if x[i][jm] and x[i][jn]:
                    out.append(Violation(
                        "separation", (actor_ids[jm], actor_ids[jn], problem.nodes[i].id),
                        2.0, 1.0,
                        f"separated actors {actor_ids[jm]!r} and {actor_ids[jn]!r} "
                        f"share node {problem.nodes[i].id!r}"))

    for i in problem.limited_node_indices():
        node = problem.nodes[i]
        assigned = [problem.actors[j] for j in range(a) if x[i][j]]
        cpu = sum(act.env.cpu_cores for act in assigned)
        mem = sum(act.env.mem_mb for act in assigned)
        spc = sum(act.env.spc_mb for act in assigned)
        net = sum(act.env.net_rate_kbps for act in assigned)
        burst = max((act.env.net_burst_kbps for act in assigned), default=0.0)
        rows = (
            ("cpu", cpu, node.cpu_budget_cores, "cores"),
            ("memory", mem, node.mem_budget_mb, "MB"),
            ("disk", spc, node.spc_budget_mb, "MB"),
            ("network", net + burst, node.net_budget_kbps, "kbps"),
        )
        for kind, lhs, budget, unit in rows:
            if lhs > budget - EPSILON:
                out.append(Violation(
                    kind, (node.id,), lhs, budget,
                    f"{kind} on {node.id!r}: {lhs:g} {unit} exceeds budget {budget:g} {unit}"))

    return ViolationReport(tuple(out))


def copies_of(m: DeploymentMatrix, actor_index: int) -> int:
    """Column sum: how many copies of one actor the matrix places."""
    if not 0 <= actor_index < m.num_actors:
        raise IndexError(f"actor index {actor_index} out of range 0..{m.num_actors - 1}")
    return sum(row[actor_index] for row in m.x)


def nodes_used(m: DeploymentMatrix) -> int:
    """Number of nodes hosting at least one actor copy."""
    return sum(1 for row in m.x if any(row))
