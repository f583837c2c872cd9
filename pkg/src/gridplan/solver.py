"""Pseudo-Boolean encoding of deployment problems and a deterministic search.

The engine is a branch-and-bound over the binary assignment cells with
unit propagation (redundancy equalities, pin zeroings, per-node colocation
mirroring and separation exclusion), monotone budget-row pruning, and
packing bounds (column sums capped by copy bounds, row sums capped by
separation structure).

Optimization runs in two phases:

1. prove the optimal objective value — value order 1-first so greedy
   packings become incumbents immediately, plus symmetry pruning that
   keeps interchangeable idle nodes ordered by first use;
2. re-search with the objective pinned to the optimum, cells in row-major
   order trying 0 before 1, and no symmetry pruning. The first leaf of
   that search is the lexicographically smallest optimal matrix, which is
   what solve() returns — deterministic for golden tests.

Feasibility mode skips phase 1, so it returns the lexicographically
smallest feasible matrix.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, replace
from enum import Enum

from .errors import InstanceTooLarge, NotInfeasible
from .model import (
    EPSILON,
    DeploymentMatrix,
    DeploymentProblem,
    validate_problem,
)

ORACLE_CELL_LIMIT = 24
DEFAULT_TIME_BUDGET_S = 60.0


class Mode(Enum):
    FEASIBLE = "feasible"
    MAX_COPIES = "max-copies"
    MIN_NODES = "min-nodes"


class Status(Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    TIMEOUT = "timeout"


# --- constraint atoms -------------------------------------------------------

@dataclass(frozen=True)
class Redundancy:
    actor: int
    actor_id: str
    copies: int

    def describe(self) -> str:
        return f"redundancy({self.actor_id}) = {self.copies}"


@dataclass(frozen=True)
class Pin:
    actor: int
    actor_id: str
    allowed: tuple[int, ...]
    allowed_ids: tuple[str, ...]

    def describe(self) -> str:
        return f"pin({self.actor_id} -> {','.join(self.allowed_ids)})"


@dataclass(frozen=True)
class Colocate:
    actors: tuple[int, ...]
    actor_ids: tuple[str, ...]

    def describe(self) -> str:
        return f"colocate({', '.join(self.actor_ids)})"


@dataclass(frozen=True)
class Separate:
    actors: tuple[int, ...]
    actor_ids: tuple[str, ...]

    def describe(self) -> str:
        return f"separate({', '.join(self.actor_ids)})"


@dataclass(frozen=True)
class Budget:
    node: int
    node_id: str
    kind: str  # cpu | memory | disk
    coeffs: tuple[float, ...]
    budget: float

    def describe(self) -> str:
        return f"{self.kind}-budget({self.node_id})"


@dataclass(frozen=True)
class Network:
    node: int
    node_id: str
    rates: tuple[float, ...]
    bursts: tuple[float, ...]
    budget: float

    def describe(self) -> str:
        return f"network-budget({self.node_id})"


Constraint = Redundancy | Pin | Colocate | Separate | Budget | Network


@dataclass(frozen=True)
class ConstraintSystem:
    num_nodes: int
    num_actors: int
    node_ids: tuple[str, ...]
    actor_ids: tuple[str, ...]
    constraints: tuple[Constraint, ...]
    objective: Mode | None = None

    def __post_init__(self):
        for c in self.constraints:
            if isinstance(c, (Budget, Network)):
                coeffs = c.coeffs if isinstance(c, Budget) else c.rates + c.bursts
                if len(c.coeffs if isinstance(c, Budget) else c.rates) != self.num_actors:
                    raise ValueError(f"budget row for {c.node_id} has wrong arity")
                if any(not math.isfinite(v) or v < 0 for v in coeffs):
                    raise ValueError(f"budget row for {c.node_id} has bad coefficients")

    @property
    def num_vars(self) -> int:
        return self.num_nodes * self.num_actors

    def without(self, constraint: Constraint) -> "ConstraintSystem":
        kept = tuple(c for c in self.constraints if c is not constraint)
        return replace(self, constraints=kept)

    def expanded_counts(self) -> dict[str, int]:
        """Logical constraint counts after expansion over nodes/pairs."""
        n = self.num_nodes
        counts = {"redundancy_equalities": 0, "pin_implications": 0,
                  "colocation_biconditionals": 0, "separation_exclusions": 0,
                  "budget_rows": 0}
        for c in self.constraints:
            if isinstance(c, Redundancy):
                counts["redundancy_equalities"] += 1
            elif isinstance(c, Pin):
                counts["pin_implications"] += n - len(c.allowed)
            elif isinstance(c, Colocate):
                k = len(c.actors)
                counts["colocation_biconditionals"] += n * (k * (k - 1) // 2)
            elif isinstance(c, Separate):
                k = len(c.actors)
                counts["separation_exclusions"] += n * (k * (k - 1) // 2)
            else:
                counts["budget_rows"] += 1
        return counts


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    matrix: DeploymentMatrix | None = None
    objective_value: int | None = None
    stats: dict | None = None

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE


def encode(problem: DeploymentProblem) -> ConstraintSystem:
    """Translate a validated problem into the constraint atoms the search
    engine consumes. Budget rows appear only for limits-targeted nodes."""
    problem = validate_problem(problem)
    actor_ids = problem.actor_ids
    node_ids = problem.node_ids
    constraints: list[Constraint] = []
    for j, actor in enumerate(problem.actors):
        constraints.append(Redundancy(j, actor.id, actor.copies))
    for j, actor in enumerate(problem.actors):
        if actor.host_pin is not None:
            allowed = tuple(problem.node_index(nid) for nid in actor.host_pin)
            constraints.append(Pin(j, actor.id, allowed, tuple(actor.host_pin)))
    for group in problem.rules.colocate_sets:
        idx = tuple(problem.actor_index(aid) for aid in group)
        constraints.append(Colocate(idx, tuple(group)))
    for group in problem.rules.separate_sets:
        idx = tuple(problem.actor_index(aid) for aid in group)
        constraints.append(Separate(idx, tuple(group)))
    for i in problem.limited_node_indices():
        node = problem.nodes[i]
        cpu = tuple(act.env.cpu_cores for act in problem.actors)
        mem = tuple(act.env.mem_mb for act in problem.actors)
        spc = tuple(act.env.spc_mb for act in problem.actors)
        constraints.append(Budget(i, node.id, "cpu", cpu, node.cpu_budget_cores))
        constraints.append(Budget(i, node.id, "memory", mem, node.mem_budget_mb))
        constraints.append(Budget(i, node.id, "disk", spc, node.spc_budget_mb))
        rates = tuple(act.env.net_rate_kbps for act in problem.actors)
        bursts = tuple(act.env.net_burst_kbps for act in problem.actors)
        constraints.append(Network(i, node.id, rates, bursts, node.net_budget_kbps))
    return ConstraintSystem(num_nodes=len(problem.nodes),
                            num_actors=len(problem.actors),
                            node_ids=tuple(node_ids),
                            actor_ids=tuple(actor_ids),
                            constraints=tuple(constraints))


class _Timeout(Exception):
    pass


class _Search:
    """One search pass over a constraint system. Build a fresh instance
    per phase; all state lives in flat lists with a trail for undo."""

    def __init__(self, system: ConstraintSystem, mode: Mode):
        self.sys = system
        self.mode = mode
        n, a = system.num_nodes, system.num_actors
        self.n, self.a = n, a
        cells = n * a
        self.val = [-1] * cells

        # collect atoms
        redundancy: dict[int, list[int]] = {}
        pin_allowed: dict[int, set[int]] = {}
        coloc_sets: list[tuple[int, ...]] = []
        self.sep_sets: list[tuple[int, ...]] = []
        for c in system.constraints:
            if isinstance(c, Redundancy):
                redundancy.setdefault(c.actor, []).append(c.copies)
            elif isinstance(c, Pin):
                cur = pin_allowed.setdefault(c.actor, set(c.allowed))
                cur.intersection_update(c.allowed)
            elif isinstance(c, Colocate):
                coloc_sets.append(c.actors)
            elif isinstance(c, Separate):
                self.sep_sets.append(c.actors)

        # colocation groups via union-find over the sets
        parent = list(range(a))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for group in coloc_sets:
            root = find(group[0])
            for j in group[1:]:
                parent[find(j)] = root
        groups: dict[int, list[int]] = {}
        for j in range(a):
            groups.setdefault(find(j), []).append(j)
        self.coloc_partners = [[] for _ in range(a)]
        for members in groups.values():
            if len(members) > 1:
                for j in members:
                    self.coloc_partners[j] = [k for k in members if k != j]

        # column bounds
        self.col_lb = [0] * a
        self.col_ub = [n] * a
        relax_ub = mode is Mode.MAX_COPIES
        fixed_actors = set()
        if relax_ub:
            pinned_groups = {find(j) for j in pin_allowed}
            fixed_actors = {j for j in range(a) if find(j) in pinned_groups}
        for j, counts in redundancy.items():
            self.col_lb[j] = max(counts)
            if not relax_ub or j in fixed_actors:
                self.col_ub[j] = min(self.col_ub[j], min(counts))

        self.sep_of = [[] for _ in range(a)]
        for s, group in enumerate(self.sep_sets):
            for j in group:
                self.sep_of[j].append(s)
        self.nonsep = [not self.sep_of[j] for j in range(a)]

        ns = len(self.sep_sets)
        self.s_has1 = [0] * (n * ns)
        self.s_unset = [len(g) for _ in range(n) for g in self.sep_sets]

        # budget rows grouped per node
        self.budgets: list[list] = [[] for _ in range(n)]  # (coeffs, budget) additive rows
        self.networks: list = [None] * n  # (rates, bursts, budget)
        for c in system.constraints:
            if isinstance(c, Budget):
                self.budgets[c.node].append((c.coeffs, c.budget))
            elif isinstance(c, Network):
                self.networks[c.node] = (c.rates, c.bursts, c.budget)
        self.budget_use = [[0.0] * len(self.budgets[i]) for i in range(n)]
        self.net_rate_use = [0.0] * n
        self.net_burst = [0.0] * n

        self.col_cnt1 = [0] * a
        self.col_unset = [n] * a
        self.row_cnt1 = [0] * n
        self.row_unset = [a] * n
        self.total1 = 0
        self.totalU = cells
        self.used_now = 0

        self.pin_allowed = pin_allowed
        self.trail: list[tuple] = []
        self.queue: list[tuple[int, int]] = []

        # caps installed by the driver (phase-2 objective pinning)
        self.total_cap: int | None = None
        self.total_floor: int | None = None
        self.used_cap: int | None = None

        self.best: tuple[int, tuple] | None = None
        self.stats_nodes = 0
        self.stats_props = 0
        self.root_conflict = False

        # node symmetry classes (phase 1 pruning): identical budget rows
        # and identical pin membership make nodes interchangeable
        sig: dict[tuple, list[int]] = {}
        for i in range(n):
            key = (tuple(self.budgets[i]), self.networks[i],
                   tuple(sorted((j, i in allowed)
                                for j, allowed in pin_allowed.items())))
            sig.setdefault(key, []).append(i)
        self.symmetry_classes = [v for v in sig.values() if len(v) > 1]

        if any(self.col_lb[j] > self.col_ub[j] for j in range(a)):
            self.root_conflict = True
            return
        self.root_conflict = not self._install_root()

    # --- state transitions ---------------------------------------------------

    def _install_root(self) -> bool:
        for j, allowed in self.pin_allowed.items():
            if not allowed:
                return False
            for i in range(self.n):
                if i not in allowed:
                    self.queue.append((i * self.a + j, 0))
        for j in range(self.a):
            if self.col_lb[j] == self.n:
                for i in range(self.n):
                    self.queue.append((i * self.a + j, 1))
        return self._drain()

    def _assign(self, cell: int, v: int) -> bool:
        val = self.val
        if val[cell] != -1:
            return val[cell] == v
        i, j = divmod(cell, self.a)
        self.stats_props += 1
        val[cell] = v
        self.totalU -= 1
        self.col_unset[j] -= 1
        self.row_unset[i] -= 1
        ns = len(self.sep_sets)
        for s in self.sep_of[j]:
            self.s_unset[i * ns + s] -= 1
        # every counter update below must run to completion before a
        # conflict return, so _undo_to can reverse them uniformly
        undo = [cell]
        ok = True
        if v == 1:
            self.total1 += 1
            self.col_cnt1[j] += 1
            self.row_cnt1[i] += 1
            if self.row_cnt1[i] == 1:
                self.used_now += 1
                if self.used_cap is not None and self.used_now > self.used_cap:
                    ok = False
            if self.total_cap is not None and self.total1 > self.total_cap:
                ok = False
            if self.col_cnt1[j] > self.col_ub[j]:
                ok = False
            for s in self.sep_of[j]:
                self.s_has1[i * ns + s] += 1
                if self.s_has1[i * ns + s] > 1:
                    ok = False
            for r, (coeffs, budget) in enumerate(self.budgets[i]):
                self.budget_use[i][r] += coeffs[j]
                if self.budget_use[i][r] > budget - EPSILON:
                    ok = False
            if self.networks[i] is not None:
                rates, bursts, budget = self.networks[i]
                undo.append(self.net_burst[i])
                self.net_rate_use[i] += rates[j]
                if bursts[j] > self.net_burst[i]:
                    self.net_burst[i] = bursts[j]
                if self.net_rate_use[i] + self.net_burst[i] > budget - EPSILON:
                    ok = False
            self.trail.append(tuple(undo))
            if not ok:
                return False
            # column saturated: close the rest
            if self.col_cnt1[j] == self.col_ub[j] and self.col_unset[j]:
                for r in range(self.n):
                    if self.val[r * self.a + j] == -1:
                        self.queue.append((r * self.a + j, 0))
            for s in self.sep_of[j]:
                for k in self.sep_sets[s]:
                    if k != j and self.val[i * self.a + k] == -1:
                        self.queue.append((i * self.a + k, 0))
        else:
            self.trail.append(tuple(undo))
            if self.total_floor is not None and self.total1 + self.totalU < self.total_floor:
                return False
            need = self.col_lb[j] - self.col_cnt1[j]
            avail = self.col_unset[j]
            if avail < need:
                return False
            if avail == need and need > 0:
                for r in range(self.n):
                    if self.val[r * self.a + j] == -1:
                        self.queue.append((r * self.a + j, 1))
        for p in self.coloc_partners[j]:
            self.queue.append((i * self.a + p, v))
        return True

    def _drain(self) -> bool:
        while self.queue:
            cell, v = self.queue.pop()
            if not self._assign(cell, v):
                self.queue.clear()
                return False
        return True

    def _try(self, cell: int, v: int) -> bool:
        self.queue.append((cell, v))
        return self._drain()

    def _undo_to(self, mark: int) -> None:
        ns = len(self.sep_sets)
        while len(self.trail) > mark:
            entry = self.trail.pop()
            cell = entry[0]
            i, j = divmod(cell, self.a)
            v = self.val[cell]
            self.val[cell] = -1
            self.totalU += 1
            self.col_unset[j] += 1
            self.row_unset[i] += 1
            for s in self.sep_of[j]:
                self.s_unset[i * ns + s] += 1
            if v == 1:
                self.total1 -= 1
                self.col_cnt1[j] -= 1
                self.row_cnt1[i] -= 1
                if self.row_cnt1[i] == 0:
                    self.used_now -= 1
                for s in self.sep_of[j]:
                    self.s_has1[i * ns + s] -= 1
                for r, (coeffs, _) in enumerate(self.budgets[i]):
                    self.budget_use[i][r] -= coeffs[j]
                if len(entry) > 1:
                    self.net_rate_use[i] -= self.networks[i][0][j]
                    self.net_burst[i] = entry[1]

    # --- bounds ---------------------------------------------------------------

    def _sep_capacity_ok(self) -> bool:
        ns = len(self.sep_sets)
        for s, group in enumerate(self.sep_sets):
            need = sum(max(0, self.col_lb[j] - self.col_cnt1[j]) for j in group)
            if need == 0:
                continue
            open_rows = 0
            for i in range(self.n):
                if not self.s_has1[i * ns + s] and self.s_unset[i * ns + s]:
                    open_rows += 1
                    if open_rows >= need:
                        break
            if open_rows < need:
                return False
        return True

    def _copies_upper_bound(self) -> int:
        col_sum = 0
        for j in range(self.a):
            col_sum += min(self.col_ub[j], self.col_cnt1[j] + self.col_unset[j])
        ns = len(self.sep_sets)
        row_sum = 0
        for i in range(self.n):
            cap = self.row_cnt1[i]
            base = i * self.a
            for j in range(self.a):
                if self.nonsep[j] and self.val[base + j] == -1:
                    cap += 1
            for s in range(ns):
                if not self.s_has1[i * ns + s] and self.s_unset[i * ns + s]:
                    cap += 1
            row_sum += cap
        return min(col_sum, row_sum)

    def _used_lower_bound(self) -> int | None:
        """Lower bound on final used-node count; None means dead end."""
        ns = len(self.sep_sets)
        extra = 0
        for s, group in enumerate(self.sep_sets):
            need = sum(max(0, self.col_lb[j] - self.col_cnt1[j]) for j in group)
            if need == 0:
                continue
            open_rows = open_used = 0
            for i in range(self.n):
                if not self.s_has1[i * ns + s] and self.s_unset[i * ns + s]:
                    open_rows += 1
                    if self.row_cnt1[i]:
                        open_used += 1
            if need > open_rows:
                return None
            extra = max(extra, need - open_used)
        for j in range(self.a):
            need = self.col_lb[j] - self.col_cnt1[j]
            if need <= 0:
                continue
            open_used = 0
            for i in range(self.n):
                if self.val[i * self.a + j] == -1 and self.row_cnt1[i]:
                    open_used += 1
            extra = max(extra, need - open_used)
        return self.used_now + extra

    def _symmetry_violated(self) -> bool:
        for members in self.symmetry_classes:
            saw_idle = False
            for i in members:
                if self.row_cnt1[i] == 0 and self.row_unset[i] == 0:
                    saw_idle = True
                elif saw_idle and self.row_cnt1[i] > 0:
                    return True
        return False

    def _viable(self, target: int | None, exploring: bool) -> bool:
        if not self._sep_capacity_ok():
            return False
        if self.mode is Mode.MAX_COPIES:
            ub = self._copies_upper_bound()
            if exploring:
                if self.best is not None and ub <= self.best[0]:
                    return False
            else:
                if ub < target or self.total1 > target:
                    return False
        elif self.mode is Mode.MIN_NODES:
            lb = self._used_lower_bound()
            if lb is None:
                return False
            if exploring:
                if self.best is not None and lb >= self.best[0]:
                    return False
            else:
                if lb > target:
                    return False
        if exploring and self.symmetry_classes and self._symmetry_violated():
            return False
        return True

    # --- search ---------------------------------------------------------------

    def _next_unset(self) -> int | None:
        try:
            return self.val.index(-1)
        except ValueError:
            return None

    def _snapshot(self) -> tuple:
        a = self.a
        return tuple(tuple(self.val[i * a: (i + 1) * a]) for i in range(self.n))

    def _objective_now(self) -> int:
        if self.mode is Mode.MAX_COPIES:
            return self.total1
        if self.mode is Mode.MIN_NODES:
            return self.used_now
        return 0

    def _improves(self, obj: int) -> bool:
        if self.best is None:
            return True
        if self.mode is Mode.MAX_COPIES:
            return obj > self.best[0]
        return obj < self.best[0]

    def run(self, *, lex: bool, target: int | None, exploring: bool,
            deadline: float):
        """DFS driver. exploring=True tracks the incumbent over the whole
        tree; otherwise the first leaf is returned."""
        if self.root_conflict:
            return None if not exploring else self.best
        vals = (0, 1) if lex else (1, 0)
        stack: list[tuple[int, bool, int]] = []
        advance = True
        while True:
            if advance:
                self.stats_nodes += 1
                if time.monotonic() > deadline:
                    raise _Timeout
                descended = False
                if self._viable(target, exploring):
                    cell = self._next_unset()
                    if cell is None:
                        if not exploring:
                            return self._snapshot()
                        obj = self._objective_now()
                        if self._improves(obj):
                            self.best = (obj, self._snapshot())
                    else:
                        mark = len(self.trail)
                        if self._try(cell, vals[0]):
                            stack.append((cell, False, mark))
                            descended = True
                        else:
                            self._undo_to(mark)
                            if self._try(cell, vals[1]):
                                stack.append((cell, True, mark))
                                descended = True
                            else:
                                self._undo_to(mark)
                if descended:
                    continue
            advance = False
            if not stack:
                return None if not exploring else self.best
            cell, tried_second, mark = stack.pop()
            self._undo_to(mark)
            if not tried_second:
                if self._try(cell, vals[1]):
                    stack.append((cell, True, mark))
                    advance = True
                else:
                    self._undo_to(mark)


def solve(system: ConstraintSystem, mode: Mode | str = Mode.FEASIBLE,
          time_budget_s: float = DEFAULT_TIME_BUDGET_S) -> SolveOutcome:
    """Search the system in the requested mode.

    Returns the lexicographically smallest matrix among the optima (or
    among all feasible assignments in feasibility mode). On timeout the
    best incumbent found so far is returned with Status.TIMEOUT.
    """
    if isinstance(mode, str):
        mode = Mode(mode)
    started = time.monotonic()
    deadline = started + time_budget_s
    stats = {"nodes": 0, "propagations": 0}

    def done(status, grid=None, objective=None):
        stats["wall_time_s"] = time.monotonic() - started
        matrix = DeploymentMatrix(grid) if grid is not None else None
        return SolveOutcome(status=status, matrix=matrix,
                            objective_value=objective, stats=stats)

    if system.num_vars == 0:
        empty = tuple(() for _ in range(system.num_nodes))
        return done(Status.FEASIBLE, empty, 0 if mode is not Mode.FEASIBLE else None)

    if mode is Mode.FEASIBLE:
        search = _Search(system, mode)
        try:
            grid = search.run(lex=True, target=None, exploring=False,
                              deadline=deadline)
        except _Timeout:
            stats.update(nodes=search.stats_nodes, propagations=search.stats_props)
            return done(Status.TIMEOUT)
        stats.update(nodes=search.stats_nodes, propagations=search.stats_props)
        if grid is None:
            return done(Status.INFEASIBLE)
        return done(Status.FEASIBLE, grid)

    explorer = _Search(system, mode)
    try:
        best = explorer.run(lex=False, target=None, exploring=True,
                            deadline=deadline)
    except _Timeout:
        stats.update(nodes=explorer.stats_nodes, propagations=explorer.stats_props)
        if explorer.best is None:
            return done(Status.TIMEOUT)
        obj, grid = explorer.best
        return done(Status.TIMEOUT, grid, obj)
    stats.update(nodes=explorer.stats_nodes, propagations=explorer.stats_props)
    if best is None:
        return done(Status.INFEASIBLE)
    objective, incumbent = best

    canonical = _Search(system, mode)
    if mode is Mode.MAX_COPIES:
        canonical.total_cap = objective
        canonical.total_floor = objective
    else:
        canonical.used_cap = objective
    try:
        grid = canonical.run(lex=True, target=objective, exploring=False,
                             deadline=deadline)
    except _Timeout:
        grid = None
    stats["nodes"] += canonical.stats_nodes
    stats["propagations"] += canonical.stats_props
    if grid is None:
        # phase 2 ran out of time; fall back to the phase-1 incumbent
        return done(Status.TIMEOUT, incumbent, objective)
    return done(Status.FEASIBLE, grid, objective)


def solve_problem(problem: DeploymentProblem, mode: Mode | str = Mode.FEASIBLE,
                  time_budget_s: float = DEFAULT_TIME_BUDGET_S) -> SolveOutcome:
    return solve(encode(problem), mode, time_budget_s)


# --- exhaustive oracle -------------------------------------------------------

def brute_force_oracle(problem: DeploymentProblem,
                       mode: Mode | str = Mode.FEASIBLE) -> SolveOutcome:
    """Exhaustive reference search over the full matrix space.

    Enumerates, per actor, every node subset consistent with its column
    sum (all 2^(n*a) matrices, organized column-wise with early pruning),
    checking rules and budgets incrementally. Only statuses and optimal
    objective values are comparable with solve(); tie-breaking is not.
    """
    if isinstance(mode, str):
        mode = Mode(mode)
    problem = validate_problem(problem)
    n, a = len(problem.nodes), len(problem.actors)
    if n * a > ORACLE_CELL_LIMIT:
        raise InstanceTooLarge(f"{n}x{a} exceeds the {ORACLE_CELL_LIMIT}-cell oracle bound")

    if a == 0:
        grid = tuple(() for _ in range(n))
        return SolveOutcome(Status.FEASIBLE, DeploymentMatrix(grid),
                            0 if mode is not Mode.FEASIBLE else None)

    relax = mode is Mode.MAX_COPIES
    # chained colocate sets merge; each member mirrors the group minimum
    parent = list(range(a))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for group in problem.rules.colocate_sets:
        idx = [problem.actor_index(x) for x in group]
        for j in idx[1:]:
            parent[find(j)] = find(idx[0])
    members: dict[int, list[int]] = {}
    for j in range(a):
        members.setdefault(find(j), []).append(j)
    coloc_with: dict[int, int] = {}  # actor -> earliest colocated actor
    for group_members in members.values():
        group_members.sort()
        for j in group_members[1:]:
            coloc_with[j] = group_members[0]
    sep_partners: list[set[int]] = [set() for _ in range(a)]
    for group in problem.rules.separate_sets:
        idx = [problem.actor_index(x) for x in group]
        for jm, jn in itertools.permutations(idx, 2):
            sep_partners[jm].add(jn)

    pinned_groups = set()
    for j, actor in enumerate(problem.actors):
        if actor.host_pin is not None:
            pinned_groups.add(coloc_with.get(j, j))

    def candidates(j: int):
        actor = problem.actors[j]
        if actor.host_pin is not None:
            allowed = [problem.node_index(x) for x in actor.host_pin]
            sizes = [len(allowed)]
            pool = allowed
        else:
            pool = list(range(n))
            lo = actor.copies
            grows = relax and coloc_with.get(j, j) not in pinned_groups
            sizes = list(range(lo, n + 1)) if grows else [lo]
        for size in sizes:
            if size > len(pool):
                continue
            yield from itertools.combinations(pool, size)

    limited = set(problem.limited_node_indices())

    def node_load_ok(i: int, chosen_cols: list[tuple[int, ...] | None]) -> bool:
        if i not in limited:
            return True
        node = problem.nodes[i]
        here = [problem.actors[j] for j, rows in enumerate(chosen_cols)
                if rows is not None and i in rows]
        checks = (
            (sum(x.env.cpu_cores for x in here), node.cpu_budget_cores),
            (sum(x.env.mem_mb for x in here), node.mem_budget_mb),
            (sum(x.env.spc_mb for x in here), node.spc_budget_mb),
            (sum(x.env.net_rate_kbps for x in here)
             + max((x.env.net_burst_kbps for x in here), default=0.0),
             node.net_budget_kbps),
        )
        return all(lhs <= budget - EPSILON for lhs, budget in checks)

    best_obj: int | None = None
    best_cols = None
    chosen: list[tuple[int, ...] | None] = [None] * a

    def visit(j: int):
        nonlocal best_obj, best_cols
        if j == a:
            if mode is Mode.FEASIBLE:
                best_obj, best_cols = 0, list(chosen)
                return True
            if mode is Mode.MAX_COPIES:
                obj = sum(len(c) for c in chosen)
                if best_obj is None or obj > best_obj:
                    best_obj, best_cols = obj, list(chosen)
            else:
                used = {i for c in chosen for i in c}
                if best_obj is None or len(used) < best_obj:
                    best_obj, best_cols = len(used), list(chosen)
            return False
        for rows in candidates(j):
            mate = coloc_with.get(j)
            if mate is not None and chosen[mate] != rows:
                continue
            if any(set(rows) & set(chosen[k])
                   for k in sep_partners[j] if k < j and chosen[k]):
                continue
            chosen[j] = rows
            if all(node_load_ok(i, chosen) for i in rows):
                if visit(j + 1):
                    return True
            chosen[j] = None
        return False

    visit(0)
    if best_cols is None:
        return SolveOutcome(Status.INFEASIBLE)
    grid = [[0] * a for _ in range(n)]
    for j, rows in enumerate(best_cols):
        for i in rows:
            grid[i][j] = 1
    return SolveOutcome(Status.FEASIBLE,
                        DeploymentMatrix(tuple(tuple(r) for r in grid)),
                        best_obj if mode is not Mode.FEASIBLE else None)


# --- infeasibility diagnosis ----------------------------------------------------

def explain_infeasible(system: ConstraintSystem, mode: Mode | str = Mode.FEASIBLE,
                       time_budget_s: float = DEFAULT_TIME_BUDGET_S,
                       ) -> tuple[Constraint, ...]:
    """Deletion-based minimal conflicting constraint subset.

    Drops one constraint at a time, keeping it out whenever the rest stays
    infeasible; the survivors form an irreducible core (every proper
    subset is satisfiable, modulo the implicit binary domain). Raises
    NotInfeasible when the system is satisfiable to begin with.
    """
    if isinstance(mode, str):
        mode = Mode(mode)
    if solve(system, mode, time_budget_s).status is not Status.INFEASIBLE:
        raise NotInfeasible("system is satisfiable; nothing to explain")
    core = list(system.constraints)
    for candidate in list(core):
        trial = replace(system, constraints=tuple(c for c in core if c is not candidate))
        if solve(trial, mode, time_budget_s).status is Status.INFEASIBLE:
            core.remove(candidate)
    return tuple(core)
