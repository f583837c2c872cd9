"""Weighted least-squares power dispatch under a per-slot grid cap.

Each time slot solves::

    min_x  sum_i  w_i * 0.5 * (P_req_i - x_i)^2
    s.t.   sum_i x_i <= P_grid,   0 <= x_i <= P_req_i

The problem separates across slots, and within a slot the KKT conditions
give the closed form ``x_i = clamp(P_req_i - lambda / w_i, 0, P_req_i)``
with a single multiplier ``lambda >= 0``: zero when the cap is slack,
otherwise the unique value making the allocations meet the cap exactly.
``lambda`` is found by bisection on ``[0, max_i(w_i * P_req_i)]`` — at the
upper end every allocation is zero, so the bracket always holds.

``dispatch_oracle`` is an independent check: a dense numpy grid search
over the multiplier with local refinement, no bisection logic shared.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadInput, InstanceTooLarge, ParseError

_BISECT_STEPS = 100
_ORACLE_MAX_LOADS = 4
_ORACLE_POINTS = 2001
_ORACLE_PASSES = 6


def _validate_slot(w, p_req, p_grid) -> tuple[list[float], list[float], float]:
    w = [float(v) for v in w]
    p_req = [float(v) for v in p_req]
    p_grid = float(p_grid)
    if not w or len(w) != len(p_req):
        raise BadInput(f"need matching weights and requests, got {len(w)} and {len(p_req)}")
    if any(not (v > 0) for v in w):
        raise BadInput(f"weights must be positive, got {w}")
    if any(v < 0 for v in p_req):
        raise BadInput(f"requested powers must be non-negative, got {p_req}")
    if p_grid < 0:
        raise BadInput(f"grid power must be non-negative, got {p_grid}")
    return w, p_req, p_grid


@dataclass(frozen=True)
class DispatchProblem:
    """Per-horizon dispatch instance: N loads over K slots (kW)."""

    weights: tuple[float, ...]
    p_req: tuple[tuple[float, ...], ...]
    p_grid: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(float(v) for v in self.weights))
        object.__setattr__(self, "p_req",
                           tuple(tuple(float(v) for v in row) for row in self.p_req))
        object.__setattr__(self, "p_grid", tuple(float(v) for v in self.p_grid))
        n, k = len(self.weights), len(self.p_grid)
        if n < 1 or k < 1:
            raise BadInput(f"need at least one load and one slot, got N={n} K={k}")
        if len(self.p_req) != n or any(len(row) != k for row in self.p_req):
            raise BadInput("requested-power matrix must be N rows of K values")
        if any(not (v > 0) for v in self.weights):
            raise BadInput(f"weights must be positive, got {list(self.weights)}")
        if any(v < 0 for row in self.p_req for v in row):
            raise BadInput("requested powers must be non-negative")
        if any(v < 0 for v in self.p_grid):
            raise BadInput("grid powers must be non-negative")

    @property
    def num_loads(self) -> int:
        return len(self.weights)

    @property
    def num_slots(self) -> int:
        return len(self.p_grid)

    def column(self, j: int) -> list[float]:
        return [row[j] for row in self.p_req]


@dataclass(frozen=True)
class DispatchSolution:
    x: tuple[tuple[float, ...], ...]
    multipliers: tuple[float, ...]


def slot_objective(w, p_req, x) -> float:
    return sum(wi * 0.5 * (pi - xi) ** 2 for wi, pi, xi in zip(w, p_req, x))


def solve_slot(w, p_req, p_grid) -> tuple[tuple[float, ...], float]:
    """Optimal allocation and multiplier for a single slot."""
    w, p_req, p_grid = _validate_slot(w, p_req, p_grid)
    if sum(p_req) <= p_grid:
        return tuple(p_req), 0.0

    def total(lam: float) -> float:
        return sum(max(0.0, pi - lam / wi) for wi, pi in zip(w, p_req))

    lo, hi = 0.0, max(wi * pi for wi, pi in zip(w, p_req))
    for _ in range(_BISECT_STEPS):
        mid = 0.5 * (lo + hi)
        if total(mid) > p_grid:
            lo = mid
        else:
            hi = mid
    # the upper end keeps sum(x) <= p_grid exactly as computed
    lam = hi
    x = tuple(min(pi, max(0.0, pi - lam / wi)) for wi, pi in zip(w, p_req))
    assert abs(sum(x) - p_grid) <= 1e-9 * max(1.0, p_grid)
    return x, lam


def solve_horizon(problem: DispatchProblem) -> DispatchSolution:
    """Solve every slot independently (the slots never couple)."""
    columns = []
    multipliers = []
    for j in range(problem.num_slots):
        x, lam = solve_slot(problem.weights, problem.column(j), problem.p_grid[j])
        columns.append(x)
        multipliers.append(lam)
    rows = tuple(tuple(columns[j][i] for j in range(problem.num_slots))
                 for i in range(problem.num_loads))
    return DispatchSolution(x=rows, multipliers=tuple(multipliers))


def horizon_objective(problem: DispatchProblem, solution: DispatchSolution) -> float:
    return sum(
        slot_objective(problem.weights, problem.column(j),
                       [solution.x[i][j] for i in range(problem.num_loads)])
        for j in range(problem.num_slots))


def dispatch_oracle(w, p_req, p_grid) -> tuple[float, ...]:
    """Grid-search reference solution for one slot (N <= 4).

    Sweeps a dense multiplier grid, keeps the objective-best feasible
    candidate, and zooms the grid around it until the window is
    negligible. Deliberately shares no search logic with solve_slot.
    """
    w, p_req, p_grid = _validate_slot(w, p_req, p_grid)
    if len(w) > _ORACLE_MAX_LOADS:
        raise InstanceTooLarge(f"oracle handles at most {_ORACLE_MAX_LOADS} loads, got {len(w)}")
    wv = np.asarray(w)
    pv = np.asarray(p_req)
    lo, hi = 0.0, float(np.max(wv * pv))
    best = pv.copy()
    for _ in range(_ORACLE_PASSES):
        lam = np.linspace(lo, hi, _ORACLE_POINTS)
        cand = np.clip(pv[:, None] - lam[None, :] / wv[:, None], 0.0, pv[:, None])
        feasible = cand.sum(axis=0) <= p_grid + 1e-12 * max(1.0, p_grid)
        obj = (wv[:, None] * 0.5 * (pv[:, None] - cand) ** 2).sum(axis=0)
        obj[~feasible] = np.inf
        k = int(np.argmin(obj))
        best = cand[:, k]
        step = (hi - lo) / (_ORACLE_POINTS - 1) if hi > lo else 0.0
        lo, hi = max(0.0, lam[k] - step), lam[k] + step
        if step == 0.0:
            break
    return tuple(float(v) for v in best)


def kkt_residual(w, p_req, p_grid, x, lam, atol: float = 1e-9) -> float:
    """Largest violation of the slot optimality conditions at (x, lam)."""
    w, p_req, p_grid = _validate_slot(w, p_req, p_grid)
    res = max(0.0, sum(x) - p_grid)
    res = max(res, -lam)
    if lam > atol:  # a positive multiplier requires a binding cap
        res = max(res, abs(sum(x) - p_grid))
    for wi, pi, xi in zip(w, p_req, x):
        res = max(res, -xi, xi - pi)
        grad = wi * (pi - xi)
        if xi <= atol:
            res = max(res, grad - lam)
        elif xi >= pi - atol:
            res = max(res, lam)
        else:
            res = max(res, abs(grad - lam))
    return res


# --- CLI wire format --------------------------------------------------------

def parse_problem(text: str) -> DispatchProblem:
    """Plain-text instance: ``N K``, N weights, N rows of K requests, K grid powers."""
    tokens = text.split()
    if len(tokens) < 2:
        raise ParseError("dispatch problem needs at least the 'N K' header")
    try:
        n, k = int(tokens[0]), int(tokens[1])
    except ValueError:
        raise ParseError(f"bad header {tokens[0]!r} {tokens[1]!r}, expected two integers") from None
    if n < 1 or k < 1:
        raise ParseError(f"N and K must be positive, got {n} {k}")
    expected = 2 + n + n * k + k
    if len(tokens) != expected:
        raise ParseError(f"expected {expected} numbers for N={n} K={k}, found {len(tokens)}")
    try:
        values = [float(t) for t in tokens[2:]]
    except ValueError as exc:
        raise ParseError(f"bad number in dispatch problem: {exc}") from None
    weights = values[:n]
    rows = [values[n + i * k: n + (i + 1) * k] for i in range(n)]
    grid = values[n + n * k:]
    return DispatchProblem(weights=tuple(weights),
                           p_req=tuple(tuple(r) for r in rows),
                           p_grid=tuple(grid))


def format_solution(solution: DispatchSolution) -> str:
    """Granted powers, one load per line, then the multiplier line (6 decimals)."""
    lines = [" ".join(f"{v:.6f}" for v in row) for row in solution.x]
    lines.append(" ".join(f"{v:.6f}" for v in solution.multipliers))
    return "\n".join(lines) + "\n"
