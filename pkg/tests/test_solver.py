import random

import pytest

from gridplan.errors import InstanceTooLarge, NotInfeasible
from gridplan.model import (
    ActorSpec,
    DeploymentProblem,
    NodeSpec,
    PlacementRules,
    ResourceEnvelope,
    check_deployment,
    copies_of,
    nodes_used,
    validate_problem,
)
from gridplan.solver import (
    Mode,
    Separate,
    Status,
    brute_force_oracle,
    encode,
    explain_infeasible,
    solve,
    solve_problem,
)

from conftest import failover_test_problem, make_nodes, remapp_problem
from generators import random_problem

NET_ENV = ResourceEnvelope(net_rate_kbps=40, net_ceil_kbps=60)


def tiny_problem(**kw):
    defaults = dict(actors=(ActorSpec(id="A"),), nodes=(NodeSpec(id="n1"),))
    defaults.update(kw)
    return validate_problem(DeploymentProblem(**defaults))


# --- encode -------------------------------------------------------------------

def test_encode_reference_counts():
    system = encode(remapp_problem(12, copies={"Aggregator": 2}))
    assert system.expanded_counts() == {
        "redundancy_equalities": 6,
        "pin_implications": 11,       # UtilityGrid zeroed on h2..h12
        "colocation_biconditionals": 12,
        "separation_exclusions": 36,  # 3 pairs x 12 nodes
        "budget_rows": 0,
    }


def test_encode_single_cell():
    system = encode(tiny_problem())
    assert system.num_vars == 1
    assert system.expanded_counts()["redundancy_equalities"] == 1


def test_encode_budget_rows_follow_hardware():
    problem = validate_problem(DeploymentProblem(
        actors=(ActorSpec(id="A", env=ResourceEnvelope(cpu_pct=35)),),
        nodes=(NodeSpec(id="n1", cores=1, max_cpu=0.7),),
        rules=PlacementRules(limits_enabled=True)))
    system = encode(problem)
    cpu_rows = [c for c in system.constraints
                if getattr(c, "kind", None) == "cpu"]
    assert len(cpu_rows) == 1
    assert cpu_rows[0].budget == pytest.approx(0.7)
    assert cpu_rows[0].coeffs == pytest.approx((0.35,))


# --- solve: reference results ---------------------------------------------------

def test_single_cell_forced():
    out = solve_problem(tiny_problem())
    assert out.status is Status.FEASIBLE
    assert out.matrix.x == ((1,),)


def test_min_nodes_failover_config():
    problem = failover_test_problem(12)
    out = solve_problem(problem, Mode.MIN_NODES, 30)
    assert out.status is Status.FEASIBLE
    assert out.objective_value == 9
    assert nodes_used(out.matrix) == 9
    assert check_deployment(problem, out.matrix).ok


def test_max_copies_basic_config():
    problem = remapp_problem(12, copies={"Aggregator": 2})
    out = solve_problem(problem, Mode.MAX_COPIES, 30)
    assert out.status is Status.FEASIBLE
    assert out.objective_value == 26
    assert copies_of(out.matrix, 0) == 12          # coordinator everywhere
    trio = [sum(row[1:4]) for row in out.matrix.x]  # one of the separated trio per node
    assert trio == [1] * 12
    assert copies_of(out.matrix, 4) == 1 and copies_of(out.matrix, 5) == 1
    assert check_deployment(problem, out.matrix).ok


def test_more_copies_than_nodes_is_infeasible():
    problem = validate_problem(DeploymentProblem(
        actors=(ActorSpec(id="A", copies=3), ActorSpec(id="B")),
        nodes=make_nodes(2)))
    assert solve_problem(problem).status is Status.INFEASIBLE


def test_network_row_caps_node_occupancy():
    # 3 * 40 + 20 = 140 > 112.1, so never more than two actors per node
    problem = remapp_problem(12, copies={"Aggregator": 2}, limits=True,
                             envelope=NET_ENV, nic_rate=118.0, nic_ceil=131.0)
    out = solve_problem(problem, Mode.MIN_NODES, 30)
    assert out.status is Status.FEASIBLE
    assert out.objective_value == 4  # 7 copies, at most 2 per node
    assert max(sum(row) for row in out.matrix.x) == 2


def test_timeout_reports_status():
    problem = remapp_problem(40, copies={"Aggregator": 2})
    out = solve_problem(problem, Mode.MIN_NODES, time_budget_s=0.0)
    assert out.status is Status.TIMEOUT


# --- brute-force oracle ---------------------------------------------------------

def test_oracle_agrees_on_separated_pair():
    problem = validate_problem(DeploymentProblem(
        actors=(ActorSpec(id="A", copies=2), ActorSpec(id="B", copies=1)),
        nodes=make_nodes(3),
        rules=PlacementRules(separate_sets=(("A", "B"),))))
    ref = brute_force_oracle(problem, Mode.FEASIBLE)
    got = solve_problem(problem, Mode.FEASIBLE)
    assert ref.status is Status.FEASIBLE
    assert got.status is Status.FEASIBLE
    assert check_deployment(problem, got.matrix).ok


def test_oracle_single_cell():
    out = brute_force_oracle(tiny_problem(), Mode.FEASIBLE)
    assert out.matrix.x == ((1,),)


def test_oracle_size_limit():
    with pytest.raises(InstanceTooLarge):
        brute_force_oracle(remapp_problem(12), Mode.FEASIBLE)


@pytest.mark.parametrize("mode", [Mode.FEASIBLE, Mode.MAX_COPIES, Mode.MIN_NODES])
@pytest.mark.parametrize("seed", range(40))
def test_solver_matches_oracle(seed, mode):
    rng = random.Random(9000 + seed)
    problem = random_problem(rng, with_limits=rng.random() < 0.4)
    got = solve_problem(problem, mode, 20)
    ref = brute_force_oracle(problem, mode)
    assert got.status == ref.status
    assert got.objective_value == ref.objective_value
    if got.status is Status.FEASIBLE:
        assert check_deployment(problem, got.matrix).ok


# --- explain_infeasible -----------------------------------------------------------

def test_core_is_single_redundancy():
    problem = validate_problem(DeploymentProblem(
        actors=(ActorSpec(id="A", copies=3), ActorSpec(id="B")),
        nodes=make_nodes(2)))
    core = explain_infeasible(encode(problem))
    assert [c.describe() for c in core] == ["redundancy(A) = 3"]


def test_core_for_conflicting_pins():
    problem = validate_problem(DeploymentProblem(
        actors=(ActorSpec(id="A", host_pin="n1"), ActorSpec(id="B", host_pin="n1")),
        nodes=make_nodes(2),
        rules=PlacementRules(separate_sets=(("A", "B"),))))
    system = encode(problem)
    core = explain_infeasible(system)
    labels = {c.describe() for c in core}
    assert {"pin(A -> n1)", "pin(B -> n1)", "separate(A, B)"} <= labels
    # irreducible: dropping any member of the core restores feasibility
    from dataclasses import replace
    for member in core:
        subset = replace(system,
                         constraints=tuple(c for c in core if c is not member))
        assert solve(subset).status is Status.FEASIBLE


def test_explain_requires_infeasible():
    with pytest.raises(NotInfeasible):
        explain_infeasible(encode(tiny_problem()))


# --- properties ----------------------------------------------------------------------

@pytest.mark.parametrize("seed", range(25))
def test_feasible_outcomes_pass_the_checker(seed):
    rng = random.Random(4000 + seed)
    problem = random_problem(rng, max_nodes=6, max_actors=5, max_cells=24,
                             with_limits=rng.random() < 0.5)
    out = solve_problem(problem, Mode.FEASIBLE, 20)
    if out.status is Status.FEASIBLE:
        assert check_deployment(problem, out.matrix).ok


def test_added_separation_never_raises_max_objective():
    base = remapp_problem(6, copies={"Aggregator": 2})
    more = remapp_problem(6, copies={"Aggregator": 2},
                          separate_extra=(("ChargerActor", "Aggregator"),))
    obj_base = solve_problem(base, Mode.MAX_COPIES, 30).objective_value
    obj_more = solve_problem(more, Mode.MAX_COPIES, 30).objective_value
    assert obj_more <= obj_base


def test_removing_budget_row_never_raises_min_objective():
    problem = remapp_problem(12, copies={"Aggregator": 2}, limits=True,
                             envelope=NET_ENV, nic_rate=118.0, nic_ceil=131.0)
    system = encode(problem)
    full = solve(system, Mode.MIN_NODES, 30).objective_value
    for row in [c for c in system.constraints
                if c.__class__.__name__ in ("Budget", "Network")][:6]:
        relaxed = solve(system.without(row), Mode.MIN_NODES, 30).objective_value
        assert relaxed <= full


def test_deterministic_matrices():
    problem = failover_test_problem(12)
    first = solve_problem(problem, Mode.MIN_NODES, 30)
    second = solve_problem(problem, Mode.MIN_NODES, 30)
    assert first.matrix.x == second.matrix.x
    assert first.objective_value == second.objective_value


def test_node_symmetry_of_returned_solution():
    # identical spare nodes: swapping two of them keeps the answer feasible
    problem = failover_test_problem(12)
    out = solve_problem(problem, Mode.MIN_NODES, 30)
    rows = list(out.matrix.x)
    rows[1], rows[2] = rows[2], rows[1]
    from gridplan.model import DeploymentMatrix
    assert check_deployment(problem, DeploymentMatrix(tuple(rows))).ok
