import pytest

from gridplan.model import (
    ActorSpec,
    DeploymentMatrix,
    DeploymentProblem,
    NodeSpec,
    PlacementRules,
    ResourceEnvelope,
    validate_problem,
)

# Canonical actor column order used throughout the reference fixtures.
REMAPP_ACTORS = ["Aggregator", "BESSActor", "BuildingActor",
                 "ChargerActor", "DataLogger", "UtilityGrid"]

REMAPP_ENVELOPE = ResourceEnvelope(cpu_pct=35, mem_mb=200, spc_mb=2048,
                                   net_rate_kbps=40, net_ceil_kbps=60)

BBB_NODE_KW = dict(cores=1, max_cpu=0.7, mem_mb=512, max_mem=0.7,
                   spc_mb=4096, max_spc=0.7)


def make_nodes(count, prefix="h", nic_rate=100_000.0, nic_ceil=100_000.0, **kw):
    return tuple(NodeSpec(id=f"{prefix}{i + 1}", nic_rate_kbps=nic_rate,
                          nic_ceil_kbps=nic_ceil, **kw)
                 for i in range(count))


def remapp_problem(num_nodes=12, *, copies=None, separate_extra=(),
                   limits=False, envelope=ResourceEnvelope(), nic_rate=100_000.0,
                   nic_ceil=100_000.0, node_kw=None, validate=True):
    """The energy-management app over hN nodes with the standard rules:
    colocate (UtilityGrid, DataLogger), separate the BESS/Building/Charger
    trio, UtilityGrid pinned to h1."""
    copies = dict(copies or {})
    actors = tuple(
        ActorSpec(id=name, copies=copies.get(name, 1),
                  host_pin=("h1",) if name == "UtilityGrid" else None,
                  env=envelope)
        for name in REMAPP_ACTORS)
    nodes = make_nodes(num_nodes, nic_rate=nic_rate, nic_ceil=nic_ceil,
                       **(node_kw or {}))
    rules = PlacementRules(
        colocate_sets=(("UtilityGrid", "DataLogger"),),
        separate_sets=(("BESSActor", "BuildingActor", "ChargerActor"),)
        + tuple(separate_extra),
        limits_enabled=limits,
        limits_hardware_key="bbb" if limits else None,
    )
    problem = DeploymentProblem(actors=actors, nodes=nodes, rules=rules,
                                app_name="REMApp")
    return validate_problem(problem) if validate else problem


def failover_test_problem(num_nodes=12, **kw):
    """The redundancy-hardened configuration: 2 Aggregators, 3 copies of
    each trio member, Charger kept apart from Aggregator."""
    return remapp_problem(
        num_nodes,
        copies={"Aggregator": 2, "BESSActor": 3, "BuildingActor": 3,
                "ChargerActor": 3},
        separate_extra=(("ChargerActor", "Aggregator"),),
        **kw)


# Reference 9-node layout for the failover configuration, columns in
# REMAPP_ACTORS order. Hand-checked against every rule.
NINE_NODE_LAYOUT = (
    (0, 0, 1, 0, 1, 1),  # h1
    (1, 0, 1, 0, 0, 0),  # h2
    (0, 1, 0, 0, 0, 0),  # h3
    (0, 1, 0, 0, 0, 0),  # h4
    (0, 0, 0, 1, 0, 0),  # h5
    (0, 1, 0, 0, 0, 0),  # h6
    (0, 0, 0, 1, 0, 0),  # h7
    (1, 0, 1, 0, 0, 0),  # h8
    (0, 0, 0, 1, 0, 0),  # h9
)


@pytest.fixture
def nine_node_problem():
    return failover_test_problem(num_nodes=9)


@pytest.fixture
def nine_node_matrix():
    return DeploymentMatrix(NINE_NODE_LAYOUT)
