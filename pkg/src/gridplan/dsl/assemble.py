"""Combine the three parsed inputs into a DeploymentProblem."""

from __future__ import annotations

from ..errors import AppNameMismatch, UnknownActor, UnknownHardwareKey
from ..model import ActorSpec, DeploymentProblem, NodeSpec, PlacementRules
from .appmodel import AppModel
from .dspec import DspecFile
from .hwspec import HardwareRecord, HardwareSpecFile

# Capacities used when no limits directive names a hardware record; they
# are never consulted while limits stay disabled.
_PLACEHOLDER_HW = HardwareRecord(cores=1, max_cpu=1.0, mem_mb=1024.0,
                                 max_mem=1.0, spc_mb=1024.0, max_spc=1.0)


def assemble_problem(app: AppModel, dspec: DspecFile, hw: HardwareSpecFile,
                     node_ids: list[str], nic_rate_kbps: float,
                     nic_ceil_kbps: float) -> DeploymentProblem:
    """Build the constraint instance from parsed inputs.

    Every node id gets the capacities of the limits directive's hardware
    key (uniform hardware); copies default to 1 unless overridden; deploy
    statements become host pins. The result still needs validate_problem.
    """
    if app.app_name != dspec.app_name:
        raise AppNameMismatch(
            f"model declares app {app.app_name!r} but dspec names {dspec.app_name!r}")

    actor_names = [decl.name for decl in app.actors]
    for name, _ in dspec.copies_overrides:
        if name not in actor_names:
            raise UnknownActor(f"copies override names unknown actor {name!r}")
    for name, _ in dspec.deploy_pins:
        if name not in actor_names:
            raise UnknownActor(f"deploy directive names unknown actor {name!r}")

    record = _PLACEHOLDER_HW
    limits_enabled = dspec.limits_directive is not None
    targets: str | tuple[str, ...] = "all"
    hwkey = None
    if limits_enabled:
        hwkey, targets = dspec.limits_directive
        if hwkey not in hw:
            raise UnknownHardwareKey(
                f"limits directive names hardware key {hwkey!r}, "
                f"known keys: {', '.join(hw.keys()) or '(none)'}")
        record = hw[hwkey]

    copies = dspec.copies_map
    pins = dspec.pin_map
    actors = tuple(
        ActorSpec(id=decl.name,
                  copies=copies.get(decl.name, 1),
                  host_pin=pins.get(decl.name),
                  env=decl.env)
        for decl in app.actors)
    nodes = tuple(
        NodeSpec(id=nid, cores=record.cores, max_cpu=record.max_cpu,
                 mem_mb=record.mem_mb, max_mem=record.max_mem,
                 spc_mb=record.spc_mb, max_spc=record.max_spc,
                 nic_rate_kbps=nic_rate_kbps, nic_ceil_kbps=nic_ceil_kbps)
        for nid in node_ids)
    rules = PlacementRules(colocate_sets=dspec.colocate_sets,
                           separate_sets=dspec.separate_sets,
                           limits_enabled=limits_enabled,
                           limits_hardware_key=hwkey,
                           limits_targets=targets)
    return DeploymentProblem(actors=actors, nodes=nodes, rules=rules,
                             app_name=dspec.app_name)
