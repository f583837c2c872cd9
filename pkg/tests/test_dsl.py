import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gridplan.dsl import (
    assemble_problem,
    emit_depl,
    matrix_from_depl,
    parse_app_model,
    parse_depl,
    parse_dspec,
    parse_hwspec,
    print_app_model,
    print_dspec,
    print_hwspec,
)
from gridplan.errors import (
    AppNameMismatch,
    BadNumber,
    DuplicateActor,
    DuplicateCopiesOverride,
    EmptyGroup,
    InfeasibleMatrix,
    MalformedUsesEntry,
    MissingField,
    ParseError,
    UnknownActor,
    UnknownHardwareKey,
    UnknownNode,
)
from gridplan.model import DeploymentMatrix, check_deployment, validate_problem

from conftest import NINE_NODE_LAYOUT, failover_test_problem
from generators import random_app_model, random_dspec, random_hwspec

DATA = Path(__file__).parent / "data"
SAMPLES = Path(__file__).parent.parent / "samples"


# --- application model ------------------------------------------------------

def test_actor_fragment_parses_to_reference_values():
    app = parse_app_model((DATA / "actor_fragment.riaps").read_text())
    assert app.app_name is None
    (decl,) = app.actors
    assert decl.name == "Aggregator"
    assert decl.params == ("configfile", "id", "grptype")
    assert decl.env.cpu_pct == 35
    assert decl.env.mem_mb == 200
    assert decl.env.spc_mb == 2048
    assert decl.env.net_rate_kbps == 40
    assert decl.env.net_ceil_kbps == 60


def test_actor_without_uses_gets_zero_envelope():
    app = parse_app_model("actor A() { }")
    assert app.actors[0].env.mem_mb == 0
    assert app.actors[0].env.cpu_pct == 0


def test_duplicate_uses_entry_rejected():
    with pytest.raises(MalformedUsesEntry):
        parse_app_model("actor A() { uses { mem 100 mb; mem 200 mb; } }")


def test_unknown_uses_keyword_rejected():
    with pytest.raises(MalformedUsesEntry):
        parse_app_model("actor A() { uses { gpu 1 mb; } }")


def test_missing_unit_rejected():
    with pytest.raises(MalformedUsesEntry):
        parse_app_model("actor A() { uses { mem 100; } }")


def test_duplicate_actor_rejected():
    with pytest.raises(DuplicateActor):
        parse_app_model("actor A() { } actor A() { }")


def test_component_bodies_skipped():
    text = """
    app Demo {
        message Reading;
        actor A(cfg) {
            component Inner(x) { pub ready : Reading; }
            uses { mem 64 mb; }
            timer poll 1000;
        }
    }
    """
    app = parse_app_model(text)
    assert app.app_name == "Demo"
    assert app.actors[0].env.mem_mb == 64


def test_full_sample_model_parses():
    app = parse_app_model((SAMPLES / "remapp.riaps").read_text())
    assert app.app_name == "REMApp"
    assert [a.name for a in app.actors] == [
        "Aggregator", "BESSActor", "BuildingActor", "ChargerActor",
        "DataLogger", "UtilityGrid"]
    assert all(a.env.net_ceil_kbps == 60 for a in app.actors)


# --- dspec -------------------------------------------------------------------

def test_reference_dspec_parses():
    spec = parse_dspec((SAMPLES / "remapp.dspec").read_text())
    assert spec.app_name == "REMApp"
    assert spec.copies_map == {"Aggregator": 2}
    assert spec.colocate_sets == (("UtilityGrid", "DataLogger"),)
    assert spec.separate_sets == (("BESSActor", "BuildingActor", "ChargerActor"),)
    assert spec.pin_map == {"UtilityGrid": ("h1",)}
    assert spec.limits_directive is None


def test_reference_dspec_with_limits_enabled():
    spec = parse_dspec((SAMPLES / "remapp_limits.dspec").read_text())
    assert spec.limits_directive == ("bbb", "all")


def test_singleton_group_rejected():
    with pytest.raises(EmptyGroup):
        parse_dspec("app X { colocate (A); }")


def test_duplicate_copies_override_rejected():
    with pytest.raises(DuplicateCopiesOverride):
        parse_dspec("app X { A copies 2; A copies 3; }")


def test_zero_copies_rejected():
    with pytest.raises(ParseError):
        parse_dspec("app X { A copies 0; }")


def test_limits_on_node_list():
    spec = parse_dspec("app X { use limits for bbb on (h1, h2); }")
    assert spec.limits_directive == ("bbb", ("h1", "h2"))


def test_multi_actor_deploy():
    spec = parse_dspec("app X { deploy (A, B) on (h1, h2); }")
    assert spec.pin_map == {"A": ("h1", "h2"), "B": ("h1", "h2")}


# --- hwspec -------------------------------------------------------------------

def test_reference_hwspec_parses():
    spec = parse_hwspec((DATA / "hwspec_figure.conf").read_text())
    assert spec.keys() == ["bbb"]
    bbb = spec["bbb"]
    assert bbb.cores == 1
    assert bbb.max_cpu == 0.7
    assert bbb.mem_mb == 512
    assert bbb.max_mem == 0.7
    assert bbb.spc_mb == 4096
    assert bbb.max_spc == 0.7


def test_empty_hwspec():
    assert parse_hwspec("").records == ()


def test_missing_field_reported():
    text = "[bbb]\ncores = 1\nmax_cpu = 0.7\nmax_mem = 0.7\nspc = 10\nmax_spc = 0.7\n"
    with pytest.raises(MissingField) as err:
        parse_hwspec(text)
    assert "bbb" in str(err.value) and "mem" in str(err.value)


def test_bad_number_reported():
    text = ("[bbb]\ncores = one\nmax_cpu = 0.7\nmem = 512\nmax_mem = 0.7\n"
            "spc = 10\nmax_spc = 0.7\n")
    with pytest.raises(BadNumber):
        parse_hwspec(text)


# --- assemble -----------------------------------------------------------------

def load_reference_inputs(dspec_name="remapp.dspec"):
    app = parse_app_model((SAMPLES / "remapp.riaps").read_text())
    spec = parse_dspec((SAMPLES / dspec_name).read_text())
    hw = parse_hwspec((SAMPLES / "hardware-spec.conf").read_text())
    return app, spec, hw


def test_assemble_reference_problem():
    app, spec, hw = load_reference_inputs()
    problem = assemble_problem(app, spec, hw, [f"h{i}" for i in range(1, 13)],
                               118.0, 131.0)
    problem = validate_problem(problem)
    assert len(problem.actors) == 6
    assert len(problem.nodes) == 12
    assert problem.actors[0].copies == 2
    assert all(a.copies == 1 for a in problem.actors[1:])
    assert not problem.rules.limits_enabled
    # placeholder capacities while limits stay off
    assert problem.nodes[0].nic_rate_kbps == 118.0


def test_assemble_with_limits_uses_hardware_record():
    app, spec, hw = load_reference_inputs("remapp_limits.dspec")
    problem = assemble_problem(app, spec, hw, ["h1", "h2"], 118.0, 131.0)
    assert problem.rules.limits_enabled
    assert problem.nodes[0].max_cpu == 0.7
    assert problem.nodes[0].mem_mb == 512


def test_assemble_app_name_mismatch():
    app, _, hw = load_reference_inputs()
    other = parse_dspec("app Other { A copies 1; }")
    with pytest.raises(AppNameMismatch):
        assemble_problem(app, other, hw, ["h1"], 100.0, 100.0)


def test_assemble_unknown_hardware_key():
    app, _, hw = load_reference_inputs()
    spec = parse_dspec("app REMApp { use limits for xyz on all; }")
    with pytest.raises(UnknownHardwareKey):
        assemble_problem(app, spec, hw, ["h1"], 100.0, 100.0)


def test_assemble_unknown_override_actor():
    app, _, hw = load_reference_inputs()
    spec = parse_dspec("app REMApp { Ghost copies 2; }")
    with pytest.raises(UnknownActor):
        assemble_problem(app, spec, hw, ["h1"], 100.0, 100.0)


# --- depl ----------------------------------------------------------------------

def test_emit_reference_layout():
    problem = failover_test_problem(9)
    text = emit_depl(problem, DeploymentMatrix(NINE_NODE_LAYOUT))
    lines = text.strip().splitlines()
    assert lines[0] == "app REMApp {"
    body = [ln.strip() for ln in lines[1:-1]]
    assert len(body) == 13  # total copies 2+3+3+3+1+1
    assert body[0] == "on (h1) BuildingActor;"
    assert lines[-1] == "}"


def test_emit_refuses_violating_matrix():
    problem = failover_test_problem(9)
    with pytest.raises(InfeasibleMatrix):
        emit_depl(problem, DeploymentMatrix.zeros(9, 6))


def test_single_assignment_roundtrip():
    problem = validate_problem(failover_test_problem(9))
    text = emit_depl(problem, DeploymentMatrix(NINE_NODE_LAYOUT))
    depl = parse_depl(text)
    assert depl.app_name == "REMApp"
    rebuilt = matrix_from_depl(problem, depl)
    assert rebuilt.x == NINE_NODE_LAYOUT
    assert check_deployment(problem, rebuilt).ok


def test_depl_unknown_node_detected():
    problem = failover_test_problem(9)
    depl = parse_depl("app REMApp { on (h99) Aggregator; }")
    with pytest.raises(UnknownNode):
        matrix_from_depl(problem, depl)


def test_minimal_depl():
    from gridplan.model import ActorSpec, DeploymentProblem, NodeSpec
    problem = validate_problem(DeploymentProblem(
        actors=(ActorSpec(id="A"),), nodes=(NodeSpec(id="n1"),), app_name="X"))
    text = emit_depl(problem, DeploymentMatrix(((1,),)))
    assert text.splitlines()[1].strip() == "on (n1) A;"


# --- round trips and robustness -------------------------------------------------

@pytest.mark.parametrize("seed", range(25))
def test_app_model_roundtrip(seed):
    app = random_app_model(random.Random(seed))
    assert parse_app_model(print_app_model(app)) == app


@pytest.mark.parametrize("seed", range(25))
def test_dspec_roundtrip(seed):
    spec = random_dspec(random.Random(seed))
    assert parse_dspec(print_dspec(spec)) == spec


@pytest.mark.parametrize("seed", range(25))
def test_hwspec_roundtrip(seed):
    spec = random_hwspec(random.Random(seed))
    assert parse_hwspec(print_hwspec(spec)) == spec


def _commentify(text: str) -> str:
    return "# leading noise\n" + text.replace("\n", "   // noise\n")


def test_comments_and_whitespace_do_not_change_parse():
    dspec_text = (SAMPLES / "remapp.dspec").read_text()
    assert parse_dspec(_commentify(dspec_text)) == parse_dspec(dspec_text)
    model_text = (SAMPLES / "remapp.riaps").read_text()
    assert parse_app_model(_commentify(model_text)) == parse_app_model(model_text)
    hw_text = (SAMPLES / "hardware-spec.conf").read_text()
    noisy = "# extra\n" + hw_text.replace("\nmem", "\n\nmem")
    assert parse_hwspec(noisy) == parse_hwspec(hw_text)


@settings(max_examples=150, deadline=None)
@given(st.text(max_size=200))
def test_parsers_never_panic(text):
    for parser in (parse_app_model, parse_dspec, parse_hwspec, parse_depl):
        try:
            parser(text)
        except ParseError:
            pass


@settings(max_examples=60, deadline=None)
@given(st.binary(max_size=120))
def test_parsers_survive_binary_garbage(blob):
    text = blob.decode("latin-1")
    for parser in (parse_dspec, parse_hwspec, parse_depl):
        try:
            parser(text)
        except ParseError:
            pass
