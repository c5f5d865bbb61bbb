"""
Tests for the trace format and the tsocausal command line
"""

import argparse
import json

import pytest
from pydantic import ValidationError

from tsocausal.cli import main
from tsocausal.cli.commands import scenario_config, simulate
from tsocausal.cli.trace_format import (
    emit_trace,
    parse_node,
    parse_nodes,
    parse_tag,
    parse_trace,
    run_to_trace,
    trace_to_run,
    write_trace,
)
from tsocausal.core.types import Agent, Node, Read, Tag
from tsocausal.exceptions import ConfigurationError, TraceFormatError
from tsocausal.runtime.run import JointAction
from tsocausal.schemas import ScenarioConfig


def trace_lines(r):
    return emit_trace(run_to_trace(r)).splitlines()


def edited(lines, number, change):
    """Apply `change` to the JSON object on 1-based line `number`."""
    data = json.loads(lines[number - 1])
    change(data)
    return lines[:number - 1] + [json.dumps(data)] + lines[number:]


@pytest.fixture
def save(tmp_path):
    def write(r, name="run.trace"):
        path = tmp_path / name
        write_trace(path, run_to_trace(r))
        return str(path)
    return write


@pytest.mark.unit
@pytest.mark.cli
class TestNodeSyntax:
    """Nodes and tags as written on the command line"""

    def test_parse_node(self):
        assert parse_node("p3@12") == Node(Agent.process(3), 12)
        assert parse_node(" d2@0 ") == Node(Agent.dispatcher(2), 0)

    @pytest.mark.parametrize("text", ["x1@2", "p1", "p@3", "p1@-1", "p1@2@3"])
    def test_reject_bad_nodes(self, text):
        with pytest.raises(ValueError):
            parse_node(text)

    def test_parse_node_list(self):
        assert parse_nodes("p1@0, d2@3") == [Node(Agent.process(1), 0), Node(Agent.dispatcher(2), 3)]

    def test_parse_tag(self):
        assert parse_tag("2:1") == Tag(2, 1)
        with pytest.raises(ValueError):
            parse_tag("21")


@pytest.mark.unit
@pytest.mark.cli
class TestTraceFormat:
    """Writing and replaying traces"""

    def test_round_trip(self, sb_run):
        trace = run_to_trace(sb_run)
        restored = trace_to_run(parse_trace(emit_trace(trace)))
        assert restored.states == sb_run.states
        assert run_to_trace(restored).model_dump() == trace.model_dump()

    def test_round_trip_with_vector_values(self):
        r, _ = simulate(ScenarioConfig(fixture="snapshot-fenced", rounds=16, seed=3))
        restored = trace_to_run(parse_trace(emit_trace(run_to_trace(r))))
        assert restored.states == r.states

    def test_line_layout(self, sb_run):
        lines = trace_lines(sb_run)
        assert len(lines) == sb_run.horizon + 2
        assert [json.loads(s)["type"] for s in lines] == ["header", "round", "round", "round", "footer"]

    def test_recorded_event_mismatch(self, sb_run):
        def tamper(data):
            data["events"][0]["value"] = 1
        with pytest.raises(TraceFormatError) as exc:
            trace_to_run(parse_trace(edited(trace_lines(sb_run), 3, tamper)))
        assert exc.value.line == 3

    def test_missing_footer(self, sb_run):
        with pytest.raises(TraceFormatError) as exc:
            parse_trace(trace_lines(sb_run)[:-1])
        assert exc.value.line == 4

    def test_not_json(self, sb_run):
        lines = trace_lines(sb_run)
        lines[1] = "{round 1"
        with pytest.raises(TraceFormatError) as exc:
            parse_trace(lines)
        assert exc.value.line == 2

    def test_horizon_mismatch(self, sb_run):
        def tamper(data):
            data["horizon"] = 5
        with pytest.raises(TraceFormatError) as exc:
            trace_to_run(parse_trace(edited(trace_lines(sb_run), 1, tamper)))
        assert exc.value.line == 1

    def test_blank_lines_keep_numbering(self, sb_run):
        lines = trace_lines(sb_run)
        lines.insert(1, "")

        def tamper(data):
            data["type"] = "footer"
        with pytest.raises(TraceFormatError) as exc:
            parse_trace(edited(lines, 4, tamper))
        assert exc.value.line == 4

    def test_empty_trace(self):
        with pytest.raises(TraceFormatError) as exc:
            parse_trace("")
        assert exc.value.line == 1


@pytest.mark.unit
@pytest.mark.cli
class TestScenarioConfig:
    """Simulation settings"""

    def test_defaults(self):
        config = ScenarioConfig(fixture="sb")
        assert (config.rounds, config.seed, config.n) == (20, 0, None)

    def test_seed_from_environment(self, monkeypatch):
        monkeypatch.setenv("TSOCAUSAL_SEED", "5")
        assert ScenarioConfig(fixture="sb").seed == 5

    def test_probability_range(self):
        with pytest.raises(ValidationError):
            ScenarioConfig(fixture="sb", move_prob=1.5)

    def test_flags_to_config(self):
        config = scenario_config(argparse.Namespace(fixture="chaos", rounds=4, seed=None, n=3))
        assert (config.fixture, config.rounds, config.n) == ("chaos", 4, 3)
        with pytest.raises(ConfigurationError):
            scenario_config(argparse.Namespace(fixture="sb", move_prob=1.5))

    def test_simulation_is_deterministic(self):
        config = ScenarioConfig(fixture="register-unfenced", rounds=15, seed=11)
        first, _ = simulate(config)
        second, report = simulate(config)
        assert emit_trace(run_to_trace(first)) == emit_trace(run_to_trace(second))
        assert report.ok

    def test_zero_rounds(self):
        r, _ = simulate(ScenarioConfig(fixture="sb", rounds=0))
        assert len(trace_lines(r)) == 2

    def test_quiesce_empties_buffers(self):
        r, _ = simulate(ScenarioConfig(fixture="chaos", rounds=8, seed=2, quiesce=True))
        assert r.final.tso.all_buffers_empty()


@pytest.mark.cli
@pytest.mark.integration
class TestCommands:
    """The tsocausal entry point end to end"""

    def test_simulate_to_file(self, tmp_path, capsys):
        out = tmp_path / "sb.trace"
        assert main(["simulate", "--fixture", "sb", "--rounds", "6", "--seed", "1", "--out", str(out)]) == 0
        assert len(out.read_text().splitlines()) == 8
        assert json.loads(capsys.readouterr().out)["violations"] == []

    def test_simulate_to_stdout(self, capsys):
        assert main(["simulate", "--fixture", "mp", "--rounds", "3"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 5

    def test_unknown_fixture(self, capsys):
        assert main(["simulate", "--fixture", "nope"]) == 2
        assert "unknown fixture" in capsys.readouterr().err

    def test_missing_trace(self, tmp_path):
        assert main(["analyze", str(tmp_path / "absent.trace"), "observations"]) == 2

    def test_bad_node_argument(self, sb_run, save):
        with pytest.raises(SystemExit) as exc:
            main(["analyze", save(sb_run), "ob", "--from", "q1@0", "--to", "p2@3"])
        assert exc.value.code == 2

    def test_ob_query(self, sb_run, save, capsys):
        path = save(sb_run)
        assert main(["analyze", path, "ob", "--from", "p2@1", "--to", "d1@3"]) == 0
        assert capsys.readouterr().out.strip() == "p2@1 -[same-var]-> d1@2 -[locality]-> d1@3"
        assert main(["analyze", path, "ob", "--from", "p1@0", "--to", "p2@3"]) == 0
        assert capsys.readouterr().out.strip() == "none"

    def test_past_query(self, sb_run, save, capsys):
        assert main(["analyze", save(sb_run), "past", "--nodes", "d1@2"]) == 0
        lines = capsys.readouterr().out.splitlines()
        thresholds_line = next(s for s in lines if s.startswith("thresholds:"))
        assert set(thresholds_line.split()[1:]) == {"p1=1", "p2=2", "d1=3", "d2=0"}
        assert not any(s.startswith("exhausted:") for s in lines)

    def test_zero_delay_transform(self, sb_run, save, tmp_path):
        path = save(sb_run)
        out = tmp_path / "same.trace"
        assert main(["analyze", path, "transform", "--nodes", "p1@1", "--delta", "0", "--out", str(out)]) == 0
        original = open(path).read().splitlines()
        assert out.read_text().splitlines()[1:-1] == original[1:-1]

    def test_delay_transform(self, sb_run, save, tmp_path, capsys):
        out = tmp_path / "delayed.trace"
        assert main(["analyze", save(sb_run), "transform", "--nodes", "d1@2", "--delta", "2", "--out", str(out)]) == 0
        assert json.loads(capsys.readouterr().out)["violations"] == []
        assert len(out.read_text().splitlines()) == 7

    def test_exhausted_transform(self, sb_run, save, tmp_path):
        path = save(sb_run)
        out = str(tmp_path / "out.trace")
        nodes = "p1@3,p2@3,d1@3,d2@3"
        assert main(["analyze", path, "transform", "--nodes", nodes, "--delta", "1", "--out", out]) == 3
        assert main(["analyze", path, "transform", "--nodes", nodes, "--delta", "1", "--out", out,
                     "--allow-exhausted"]) == 0

    def test_check_lin(self, unfenced_violation_run, fenced_register_run, save, capsys):
        assert main(["analyze", save(unfenced_violation_run, "v.trace"), "check-lin"]) == 1
        assert capsys.readouterr().out.startswith("NOT linearizable: p1#1:Write(1), p2#1:Read=0")
        assert main(["analyze", save(fenced_register_run, "f.trace"), "check-lin"]) == 0
        assert capsys.readouterr().out.startswith("linearizable")

    def test_check_lin_needs_object(self, sb_run, save):
        path = save(sb_run)
        assert main(["analyze", path, "check-lin"]) == 2
        assert main(["analyze", path, "check-lin", "--spec", "register"]) == 0

    def test_sync_scenario(self, fenced_register_run, save, capsys):
        path = save(fenced_register_run)
        assert main(["analyze", path, "sync", "--op", "p2#1"]) == 0
        assert json.loads(capsys.readouterr().out)["follow_up_sync"] is True
        assert main(["analyze", path, "sync", "--op", "p1#1"]) == 3

    def test_necessity(self, unfenced_violation_run, save):
        assert main(["analyze", save(unfenced_violation_run), "necessity"]) == 1

    def test_solo_query(self, concurrent_register_run, save, tmp_path):
        out = tmp_path / "solo.trace"
        assert main(["analyze", save(concurrent_register_run), "solo", "--op", "p1#1", "--out", str(out)]) == 0
        assert out.exists()

    def test_unpropagated_query(self, unfenced_violation_run, save):
        path = save(unfenced_violation_run)
        assert main(["analyze", path, "unpropagated", "--op", "p1#1", "--tag", "1:1"]) == 0
        assert main(["analyze", path, "unpropagated", "--op", "p1#1", "--tag", "1:2"]) == 3

    def test_invalid_trace_rejected(self, sb_protocol, build_run, save, capsys):
        r = build_run(sb_protocol, [JointAction({1: Read("y")})])
        path = save(r)
        assert main(["analyze", path, "observations"]) == 2
        assert "line 2" in capsys.readouterr().err
        assert main(["analyze", path, "--skip-validation", "observations"]) == 0

    def test_search(self, tmp_path):
        out = tmp_path / "found.trace"
        assert main(["search", "--fixture", "register-fenced", "--writes", "2", "--budget", "3",
                     "--out", str(out)]) == 0
        assert out.exists()
        assert main(["search", "--fixture", "register-unfenced", "--writes", "1", "--budget", "2"]) == 1
