import json

import pytest

from rtlcheck.analysis.solver import CounterExample, Failure, FailureReason, Reason
from rtlcheck.cli.main import build_parser, main, parse_registers
from rtlcheck.config import SEED_VARIABLE, SEED_VARIABLES
from rtlcheck.errors import UsageError
from rtlcheck.ir.cfg import is_renumbered
from rtlcheck.ir.parser import parse, parse_program
from tests.conftest import program_path


@pytest.fixture
def rtlcheck(capsys, config_path):
    """
    Run the command line with the test configuration, return the exit code
    and the standard output
    """

    def run(*argv) -> tuple[int, str]:
        code = main(["--config", str(config_path), *map(str, argv)])
        return code, capsys.readouterr().out

    return run


@pytest.fixture
def programs(path_tests):
    return lambda name: program_path(path_tests, name)


def test_parse_registers():
    assert parse_registers("r1, r3 r4") == [1, 3, 4]
    with pytest.raises(UsageError):
        parse_registers("r1,x2")


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_analyze_running_example(rtlcheck, programs):
    code, out = rtlcheck(
        "analyze", programs("running.ir"), "--entry-state", programs("running_entry.json")
    )
    assert code == 0
    assert "function running:" in out
    assert '1: {"r1": [0, 1], "r2": [0, 1], "r3": [-1, 1]}' in out
    assert "running.picks: 3" in out


def test_analyze_then_check(rtlcheck, programs, tmp_path):
    emitted = tmp_path / "loop.json"
    code, _ = rtlcheck("analyze", programs("loop.ir"), "--emit", emitted)
    assert code == 0
    data = json.loads(emitted.read_text(encoding="utf-8"))
    assert data["states"]["3"]["r1"] == [0, "+inf"]

    code, out = rtlcheck("check", programs("loop.ir"), emitted)
    assert code == 0
    assert "function loop: ok" in out


def test_check_rejects_a_forged_invariant(rtlcheck, programs):
    code, out = rtlcheck("check", programs("running.ir"), programs("running_too_precise.json"))
    assert code == 1
    assert "function running: not inductive on edge 2 -> 1" in out


def test_check_top_invariant(rtlcheck, programs):
    code, _ = rtlcheck("check", programs("running.ir"), programs("running_top.json"))
    assert code == 0
    code, _ = rtlcheck(
        "check",
        programs("running.ir"),
        programs("running_top.json"),
        "--entry-state",
        programs("running_entry.json"),
    )
    assert code == 0


def test_json_report(capsys, config_path, programs):
    code = main(
        [
            "--config",
            str(config_path),
            "--json",
            "--no-timestamp",
            "check",
            str(programs("running.ir")),
            str(programs("running_too_precise.json")),
        ]
    )
    data = json.loads(capsys.readouterr().out)
    assert code == 1
    assert data["exit_code"] == 1
    assert "timestamp" not in data
    [result] = data["payload"]["results"]
    assert result["reason"] == "not inductive"
    assert result["edge"] == [2, 1]


def test_out_of_fuel(rtlcheck, programs):
    code, out = rtlcheck("analyze", programs("loop.ir"), "--fuel", 3)
    assert code == 1
    assert "function loop: out of fuel after 3 picks" in out

    code, out = rtlcheck("analyze", programs("loop.ir"), "--fuel", 3, "--fallback-top")
    assert code == 0
    assert "loop.picks: 0" in out


def test_engine_failure_is_reported(rtlcheck, programs, mocker):
    mocker.patch(
        "rtlcheck.cli.main.kildall",
        return_value=Failure(FailureReason.OUT_OF_FUEL, 7),
    )
    code, out = rtlcheck("analyze", programs("running.ir"))
    assert code == 1
    assert "out of fuel after 7 picks" in out


def test_checker_rejection_is_reported(rtlcheck, programs, mocker):
    mocker.patch(
        "rtlcheck.cli.main.check_inductive",
        return_value=CounterExample(Reason.NOT_INDUCTIVE, 2, 1),
    )
    code, out = rtlcheck("analyze", programs("running.ir"))
    assert code == 1
    assert "checker rejected: not inductive on edge 2 -> 1" in out


def test_analyze_facts(capsys, config_path, programs):
    code = main(
        [
            "--config",
            str(config_path),
            "--json",
            "--no-timestamp",
            "analyze",
            "--domain",
            "facts",
            str(programs("two_adds.ir")),
        ]
    )
    data = json.loads(capsys.readouterr().out)
    assert code == 0
    [inv] = data["payload"]["invariants"]
    assert inv["kind"] == "facts"
    assert inv["states"]["2"] == {"facts": [1]}
    assert inv["fact_table"]["1"]["dst"] == "r3"
    assert data["stats"]["two_adds.facts"] == 2


def test_entry_state_needs_intervals(rtlcheck, programs):
    code, _ = rtlcheck(
        "analyze",
        programs("two_adds.ir"),
        "--domain",
        "facts",
        "--entry-state",
        programs("running_entry.json"),
    )
    assert code == 2


def test_analyze_several_functions(rtlcheck, programs):
    code, out = rtlcheck("analyze", programs("multi.ir"), "--jobs", 2)
    assert code == 0
    assert "function first:" in out
    assert "function second:" in out


def test_validate(rtlcheck, programs):
    code, out = rtlcheck("validate", programs("pair_src.blk"), programs("pair_tgt.blk"))
    assert code == 0
    assert "equivalent" in out
    assert "nodes: 5" in out

    code, out = rtlcheck(
        "validate",
        programs("pair_src.blk"),
        programs("pair_tgt.blk"),
        "--live",
        "r1,r2,r3,r4,r5",
    )
    assert code == 1
    assert "rejected: live register mismatch on r1 (source r1, target 0)" in out


def test_cse(rtlcheck, programs, tmp_path):
    code, out = rtlcheck("cse", programs("two_adds.ir"))
    assert code == 0
    assert "2: r4 := move r3 -> 1" in out
    assert "two_adds.replaced: 1" in out

    emitted = tmp_path / "out.ir"
    code, _ = rtlcheck("cse", programs("cse_diamond.ir"), "--emit", emitted)
    assert code == 0
    text = emitted.read_text(encoding="utf-8")
    assert "2: r4 := move r3 -> 1" in text
    assert is_renumbered(parse(text))


def test_cse_with_supplied_invariant(rtlcheck, programs, tmp_path):
    facts = tmp_path / "facts.json"
    rtlcheck("analyze", programs("two_adds.ir"), "--domain", "facts", "--emit", facts)
    code, out = rtlcheck("cse", programs("two_adds.ir"), "--invariant", facts)
    assert code == 0
    assert "2: r4 := move r3 -> 1" in out

    data = json.loads(facts.read_text(encoding="utf-8"))
    data["states"]["3"] = {"facts": [1]}
    facts.write_text(json.dumps(data), encoding="utf-8")
    code, out = rtlcheck("cse", programs("two_adds.ir"), "--invariant", facts)
    assert code == 1
    assert "left unchanged" in out
    assert "2: r4 := add r1 r2 -> 1" in out


def test_cse_needs_facts(rtlcheck, programs):
    code, _ = rtlcheck("cse", programs("running.ir"), "--invariant", programs("running_top.json"))
    assert code == 2


def test_poly(rtlcheck, programs, tmp_path):
    code, out = rtlcheck(
        "poly", "check", programs("poly_p.json"), programs("poly_c.json"), programs("poly_cert.json")
    )
    assert code == 0
    assert "certificate accepted: x1 <= 3/2" in out

    code, _ = rtlcheck(
        "poly",
        "check",
        programs("poly_p.json"),
        programs("poly_c.json"),
        programs("poly_bad_cert.json"),
    )
    assert code == 1

    code, out = rtlcheck(
        "poly", "include", programs("poly_p.json"), programs("poly_q.json"), programs("poly_certs.json")
    )
    assert code == 0
    assert "inclusion certified" in out

    emitted = tmp_path / "projection.json"
    code, out = rtlcheck(
        "poly", "project", programs("poly_p.json"), "--eliminate", "x2", "--emit", emitted
    )
    assert code == 0
    assert "x1 <= 3/2    # (0: 1/2, 1: 1/2)" in out
    data = json.loads(emitted.read_text(encoding="utf-8"))
    assert data["certificates"] == [{"lambdas": {"0": "1/2", "1": "1/2"}}]


def test_bench_dag_scaling(rtlcheck):
    code, out = rtlcheck("bench", "dag-scaling", "--sizes", 5, 10)
    assert code == 0
    assert "would_be_tree_size" in out
    assert "2047" in out


def test_gen_is_seeded(rtlcheck, monkeypatch):
    for name in SEED_VARIABLES:
        monkeypatch.delenv(name, raising=False)
    code, first = rtlcheck("--seed", 3, "gen", "--locations", 10)
    assert code == 0
    _, second = rtlcheck("--seed", 3, "gen", "--locations", 10)
    assert first == second
    [f] = parse_program(first)
    assert is_renumbered(f)

    monkeypatch.setenv(SEED_VARIABLE, "3")
    _, from_env = rtlcheck("gen", "--locations", 10)
    assert from_env == first


def test_run(rtlcheck, programs):
    code, out = rtlcheck("run", programs("loop.ir"))
    assert code == 0
    assert "returned 10" in out

    code, out = rtlcheck("run", programs("multi.ir"), "--function", "second", "--inputs", 1, 0)
    assert code == 1
    assert "trapped at location 2" in out

    code, out = rtlcheck("run", programs("spin.ir"), "--inputs", 1, "--fuel", 20)
    assert code == 1
    assert "out of fuel after 20 steps" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "bad_syntax.ir"],
        ["analyze", "does_not_exist.ir"],
        ["run", "multi.ir", "--function", "third"],
        ["run", "running.ir", "--inputs", 1, 2],
        ["check", "running.ir", "poly_p.json"],
        ["poly", "check", "poly_p.json", "poly_c.json", "poly_q.json"],
    ],
)
def test_usage_errors(rtlcheck, programs, argv):
    resolved = [programs(a) if str(a).endswith((".ir", ".json")) else a for a in argv]
    code, _ = rtlcheck(*resolved)
    assert code == 2


def test_missing_configuration(tmp_path, capsys):
    assert main(["--config", str(tmp_path / "nope.toml"), "gen"]) == 2
