import json

import pytest

from rtlcheck.analysis.facts import FactState, fact_check, fact_kildall
from rtlcheck.analysis.interval import NEG_INF, POS_INF, AbsState, Interval, IntervalDomain
from rtlcheck.analysis.invariant_io import (
    FACTS,
    INTERVAL,
    abs_state_from_json,
    abs_state_to_json,
    dump_fact_invariant,
    dump_interval_invariant,
    interval_from_json,
    interval_to_json,
    load_invariant,
    parse_register,
    read_invariants,
    read_json,
    write_json,
)
from rtlcheck.analysis.solver import Reason, check_inductive, kildall
from rtlcheck.errors import InvariantFormatError
from tests.conftest import program_path


def test_interval_json():
    assert interval_to_json(Interval(NEG_INF, 3)) == ["-inf", 3]
    assert interval_from_json(["-inf", "+inf"]) == Interval(NEG_INF, POS_INF)
    assert interval_from_json([0, "inf"]) == Interval(0, POS_INF)


@pytest.mark.parametrize("raw", [[1], [2, 1], ["x", 1], [True, 2], [0.5, 1], "0,1"])
def test_bad_intervals(raw):
    with pytest.raises(InvariantFormatError):
        interval_from_json(raw)


@pytest.mark.parametrize("name", ["r0", "x1", "r", 3, "r1a"])
def test_bad_registers(name):
    with pytest.raises(InvariantFormatError):
        parse_register(name)


def test_abs_state_json():
    s = AbsState.of({2: Interval(0, POS_INF), 1: Interval(-3, -3)})
    assert abs_state_to_json(s) == {"r1": [-3, -3], "r2": [0, "+inf"]}
    assert abs_state_from_json(abs_state_to_json(s)) == s
    assert abs_state_from_json(None).is_bottom
    assert abs_state_from_json({"r1": ["-inf", "+inf"]}).regs.is_empty()


def test_dump_interval_invariant(loop_function):
    dom = IntervalDomain()
    inv = kildall(loop_function, dom)
    data = dump_interval_invariant("loop", inv, dom.entry_state())
    assert list(data["states"]) == ["6", "5", "4", "3", "2", "1"]
    assert data["states"]["3"]["r1"] == [0, "+inf"]
    assert data["entry_state"] == {}
    loaded = load_invariant(json.loads(json.dumps(data)))
    assert loaded.kind == INTERVAL
    assert loaded.function == "loop"
    assert loaded.invariant.states == inv.states
    assert check_inductive(loop_function, loaded.invariant, loaded.entry_state, dom)


def test_dump_fact_invariant(two_adds):
    inv, table = fact_kildall(two_adds)
    data = dump_fact_invariant("two_adds", inv, table)
    assert data["states"]["2"] == {"facts": [1]}
    assert data["fact_table"] == {
        "1": {"dst": "r3", "op": "add", "src1": "r1", "src2": "r2"},
        "2": {"dst": "r4", "op": "add", "src1": "r1", "src2": "r2"},
    }
    loaded = load_invariant(json.loads(json.dumps(data)))
    assert loaded.kind == FACTS
    assert loaded.table.frozen
    assert list(loaded.invariant.get(1).facts) == [1, 2]
    assert fact_check(two_adds, loaded.invariant, loaded.table)


def test_duplicated_fact_reaches_the_checker(two_adds):
    fact = {"dst": "r3", "op": "add", "src1": "r1", "src2": "r2"}
    data = {
        "function": "two_adds",
        "kind": "facts",
        "states": {"3": {"facts": []}, "2": {"facts": [1]}, "1": None},
        "fact_table": {"1": fact, "2": fact},
    }
    loaded = load_invariant(data)
    verdict = fact_check(two_adds, loaded.invariant, loaded.table)
    assert verdict.reason is Reason.BAD_TABLE


def test_unreached_state():
    data = {"function": "f", "kind": "facts", "states": {"1": None}}
    loaded = load_invariant(data)
    assert loaded.invariant.get(1) == FactState(None)


@pytest.mark.parametrize(
    "data",
    [
        [],
        {"kind": "interval", "states": {}},
        {"function": "f", "kind": "octagon", "states": {}},
        {"function": "f", "kind": "interval", "states": []},
        {"function": "f", "kind": "interval", "states": {"0": {}}},
        {"function": "f", "kind": "interval", "states": {"1": [0, 1]}},
        {"function": "f", "kind": "facts", "states": {"1": {"facts": [0]}}},
        {"function": "f", "kind": "facts", "states": {}, "fact_table": {"1": {"dst": "r1"}}},
        {
            "function": "f",
            "kind": "facts",
            "states": {},
            "fact_table": {"1": {"dst": "r1", "op": "pow", "src1": "r1", "src2": "r2"}},
        },
    ],
)
def test_malformed_files(data):
    with pytest.raises(InvariantFormatError):
        load_invariant(data)


def test_read_files(path_tests, tmp_path):
    [loaded] = read_invariants(program_path(path_tests, "running_too_precise.json"))
    assert loaded.entry_state == AbsState.of({1: Interval(0, 1)})
    assert loaded.invariant.get(1).get(3) == Interval(0, 0)

    out = tmp_path / "sub" / "inv.json"
    write_json(out, [{"function": "a", "kind": "interval", "states": {}}] * 2)
    assert len(read_invariants(out)) == 2

    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    with pytest.raises(InvariantFormatError):
        read_json(broken)
