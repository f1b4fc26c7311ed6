"""
JSON files exchanged between the analysis engines and the checkers.

    {
      "function": "f",
      "kind": "interval" | "facts",
      "entry_state": {"r1": [0, 1]} | {"facts": []},
      "states": {"<loc>": {"r<k>": [lo, hi], ...} | {"facts": [i, ...]} | null},
      "fact_table": {"<i>": {"dst": "r3", "op": "add", "src1": "r1", "src2": "r2"}}
    }

Infinite bounds are the strings "-inf" and "+inf"; ``null`` is Bottom for
intervals and Unreached for facts. A "kill" section is ignored: kill sets are
always rebuilt from the numbering.
"""

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from rtlcheck.analysis.facts import Fact, FactState, FactTable, UNREACHED
from rtlcheck.analysis.interval import (
    BOTTOM,
    NEG_INF,
    POS_INF,
    AbsState,
    Bound,
    Interval,
)
from rtlcheck.analysis.solver import Invariant
from rtlcheck.errors import InvariantFormatError, UsageError
from rtlcheck.ir.instructions import BinOp
from rtlcheck.structures.hset import SetArena

_REG_RE = re.compile(r"r(\d+)")

INTERVAL = "interval"
FACTS = "facts"


def _bound_to_json(b: Bound) -> int | str:
    if b == NEG_INF:
        return "-inf"
    if b == POS_INF:
        return "+inf"
    return int(b)


def _bound_from_json(raw: Any) -> Bound:
    match raw:
        case "-inf":
            return NEG_INF
        case "+inf" | "inf":
            return POS_INF
        case bool():
            raise InvariantFormatError(f"invalid bound {raw!r}")
        case int():
            return raw
    raise InvariantFormatError(f"invalid bound {raw!r}")


def interval_to_json(i: Interval) -> list[int | str]:
    return [_bound_to_json(i.lo), _bound_to_json(i.hi)]


def interval_from_json(raw: Any) -> Interval:
    if not isinstance(raw, list) or len(raw) != 2:
        raise InvariantFormatError(f"an interval is a [lo, hi] pair, got {raw!r}")
    try:
        return Interval(_bound_from_json(raw[0]), _bound_from_json(raw[1]))
    except UsageError as e:
        raise InvariantFormatError(str(e)) from e


def parse_register(name: Any) -> int:
    match = _REG_RE.fullmatch(name) if isinstance(name, str) else None
    if match is None or int(match.group(1)) < 1:
        raise InvariantFormatError(f"invalid register {name!r}")
    return int(match.group(1))


def parse_location(name: Any) -> int:
    try:
        loc = int(name)
    except (TypeError, ValueError):
        raise InvariantFormatError(f"invalid location {name!r}") from None
    if loc < 1:
        raise InvariantFormatError(f"invalid location {name!r}")
    return loc


def abs_state_to_json(s: AbsState) -> dict[str, list] | None:
    if s.regs is None:
        return None
    return {f"r{r}": interval_to_json(i) for r, i in s.regs.bindings()}


def abs_state_from_json(raw: Any) -> AbsState:
    if raw is None:
        return BOTTOM
    if not isinstance(raw, dict):
        raise InvariantFormatError(f"an interval state is an object or null, got {raw!r}")
    return AbsState.of({parse_register(r): interval_from_json(i) for r, i in raw.items()})


def fact_state_to_json(s: FactState) -> dict[str, list[int]] | None:
    if s.facts is None:
        return None
    return {"facts": list(s.facts)}


def fact_state_from_json(raw: Any, sets: SetArena) -> FactState:
    if raw is None:
        return UNREACHED
    facts = raw.get("facts") if isinstance(raw, dict) else None
    if not isinstance(facts, list) or not all(
        isinstance(i, int) and not isinstance(i, bool) and i >= 1 for i in facts
    ):
        raise InvariantFormatError(f"a fact state is {{'facts': [indices]}} or null, got {raw!r}")
    return FactState(sets.from_iterable(facts))


def _fact_to_json(fact: Fact) -> dict[str, str]:
    return {
        "dst": f"r{fact.dst}",
        "op": fact.op.value,
        "src1": f"r{fact.src1}",
        "src2": f"r{fact.src2}",
    }


def _fact_from_json(raw: Any) -> Fact:
    if not isinstance(raw, dict):
        raise InvariantFormatError(f"invalid fact {raw!r}")
    try:
        op = BinOp(raw["op"])
        return Fact(
            parse_register(raw["dst"]),
            op,
            parse_register(raw["src1"]),
            parse_register(raw["src2"]),
        )
    except KeyError as e:
        raise InvariantFormatError(f"fact {raw!r} lacks {e}") from None
    except ValueError as e:
        raise InvariantFormatError(f"invalid fact {raw!r}: {e}") from None


@dataclass
class InvariantFile:
    """
    Content of an invariant file.

    ``table`` is only set for fact invariants; its kill sets are rebuilt from
    the numbering, never read from the file.
    """

    function: str
    kind: str
    invariant: Invariant
    entry_state: AbsState | FactState
    table: FactTable | None = None
    sets: SetArena | None = None


def dump_interval_invariant(
    name: str, inv: Invariant[AbsState], entry_state: AbsState
) -> dict[str, Any]:
    return {
        "function": name,
        "kind": INTERVAL,
        "entry_state": abs_state_to_json(entry_state),
        "states": {str(loc): abs_state_to_json(s) for loc, s in reversed(inv.bindings())},
    }


def dump_fact_invariant(
    name: str, inv: Invariant[FactState], table: FactTable
) -> dict[str, Any]:
    return {
        "function": name,
        "kind": FACTS,
        "entry_state": {"facts": []},
        "states": {str(loc): fact_state_to_json(s) for loc, s in reversed(inv.bindings())},
        "fact_table": {str(i): _fact_to_json(fact) for i, fact in sorted(table.by_index.items())},
    }


def load_invariant(data: Any) -> InvariantFile:
    """
    Decode an invariant file already parsed from JSON

    Raises
    ------
    InvariantFormatError
        on any malformed part
    """
    if not isinstance(data, dict):
        raise InvariantFormatError("an invariant file holds a JSON object")
    for key in ("function", "kind", "states"):
        if key not in data:
            raise InvariantFormatError(f"invariant file lacks {key!r}")
    kind = data["kind"]
    states = data["states"]
    if not isinstance(states, dict):
        raise InvariantFormatError("'states' is an object from locations to states")

    match kind:
        case "interval":
            entry = data.get("entry_state", {})
            return InvariantFile(
                str(data["function"]),
                INTERVAL,
                Invariant.of(
                    {parse_location(loc): abs_state_from_json(s) for loc, s in states.items()}
                ),
                abs_state_from_json(entry if entry is not None else {}),
            )
        case "facts":
            sets = SetArena()
            raw_table = data.get("fact_table", {})
            if not isinstance(raw_table, dict):
                raise InvariantFormatError("'fact_table' is an object from indices to facts")
            by_index = {parse_location(i): _fact_from_json(f) for i, f in raw_table.items()}
            table = FactTable(sets, frozen=True)
            # a duplicated fact is kept here and reported by the checker
            for index, fact in sorted(by_index.items()):
                table.by_index[index] = fact
                table.by_fact.setdefault(fact, index)
            return InvariantFile(
                str(data["function"]),
                FACTS,
                Invariant.of(
                    {parse_location(loc): fact_state_from_json(s, sets) for loc, s in states.items()}
                ),
                FactState(sets.empty()),
                table,
                sets,
            )
    raise InvariantFormatError(f"unknown invariant kind {kind!r}")


def read_json(path: Path) -> Any:
    """
    Raises
    ------
    InvariantFormatError
        if the file is not valid JSON
    """
    with open(path, encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as e:
            raise InvariantFormatError(f"{path}: {e}") from e


def write_json(path: Path, data: Any) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
        f.write("\n")


def read_invariants(path: Path) -> list[InvariantFile]:
    """An invariant file holds one invariant object or a list of them."""
    data = read_json(path)
    items = data if isinstance(data, list) else [data]
    return [load_invariant(item) for item in items]
