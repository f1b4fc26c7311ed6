import os
import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from rtlcheck.analysis.interval import AbsState, Interval
from rtlcheck.ir.function import Function
from rtlcheck.ir.parser import Block, parse, parse_block
from rtlcheck.rtl_logging import init_logging
from rtlcheck.structures.hset import SetArena
from rtlcheck.symexec.terms import TermArena

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile(
    "acceptance",
    max_examples=10_000,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session", autouse=True)
def package_logger():
    """
    Create the package logger once, before any test captures the standard streams
    """
    return init_logging()


@pytest.fixture
def logger():
    """
    Fixture to initialize the logger
    """
    return init_logging()


@pytest.fixture
def path_tests():
    basedir = Path.absolute(Path(__file__).parents[1])
    return Path(basedir, "tests")


@pytest.fixture
def config_path(path_tests):
    """
    Fixture to provide the path to the test configuration file
    """
    return Path(path_tests, "rtlcheck_test.toml")


def program_path(path_tests: Path, name: str) -> Path:
    return Path(path_tests, "programs", name)


def open_program(path_tests: Path, name: str) -> str:
    with open(program_path(path_tests, name), encoding="utf-8") as fp:
        return fp.read()


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def sets():
    return SetArena()


@pytest.fixture
def terms():
    return TermArena()


@pytest.fixture
def running_example(path_tests) -> Function:
    """y := x; z := x - y with x in r1, y in r2, z in r3"""
    return parse(open_program(path_tests, "running.ir"))


@pytest.fixture
def running_entry() -> AbsState:
    return AbsState.of({1: Interval(0, 1)})


@pytest.fixture
def loop_function(path_tests) -> Function:
    """i := 0; while i < 10 do i := i + 1; return i"""
    return parse(open_program(path_tests, "loop.ir"))


@pytest.fixture
def two_loops(path_tests) -> Function:
    return parse(open_program(path_tests, "two_loops.ir"))


@pytest.fixture
def two_adds(path_tests) -> Function:
    return parse(open_program(path_tests, "two_adds.ir"))


@pytest.fixture
def cse_diamond(path_tests) -> Function:
    return parse(open_program(path_tests, "cse_diamond.ir"))


@pytest.fixture
def pair_src(path_tests) -> Block:
    """u := x + y; z := x + y; t := x - y; v := x - y"""
    return parse_block(open_program(path_tests, "pair_src.blk"))


@pytest.fixture
def pair_tgt(path_tests) -> Block:
    """u := x + y; t := x - y; x := 0; z := u"""
    return parse_block(open_program(path_tests, "pair_tgt.blk"))
