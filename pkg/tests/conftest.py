from pathlib import Path

import pytest

from tpvsim.dsl import parse_machine, parse_system

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

GENERAL = ["p1", "halt0", "branch2", "transfer", "trap", "doubling"]
BLIND = ["pairs", "bsub", "babort"]
SYSTEMS = ["choice", "countdown", "relay", "trivial"]


def machine(name):
    return parse_machine((CORPUS / "machines" / f"{name}.rm").read_text())


def system(name):
    return parse_system((CORPUS / "systems" / f"{name}.tpv").read_text())


@pytest.fixture
def corpus_dir():
    return CORPUS


def pytest_terminal_summary(terminalreporter):
    acceptance = __import__("sys").modules.get("test_acceptance")
    if acceptance and acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(acceptance.RESULTS):
            terminalreporter.write_line(acceptance.RESULTS[n])
