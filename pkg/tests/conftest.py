import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from taxosim.synthetic import ICD_CHAIN, random_taxonomy  # noqa: E402
from taxosim.taxonomy import Taxonomy  # noqa: E402

ICD_CHAIN_TEXT = "\n".join(f"{c},{p or ''}" for c, p in ICD_CHAIN) + "\n"


@pytest.fixture
def chain():
    return Taxonomy.from_edges(ICD_CHAIN)


@pytest.fixture
def siblings():
    """The ICD chain plus C25.1 next to C25.0."""
    return Taxonomy.from_edges(ICD_CHAIN + [("C25.1", "C25")])


@pytest.fixture
def sibling_parent():
    return {c: p for c, p in ICD_CHAIN + [("C25.1", "C25")]}


@pytest.fixture
def star():
    return Taxonomy.from_edges([("r", None), ("a", "r"), ("b", "r")])


@pytest.fixture(scope="session")
def tree200():
    return random_taxonomy(200, seed=7)


def parent_dict(tax):
    return {c: tax.parent(c) for c in tax.codes}


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if "criterion" in props and rep.when == "call" or (outcome == "error" and "criterion" in props):
                lines.append((props["criterion"], "PASS" if outcome == "passed" else "FAIL", props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for crit, status, detail in sorted(lines):
            terminalreporter.write_line(f"{crit:<6} {status}  {detail}")
