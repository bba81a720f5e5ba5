from pathlib import Path

import pytest

from dpp.fmt import load, parse_process

MODELS = Path(__file__).resolve().parent.parent / "models"


def model(name):
    return load(MODELS / name)


@pytest.fixture(scope="session")
def ex1():
    return model("example1.dpp")


@pytest.fixture(scope="session")
def ex2():
    return model("example2.dpp")


@pytest.fixture(scope="session")
def pds_model():
    return model("pushdown.dpp")


def spec_of(rules, values="0 1 #", init_value="0", globals_="g", locals_="x", init="q", kind="finite",
            stack=""):
    lines = [f"kind: {kind}", f"values: {values}", f"init_value: {init_value}", f"globals: {globals_}",
             f"locals: {locals_}", "target: #", f"init: {init}"]
    if stack:
        lines.append(f"stack: {stack}")
    lines.append("rules:")
    lines += ["  " + r for r in rules]
    return parse_process("\n".join(lines) + "\n")


# One line per acceptance criterion, printed after the run.
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
