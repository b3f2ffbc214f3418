from pathlib import Path

import pytest

from hybtab.semantics import KripkeDProduct

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

AXDEC = "<1>@a1<2>a2 -> @a1<2>a2"
COMMUTE = "<1><2>p1 <-> <2><1>p1"
INTRO = "@i1 @a1 p1 & <1>i1 & <2>a1 -> <1><2>p1"
RED1 = "@i1 a1 <-> a1"
RED2 = "@a1 i1 <-> i1"
# the prover refutes the negation of its input, so this root body (an infinite hpl branch) is given negated
LOOP = "~(<1>p1 & [1]<2>p2 & [2]<1>p3)"


def noncommuting_model() -> KripkeDProduct:
    return KripkeDProduct(
        w1=("x1", "x2"), w2=("y1", "y2"),
        r1=frozenset({("x1", "x2")}),
        r2={"x1": frozenset(), "x2": frozenset({("y1", "y2")})},
        val={"p1": frozenset({("x2", "y2")})},
    )


@pytest.fixture
def noncommuting():
    return noncommuting_model()


# --- acceptance summary: one line per criterion -----------------------------

_criteria: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        n = int(report.nodeid.rsplit("test_criterion_", 1)[1].split("_", 1)[0])
        detail = dict(report.user_properties).get("detail", "")
        _criteria[n] = ("PASS" if report.outcome == "passed" else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        status, detail = _criteria[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {detail}")
