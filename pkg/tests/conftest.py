import random
from pathlib import Path

import pytest
from hypothesis import settings

from tsogame.corpus import random_program

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ROOT = Path(__file__).resolve().parent.parent
DEMOS = ROOT / "demos"

WRITE_THEN_TARGET = """\
domain 0 1;
var x = 0;
process P1 {
  init q0;
  q0 -> q1 : write x 1;
  q1 -> q1 : skip;
}
reach P1.q1;
"""


def program_from_seed(seed, **kw):
    return random_program(random.Random(seed), **kw)


@pytest.fixture
def fig6_text():
    return (DEMOS / "fig6.tso").read_text(encoding="utf-8")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
