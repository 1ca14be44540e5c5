import os

import pytest
from hypothesis import HealthCheck, settings

from psl.field import QQ, FieldSpec
from psl.forms import parse_form
from psl.harness import trial_rng

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("ci", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

F2, F3, F5, F7 = FieldSpec(2), FieldSpec(3), FieldSpec(5), FieldSpec(7)


@pytest.fixture(params=[F7, QQ], ids=["F7", "Q"])
def field(request):
    return request.param


@pytest.fixture
def rng():
    return trial_rng(12345)


def forms(field, *texts):
    return [parse_form(t, field) for t in texts]


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS, key=lambda s: int(s[1 : s.index("]")])):
            terminalreporter.write_line(line)
