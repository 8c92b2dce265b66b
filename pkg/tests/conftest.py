import copy

import pytest
from hypothesis import settings

from vickrey_ring.config import AuctionConfig
from vickrey_ring.field import make_field
from vickrey_ring.replay import load_worked_example, replay_appendix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def F2063():
    return make_field(2063, 5)


@pytest.fixture(scope="session")
def worked():
    return load_worked_example()


@pytest.fixture
def worked_copy(worked):
    return copy.deepcopy(worked)


@pytest.fixture(scope="session")
def appendix_run():
    """Full replay of the worked example; shared, do not mutate."""
    return replay_appendix()["result"]


@pytest.fixture(scope="session")
def appendix_config(worked):
    return AuctionConfig.from_dict(worked)


def pytest_terminal_summary(terminalreporter):
    import sys

    acc = sys.modules.get("test_acceptance")
    if acc is not None and acc.RESULTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(acc.RESULTS):
            terminalreporter.write_line(acc.RESULTS[num])
