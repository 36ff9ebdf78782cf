import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def tower():
    from superqrt.tower import default_tower

    return default_tower()


@pytest.fixture(scope="session")
def action_matrix():
    """Pull-back matrix with every row recomputed from the tower."""
    from superqrt.picard import build_action_matrix

    return build_action_matrix(compute=True, strict=False)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[key])
