import numpy as np
import pytest

from ra_cellfree import SystemParams, draw_fading, make_layout, two_stage_association

ACCEPTANCE_LINES = []


def instance(L, K, seed, **overrides):
    params = SystemParams(num_aps=L, num_users=K, **overrides)
    layout = make_layout(params, [seed, 1])
    fading = draw_fading(layout, params, [seed, 2])
    return params, layout, fading, two_stage_association(layout)


@pytest.fixture
def small_instance():
    return instance(6, 3, 11)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
