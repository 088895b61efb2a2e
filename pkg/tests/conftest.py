import warnings

import numpy as np
import pytest

from mmcoexist import ScenarioConfig
from mmcoexist.sim import derive_trial_seed, draw_trial

# criterion lines recorded by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(scope="session")
def default_config():
    return ScenarioConfig()


@pytest.fixture(scope="session")
def default_draws(default_config):
    """A handful of seeded default-config trials (channels plus trained RF beams)."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return [draw_trial(default_config, derive_trial_seed(7, 0, t)) for t in range(20)]


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)
