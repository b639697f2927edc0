import pytest
from hypothesis import HealthCheck, settings

from pdcschmidt.params import BASELINE

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

BASELINE_TEXT = """\
# reference experiment
lambda_p = 400 nm
delta_lambda = 5 nm
pump_power = 1 W
rep_rate = 100 MHz
n_o = 1.6614
n_eff = 1.6526
sigma_II = 0.76e-8 um2   # 0.76e-20 m^2
crystal_length = 10 mm
waist = 1 mm
"""

# filled by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES = {}


@pytest.fixture
def baseline():
    return BASELINE


@pytest.fixture
def baseline_file(tmp_path):
    path = tmp_path / "baseline.cfg"
    path.write_text(BASELINE_TEXT)
    return path


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        for line in ACCEPTANCE_LINES[key]:
            terminalreporter.write_line(line)
