import pytest

from spsavail.model import Subsystem
from spsavail.presets import load_preset

S = Subsystem

# Reliability indices per subsystem: (lambda_eq, MTTR_eq, printed annual downtime)
REFERENCE_SUBSYSTEMS = {
    "A": {
        S.AC_GENERATION: (0.049, 16.026, 0.781),
        S.PROPULSION: (0.094, 35.085, 3.297),
        S.EXTRA_PROPULSIVE_LOADS: (0.020, 6.000, 0.120),
        S.PULSE_POWER_LOADS: (0.060, 2.333, 0.140),
        S.DC_GENERATION: (0.041, 11.488, 0.471),
    },
    "B": {
        S.AC_GENERATION: (0.067, 41.996, 2.802),
        S.PROPULSION: (0.076, 16.789, 1.276),
        S.EXTRA_PROPULSIVE_LOADS: (0.026, 4.846, 0.126),
        S.PULSE_POWER_LOADS: (0.060, 2.333, 0.140),
        S.DC_GENERATION: (0.041, 11.488, 0.471),
    },
    "C": {
        S.AC_GENERATION: (0.048, 49.417, 2.371),
        S.PROPULSION: (0.051, 13.745, 0.701),
        S.EXTRA_PROPULSIVE_LOADS: (0.026, 4.846, 0.126),
        S.PULSE_POWER_LOADS: (0.020, 6.000, 0.120),
        S.DC_GENERATION: (0.026, 4.846, 0.126),
    },
}

# KPI comparison: (weight t, volume m3, SAIDI h/yr, PPL index h/yr, TRL)
REFERENCE_KPIS = {
    "A": (748, 589, 1.186, 0.140, 7),
    "B": (771, 733, 0.514, 0.140, 6),
    "C": (762, 612, 0.316, 0.120, 5),
}


@pytest.fixture(scope="session", params=["A", "B", "C"])
def preset(request):
    return load_preset(request.param)


@pytest.fixture(scope="session")
def presets():
    return {name: load_preset(name) for name in "ABC"}


_acceptance_lines = []


@pytest.fixture
def acceptance_log():
    return _acceptance_lines


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
