import math

import pytest

from fluorospec.model import DotParams, DriveParams, dot_params_from_d0


@pytest.fixture
def dot():
    return dot_params_from_d0(1.0, 0.0)


@pytest.fixture
def unpumped():
    return dot_params_from_d0(1.0, -1.0)


# (delta_as, omega_f, phi, gamma_filter) in units of gamma_s
PRESET_FIG2_FULL = (10.0, 10.0, math.pi / 3, 1.0)
PRESET_FIG6 = (10.0, 0.1, 0.0, 0.1)
PRESET_FIG7 = (10.0, 10.0, 0.0, 0.1)


def drive_of(preset) -> DriveParams:
    return DriveParams(*preset[:3])


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


@pytest.fixture
def verdict(request):
    """Record and print one PASS/FAIL line for an acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        request.config.acceptance_lines.append(line)
        print(line)
        return ok

    return record
