import re

import numpy as np
import pytest

from nomasec.config import SystemConfig, TxParams
from nomasec.harness import calibrate_pt
from nomasec.ofdm import build

CAL_P_T, _ = calibrate_pt(SystemConfig(P_t=1.0))


@pytest.fixture(scope="session")
def cfg():
    return SystemConfig(P_t=CAL_P_T)


@pytest.fixture(scope="session")
def mats(cfg):
    return build(cfg)


@pytest.fixture
def tx():
    return TxParams.from_theta_g(0.75, rho=0.75, beta_u=0.5, N_u=16, beta_g=0.85, N_g=32)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# -- one PASS/FAIL line per acceptance criterion ------------------------------

_CRITERIA: dict[int, list] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_c"):
        return
    num = int(re.match(r"test_c(\d+)", name).group(1))
    detail = dict(report.user_properties).get("detail", "")
    _CRITERIA.setdefault(num, []).append((name, report.passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        parts = _CRITERIA[num]
        ok = all(p for _, p, _ in parts)
        tr.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}")
        for name, passed, detail in parts:
            tr.write_line(f"    {'ok  ' if passed else 'FAIL'} {name}: {detail}")
