from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from bvworldline.jet_algebra import EVEN, ODD, FieldDescriptor, TruncationParams, build_model

settings.register_profile(
    "exact",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("exact")


def toy_catalog():
    """Even u (invertible at jet 0), odd ghost c, their antifields, one constant form."""
    return [
        FieldDescriptor("dt", 2, ghost=1, parity=ODD, constant=True),
        FieldDescriptor("u", 2, ghost=0, parity=EVEN, invertible_at_jet0=True),
        FieldDescriptor("c", 1, ghost=1, parity=ODD),
        FieldDescriptor("u+", 2, ghost=-1, parity=ODD, antifield_of="u"),
        FieldDescriptor("c+", 1, ghost=-2, parity=EVEN, antifield_of="c"),
    ]


@pytest.fixture(scope="session")
def toy():
    return build_model(toy_catalog(), TruncationParams(K=4, N=1, J=3))


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE: dict[int, tuple[str, str]] = {}


def record_criterion(n: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[n] = ("PASS" if ok else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {status}  {detail}")
