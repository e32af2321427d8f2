import random
from functools import lru_cache
from itertools import combinations

import pytest

from eulerlink.simplicial import build_complex, wedge
from eulerlink.witness import generate_witness

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, text = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = "PASS" if rep.outcome == "passed" else "FAIL"
        _CRITERIA[n] = (status, text)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, text = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {text}")


def sphere(d: int):
    """Boundary of the (d+1)-simplex."""
    return build_complex(list(combinations(range(d + 2), d + 1)))


def two_spheres():
    S3 = sphere(3)
    return wedge(S3, 0, S3, 0)[0]


@lru_cache(maxsize=None)
def witness(index: str):
    return generate_witness(index)


@pytest.fixture
def rng():
    return random.Random(12345)
