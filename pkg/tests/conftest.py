import os

import numpy as np
import pytest
from hypothesis import settings

from sgraph import _kernels
from sgraph.degree_set import parse_degree_set

settings.register_profile("ci", max_examples=40, deadline=None)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "ci"))

# acceptance outcomes, filled by the report hook below
_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = _ACCEPTANCE.get(report.nodeid)
    if marker is None:
        return
    marker["outcome"] = report.outcome
    marker["seconds"] = getattr(report, "duration", 0.0)


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("acceptance")
        if m is not None:
            _ACCEPTANCE[item.nodeid] = {"num": m.args[0], "title": m.args[1], "outcome": None}


def pytest_terminal_summary(terminalreporter):
    rows = [v for v in _ACCEPTANCE.values() if v["outcome"] is not None]
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for v in sorted(rows, key=lambda r: r["num"]):
        status = "PASS" if v["outcome"] == "passed" else "FAIL"
        terminalreporter.write_line(
            f"[{status}] criterion {v['num']:>2}: {v['title']} ({v['seconds']:.2f} s)")


@pytest.fixture
def S():
    return parse_degree_set


@pytest.fixture(params=["cython", "python"])
def kernels(request):
    """Each kernel implementation in turn; the compiled one is skipped if absent."""
    if request.param == "cython":
        if _kernels.compiled is None:
            pytest.skip("compiled kernels not built")
        return _kernels.compiled
    return _kernels.python


@pytest.fixture(params=["cython", "python"])
def backend(request, monkeypatch):
    """Route the sim package through one kernel implementation."""
    mod = _kernels.compiled if request.param == "cython" else _kernels.python
    if mod is None:
        pytest.skip("compiled kernels not built")
    for name in ("component_labels", "kcore_mask", "enumerate_s_masks", "mask_statistics"):
        monkeypatch.setattr(_kernels, name, getattr(mod, name))
    from sgraph.sim import exact
    exact._cached_table.cache_clear()
    yield request.param
    exact._cached_table.cache_clear()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
