import pytest
from hypothesis import HealthCheck, settings

from corpus import corpus
from sharpmilnor.arrangement import all_frames
from sharpmilnor.fixtures import CATALOG, fixture

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CORPUS_SIZE = 24


@pytest.fixture(scope="session")
def corpus_arrs():
    return corpus(CORPUS_SIZE)


@pytest.fixture(scope="session")
def corpus_frames(corpus_arrs):
    return [fr for arr in corpus_arrs for fr in all_frames(arr)]


@pytest.fixture(scope="session")
def catalog():
    return {name: fixture(name) for name in CATALOG}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion checked by a test")
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    out = yield
    rep = out.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, text = mark.args
    table = item.config._criteria
    ok = table.get(n, (True, text))[0]
    if rep.when == "call" or rep.failed:
        ok = ok and rep.passed
    table[n] = (ok, text)


def pytest_terminal_summary(terminalreporter, config):
    table = getattr(config, "_criteria", {})
    if not table:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(table):
        ok, text = table[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}")
