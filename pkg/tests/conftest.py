import pytest
from hypothesis import HealthCheck, settings

from dihlike.abelian import parse_group, parse_morphism
from dihlike.dihloop import DihParams, dih_construct

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def params(m, group, alpha="id"):
    G = parse_group(group)
    return DihParams(m, G, parse_morphism(alpha, G))


@pytest.fixture(scope="session")
def dih12():
    """Dih(12, Z4, -1): nonassociative, m/2 even."""
    return params(12, "Z4", "(3)")


@pytest.fixture(scope="session")
def pair6():
    """Dih(6, Z2xZ4, alpha) and Dih(6, Z2xZ4, beta) with u alpha = u v^2, v beta = v^3."""
    return params(6, "Z2xZ4", "(1,2);(0,1)"), params(6, "Z2xZ4", "(1,2);(0,3)")


@pytest.fixture(scope="session")
def dih2z5neg():
    return params(2, "Z5", "(4)")


@pytest.fixture(scope="session")
def dih2z5():
    return params(2, "Z5")


@pytest.fixture(scope="session")
def named(dih12, pair6, dih2z5neg):
    return [dih2z5neg, dih12, pair6[0]]


@pytest.fixture(scope="session")
def table_of():
    cache = {}

    def get(P):
        key = (P.m, P.G, P.alpha)
        if key not in cache:
            cache[key] = dih_construct(P)
        return cache[key]

    return get


# one line per acceptance criterion in the terminal summary

_criteria: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marks = getattr(report, "criterion", None)
    if marks is None:
        return
    n, name = marks
    prev = _criteria.get(n, (name, "PASS"))[1]
    status = "PASS" if report.outcome == "passed" and prev == "PASS" else "FAIL"
    _criteria[n] = (name, status)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        rep.criterion = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        name, status = _criteria[n]
        terminalreporter.write_line(f"[{status}] {n:2d}  {name}")
