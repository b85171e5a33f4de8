import itertools

import pytest

from grasscode.designs import spread_construct
from grasscode.gf import build_field


def brute_span(vectors, p):
    """All linear combinations of digit vectors mod a prime p (test oracle)."""
    n = len(vectors[0]) if vectors else 0
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        out.add(tuple(sum(c * v[j] for c, v in zip(coeffs, vectors)) % p for j in range(n)))
    return frozenset(out)


def brute_grassmannian(p, n, k):
    """Distinct k-dimensional spans found by trying every k-tuple of vectors."""
    space = list(itertools.product(range(p), repeat=n))
    found = set()
    for combo in itertools.combinations(space[1:], k):
        s = brute_span(list(combo), p)
        if len(s) == p**k:
            found.add(s)
    if k == 0:
        found.add(frozenset({(0,) * n}))
    return found


@pytest.fixture(scope="session")
def gf2():
    return build_field(2)


@pytest.fixture
def spread_2_4_2():
    return spread_construct(2, 4, 2)


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Times one acceptance criterion and records a PASS/FAIL line for it."""
    import time

    number = request.node.get_closest_marker("criterion").args[0]
    start = time.perf_counter()
    state = {"detail": "", "start": start}
    yield state
    elapsed = time.perf_counter() - start
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s) {state['detail']}".rstrip()
    _CRITERIA[number] = line
    print("\n" + line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
