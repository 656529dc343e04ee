from functools import lru_cache

import pytest

from fibdyck import periodic


@pytest.fixture(autouse=True, scope="session")
def _no_disk_cache():
    # keep the suite independent of any cache directory in the environment
    periodic.set_cache_dir(None)
    yield


@lru_cache(maxsize=None)
def c_star(n: int) -> tuple:
    """All words of length n in C*, by the grammar C = aC*A | cC | c C°(1)+ C."""
    if n == 0:
        return ("",)
    out = []
    for k in range(2, n + 1, 2):
        for head in c_code(k):
            out += [head + t for t in c_star(n - k)]
    return tuple(out)


@lru_cache(maxsize=None)
def co1_star(n: int) -> tuple:
    if n == 0:
        return ("",)
    out = []
    for k in range(2, n + 1, 2):
        for head in c_star(k - 2):
            out += ["b" + head + "B" + t for t in co1_star(n - k)]
    return tuple(out)


@lru_cache(maxsize=None)
def c_code(n: int) -> tuple:
    """Codewords of C = C(0) ∪ {cC} ∪ C(1) of length n."""
    return c0(n) + (("cC",) if n == 2 else ()) + c1(n)


@lru_cache(maxsize=None)
def c0(n: int) -> tuple:
    return tuple("a" + f + "A" for f in c_star(n - 2)) if n >= 2 else ()


@lru_cache(maxsize=None)
def c1(n: int) -> tuple:
    return tuple("c" + f + "C" for f in co1_star(n - 2) if f) if n >= 4 else ()


def upto(gen, max_len: int) -> list:
    return [w for n in range(max_len + 1) for w in gen(n)]


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
