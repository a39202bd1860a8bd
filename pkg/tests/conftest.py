import pytest

from zigzag_power import catalog, kernels, uniform

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def zigzag_null():
    return catalog("zigzag-null").resolved


@pytest.fixture
def uniform3():
    return uniform(3)


@pytest.fixture(params=["python", "cython"])
def backend(request):
    if request.param == "python":
        return kernels.python_backend
    if kernels.compiled_backend is None:
        pytest.skip("compiled kernels not built")
    return kernels.compiled_backend


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(_ACCEPTANCE, key=lambda r: int(r[0].split()[1].rstrip(":"))):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name} {detail}")
