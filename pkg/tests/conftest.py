import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hubroute import _pykernels, kernels  # noqa: E402

try:
    from hubroute import _ckernels
except ImportError:  # pragma: no cover - extension not built
    _ckernels = None

KERNEL_FUNCS = ("bfs_tree", "bfs_dist", "component_labels", "distance_summary", "route_to_target")
BACKENDS = {"python": _pykernels, "cython": _ckernels}


@pytest.fixture(params=["cython", "python"])
def backend(request, monkeypatch):
    """Run the test once per kernel backend."""
    module = BACKENDS[request.param]
    if module is None:
        pytest.skip("compiled kernels not built")
    for name in KERNEL_FUNCS:
        monkeypatch.setattr(kernels, name, getattr(module, name))
    return request.param


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
