import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from reqforge.dsl import parse  # noqa: E402

FIXTURES = Path(str(resources.files("reqforge") / "fixtures"))
GOLDEN = Path(__file__).parent / "golden"
DATA = Path(__file__).parent / "data"


def corpus_files():
    return sorted(FIXTURES.glob("*.req")) + sorted(DATA.glob("*.req"))


def load_fixture(name):
    path = FIXTURES / name
    result = parse(path.read_text(encoding="utf-8"), str(path))
    assert result.model is not None, result.diagnostics
    return result.model


@pytest.fixture
def fig3():
    return load_fixture("fig3.req")


@pytest.fixture
def modelio_soft():
    return load_fixture("modelio_soft.req")


@pytest.fixture(scope="session")
def scale_model():
    from reqforge.synth import megamart_scale_model

    return megamart_scale_model()


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n].rstrip())
