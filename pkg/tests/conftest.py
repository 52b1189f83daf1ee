import json
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
SYNTHETIC_CSV = FIXTURES / "synthetic_index.csv"


@pytest.fixture(scope="session")
def synthetic_csv() -> Path:
    return SYNTHETIC_CSV


@pytest.fixture(scope="session")
def golden() -> dict:
    return json.loads((FIXTURES / "golden_synthetic.json").read_text())


@pytest.fixture
def write_csv(tmp_path):
    def _write(rows, header="Date,Close", name="prices.csv"):
        path = tmp_path / name
        path.write_text(header + "\n" + "".join(f"{d},{v}\n" for d, v in rows))
        return path

    return _write


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
