import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def fixture_set(tmp_path_factory):
    """Seed-0 miniature dataset with its synthetic scanpaths already sampled."""
    from gazebench.cli import main

    root = tmp_path_factory.mktemp("fixture_set")
    assert main(["synth-fixtures", "--out", str(root), "--seed", "0"]) == 0
    assert main(["sample", "--manifest", str(root / "manifest.json"), "--seed", "0"]) == 0
    return root


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
