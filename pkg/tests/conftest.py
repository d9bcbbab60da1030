from pathlib import Path

import pytest


@pytest.fixture(scope="session")
def demo_path() -> Path:
    return Path(__file__).resolve().parent.parent / "data" / "demo.csv"
