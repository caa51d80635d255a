import json
from pathlib import Path

import pytest

from toporouter import LatticeSpec

GOLDEN_DIR = Path(__file__).parent / "golden"


def load_golden(name: str):
    return json.loads((GOLDEN_DIR / name).read_text(encoding="utf-8"))


@pytest.fixture
def spec6() -> LatticeSpec:
    return LatticeSpec(6)


@pytest.fixture
def spec6_m6() -> LatticeSpec:
    return LatticeSpec(6, extra_hop=6)
