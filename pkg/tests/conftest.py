from __future__ import annotations

from pathlib import Path

import pytest

import troptev
from troptev.model import load_instance

INSTANCES = Path(troptev.__file__).parent / "instances"


def instance_path(name: str) -> Path:
    return INSTANCES / f"{name}.json"


@pytest.fixture
def example_b():
    """a=1, n=4; one type-A and one type-B curve."""
    return load_instance(instance_path("example2"))


@pytest.fixture
def example_a():
    """a=2, n=5 with mu2=(2); four type-A curves."""
    return load_instance(instance_path("example1_corrected"))


@pytest.fixture
def toy():
    return load_instance(instance_path("toy_n3"))


@pytest.fixture
def plane_deg2():
    return load_instance(instance_path("p2_deg2"))
