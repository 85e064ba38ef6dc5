"""Shared fixtures: committed FCIDUMP paths, reference energies, cached FCI."""

import json
import pathlib

import pytest

from qcmps.fcidump import SpinOrbitalView, read_fcidump
from qcmps.reference import fci_ground_state

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def fixture_path(name):
    return str(FIXTURES / f"{name}.fcidump")


def load_view(name, ordering="interleaved"):
    return SpinOrbitalView(read_fcidump(fixture_path(name)), ordering=ordering)


@pytest.fixture(scope="session")
def references():
    return json.loads((FIXTURES / "references.json").read_text())


@pytest.fixture(scope="session")
def fci():
    """Memoized exact ground states keyed by (fixture name, ordering)."""
    cache = {}

    def get(name, ordering="interleaved"):
        key = (name, ordering)
        if key not in cache:
            cache[key] = fci_ground_state(load_view(name, ordering))
        return cache[key]

    return get
