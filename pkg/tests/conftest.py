from __future__ import annotations

import warnings
from pathlib import Path

import pytest

from vrpweave import load_model, parse_aspect_file
from vrpweave.errors import UnboundParamWarning

FIXTURES = Path(__file__).parent / "fixtures"


def read_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def load_fixture_model(name: str):
    return load_model(read_fixture(name), filename=name)


def load_fixture_aspects(name: str):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnboundParamWarning)
        return parse_aspect_file(read_fixture(name), filename=name)


@pytest.fixture
def pilot_model():
    return load_fixture_model("jaxa_pilot.vrp")


@pytest.fixture
def satellite2_aspects():
    return load_fixture_aspects("satellite2.pasp")


@pytest.fixture
def full_model():
    return load_fixture_model("jaxa_full.vrp")


@pytest.fixture
def full_aspects():
    return load_fixture_aspects("jaxa_full.pasp")
