import pathlib

import pytest

from cantorv import parse_spec

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

SPEC_SOURCES = {
    "v21": "roots=1; block[2]",
    "v31": "roots=1; block[3]",
    "2v": "roots=1; block[2]; block[2]",
    "stein23": "roots=1; block[2,3]",
    "brin23": "roots=1; block[2]; block[3]",
    "mixed232": "roots=1; block[2,3]; block[2]",
}


@pytest.fixture(scope="session")
def specs():
    return {name: parse_spec(src) for name, src in SPEC_SOURCES.items()}


@pytest.fixture(scope="session")
def v21(specs):
    return specs["v21"]


@pytest.fixture(scope="session")
def v31(specs):
    return specs["v31"]


@pytest.fixture(scope="session")
def brin2v(specs):
    return specs["2v"]


@pytest.fixture(scope="session")
def stein23(specs):
    return specs["stein23"]


@pytest.fixture(scope="session")
def brin23(specs):
    return specs["brin23"]


@pytest.fixture(scope="session")
def data_dir():
    return DATA
