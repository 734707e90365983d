import pytest

from knotchain.corpus import CORPUS_NAMES, corpus_diagram
from knotchain.knotcx import build_knot_chain_data
from knotchain.triads import fundamental_triad, unknot_triad

DIAGRAM_NAMES = [n for n in CORPUS_NAMES if n != "unknot"]


@pytest.fixture(scope="session")
def chain_data():
    """KnotChainData for every corpus diagram, built once."""
    out = {}
    for name in DIAGRAM_NAMES:
        out[name] = build_knot_chain_data(corpus_diagram(name))
    return out


@pytest.fixture(scope="session")
def triads(chain_data):
    out = {"unknot": unknot_triad()}
    for name in DIAGRAM_NAMES:
        out[name] = fundamental_triad(corpus_diagram(name),
                                      coeff="metabelian",
                                      data=chain_data[name])
    return out


@pytest.fixture(scope="session")
def abelian_triads(chain_data):
    out = {}
    for name in ("3_1", "4_1", "5_2"):
        out[name] = fundamental_triad(corpus_diagram(name), coeff="abelian",
                                      data=chain_data[name])
    return out
