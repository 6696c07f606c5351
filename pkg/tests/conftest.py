import pytest

from pgxray import build_geometry, field_of_order
from pgxray.drq import enumerate_drqs


def geometry(q):
    return build_geometry(field_of_order(q))


@pytest.fixture(scope="session")
def g2():
    return geometry(2)


@pytest.fixture(scope="session")
def g3():
    return geometry(3)


@pytest.fixture(scope="session")
def g4():
    return geometry(4)


@pytest.fixture(scope="session")
def drqs2(g2):
    return enumerate_drqs(g2)


@pytest.fixture(scope="session")
def drqs3(g3):
    return enumerate_drqs(g3)


@pytest.fixture(scope="session")
def drqs4(g4):
    return enumerate_drqs(g4)


@pytest.fixture(scope="session")
def standard_triad(g2):
    """span{e0,e1}, span{e2,e3}, span{e0+e2, e1+e3} in PG(3,2)."""
    P = g2.point_index
    l1 = g2.line_through(P((1, 0, 0, 0)), P((0, 1, 0, 0)))
    l2 = g2.line_through(P((0, 0, 1, 0)), P((0, 0, 0, 1)))
    l3 = g2.line_through(P((1, 0, 1, 0)), P((0, 1, 0, 1)))
    return l1, l2, l3
