import pytest

from sprime.structures import make_matrix_ring, make_upper_triangular, make_zmod, regular_module


@pytest.fixture(scope="session")
def z12():
    return make_zmod(12)


@pytest.fixture(scope="session")
def m12(z12):
    return regular_module(z12)


@pytest.fixture(scope="session")
def m2z2():
    return make_matrix_ring(make_zmod(2), 2)


@pytest.fixture(scope="session")
def t2z2():
    return make_upper_triangular(make_zmod(2), 2)


@pytest.fixture(scope="session")
def t2z4():
    return make_upper_triangular(make_zmod(4), 2)


def oracle_for(m):
    """Plain-list tables for the reference evaluator."""
    from oracle import Oracle
    r = m.ring
    return Oracle(r.add.tolist(), r.mul.tolist(), m.add.tolist(), m.act.tolist(), r.zero, m.zero)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
