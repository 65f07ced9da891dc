from __future__ import annotations

from fractions import Fraction

import pytest

from mumtau.fixtures import get_fixture
from mumtau.frobenius import frobenius_basis
from mumtau.ode import invert_variable


@pytest.fixture(scope="session")
def d3_local():
    """D3 in the chart of its maximally unipotent point."""
    return invert_variable(get_fixture("D3").operator)


@pytest.fixture(scope="session")
def d3_basis(d3_local):
    return frobenius_basis(d3_local, 220, radius=Fraction(1, 4))


@pytest.fixture(scope="session")
def d3_basis_small(d3_local):
    return frobenius_basis(d3_local, 60, radius=Fraction(1, 4))
