import pytest

from weightspace.quadrature import QuadratureConfig


@pytest.fixture
def cfg():
    return QuadratureConfig()
