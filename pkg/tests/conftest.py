import pytest


@pytest.fixture
def sympy():
    return pytest.importorskip("sympy")
