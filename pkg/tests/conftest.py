import pytest

from rational_base_kit.core.base import Base
from rational_base_kit.core.checks import load_worked_examples

@pytest.fixture
def worked_examples():
    """Golden values keyed by base, then by section."""
    return load_worked_examples()

@pytest.fixture
def base32():
    return Base(3, 2)

@pytest.fixture
def base43():
    return Base(4, 3)

@pytest.fixture
def base73():
    return Base(7, 3)

@pytest.fixture
def base52():
    return Base(5, 2)
