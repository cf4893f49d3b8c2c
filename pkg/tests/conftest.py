"""
Pytest configuration and shared fixtures
"""
import pytest
import sys
from fractions import Fraction
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from src.core.lie_algebra import LieAlgebra
from src.services.catalog import get_catalog


# Test fixtures
@pytest.fixture(scope="session")
def catalog():
    """The shipped catalog, loaded once"""
    return get_catalog()


@pytest.fixture(scope="session")
def g11(catalog):
    """11-dimensional nonnice algebra"""
    return catalog.get("g11").algebra


@pytest.fixture(scope="session")
def h12(catalog):
    return catalog.get("h12").algebra


@pytest.fixture(scope="session")
def n9(catalog):
    return catalog.get("n9").algebra


@pytest.fixture
def heisenberg():
    """3-dimensional Heisenberg algebra, [e1, e2] = e3"""
    return LieAlgebra.from_brackets(3, {(0, 1): {2: Fraction(1)}}, name="heis")


@pytest.fixture
def filiform4():
    """4-dimensional filiform algebra, [e1, e2] = e3, [e1, e3] = e4"""
    return LieAlgebra.from_brackets(4, {(0, 1): {2: 1}, (0, 2): {3: 1}}, name="fil4")


@pytest.fixture
def sl2():
    """sl(2) in the basis h, e, f: not nilpotent"""
    return LieAlgebra.from_brackets(
        3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, labels=["h", "e", "f"], name="sl2"
    )


@pytest.fixture
def write_file(tmp_path):
    """Write text to a file under tmp_path and return its path"""
    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
