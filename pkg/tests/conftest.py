"""
Fixtures pytest pour les tests CM Dihedral.
"""

import os

import pytest
from hypothesis import settings as hypothesis_settings

# Configuration de test avant d'importer l'app
os.environ["ENVIRONMENT"] = "testing"
os.environ["LOG_LEVEL"] = "WARNING"
os.environ["SELF_TEST_ON_STARTUP"] = "true"

from app.core.cherednik import CherednikAlgebra, get_algebra
from app.core.session import Session, get_session

hypothesis_settings.register_profile("cm", max_examples=40, derandomize=True, deadline=None)
hypothesis_settings.load_profile("cm")

# ═══════════════════════════════════════════════════════════════════════════════
# Sessions
# ═══════════════════════════════════════════════════════════════════════════════


@pytest.fixture(params=[2, 3, 4])
def small_d(request: pytest.FixtureRequest) -> int:
    """Petites valeurs de d (calculs rapides)."""
    return int(request.param)


@pytest.fixture
def session3() -> Session:
    """Session d = 3, t tronqué à l'ordre 1."""
    return get_session(3, 1)


@pytest.fixture
def session4() -> Session:
    return get_session(4, 1)


# ═══════════════════════════════════════════════════════════════════════════════
# Algèbres
# ═══════════════════════════════════════════════════════════════════════════════


@pytest.fixture
def algebra3() -> CherednikAlgebra:
    """H_c pour d = 3 (t = 0)."""
    return get_algebra(3, 1)


@pytest.fixture
def algebra4() -> CherednikAlgebra:
    """H_c pour d = 4 (t = 0)."""
    return get_algebra(4, 1)


@pytest.fixture
def lifted3() -> CherednikAlgebra:
    """H_{t,c} pour d = 3, t tronqué à l'ordre 2."""
    return get_algebra(3, 2)
