"""
Pytest configuration and fixtures.

Configures the test environment and provides common fixtures.
"""

import sys
import os
import pytest
import numpy as np

# Add project root to Python path
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "slow: desk-scale reproduction runs (minutes); deselect with -m 'not slow'"
    )


@pytest.fixture
def rng():
    """Seeded generator for sampled property checks."""
    return np.random.default_rng(20240611)
