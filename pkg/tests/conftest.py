import numpy as np
import pytest

from dmsec import ArrayGeometry, reference_scenario


@pytest.fixture(scope="session")
def scenario():
    """The reference six-antenna, two-user, four-eavesdropper setup."""
    return reference_scenario()


@pytest.fixture(scope="session")
def tiny_scenario():
    """Smallest interesting instance: N=2, M=1, K=1."""
    return reference_scenario(
        geometry=ArrayGeometry.half_wavelength(2, 3e9),
        user_angles=np.array([np.pi / 6]),
        user_distances=np.array([80.0]),
        eve_angles_est=np.array([-np.pi / 12]),
        eve_distances=np.array([50.0]),
    )
