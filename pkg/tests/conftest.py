import numpy as np
import pytest

from src.models.channel_spec import ChannelSpec
from src.models.cloud_config import CloudConfig
from src.physics.atom import oracle_scheme, rb85_default
from src.services.cbs_service import transverse_propagator


@pytest.fixture(autouse=True)
def quiet_log(monkeypatch):
    monkeypatch.setenv("CBS_ANTILOC_QUIET", "1")


@pytest.fixture
def rb85():
    return rb85_default()


@pytest.fixture
def oracle_atom():
    return oracle_scheme()


@pytest.fixture
def sphere():
    return CloudConfig.sphere(10.0)


@pytest.fixture
def oracle_channel():
    return ChannelSpec(pol_in=1, pol_out=1)


@pytest.fixture
def corrupted_propagator():
    """Dipole propagator with a sign that flips under reversal of the hop."""

    def propagator(start, end):
        direction = np.sign(end[..., 2] - start[..., 2])
        return transverse_propagator(start, end) * direction[..., None, None]

    return propagator
