import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from crooked.minkowski import lorentz_dot

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

finite = st.floats(-10.0, 10.0, allow_nan=False, allow_infinity=False)
vectors = st.tuples(finite, finite, finite).map(np.array)


def _spacelike(v):
    return lorentz_dot(v, v) > 1e-3 * max(1.0, v @ v)


spacelike = vectors.filter(_spacelike)
rapidity = st.floats(-2.0, 2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_spacelike(rng, n=None):
    """Rows of ``(cos th, sin th, tanh r)`` scaled: spacelike with mixed sizes."""
    size = 1 if n is None else n
    th = rng.uniform(0, 2 * np.pi, size)
    z = rng.uniform(-0.95, 0.95, size)
    s = rng.uniform(0.2, 5.0, size)
    out = np.column_stack([np.cos(th), np.sin(th), z]) * s[:, None]
    return out[0] if n is None else out
