import numpy as np
import pytest

from spinframes import Angle, UnitVector3


DEGREE_GRID = [Angle.from_degrees(float(d)) for d in range(0, 181)]


def random_direction(rng: np.random.Generator) -> UnitVector3:
    v = rng.normal(size=3)
    return UnitVector3.normalized(float(v[0]), float(v[1]), float(v[2]))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260814)
