import pytest

from denomlab import DiskModel, validate_surface

_MODELS: dict = {}


def disk(b: int, p: int) -> DiskModel:
    """Session-wide model cache; crossing caches are expensive to refill."""
    key = (b, p)
    if key not in _MODELS:
        _MODELS[key] = DiskModel(
            validate_surface({"genus": 0, "boundary": [b], "punctures": p}))
    return _MODELS[key]


@pytest.fixture
def hexagon():
    return disk(6, 0)


@pytest.fixture
def punctured_square():
    return disk(4, 1)


@pytest.fixture
def twice_punctured_square():
    return disk(4, 2)
