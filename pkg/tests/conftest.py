import numpy as np
import pytest

from saxopt.classify import Dataset
from saxopt.core import TimeSeries


@pytest.fixture
def client():
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from saxopt.service.app import create_app

    with TestClient(create_app()) as c:
        yield c


def make_dataset(rows, labels, name="toy"):
    return Dataset(
        tuple(TimeSeries(np.asarray(r, dtype=float), int(l)) for r, l in zip(rows, labels)),
        name=name,
    )


@pytest.fixture
def separable_dataset():
    """Two far-apart shape families; trivially 1-NN separable."""
    t = np.arange(16, dtype=float)
    rows, labels = [], []
    for i in range(6):
        rows.append(np.sin(2 * np.pi * t / 16 + 0.1 * i))
        labels.append(0)
        rows.append(t / 8.0 + 0.05 * i)
        labels.append(1)
    return make_dataset(rows, labels, name="separable")
