import math

import numpy as np
import pytest

from qgames import JointProbabilityTable, NonFactParams

SQRT2 = math.sqrt(2)
K = (2 + SQRT2) / 8  # Cereceda a = d = e
J = (2 - SQRT2) / 8  # Cereceda b = c


def grid(step=0.05, lo=0.0, hi=1.0):
    n = int(round((hi - lo) / step))
    return [round(lo + k * step, 12) for k in range(n + 1)]


@pytest.fixture
def deterministic():
    p = np.zeros(16)
    p[[0, 5, 10, 15]] = 1.0
    return JointProbabilityTable(p)


@pytest.fixture
def cereceda_table():
    # Written out entry by entry rather than through build_embedding.
    return JointProbabilityTable.from_quadrants([K, J, J, K], [K, J, J, K], [K, J, J, K], [J, K, K, J])


@pytest.fixture
def cereceda():
    return NonFactParams(a=K, b=0.5 - K, c=0.5 - K, d=K, e=K)
