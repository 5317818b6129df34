import math

import pytest

from dutchlvf.params import ChainParams, MarketParams

# 5% daily volatility in per-sqrt-second units, and the rounded value quoted
# alongside several worked examples
SIGMA_5PCT = 0.05 / math.sqrt(86400.0)
SIGMA_EX = 1.7010255e-4
DT = 12.0
DELTA = 1e-4


@pytest.fixture
def market():
    return MarketParams(0.0, SIGMA_5PCT)


@pytest.fixture
def chain():
    return ChainParams(DT)
