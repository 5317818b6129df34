"""Loss-versus-fair and fill-time analytics for onchain Dutch auctions."""

from .analytic import (
    AuctionOutcome,
    StationaryDist,
    fill_time,
    lvf,
    lvf_lower_bound,
    lvf_plus,
    max_block_time_for_loss,
    stationary_distribution,
)
from .params import (
    AuctionSpec,
    ChainParams,
    DomainError,
    GdaSpec,
    MarketParams,
    composite_drift,
    convert_daily_vol,
)

__version__ = "0.1.0"
