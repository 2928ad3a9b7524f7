"""Dataset summary statistics and plot-ready figure tables.

Counts come from the network role flags and event tallies; histogram and
per-user score tables are emitted as data only, rendering is left to
external tools.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .graph import CollectorArtistNetwork
from .ingest import EventLog
from .profiling import METRIC_NAMES, MetricsTable, UserProfile

DIMENSION_SALES = "sales"
DIMENSION_PURCHASES = "purchases"

# Fig-style one-line-per-user measure order
FIGURE_MEASURES = ("in_degree", "authority", "hub", "out_degree")


@dataclass(frozen=True)
class MarketSummary:
    """Marketplace-level counts and volumes.

    ``tokenized_count`` needs mint events; a sales-only log yields the
    distinct artwork-id count instead, flagged as a lower bound. Fractions
    are exact; percentage rounding happens only in the text rendering.
    """

    tokenized_count: int
    tokenized_is_lower_bound: bool
    sold_count: int
    sale_volume_usd: Decimal
    sale_volume_eth: Decimal
    active_users: int
    creators: int
    sellers: int
    buyers: int

    def _fraction(self, count: int) -> float:
        return count / self.active_users if self.active_users else 0.0

    @property
    def creators_fraction(self) -> float:
        return self._fraction(self.creators)

    @property
    def sellers_fraction(self) -> float:
        return self._fraction(self.sellers)

    @property
    def buyers_fraction(self) -> float:
        return self._fraction(self.buyers)

    def to_dict(self) -> dict:
        return {
            "tokenized_artworks": {
                "count": self.tokenized_count,
                "lower_bound": self.tokenized_is_lower_bound,
            },
            "sold_artworks": self.sold_count,
            "sale_volume_usd": float(self.sale_volume_usd),
            "sale_volume_eth": float(self.sale_volume_eth),
            "active_users": self.active_users,
            "creators": {"count": self.creators, "fraction": self.creators_fraction},
            "sellers": {"count": self.sellers, "fraction": self.sellers_fraction},
            "buyers": {"count": self.buyers, "fraction": self.buyers_fraction},
        }

    def to_text(self) -> str:
        bound = " (lower bound: sales-only input)" if self.tokenized_is_lower_bound else ""
        lines = [
            f"Tokenized artworks: {self.tokenized_count}{bound}",
            f"Sold artworks: {self.sold_count}",
            f"Sale volume: {self.sale_volume_usd:,.2f} USD / {self.sale_volume_eth:,.4f} ETH",
            f"Active users: {self.active_users}",
            f"Created at least one artwork: {self.creators}"
            f" ({round(self.creators_fraction * 100)}%)",
            f"Sold at least one artwork: {self.sellers}"
            f" ({round(self.sellers_fraction * 100)}%)",
            f"Bought at least one artwork: {self.buyers}"
            f" ({round(self.buyers_fraction * 100)}%)",
        ]
        return "\n".join(lines) + "\n"


def summarize(log: EventLog, net: CollectorArtistNetwork) -> MarketSummary:
    """Counts and volumes for a log and the network built from it."""
    unconverted = sum(1 for e in log.events if e.needs_conversion)
    if unconverted:
        raise ValueError(
            f"{unconverted} event(s) lack a USD price; apply convert_currency first"
        )
    artwork_ids = {e.artwork_id for e in log.events if e.artwork_id is not None}
    usd = sum((e.price_usd for e in log.events), Decimal(0))
    eth = sum((e.price_eth for e in log.events if e.price_eth is not None), Decimal(0))
    flags = net.roles.values()
    return MarketSummary(
        tokenized_count=len(artwork_ids),
        tokenized_is_lower_bound=True,
        sold_count=len(log.events),
        sale_volume_usd=usd,
        sale_volume_eth=eth,
        active_users=net.node_count,
        creators=sum(1 for f in flags if f.minted),
        sellers=sum(1 for f in flags if f.sold),
        buyers=sum(1 for f in flags if f.bought),
    )


def volume_by_seller(log: EventLog) -> dict[str, Decimal]:
    """USD proceeds per selling user (the transacting seller, not the creator)."""
    return _volume_by(log, "seller_id")


def volume_by_buyer(log: EventLog) -> dict[str, Decimal]:
    """USD spend per buying user."""
    return _volume_by(log, "buyer_id")


def histogram_data(
    table: MetricsTable,
    dimension: str,
    bins: int = 20,
) -> tuple[np.ndarray, np.ndarray]:
    """Log-spaced histogram of per-user sale or purchase counts.

    Returns (edges, counts); counts sum to the number of users with a
    positive count in the dimension. Empty support yields empty arrays.
    """
    if dimension == DIMENSION_SALES:
        values = table.column("in_degree")
    elif dimension == DIMENSION_PURCHASES:
        values = table.column("out_degree")
    else:
        raise ValueError(f"unknown dimension: {dimension!r}")
    if bins < 1:
        raise ValueError("bins must be at least 1")
    support = values[values > 0]
    if support.size == 0:
        return np.empty(0), np.empty(0, dtype=np.int64)
    lo = float(support.min())
    hi = float(support.max())
    if lo == hi:
        return np.array([lo, hi]), np.array([support.size], dtype=np.int64)
    edges = np.logspace(np.log10(lo), np.log10(hi), bins + 1)
    edges[0] = lo  # pin endpoints so the bins cover the observed range exactly
    edges[-1] = hi
    counts, _ = np.histogram(support, edges)
    return edges, counts.astype(np.int64)


def figure5_data(profiles: list[UserProfile]) -> list[tuple[str, tuple[float, ...]]]:
    """Per-user (in-degree, authority, hub, out-degree) rows, max-normalized."""
    idx = [METRIC_NAMES.index(m) for m in FIGURE_MEASURES]
    return [(p.user_id, tuple(p.normalized[i] for i in idx)) for p in profiles]


def _volume_by(log: EventLog, attr: str) -> dict[str, Decimal]:
    unconverted = sum(1 for e in log.events if e.needs_conversion)
    if unconverted:
        raise ValueError(
            f"{unconverted} event(s) lack a USD price; apply convert_currency first"
        )
    totals: dict[str, Decimal] = {}
    for event in log.events:
        user = getattr(event, attr)
        totals[user] = totals.get(user, Decimal(0)) + event.price_usd
    return totals
