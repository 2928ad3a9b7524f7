"""Collector-artist directed network built from a validated event log.

Every sale draws an endorsement edge from the buyer (collector) to the
original creator of the artwork (artist), weighted by the USD price; repeat
purchases between the same pair aggregate into one edge with a summed total
and a sale count. Buy-backs (a creator repurchasing their own piece) would
form self-loops and are dropped with an audit count.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from decimal import Decimal
from enum import Enum
from typing import Mapping

import numpy as np
from scipy import sparse

from .ingest import EventLog

logger = logging.getLogger(__name__)


class Weighting(str, Enum):
    """Adjacency weighting schemes."""

    WEIGHTED_USD = "weighted_usd"
    UNWEIGHTED_BINARY = "unweighted_binary"
    # sale-count entries; opt-in variant, not the default unweighted view
    UNWEIGHTED_MULTIPLICITY = "unweighted_multiplicity"


@dataclass(frozen=True)
class RoleFlags:
    """Activity flags for one user: created, sold, or bought at least once."""

    minted: bool = False
    sold: bool = False
    bought: bool = False


@dataclass
class EdgeData:
    """Aggregated collector-to-artist endorsement: total USD and sale count."""

    total_usd: Decimal = Decimal(0)
    sale_count: int = 0


@dataclass(frozen=True)
class CollectorArtistNetwork:
    """Directed endorsement network over the active users of a marketplace.

    Nodes are every user that minted, sold, or bought at least once; indices
    follow first appearance in the event log. Exported results always key by
    the opaque user id, never by index.
    """

    users: tuple[str, ...]
    index: Mapping[str, int]
    roles: Mapping[str, RoleFlags]
    edges: Mapping[tuple[int, int], EdgeData]
    dropped_buybacks: int = 0
    dropped_usd: Decimal = Decimal(0)

    @property
    def node_count(self) -> int:
        return len(self.users)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def total_volume_usd(self) -> Decimal:
        return sum((e.total_usd for e in self.edges.values()), Decimal(0))

    @property
    def total_sale_count(self) -> int:
        return sum(e.sale_count for e in self.edges.values())

    def edges_by_id(self) -> dict[tuple[str, str], tuple[Decimal, int]]:
        """Edge data keyed by (collector id, artist id), for comparisons and export."""
        return {
            (self.users[c], self.users[a]): (data.total_usd, data.sale_count)
            for (c, a), data in self.edges.items()
        }


@dataclass(frozen=True)
class AdjacencyView:
    """A sparse n-by-n non-negative matrix over the network nodes.

    Entry (i, j) carries the weight of the edge collector i -> artist j under
    the selected weighting. The diagonal is structurally zero.
    """

    weighting: Weighting
    matrix: sparse.csr_matrix


def active_users(log: EventLog) -> dict[str, RoleFlags]:
    """Users that made at least one sale, purchase, or mint, with role flags.

    Ordered by first appearance in the log (seller, buyer, then creator
    within one event).
    """
    flags: dict[str, list[bool]] = {}

    def touch(user: str, slot: int) -> None:
        entry = flags.setdefault(user, [False, False, False])
        entry[slot] = True

    for event in log.events:
        touch(event.seller_id, 1)
        touch(event.buyer_id, 2)
        touch(event.creator_id, 0)
    return {
        user: RoleFlags(minted=m, sold=s, bought=b) for user, (m, s, b) in flags.items()
    }


def build_network(log: EventLog) -> CollectorArtistNetwork:
    """Fold the event log into the aggregated collector-artist network.

    Requires USD prices on every event (run currency conversion first).
    Buy-back events (buyer equals creator) are dropped and counted; they
    would violate the zero-diagonal structure of the endorsement matrix.
    """
    unconverted = sum(1 for e in log.events if e.needs_conversion)
    if unconverted:
        raise ValueError(
            f"{unconverted} event(s) lack a USD price; apply convert_currency first"
        )

    roles = active_users(log)
    users = tuple(roles)
    index = {user: i for i, user in enumerate(users)}

    edges: dict[tuple[int, int], EdgeData] = {}
    dropped = 0
    dropped_usd = Decimal(0)
    for event in log.events:
        if event.buyer_id == event.creator_id:
            dropped += 1
            dropped_usd += event.price_usd
            continue
        key = (index[event.buyer_id], index[event.creator_id])
        data = edges.setdefault(key, EdgeData())
        data.total_usd += event.price_usd
        data.sale_count += 1
    if dropped:
        logger.warning(
            "dropped %d buy-back event(s) (buyer equals creator), %s USD total",
            dropped,
            dropped_usd,
        )
    return CollectorArtistNetwork(
        users=users,
        index=index,
        roles=roles,
        edges=edges,
        dropped_buybacks=dropped,
        dropped_usd=dropped_usd,
    )


def adjacency(net: CollectorArtistNetwork, weighting: Weighting) -> AdjacencyView:
    """Materialize the sparse adjacency matrix under the given weighting."""
    weighting = Weighting(weighting)
    n = net.node_count
    rows = np.empty(net.edge_count, dtype=np.int64)
    cols = np.empty(net.edge_count, dtype=np.int64)
    vals = np.empty(net.edge_count, dtype=np.float64)
    for k, ((collector, artist), data) in enumerate(net.edges.items()):
        if collector == artist:
            raise ValueError("self-loop edge found; network invariant violated")
        rows[k] = collector
        cols[k] = artist
        if weighting is Weighting.WEIGHTED_USD:
            vals[k] = float(data.total_usd)
        elif weighting is Weighting.UNWEIGHTED_BINARY:
            vals[k] = 1.0
        else:
            vals[k] = float(data.sale_count)
    matrix = sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    return AdjacencyView(weighting=weighting, matrix=matrix)
