"""User typology: percentile levels, A/B/C codes, role quadrants, normalization.

Each user carries 8 metrics (authority, weighted authority, in-strength,
in-degree, hub, weighted hub, out-strength, out-degree). Per metric, users
are split into levels by empirical percentile: C for [0, 0.5], B for
(0.5, 0.9], A for (0.9, 1]. The four artist-side levels form the artist
code (in-degree, in-strength, authority, weighted authority, in that
order), the collector-side levels the collector code; codes support
wildcard pattern queries such as ``AC**``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .centrality import DegreeMetrics, HitsScores
from .graph import CollectorArtistNetwork

METRIC_NAMES = (
    "authority",
    "w_authority",
    "in_strength",
    "in_degree",
    "hub",
    "w_hub",
    "out_strength",
    "out_degree",
)

ARTIST_CODE_METRICS = ("in_degree", "in_strength", "authority", "w_authority")
COLLECTOR_CODE_METRICS = ("out_degree", "out_strength", "hub", "w_hub")

LEVEL_SYMBOLS = ("A", "B", "C")
WILDCARD = "*"

TIE_RANK_MAX = "max"  # ties share the highest rank of their group (default)
TIE_RANK_MIN = "min"  # ties share the lowest rank; keeps zero-heavy columns low


class Role(str, Enum):
    """Quadrants of the sale/purchase count plane."""

    BY_STANDER = "by_stander"
    PURE_SELLER = "pure_seller"
    PURE_BUYER = "pure_buyer"
    TRADER = "trader"


@dataclass(frozen=True)
class MetricsTable:
    """The 8-metric vector per user, columns in ``METRIC_NAMES`` order."""

    users: tuple[str, ...]
    values: np.ndarray  # shape (n_users, 8), non-negative floats

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.users), len(METRIC_NAMES)):
            raise ValueError("values must be (n_users, 8)")
        if self.values.size and np.min(self.values) < 0:
            raise ValueError("metric values must be non-negative")

    def column(self, name: str) -> np.ndarray:
        return self.values[:, METRIC_NAMES.index(name)]


@dataclass(frozen=True)
class UserProfile:
    """Role label, both level codes, max-normalized metrics, trader score."""

    user_id: str
    role: Role
    artist_code: str
    collector_code: str
    normalized: tuple[float, ...]  # 8 values in METRIC_NAMES order, each in [0, 1]
    trader_score: float


def build_metrics_table(
    net: CollectorArtistNetwork,
    degrees: DegreeMetrics,
    unweighted: HitsScores,
    weighted: HitsScores,
) -> MetricsTable:
    """Assemble the per-user metric matrix from network-level results."""
    n = net.node_count
    for scores in (unweighted, weighted):
        if scores.authority.shape != (n,):
            raise ValueError("score vectors must match the network node count")
    values = np.column_stack(
        [
            unweighted.authority,
            weighted.authority,
            np.array([float(s) for s in degrees.in_strength]),
            degrees.in_degree.astype(np.float64),
            unweighted.hub,
            weighted.hub,
            np.array([float(s) for s in degrees.out_strength]),
            degrees.out_degree.astype(np.float64),
        ]
    )
    return MetricsTable(users=net.users, values=values)


def percentiles(scores, tie_rank: str = TIE_RANK_MAX) -> np.ndarray:
    """Empirical percentile of each score within the vector.

    ``max``: fraction of scores less than or equal (ties pushed up, default).
    ``min``: lowest rank of the tie group over n.
    """
    v = np.asarray(scores, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("scores must be a non-empty 1-d vector")
    ordered = np.sort(v)
    if tie_rank == TIE_RANK_MAX:
        ranks = np.searchsorted(ordered, v, side="right")
    elif tie_rank == TIE_RANK_MIN:
        ranks = np.searchsorted(ordered, v, side="left") + 1
    else:
        raise ValueError(f"unknown tie_rank: {tie_rank!r}")
    return ranks / v.size


def percentile_levels(scores, tie_rank: str = TIE_RANK_MAX) -> list[str]:
    """A/B/C level per score: C for percentile <= 0.5, B <= 0.9, A above."""
    return [_level(p) for p in percentiles(scores, tie_rank)]


def role_codes(table: MetricsTable, tie_rank: str = TIE_RANK_MAX) -> tuple[list[str], list[str]]:
    """Per-user artist and collector 4-letter codes, aligned to table order."""
    if not table.users:
        raise ValueError("metrics table is empty")
    artist = _codes(table, ARTIST_CODE_METRICS, tie_rank)
    collector = _codes(table, COLLECTOR_CODE_METRICS, tie_rank)
    return artist, collector


def classify_role(table: MetricsTable, percentile_threshold: float = 0.95) -> list[Role]:
    """Quadrant role per user from the sale (in-degree) and buy (out-degree) counts.

    A user is high on a dimension when its count lies strictly above the
    empirical ``percentile_threshold`` quantile of that dimension, i.e. past
    the percentile line of the count-count scatter. Rank-based, so any
    strictly increasing rescaling of a column leaves the labels unchanged.
    """
    if not 0 < percentile_threshold < 1:
        raise ValueError("percentile_threshold must be in (0, 1)")
    sell = table.column("in_degree")
    buy = table.column("out_degree")
    high_sell = sell > _quantile(sell, percentile_threshold)
    high_buy = buy > _quantile(buy, percentile_threshold)
    roles = []
    for s, b in zip(high_sell, high_buy):
        if s and b:
            roles.append(Role.TRADER)
        elif s:
            roles.append(Role.PURE_SELLER)
        elif b:
            roles.append(Role.PURE_BUYER)
        else:
            roles.append(Role.BY_STANDER)
    return roles


def normalize_metrics(table: MetricsTable) -> np.ndarray:
    """Divide each column by its maximum; an all-zero column stays all zero."""
    maxima = table.values.max(axis=0) if table.values.size else np.zeros(len(METRIC_NAMES))
    safe = np.where(maxima > 0, maxima, 1.0)
    return table.values / safe


def build_profiles(
    table: MetricsTable,
    percentile_threshold: float = 0.95,
    tie_rank: str = TIE_RANK_MAX,
) -> list[UserProfile]:
    """Full per-user profiles: role, codes, normalized vector, trader score.

    The trader score is the product of the unweighted authority and hub
    columns.
    """
    artist_codes, collector_codes = role_codes(table, tie_rank)
    roles = classify_role(table, percentile_threshold)
    normalized = normalize_metrics(table)
    trader = table.column("authority") * table.column("hub")
    return [
        UserProfile(
            user_id=user,
            role=roles[i],
            artist_code=artist_codes[i],
            collector_code=collector_codes[i],
            normalized=tuple(float(x) for x in normalized[i]),
            trader_score=float(trader[i]),
        )
        for i, user in enumerate(table.users)
    ]


def match_code(
    profiles: Iterable[UserProfile],
    pattern: str,
    which: str = "artist",
) -> list[str]:
    """Users whose stored code matches the pattern position-wise.

    ``which`` selects the artist code, the collector code, or the 8-symbol
    concatenation (``full``). ``*`` matches any level; stored codes never
    contain wildcards.
    """
    expected = {"artist": 4, "collector": 4, "full": 8}.get(which)
    if expected is None:
        raise ValueError(f"unknown code selector: {which!r}")
    if len(pattern) != expected or any(
        c not in LEVEL_SYMBOLS and c != WILDCARD for c in pattern
    ):
        raise ValueError(f"malformed pattern: {pattern!r}")
    matched = []
    for profile in profiles:
        if which == "artist":
            code = profile.artist_code
        elif which == "collector":
            code = profile.collector_code
        else:
            code = profile.artist_code + profile.collector_code
        if all(p == WILDCARD or p == c for p, c in zip(pattern, code)):
            matched.append(profile.user_id)
    return matched


def _level(percentile: float) -> str:
    if percentile > 0.9:
        return "A"
    if percentile > 0.5:
        return "B"
    return "C"


def _codes(table: MetricsTable, metrics: Sequence[str], tie_rank: str) -> list[str]:
    level_columns = [percentile_levels(table.column(m), tie_rank) for m in metrics]
    return ["".join(levels) for levels in zip(*level_columns)]


def _quantile(values: np.ndarray, q: float) -> float:
    """Smallest sample value whose empirical CDF reaches q."""
    ordered = np.sort(values)
    k = max(1, math.ceil(q * values.size - 1e-9))
    return float(ordered[k - 1])
