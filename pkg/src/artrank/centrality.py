"""Authority/hub scoring by power iteration, plus degree and strength measures.

Authority and hub vectors are the mutual fixed point of

    x <- A^T y      (authority: endorsed by strong hubs)
    y <- A x        (hub: endorses strong authorities)

with unit-L2 normalization after each half step, started from the uniform
positive vector. The proportionality constants of the recursion are absorbed
by the normalization, which makes the authority limit the dominant
eigenvector of A^T A and the hub limit that of A A^T.

Row sums inside the iteration accumulate their summands in value order, so
results are bitwise invariant under node relabeling and under permutations
of the input events.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal

import numpy as np
from scipy import sparse

from .graph import AdjacencyView, CollectorArtistNetwork

DEFAULT_TOLERANCE = 1e-10
DEFAULT_MAX_ITERATIONS = 1000


@dataclass(frozen=True)
class HitsConfig:
    """Convergence settings: L1-change threshold over (authority, hub)."""

    tolerance: float = DEFAULT_TOLERANCE
    max_iterations: int = DEFAULT_MAX_ITERATIONS

    def __post_init__(self) -> None:
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


@dataclass(frozen=True)
class HitsScores:
    """Per-node authority and hub values plus convergence metadata.

    Both vectors are non-negative with unit L2 norm whenever nonzero; nodes
    without incident edges score 0 in both. ``empty`` marks the degenerate
    all-zero result for a network with no (positive-weight) edges.
    """

    authority: np.ndarray
    hub: np.ndarray
    iterations_used: int
    converged: bool
    residual: float
    empty: bool = False


@dataclass(frozen=True)
class DegreeMetrics:
    """Count and USD-strength measures per node.

    Degrees count sale multiplicity (number of artworks sold or bought),
    strengths sum exact USD totals; both attribute secondary sales to the
    original creator, matching the endorsement edges.
    """

    users: tuple[str, ...]
    in_degree: np.ndarray
    out_degree: np.ndarray
    in_strength: tuple[Decimal, ...]
    out_strength: tuple[Decimal, ...]


def hits(view: AdjacencyView, cfg: HitsConfig | None = None) -> HitsScores:
    """Power-iterate authority and hub scores on an adjacency view.

    The matrix must be square, non-negative, with a zero diagonal. A view
    with no positive entries yields all-zero vectors flagged ``empty``. If
    the tolerance is not met within ``max_iterations`` the last iterates are
    returned with ``converged=False``.
    """
    if cfg is None:
        cfg = HitsConfig()
    matrix = view.matrix.tocsr()
    n_rows, n_cols = matrix.shape
    if n_rows != n_cols:
        raise ValueError("adjacency matrix must be square")
    n = n_rows
    if matrix.nnz and matrix.data.min() < 0:
        raise ValueError("adjacency weights must be non-negative")
    if np.any(matrix.diagonal() != 0):
        raise ValueError("adjacency diagonal must be zero")
    if n == 0 or matrix.nnz == 0 or matrix.data.max() == 0.0:
        zero = np.zeros(n)
        return HitsScores(
            authority=zero,
            hub=zero.copy(),
            iterations_used=0,
            converged=True,
            residual=0.0,
            empty=True,
        )

    # Rankings are scale-free; rescaling by the largest weight keeps the
    # iteration numerically identical (to rounding) across weight scalings.
    scaled = matrix.astype(np.float64, copy=True)
    scaled.data = scaled.data / scaled.data.max()
    forward = _RowSums(scaled)           # y = A x
    backward = _RowSums(scaled.T.tocsr())  # x = A^T y

    x = np.full(n, 1.0 / math.sqrt(n))
    y = x.copy()
    iterations = 0
    residual = math.inf
    converged = False
    for iterations in range(1, cfg.max_iterations + 1):
        x_new = _unit(backward(y))
        y_new = _unit(forward(x_new))
        residual = _ordered_sum(np.abs(x_new - x)) + _ordered_sum(np.abs(y_new - y))
        x, y = x_new, y_new
        if residual <= cfg.tolerance:
            converged = True
            break
    return HitsScores(
        authority=x,
        hub=y,
        iterations_used=iterations,
        converged=converged,
        residual=float(residual),
    )


def degree_metrics(net: CollectorArtistNetwork) -> DegreeMetrics:
    """Tally in/out degree (sale counts) and in/out strength (USD) per node."""
    n = net.node_count
    in_degree = np.zeros(n, dtype=np.int64)
    out_degree = np.zeros(n, dtype=np.int64)
    in_strength = [Decimal(0)] * n
    out_strength = [Decimal(0)] * n
    for (collector, artist), data in net.edges.items():
        out_degree[collector] += data.sale_count
        in_degree[artist] += data.sale_count
        out_strength[collector] += data.total_usd
        in_strength[artist] += data.total_usd
    return DegreeMetrics(
        users=net.users,
        in_degree=in_degree,
        out_degree=out_degree,
        in_strength=tuple(in_strength),
        out_strength=tuple(out_strength),
    )


def trader_score(scores: HitsScores) -> np.ndarray:
    """Element-wise authority times hub; high for users prominent in both roles."""
    if scores.authority.shape != scores.hub.shape:
        raise ValueError("authority and hub vectors must have equal length")
    return scores.authority * scores.hub


# ---------------------------------------------------------------------------
# Iteration internals
# ---------------------------------------------------------------------------


class _RowSums:
    """Sparse matrix-vector product with value-ordered accumulation per row."""

    def __init__(self, matrix: sparse.csr_matrix):
        self.n = matrix.shape[0]
        self.data = matrix.data
        self.cols = matrix.indices
        self.rows = np.repeat(
            np.arange(self.n, dtype=np.int64), np.diff(matrix.indptr)
        )

    def __call__(self, x: np.ndarray) -> np.ndarray:
        prod = self.data * x[self.cols]
        order = np.lexsort((prod, self.rows))
        return np.bincount(self.rows[order], weights=prod[order], minlength=self.n)


def _ordered_sum(values: np.ndarray) -> float:
    # summing in sorted order makes the total independent of element order
    return float(np.sum(np.sort(values)))


def _unit(v: np.ndarray) -> np.ndarray:
    norm = math.sqrt(_ordered_sum(v * v))
    if norm == 0.0:
        return v
    return v / norm
