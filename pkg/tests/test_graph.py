"""Network construction, role flags, and adjacency views."""

from decimal import Decimal

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artrank import (
    RoleFlags,
    Weighting,
    active_users,
    adjacency,
    build_network,
)
from helpers import ev, log_of


def test_active_users_empty_log():
    assert active_users(log_of()) == {}


def test_active_users_primary_sale():
    log = log_of(ev("s", "b", "s", usd=10))
    assert active_users(log) == {
        "s": RoleFlags(minted=True, sold=True, bought=False),
        "b": RoleFlags(minted=False, sold=False, bought=True),
    }


def test_active_users_secondary_sale():
    # hand enumeration: seller sold, buyer bought, creator minted only
    log = log_of(ev("s", "b", "c", usd=10))
    assert active_users(log) == {
        "s": RoleFlags(minted=False, sold=True, bought=False),
        "b": RoleFlags(minted=False, sold=False, bought=True),
        "c": RoleFlags(minted=True, sold=False, bought=False),
    }


def test_repeat_purchases_aggregate_one_edge():
    log = log_of(ev("a", "b", "a", usd=100, ts=0), ev("a", "b", "a", usd=50, ts=1))
    net = build_network(log)
    assert net.edges_by_id() == {("b", "a"): (Decimal(150), 2)}


def test_secondary_sale_links_buyer_to_creator():
    net = build_network(log_of(ev("s", "b", "a", usd=75)))
    assert set(net.edges_by_id()) == {("b", "a")}
    # the transacting seller got no endorsement edge
    assert all(pair[1] != "s" for pair in net.edges_by_id())


def test_buyback_dropped_with_audit():
    # collector a repurchases their own creation from s: would self-loop
    log = log_of(ev("s", "a", "a", usd=40, ts=0), ev("a", "b", "a", usd=10, ts=1))
    net = build_network(log)
    assert net.dropped_buybacks == 1
    assert net.dropped_usd == Decimal(40)
    assert net.edges_by_id() == {("b", "a"): (Decimal(10), 1)}
    view = adjacency(net, Weighting.WEIGHTED_USD)
    assert not view.matrix.diagonal().any()


def test_volume_and_count_conservation():
    log = log_of(
        ev("a", "b", "a", usd=100, ts=0),
        ev("a", "c", "a", usd=50, ts=1),
        ev("c", "a", "a", usd=30, ts=2),  # buy-back, dropped
        ev("b", "c", "a", usd=20, ts=3),
    )
    net = build_network(log)
    event_usd = sum(e.price_usd for e in log.events)
    assert net.total_volume_usd == event_usd - net.dropped_usd
    assert net.total_sale_count + net.dropped_buybacks == len(log.events)


def test_isolated_minted_only_user_is_a_node():
    net = build_network(log_of(ev("s", "b", "c", usd=10)))
    assert "c" in net.users
    view = adjacency(net, Weighting.WEIGHTED_USD)
    i = net.index["c"]
    assert view.matrix[i].sum() == 0  # no outgoing weight


def test_unconverted_events_rejected():
    log = log_of(ev("a", "b", "a", eth=1))
    with pytest.raises(ValueError, match="convert_currency"):
        build_network(log)


def test_adjacency_views():
    log = log_of(
        ev("a1", "c1", "a1", usd=100, ts=0),
        ev("a1", "c1", "a1", usd=50, ts=1),
        ev("a2", "c2", "a2", usd=7, ts=2),
    )
    net = build_network(log)
    weighted = adjacency(net, Weighting.WEIGHTED_USD).matrix
    binary = adjacency(net, Weighting.UNWEIGHTED_BINARY).matrix
    multi = adjacency(net, Weighting.UNWEIGHTED_MULTIPLICITY).matrix
    c1, a1 = net.index["c1"], net.index["a1"]
    c2, a2 = net.index["c2"], net.index["a2"]
    assert weighted[c1, a1] == 150.0 and weighted[c2, a2] == 7.0
    assert binary[c1, a1] == 1.0 and binary[c2, a2] == 1.0
    assert multi[c1, a1] == 2.0 and multi[c2, a2] == 1.0
    assert weighted.nnz == 2


def test_adjacency_matches_dense_hand_matrix():
    # 3 nodes, 2 edges: b->a (150 over 2 sales), c->a (20)
    log = log_of(
        ev("a", "b", "a", usd=100, ts=0),
        ev("a", "b", "a", usd=50, ts=1),
        ev("a", "c", "a", usd=20, ts=2),
    )
    net = build_network(log)
    dense = np.zeros((3, 3))
    dense[net.index["b"], net.index["a"]] = 150.0
    dense[net.index["c"], net.index["a"]] = 20.0
    view = adjacency(net, Weighting.WEIGHTED_USD)
    np.testing.assert_array_equal(view.matrix.toarray(), dense)


def test_empty_network_adjacency_is_all_zero():
    net = build_network(log_of())
    view = adjacency(net, Weighting.WEIGHTED_USD)
    assert view.matrix.shape == (0, 0)
    assert view.matrix.nnz == 0


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(5)))
def test_build_network_order_insensitive(order):
    events = [
        ev("a", "b", "a", usd=100, ts=0),
        ev("a", "c", "a", usd=50, ts=1),
        ev("b", "c", "a", usd=25, ts=2),
        ev("x", "y", "x", usd=5, ts=3),
        ev("x", "b", "x", usd=8, ts=4),
    ]
    base = build_network(log_of(*events))
    # permute arrival order; from_events re-sorts, so permute timestamps too
    shuffled = [
        ev(e.seller_id, e.buyer_id, e.creator_id, usd=e.price_usd, ts=i)
        for i, e in enumerate(events[k] for k in order)
    ]
    permuted = build_network(log_of(*shuffled))
    assert permuted.edges_by_id() == base.edges_by_id()
    assert permuted.roles == base.roles
    assert set(permuted.users) == set(base.users)
