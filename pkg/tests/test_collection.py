"""
Tests for the collection strategies.

Per-round functions are checked on hand examples; the small networks
(chain, diamond) are iterated synchronously to their fixed points.
"""

import math

import pytest

from collection_sim.models.payload import ExportPayload, NeighborView, RoundContext
from collection_sim.services.collection import (
    get_step_function,
    inflow_sources,
    link_weight,
    normalized_shares,
    partition_neighbors,
    select_parent,
    step_multi_path,
    step_single_path,
    step_weighted,
)
from collection_sim.services.synchronous import iterate_synchronous

IDENTITY = ExportPayload(aggregate=0.0)


def view(device_id, potential, distance=1.0, payload=IDENTITY):
    return NeighborView(id=device_id, potential=potential, link_distance=distance, payload=payload)


def context(neighbors, own_id=0, own_potential=5.0, is_source=False, value=1.0, kind="sum", radius=10.0,
            flow="named"):
    return RoundContext(
        own_id=own_id,
        own_value=value,
        own_potential=own_potential,
        is_source=is_source,
        radius=radius,
        neighbors=neighbors,
        kind=kind,
        flow=flow,
    )


@pytest.fixture
def diamond():
    """x(P=10) linked to a(P=6) at 4 m and b(P=4) at 8 m, both linked to s(P=0)."""
    x, a, b, s = 0, 1, 2, 3
    adjacency = {
        x: [(a, 4.0), (b, 8.0)],
        a: [(x, 4.0), (s, 6.0)],
        b: [(x, 8.0), (s, 4.0)],
        s: [(a, 6.0), (b, 4.0)],
    }
    potentials = {x: 10.0, a: 6.0, b: 4.0, s: 0.0}
    return adjacency, potentials


class TestPartition:
    """Neighbour partition and parent choice."""

    def test_strict_inequalities(self):
        """Test that equal potentials fall in neither set."""
        a, b, c = view(1, 3.0), view(2, 7.0), view(3, 5.0)
        d_minus, d_plus = partition_neighbors(5.0, [a, b, c])
        assert d_minus == [a]
        assert d_plus == [b]

    def test_source_has_no_lower_neighbours(self):
        """Test the partition around potential zero."""
        d_minus, d_plus = partition_neighbors(0.0, [view(1, 2.0), view(2, 4.0)])
        assert d_minus == []
        assert len(d_plus) == 2

    def test_infinite_neighbour_goes_up(self):
        """Test that an unreachable neighbour counts as uphill."""
        d_minus, d_plus = partition_neighbors(5.0, [view(1, math.inf)])
        assert d_minus == []
        assert [v.id for v in d_plus] == [1]

    def test_unreachable_device_has_empty_sets(self):
        """Test partition of a device with infinite potential."""
        assert partition_neighbors(math.inf, [view(1, 3.0), view(2, math.inf)]) == ([], [])

    def test_select_parent(self):
        """Test parent choice by potential, then by id."""
        assert select_parent([view(1, 3.0), view(2, 6.0)]) == 1
        assert select_parent([view(2, 3.0), view(1, 3.0)]) == 1
        assert select_parent([]) is None


class TestLinkWeights:
    """Link weights and share normalization."""

    def test_weight_examples(self):
        """Test link weights on hand-computed values."""
        assert link_weight(10, 4, 10, 6) == 24
        assert link_weight(10, 10, 7, 1) == 0
        assert link_weight(10, 3, 5, 5) == 0

    def test_weight_rejects_out_of_range_distance(self):
        """Test link weight with a distance outside [0, R]."""
        with pytest.raises(ValueError):
            link_weight(10, 10.5, 3, 1)
        with pytest.raises(ValueError):
            link_weight(10, -1, 3, 1)

    def test_weight_symmetry(self, rng):
        """Test that link weights are symmetric in the two potentials."""
        samples = 100_000
        distances = rng.uniform(0, 10, samples)
        p1 = rng.uniform(0, 200, samples)
        p2 = rng.uniform(0, 200, samples)
        for d, a, b in zip(distances, p1, p2):
            assert link_weight(10.0, d, a, b) == link_weight(10.0, d, b, a)

    def test_shares_normalized(self):
        """Test that shares sum to one."""
        # weights a: (10 - 4) * 4 = 24, b: (10 - 6) * 4 = 16
        shares = normalized_shares(10.0, [view(1, 6.0, 4.0), view(2, 6.0, 6.0)], 10.0)
        assert shares[1] == pytest.approx(0.6)
        assert shares[2] == pytest.approx(0.4)

    def test_singleton_share(self):
        """Test the share of a single lower neighbour."""
        assert normalized_shares(10.0, [view(7, 2.0, 3.0)], 5.0) == {7: 1.0}

    def test_zero_weights_give_empty_map(self):
        """Test that all-zero weights export no shares."""
        assert normalized_shares(10.0, [view(1, 2.0, 10.0), view(2, 1.0, 10.0)], 5.0) == {}
        assert normalized_shares(10.0, [], 5.0) == {}


class TestStepFunctions:
    """Single round behaviour."""

    def test_isolated_device(self):
        """Test a round with no neighbours."""
        for step in (step_single_path, step_multi_path, step_weighted):
            payload = step(context([]))
            assert payload.aggregate == 1.0
            assert payload.parent is None
            assert payload.shares == {}
            assert payload.lower_count == 0

    def test_single_path_ignores_children_of_other_parents(self):
        """Test that single-path only takes from its own children."""
        uphill = view(5, 9.0, payload=ExportPayload(aggregate=4.0, parent=6, lower_set=frozenset({0, 6})))
        payload = step_single_path(context([uphill, view(6, 1.0)]))
        assert payload.aggregate == 1.0
        assert payload.parent == 6
        assert payload.lower_set == frozenset({6})

    def test_single_path_takes_whole_child_aggregate(self):
        """Test that single-path takes the full child aggregate."""
        child = view(5, 9.0, payload=ExportPayload(aggregate=4.0, parent=0, lower_set=frozenset({0})))
        assert step_single_path(context([child])).aggregate == 5.0

    def test_multi_path_splits_evenly(self):
        """Test the even multi-path split."""
        sender = view(5, 9.0, payload=ExportPayload(aggregate=3.0, lower_set=frozenset({0, 8, 9})))
        payload = step_multi_path(context([sender, view(8, 1.0)]))
        assert payload.aggregate == pytest.approx(2.0)
        assert payload.lower_count == 1

    def test_multi_path_requires_membership_in_sender_lower_set(self):
        """Test that named multi-path flow needs membership in the sender's lower set."""
        sender = view(5, 9.0, payload=ExportPayload(aggregate=3.0, lower_set=frozenset({8})))
        assert step_multi_path(context([sender])).aggregate == 1.0

    def test_multi_path_stranded_sender_contributes_nothing(self):
        """Test that a sender with an empty lower set is stranded."""
        sender = view(5, 9.0, payload=ExportPayload(aggregate=3.0))
        assert step_multi_path(context([sender])).aggregate == 1.0

    def test_weighted_uses_exported_share(self):
        """Test that weighted flow uses the exported share."""
        sender = view(5, 9.0, payload=ExportPayload(aggregate=3.0, shares={0: 0.25, 8: 0.75}, lower_set=frozenset({0, 8})))
        assert step_weighted(context([sender])).aggregate == pytest.approx(1.75)

    def test_weighted_empty_shares_contribute_nothing(self):
        """Test a sender exporting no shares."""
        sender = view(5, 9.0, payload=ExportPayload(aggregate=3.0, lower_set=frozenset({0})))
        assert step_weighted(context([sender])).aggregate == 1.0

    def test_no_inflow_from_equal_or_lower_potential(self):
        """Test that inflow never comes from level or downhill neighbours."""
        named = ExportPayload(aggregate=3.0, parent=0, shares={0: 1.0}, lower_set=frozenset({0}))
        neighbors = [view(5, 5.0, payload=named), view(6, 2.0, payload=named)]
        for step in (step_single_path, step_multi_path, step_weighted):
            assert step(context(neighbors)).aggregate == 1.0

    def test_source_never_forwards(self):
        """Test that the source keeps everything it collects."""
        # a lagging potential can leave lower neighbours around the source
        ctx = context([view(1, 0.5), view(2, 3.0)], own_potential=2.0, is_source=True)
        assert step_single_path(ctx).parent is None
        assert step_weighted(ctx).shares == {}
        assert step_multi_path(ctx).lower_count == 0

    def test_inflow_sources(self):
        """Test which senders a named-flow receiver takes from."""
        named = ExportPayload(aggregate=3.0, parent=0, shares={0: 1.0}, lower_set=frozenset({0}))
        other = ExportPayload(aggregate=3.0, parent=9, shares={9: 1.0}, lower_set=frozenset({9}))
        ctx = context([view(5, 9.0, payload=named), view(6, 9.0, payload=other)])
        for algorithm in ("sp", "mp", "wmp"):
            assert inflow_sources(ctx, algorithm) == [5]

    def test_unknown_algorithm(self):
        """Test lookup of an unknown algorithm."""
        with pytest.raises(ValueError, match="unknown algorithm"):
            get_step_function("flood")

    def test_context_rejects_bad_inputs(self):
        """Test round context validation."""
        with pytest.raises(ValueError):
            context([], radius=0)
        with pytest.raises(ValueError):
            context([], value=math.nan)
        with pytest.raises(ValueError, match="flow rule"):
            context([], flow="flood")


class TestClaimedFlow:
    """Receivers evaluating the sender's exported count and weight total."""

    def test_weighted_exports_weight_total(self):
        """Test that N is exported next to the normalized shares."""
        payload = step_weighted(context([view(1, 1.0, distance=4.0), view(2, 3.0, distance=8.0)]))
        assert payload.weight_total == pytest.approx(28.0)
        assert payload.shares == pytest.approx({1: 24 / 28, 2: 4 / 28})

    def test_multi_path_claims_without_being_named(self):
        """Test that any lower neighbour takes an even share."""
        sender = view(5, 9.0, payload=ExportPayload(aggregate=3.0, lower_set=frozenset({8})))
        assert step_multi_path(context([sender], flow="claimed")).aggregate == pytest.approx(4.0)

    def test_multi_path_stranded_sender_still_contributes_nothing(self):
        """Test that a sender with an empty lower set is never claimed from."""
        sender = view(5, 9.0, payload=ExportPayload(aggregate=3.0))
        assert step_multi_path(context([sender], flow="claimed")).aggregate == 1.0

    def test_weighted_recomputes_link_weight(self):
        """Test that the receiver divides its own link weight by the sender's N."""
        # w = (10 - 2) * |9 - 5| = 32
        sender = view(5, 9.0, distance=2.0, payload=ExportPayload(aggregate=3.0, weight_total=64.0))
        assert step_weighted(context([sender], flow="claimed")).aggregate == pytest.approx(2.5)

    def test_weighted_fraction_is_capped(self):
        """Test that a stale N never lets a receiver take more than the whole aggregate."""
        sender = view(5, 9.0, distance=2.0, payload=ExportPayload(aggregate=3.0, weight_total=16.0))
        assert step_weighted(context([sender], flow="claimed")).aggregate == pytest.approx(4.0)

    def test_weighted_zero_weight_contributes_nothing(self):
        """Test links at the range edge and senders without N."""
        at_edge = view(5, 9.0, distance=10.0, payload=ExportPayload(aggregate=3.0, weight_total=8.0))
        no_total = view(6, 9.0, distance=2.0, payload=ExportPayload(aggregate=3.0))
        ctx = context([at_edge, no_total], flow="claimed")
        assert step_weighted(ctx).aggregate == 1.0
        assert inflow_sources(ctx, "wmp") == []

    def test_inflow_sources(self):
        """Test which senders a claimed-flow receiver takes from."""
        other = ExportPayload(aggregate=3.0, parent=9, shares={9: 1.0}, lower_set=frozenset({9}), weight_total=4.0)
        ctx = context([view(5, 9.0, payload=other), view(6, 1.0, payload=other)], flow="claimed")
        assert inflow_sources(ctx, "sp") == []
        assert inflow_sources(ctx, "mp") == [5]
        assert inflow_sources(ctx, "wmp") == [5]


class TestFixedPoints:
    """Synchronous iteration on hand-checkable networks."""

    def test_single_path_chain(self):
        """Test the single-path fixed point on a chain."""
        s, a, b = 0, 1, 2
        adjacency = {s: [(a, 5.0)], a: [(s, 5.0), (b, 7.0)], b: [(a, 7.0)]}
        potentials = {s: 0.0, a: 5.0, b: 12.0}
        result = iterate_synchronous(adjacency, potentials, 10.0, s, "sp")

        assert result.converged_at is not None
        assert result.aggregate(b) == 1.0
        assert result.exports[b].parent == a
        assert result.aggregate(a) == 2.0
        assert result.exports[a].parent == s
        assert result.aggregate(s) == 3.0

    def test_multi_path_diamond(self, diamond):
        """Test the multi-path fixed point on the diamond."""
        adjacency, potentials = diamond
        result = iterate_synchronous(adjacency, potentials, 10.0, 3, "mp")
        assert result.aggregate(0) == 1.0
        assert result.aggregate(1) == pytest.approx(1.5)
        assert result.aggregate(2) == pytest.approx(1.5)
        assert result.aggregate(3) == pytest.approx(4.0)
        assert result.exports[0].lower_count == 2

    def test_weighted_diamond(self, diamond):
        """Test the weighted fixed point on the diamond."""
        adjacency, potentials = diamond
        result = iterate_synchronous(adjacency, potentials, 10.0, 3, "wmp")
        assert result.exports[0].shares == pytest.approx({1: 2 / 3, 2: 1 / 3})
        assert result.aggregate(1) == pytest.approx(5 / 3)
        assert result.aggregate(2) == pytest.approx(4 / 3)
        assert result.aggregate(3) == pytest.approx(4.0)

    @pytest.mark.parametrize("algorithm", ["sp", "mp", "wmp"])
    def test_min_kind_diamond(self, diamond, algorithm):
        """Test min aggregation on the diamond."""
        adjacency, potentials = diamond
        values = {0: 4.0, 1: 2.0, 2: 3.0, 3: 9.0}
        result = iterate_synchronous(adjacency, potentials, 10.0, 3, algorithm, values=values, kind="min")
        assert result.aggregate(3) == 2.0

    def test_source_history_tracks_rounds(self, diamond):
        """Test the per-round source history."""
        adjacency, potentials = diamond
        result = iterate_synchronous(adjacency, potentials, 10.0, 3, "sp")
        assert result.source_history[0] == 1.0
        assert result.source_history[-1] == 4.0
        assert result.rounds == len(result.source_history)

    def test_weighted_equals_multi_path_when_weights_are_equal(self, rng):
        """Test that equal weights reduce weighted flow to multi-path."""
        # layered networks: every device is 5 m from each device of the layer below
        for _ in range(30):
            sizes = [1] + [int(n) for n in rng.integers(1, 5, rng.integers(2, 6))]
            layers, next_id = [], 0
            for size in sizes:
                layers.append(list(range(next_id, next_id + size)))
                next_id += size
            adjacency = {device: [] for layer in layers for device in layer}
            potentials = {}
            for depth, layer in enumerate(layers):
                for device in layer:
                    potentials[device] = 5.0 * depth
                if depth:
                    for upper in layer:
                        for lower in layers[depth - 1]:
                            adjacency[upper].append((lower, 5.0))
                            adjacency[lower].append((upper, 5.0))

            mp = iterate_synchronous(adjacency, potentials, 10.0, 0, "mp")
            wmp = iterate_synchronous(adjacency, potentials, 10.0, 0, "wmp")
            for device in adjacency:
                assert wmp.aggregate(device) == pytest.approx(mp.aggregate(device), rel=1e-12)
            assert mp.aggregate(0) == pytest.approx(next_id, rel=1e-9)
