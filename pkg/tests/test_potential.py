"""
Tests for potential fields: the shortest-path oracle, the Bellman-Ford
round rule and the graph helpers.
"""

import math

import networkx as nx
import numpy as np
import pytest

from collection_sim.services.potential import (
    as_positions,
    bellman_ford_step,
    is_connected,
    link_graph,
    oracle_potential,
)
from collection_sim.services.synchronous import adjacency_from_positions


def _connected_positions(rng, count, length=40.0, width=10.0, radius=10.0):
    while True:
        positions = np.column_stack((rng.uniform(0, length, count), rng.uniform(0, width, count)))
        if is_connected(positions, radius):
            return positions


class TestOraclePotential:
    """Exact shortest-path potentials."""

    def test_line_routes_through_middle(self):
        """Test shortest paths along a line."""
        field = oracle_potential([(0, 0), (6, 0), (12, 0)], 10, 0)
        assert list(field.potentials) == [0.0, 6.0, 12.0]
        assert field.source == 0
        assert field[2] == 12.0

    def test_disconnected_device_is_unreachable(self):
        """Test the potential of a disconnected device."""
        field = oracle_potential([(0, 0), (50, 0)], 10, 0)
        assert field[0] == 0.0
        assert field[1] == math.inf

    def test_single_device(self):
        """Test a one-device deployment."""
        field = oracle_potential([(3, 4)], 10, 0)
        assert list(field.potentials) == [0.0]

    def test_co_located_devices_stay_linked(self):
        """Test that co-located devices stay linked."""
        field = oracle_potential([(1, 1), (1, 1)], 10, 0)
        assert math.isfinite(field[1])
        assert field[1] > 0

    def test_invalid_arguments(self):
        """Test oracle argument validation."""
        with pytest.raises(ValueError):
            oracle_potential([(0, 0)], 10, 3)
        with pytest.raises(ValueError):
            oracle_potential([(0, 0)], 0, 0)
        with pytest.raises(ValueError):
            as_positions([1, 2, 3])

    def test_matches_networkx_dijkstra(self, rng):
        """Test the oracle against networkx shortest paths."""
        for _ in range(20):
            positions = rng.uniform(0, 30, size=(25, 2))
            graph = nx.Graph()
            graph.add_nodes_from(range(len(positions)))
            for i, neighbors in adjacency_from_positions(positions, 10).items():
                for j, distance in neighbors:
                    graph.add_edge(i, j, weight=distance)
            expected = nx.single_source_dijkstra_path_length(graph, 0)

            field = oracle_potential(positions, 10, 0)
            for device in range(len(positions)):
                if device in expected:
                    assert field[device] == pytest.approx(expected[device], rel=1e-12)
                else:
                    assert field[device] == math.inf

    def test_triangle_property_on_links(self, rng):
        """Test that linked potentials differ by at most the link length."""
        positions = _connected_positions(rng, 40)
        field = oracle_potential(positions, 10, 0)
        for i, neighbors in adjacency_from_positions(positions, 10).items():
            for j, distance in neighbors:
                assert abs(field[i] - field[j]) <= distance + 1e-9

    def test_permutation_invariance(self, rng):
        """Test that relabelling devices permutes the field."""
        positions = rng.uniform(0, 40, size=(30, 2))
        field = oracle_potential(positions, 10, 5)
        order = rng.permutation(len(positions))
        permuted = oracle_potential(positions[order], 10, int(np.flatnonzero(order == 5)[0]))
        for new_index, old_index in enumerate(order):
            assert permuted[new_index] == pytest.approx(field[int(old_index)], rel=1e-12)


class TestBellmanFord:
    """Adaptive distance rule."""

    def test_source_clamps_to_zero(self):
        """Test the Bellman-Ford rule at the source."""
        assert bellman_ford_step(True, [(3.0, 2.0)]) == 0.0

    def test_min_rule(self):
        """Test the Bellman-Ford minimum rule."""
        assert bellman_ford_step(False, [(6.0, 6.0), (0.0, 12.0)]) == 12.0

    def test_isolated_device(self):
        """Test the Bellman-Ford rule with no neighbours."""
        assert bellman_ford_step(False, []) == math.inf

    def test_infinite_neighbours_ignored(self):
        """Test that unreachable neighbours are skipped."""
        assert bellman_ford_step(False, [(math.inf, 1.0), (4.0, 2.0)]) == 6.0

    def test_synchronous_iteration_reaches_oracle(self, rng):
        """Test that iterated Bellman-Ford reaches the oracle field."""
        for _ in range(10):
            positions = _connected_positions(rng, 30)
            adjacency = adjacency_from_positions(positions, 10)
            source = int(rng.integers(len(positions)))
            potentials = {device: math.inf for device in adjacency}

            # weighted shortest paths may use more hops than the hop diameter
            for _ in range(len(positions)):
                potentials = {
                    device: bellman_ford_step(
                        device == source,
                        [(potentials[other], distance) for other, distance in adjacency[device]],
                    )
                    for device in adjacency
                }

            field = oracle_potential(positions, 10, source)
            for device, potential in potentials.items():
                assert potential == pytest.approx(field[device], rel=1e-12)


class TestGraphHelpers:
    """Link graph and connectivity."""

    def test_link_graph_stores_each_link_once(self):
        """Test that each link is stored once."""
        graph = link_graph([(0, 0), (6, 0), (12, 0)], 10)
        assert graph.nnz == 2
        assert sorted(graph.data) == [6.0, 6.0]

    def test_is_connected(self):
        """Test connectivity checks."""
        assert is_connected([(0, 0), (6, 0), (12, 0)], 10)
        assert not is_connected([(0, 0), (50, 0)], 10)
        assert is_connected([(0, 0)], 10)
