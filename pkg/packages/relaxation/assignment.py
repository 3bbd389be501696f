"""Assignment of range measurements to clique-tree agents."""

import logging
from dataclasses import dataclass

from packages.graphcore.clique_tree import CliqueTree
from packages.scenario.models import NetworkScenario, measurement_graph

logger = logging.getLogger("treeloc.relaxation.assignment")


class RelaxationError(Exception):
    """Raised when the decomposed relaxation cannot be built or read."""


@dataclass(frozen=True)
class Assignment:
    """
    phi[k] holds the inter-sensor pairs (i, j), i < j, whose cost and
    constraints agent k owns; phi_bar[k] holds the sensors whose anchor
    measurements agent k owns.
    """

    phi: tuple[frozenset[tuple[int, int]], ...]
    phi_bar: tuple[frozenset[int], ...]

    def owner_of_range(self, i: int, j: int) -> int:
        pair = (min(i, j), max(i, j))
        for k, pairs in enumerate(self.phi):
            if pair in pairs:
                return k
        raise KeyError(pair)

    def owner_of_sensor(self, i: int) -> int:
        for k, sensors in enumerate(self.phi_bar):
            if i in sensors:
                return k
        raise KeyError(i)


def assign_measurements(tree: CliqueTree, scn: NetworkScenario) -> Assignment:
    """
    Give every measurement to the first agent whose clique can hold it.

    Agents are scanned in ascending index, sensors of each clique in ascending
    id, neighbors in ascending id. An inter-sensor pair (i, j) goes to the
    first clique containing both ends; all anchor measurements of sensor i go
    to the first clique containing i.

    Raises:
        RelaxationError: If a measurement is not covered by any clique
    """
    graph, anchor_adjacency = measurement_graph(scn)
    adj = graph.adjacency()
    q = tree.size
    phi: list[set[tuple[int, int]]] = [set() for _ in range(q)]
    phi_bar: list[set[int]] = [set() for _ in range(q)]
    assigned_pairs: set[tuple[int, int]] = set()
    assigned_sensors: set[int] = set()

    for k, clique in enumerate(tree.cliques):
        members = clique.as_set()
        for i in clique.members:
            for j in sorted(adj[i]):
                if i < j and j in members and (i, j) not in assigned_pairs:
                    phi[k].add((i, j))
                    assigned_pairs.add((i, j))
            if anchor_adjacency[i] and i not in assigned_sensors:
                phi_bar[k].add(i)
                assigned_sensors.add(i)

    missing_pairs = graph.edges - assigned_pairs
    missing_sensors = {i for i, a in enumerate(anchor_adjacency) if a} - assigned_sensors
    if missing_pairs or missing_sensors:
        raise RelaxationError(
            f"measurements not covered by any clique: pairs {sorted(missing_pairs)}, "
            f"anchor sensors {sorted(missing_sensors)}"
        )

    logger.debug(
        "assignment sizes "
        + ", ".join(f"{k}:{len(phi[k])}/{len(phi_bar[k])}" for k in range(q))
    )
    return Assignment(
        phi=tuple(frozenset(p) for p in phi),
        phi_bar=tuple(frozenset(s) for s in phi_bar),
    )
