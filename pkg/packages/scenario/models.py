"""Data models for localization scenarios and estimation reports."""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from packages.graphcore.graph import Graph

Point = tuple[float, ...]


@dataclass(frozen=True)
class RangeMeasurement:
    """Noisy distance r between sensors i < j with noise variance var."""

    i: int
    j: int
    r: float
    var: float


@dataclass(frozen=True)
class AnchorMeasurement:
    """Noisy distance y between sensor i and anchor j with noise variance var."""

    i: int
    j: int
    y: float
    var: float


@dataclass(frozen=True)
class NetworkScenario:
    """
    Sensor network instance: anchors, optional ground truth and measurements.

    Positions are stored as tuples so that scenarios compare by value.
    true_sensor_positions is None for ingested data without ground truth.
    """

    dim: int
    anchor_positions: tuple[Point, ...]
    r_c: float
    seed: int
    true_sensor_positions: Optional[tuple[Point, ...]] = None
    range_measurements: tuple[RangeMeasurement, ...] = field(default_factory=tuple)
    anchor_measurements: tuple[AnchorMeasurement, ...] = field(default_factory=tuple)

    @property
    def n_sensors(self) -> int:
        if self.true_sensor_positions is not None:
            return len(self.true_sensor_positions)
        ids = [m.j for m in self.range_measurements] + [m.i for m in self.anchor_measurements]
        return max(ids, default=-1) + 1

    @property
    def n_anchors(self) -> int:
        return len(self.anchor_positions)

    @property
    def has_truth(self) -> bool:
        return self.true_sensor_positions is not None

    def truth_array(self) -> np.ndarray:
        if self.true_sensor_positions is None:
            raise ValueError("scenario has no true sensor positions")
        return np.asarray(self.true_sensor_positions, dtype=float).reshape(-1, self.dim)

    def anchor_array(self) -> np.ndarray:
        return np.asarray(self.anchor_positions, dtype=float).reshape(-1, self.dim)

    def with_measurements(
        self,
        range_measurements: tuple[RangeMeasurement, ...],
        anchor_measurements: tuple[AnchorMeasurement, ...],
    ) -> "NetworkScenario":
        return replace(
            self,
            range_measurements=tuple(range_measurements),
            anchor_measurements=tuple(anchor_measurements),
        )


@dataclass
class EstimateReport:
    """Outcome of one localization run."""

    estimated_positions: np.ndarray
    rmse: Optional[float]
    iterations: int
    per_agent_communications: Optional[int]
    wall_time: float


def measurement_graph(scn: NetworkScenario) -> tuple[Graph, list[list[int]]]:
    """
    Rebuild the inter-sensor graph and anchor adjacency from the measurement lists.

    Returns:
        Tuple of (graph over sensors, sorted anchor ids per sensor)
    """
    n = scn.n_sensors
    graph = Graph(n, frozenset((m.i, m.j) for m in scn.range_measurements))
    anchors: list[list[int]] = [[] for _ in range(n)]
    for m in scn.anchor_measurements:
        anchors[m.i].append(m.j)
    return graph, [sorted(a) for a in anchors]
