"""Random scenario generation and measurement synthesis.

Random numbers come from numpy's default generator (PCG64). Positions use child
streams of a SeedSequence rooted at the scenario seed, noise uses the seed
itself. Scenarios are reproducible from their parameters, but other
implementations should share measurement files rather than RNG streams.
"""

import itertools
import logging
from typing import Optional, Sequence

import networkx as nx
import numpy as np

from packages.graphcore.graph import build_measurement_graph
from packages.scenario.models import AnchorMeasurement, NetworkScenario, RangeMeasurement
from packages.scenario.validation import ScenarioGenerationError, ValidationError

logger = logging.getLogger("treeloc.scenario.generator")

MAX_SEED_RETRIES = 1000
STOCK_NOISE_LEVELS = (0.01, 0.05, 0.1, 0.3)


def anchor_grid(n_anchors: int, area: Sequence[float]) -> np.ndarray:
    """
    Deterministic anchor layout: centers of a k x ... x k grid, first n_anchors points.

    k is the smallest integer with k**d >= n_anchors.
    """
    dim = len(area)
    k = 1
    while k**dim < n_anchors:
        k += 1
    side = np.asarray(area, dtype=float) / k
    cells = itertools.islice(itertools.product(range(k), repeat=dim), n_anchors)
    return np.array([(np.asarray(cell) + 0.5) * side for cell in cells]).reshape(-1, dim)


def validate_generation(
    n_sensors: int, n_anchors: int, area: Sequence[float], r_c: float
) -> dict[str, str]:
    """Validate generation parameters; raises ValidationError listing every bad field."""
    errors = {}
    if not isinstance(n_sensors, int) or n_sensors < 1:
        errors["sensors"] = "Number of sensors must be a positive integer"
    if not isinstance(n_anchors, int) or n_anchors < 1:
        errors["anchors"] = "Number of anchors must be a positive integer"
    if len(area) not in (2, 3) or any(not side > 0 for side in area):
        errors["area"] = "Area must have 2 or 3 positive side lengths"
    if not r_c > 0:
        errors["rc"] = "Communication range must be positive"
    if errors:
        raise ValidationError(errors)
    return errors


def generate_scenario(
    n_sensors: int,
    n_anchors: int,
    area: Sequence[float],
    r_c: float,
    seed: int,
) -> NetworkScenario:
    """
    Generate sensor and anchor positions with a connected measurement graph.

    Sensors are uniform in the area (its length sets the dimension), anchors
    sit on a deterministic grid. A draw is accepted when the inter-sensor graph
    is connected and some sensor reaches an anchor. Attempt a draws from the
    a-th child of SeedSequence(seed), so retries stay inside this seed's own
    streams and never reproduce the draw of another seed.

    Args:
        n_sensors: Number of sensors N
        n_anchors: Number of anchors m
        area: Side lengths (2 or 3 of them)
        r_c: Communication range
        seed: Root seed of the attempt streams

    Returns:
        NetworkScenario without measurements, carrying the requested seed

    Raises:
        ValidationError: If the parameters are invalid
        ScenarioGenerationError: If MAX_SEED_RETRIES attempts all fail
    """
    validate_generation(n_sensors, n_anchors, area, r_c)
    area = tuple(float(side) for side in area)
    dim = len(area)
    anchors = anchor_grid(n_anchors, area)

    streams = np.random.SeedSequence(seed)
    for attempt in range(MAX_SEED_RETRIES):
        rng = np.random.default_rng(streams.spawn(1)[0])
        sensors = rng.uniform(0.0, 1.0, size=(n_sensors, dim)) * np.asarray(area)
        graph, anchor_adjacency = build_measurement_graph(sensors, anchors, r_c)
        if nx.is_connected(graph.to_networkx()) and any(anchor_adjacency):
            if attempt:
                logger.info(f"seed {seed}: accepted attempt {attempt}", extra={"seed": seed})
            return NetworkScenario(
                dim=dim,
                anchor_positions=tuple(tuple(float(c) for c in a) for a in anchors),
                r_c=float(r_c),
                seed=seed,
                true_sensor_positions=tuple(tuple(float(c) for c in p) for p in sensors),
            )

    raise ScenarioGenerationError("could not generate connected scenario")


def synthesize_measurements(
    scn: NetworkScenario,
    sigma_r: float,
    sigma_a: float,
    seed: Optional[int] = None,
) -> NetworkScenario:
    """
    Fill in noisy range measurements from the true positions.

    R_ij = |dist + e| with e ~ N(0, sigma_r^2) for every inter-sensor edge in
    sorted order, then Y_ij likewise with sigma_a for every sensor-anchor pair
    in (sensor, anchor) order.

    The stored variance is sigma^2 for sigma > 0. For sigma = 0 the
    measurements are exact but var is stored as 1.0, not 0, because the cost
    weights are 1 / var; every measurement of that kind then carries unit
    weight.

    Args:
        scn: Scenario with true sensor positions
        sigma_r: Inter-sensor noise standard deviation
        sigma_a: Anchor noise standard deviation
        seed: Noise seed; defaults to the scenario seed

    Raises:
        ValidationError: If positions are missing or a standard deviation is negative
    """
    errors = {}
    if not scn.has_truth:
        errors["sensors_true"] = "Measurement synthesis requires true sensor positions"
    if not sigma_r >= 0:
        errors["sigma_r"] = "Noise standard deviation must be non-negative"
    if not sigma_a >= 0:
        errors["sigma_a"] = "Noise standard deviation must be non-negative"
    if errors:
        raise ValidationError(errors)

    rng = np.random.default_rng(scn.seed if seed is None else seed)
    sensors = scn.truth_array()
    anchors = scn.anchor_array()
    graph, anchor_adjacency = build_measurement_graph(sensors, anchors, scn.r_c)

    edges = sorted(graph.edges)
    range_noise = sigma_r * rng.standard_normal(len(edges))
    range_var = sigma_r**2 if sigma_r > 0 else 1.0
    ranges = tuple(
        RangeMeasurement(
            i=i,
            j=j,
            r=float(abs(np.linalg.norm(sensors[i] - sensors[j]) + noise)),
            var=range_var,
        )
        for (i, j), noise in zip(edges, range_noise)
    )

    pairs = [(i, j) for i, reach in enumerate(anchor_adjacency) for j in reach]
    anchor_noise = sigma_a * rng.standard_normal(len(pairs))
    anchor_var = sigma_a**2 if sigma_a > 0 else 1.0
    anchored = tuple(
        AnchorMeasurement(
            i=i,
            j=j,
            y=float(abs(np.linalg.norm(sensors[i] - anchors[j]) + noise)),
            var=anchor_var,
        )
        for (i, j), noise in zip(pairs, anchor_noise)
    )

    logger.debug(
        f"synthesized {len(ranges)} range and {len(anchored)} anchor measurements",
        extra={"sigma_r": sigma_r, "sigma_a": sigma_a},
    )
    return scn.with_measurements(ranges, anchored)
