"""Results, trace and aggregate CSV files."""

import csv
import math
import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

from packages.pdipm.solver import TraceRow
from packages.scenario.validation import ValidationError

RESULTS_HEADER = [
    "run_id",
    "solver",
    "status",
    "iters",
    "per_agent_comms",
    "tree_height",
    "rmse",
    "objective",
    "wall_time_s",
]
TRACE_HEADER = ["iter", "mu", "delta", "primal_residual", "dual_residual", "t_p", "t_d"]
REPORT_HEADER = [
    "noise",
    "solver",
    "runs",
    "converged",
    "rmse_mean",
    "rmse_min",
    "rmse_max",
    "iters_mean",
    "iters_min",
    "iters_max",
    "comms_mean",
    "comms_min",
    "comms_max",
]
NOISE_UNKNOWN = "na"

_RUN_ID = re.compile(r"^s(?P<noise>[0-9][0-9.eE+-]*)_r\d+$")


@dataclass
class ResultRow:
    run_id: str
    solver: str
    status: str
    iters: int
    per_agent_comms: Optional[int]
    tree_height: int
    rmse: Optional[float]
    objective: Optional[float]
    wall_time_s: float

    def as_csv(self) -> list[str]:
        return [
            self.run_id,
            self.solver,
            self.status,
            str(self.iters),
            "" if self.per_agent_comms is None else str(self.per_agent_comms),
            str(self.tree_height),
            "" if self.rmse is None else _num(self.rmse),
            "" if self.objective is None else _num(self.objective),
            f"{self.wall_time_s:.6f}",
        ]


def _num(value: float) -> str:
    return repr(float(value))


def run_id_for(noise: float, run: int) -> str:
    return f"s{noise:g}_r{run:03d}"


def noise_of(run_id: str) -> Union[float, str]:
    """The noise level encoded in a run id, or "na" for ids from elsewhere."""
    match = _RUN_ID.match(run_id)
    if not match:
        return NOISE_UNKNOWN
    try:
        return float(match.group("noise"))
    except ValueError:
        return NOISE_UNKNOWN


def write_results(path: Path, rows: Iterable[ResultRow]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(RESULTS_HEADER)
        for row in rows:
            writer.writerow(row.as_csv())


def _optional(text: str, kind):
    return kind(text) if text != "" else None


def read_results(path: Path) -> list[ResultRow]:
    """
    Read a results CSV, including ones produced by other tools in the same schema.

    Raises:
        ValidationError: If the header differs or a row cannot be parsed
    """
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != RESULTS_HEADER:
            raise ValidationError(
                {str(path): f"results header must be {','.join(RESULTS_HEADER)}"}
            )
        rows = []
        for n, cells in enumerate(reader, start=2):
            if len(cells) != len(RESULTS_HEADER):
                raise ValidationError({f"{path}:{n}": "wrong number of columns"})
            try:
                rows.append(
                    ResultRow(
                        run_id=cells[0],
                        solver=cells[1],
                        status=cells[2],
                        iters=int(cells[3]),
                        per_agent_comms=_optional(cells[4], int),
                        tree_height=int(cells[5]),
                        rmse=_optional(cells[6], float),
                        objective=_optional(cells[7], float),
                        wall_time_s=float(cells[8]),
                    )
                )
            except ValueError as e:
                raise ValidationError({f"{path}:{n}": str(e)}) from e
    return rows


def _band(values: Sequence[float]) -> tuple[Any, Any, Any]:
    if not values:
        return "", "", ""
    return math.fsum(values) / len(values), min(values), max(values)


def aggregate_results(rows: Sequence[ResultRow]) -> list[dict[str, Any]]:
    """
    One row per (noise level, solver): mean and min/max bands of RMSE,
    iterations and per-agent communications.
    """
    groups: dict[tuple[str, str], list[ResultRow]] = defaultdict(list)
    for row in rows:
        noise = noise_of(row.run_id)
        groups[(str(noise), row.solver)].append(row)

    def sort_key(key):
        noise, solver = key
        return (noise == NOISE_UNKNOWN, float(noise) if noise != NOISE_UNKNOWN else 0.0, solver)

    out = []
    for key in sorted(groups, key=sort_key):
        members = groups[key]
        rmse = _band([r.rmse for r in members if r.rmse is not None])
        iters = _band([r.iters for r in members])
        comms = _band([r.per_agent_comms for r in members if r.per_agent_comms is not None])
        out.append(
            {
                "noise": key[0],
                "solver": key[1],
                "runs": len(members),
                "converged": sum(r.status == "converged" for r in members),
                "rmse_mean": rmse[0],
                "rmse_min": rmse[1],
                "rmse_max": rmse[2],
                "iters_mean": iters[0],
                "iters_min": iters[1],
                "iters_max": iters[2],
                "comms_mean": comms[0],
                "comms_min": comms[1],
                "comms_max": comms[2],
            }
        )
    return out


def write_report(path: Path, rows: Sequence[dict[str, Any]]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=REPORT_HEADER, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)


def write_trace(path: Path, trace: Sequence[TraceRow]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for r in trace:
            writer.writerow(
                [
                    r.iteration,
                    _num(r.mu),
                    _num(r.delta),
                    _num(r.primal_residual),
                    _num(r.dual_residual),
                    _num(r.t_p),
                    _num(r.t_d),
                ]
            )
