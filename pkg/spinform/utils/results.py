"""Residual reports and run report I/O.

Residuals are stored as named max/mean pairs in insertion order. Run reports add the scene,
resolution, tolerance thresholds and pass flag, and serialize to deterministic JSON: keys are
sorted and the only time-dependent value lives under the ``timestamp`` key, which
``strip_timestamp`` removes before comparisons.

Notes
-----
Non-finite residual values are recorded as ``inf`` so that a diverged check can never pass a
tolerance gate.
"""

import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterator, List, Mapping, Optional, Tuple, Union

import numpy as np

from spinform.core.base import ToleranceGate
from spinform.core.constants import (
    EXACT_RESIDUAL_TOLERANCE,
    EXACT_RESIDUALS,
    REPORT_SCHEMA_VERSION,
    REPORT_TIMESTAMP_KEY,
)
from spinform.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class ResidualEntry:
    """Summary of one residual field.

    Attributes
    ----------
    max : float
        Largest absolute value.
    mean : float
        Mean absolute value.
    """

    max: float
    mean: float

    @classmethod
    def from_values(cls, values: Union[np.ndarray, float]) -> "ResidualEntry":
        arr = np.abs(np.asarray(values, dtype=float)).ravel()
        if arr.size == 0:
            return cls(0.0, 0.0)
        if not np.all(np.isfinite(arr)):
            return cls(float("inf"), float("inf"))
        return cls(float(arr.max()), float(arr.mean()))

    def to_dict(self) -> Dict[str, float]:
        return {"max": self.max, "mean": self.mean}


class ResidualReport:
    """Ordered collection of named residuals.

    Examples
    --------
    >>> report = ResidualReport()
    >>> report.add("isometry", np.array([1e-4, 3e-4]))
    >>> report["isometry"].max
    0.0003
    """

    def __init__(self, entries: Optional[Mapping[str, ResidualEntry]] = None) -> None:
        self._entries: Dict[str, ResidualEntry] = dict(entries or {})

    def add(self, name: str, values: Union[np.ndarray, float]) -> None:
        """Record the absolute max/mean of ``values`` under ``name`` (replacing any entry)."""
        self._entries[name] = ResidualEntry.from_values(values)
        logger.debug(f"Residual {name}: max={self._entries[name].max:.3e}")

    def merge(self, other: "ResidualReport") -> "ResidualReport":
        """Return a new report with ``other``'s entries added (later entries win)."""
        merged = dict(self._entries)
        merged.update(other._entries)
        return ResidualReport(merged)

    def worst(self) -> Optional[Tuple[str, ResidualEntry]]:
        """Entry with the largest max, or None for an empty report."""
        if not self._entries:
            return None
        return max(self._entries.items(), key=lambda item: item[1].max)

    def to_dict(self) -> Dict[str, Dict[str, float]]:
        return {name: entry.to_dict() for name, entry in self._entries.items()}

    @classmethod
    def from_dict(cls, data: Mapping[str, Mapping[str, float]]) -> "ResidualReport":
        return cls(
            {name: ResidualEntry(float(v["max"]), float(v["mean"])) for name, v in data.items()}
        )

    @property
    def names(self) -> List[str]:
        return list(self._entries)

    def __getitem__(self, name: str) -> ResidualEntry:
        return self._entries[name]

    def __contains__(self, name: object) -> bool:
        return name in self._entries

    def __iter__(self) -> Iterator[str]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        body = ", ".join(f"{k}={v.max:.2e}" for k, v in self._entries.items())
        return f"ResidualReport({body})"


def evaluate_gates(
    residuals: ResidualReport,
    spacing: float,
    gates: Optional[Mapping[str, ToleranceGate]] = None,
    default: Optional[ToleranceGate] = None,
) -> Tuple[Dict[str, float], List[str]]:
    """Compute a threshold per residual and list the residuals that exceed it.

    Parameters
    ----------
    residuals : ResidualReport
        Residuals to check.
    spacing : float
        Largest grid spacing h of the run.
    gates : Mapping[str, ToleranceGate], optional
        Per-residual overrides.
    default : ToleranceGate, optional
        Gate for residuals without an override; exact identities default to a fixed
        tolerance instead.

    Returns
    -------
    Tuple[Dict[str, float], List[str]]
        Thresholds by residual name and the names of failing residuals.
    """
    gates = gates or {}
    default = default or ToleranceGate()
    exact = ToleranceGate(constant=0.0, order=0, floor=EXACT_RESIDUAL_TOLERANCE)
    thresholds: Dict[str, float] = {}
    failures: List[str] = []
    for name in residuals:
        gate = gates.get(name, exact if name in EXACT_RESIDUALS else default)
        thresholds[name] = gate.threshold(spacing)
        if not residuals[name].max <= thresholds[name]:
            failures.append(name)
    return thresholds, failures


@dataclass
class RunReport:
    """Report of one pipeline run.

    Attributes
    ----------
    scene : str
        Scene name.
    resolution : int
        Nodes per axis.
    pipeline : str
        Pipeline that produced the residuals.
    residuals : ResidualReport
        Named residuals.
    thresholds : Dict[str, float]
        Gate threshold per residual.
    passed : bool
        True iff every residual is under its threshold.
    failures : List[str]
        Residuals over their threshold.
    metadata : Dict[str, Any]
        Scene facts (p, q, ambient, spacing, base node).
    timestamp : str
        ISO timestamp; excluded from determinism comparisons.
    """

    scene: str
    resolution: int
    pipeline: str
    residuals: ResidualReport
    thresholds: Dict[str, float] = field(default_factory=dict)
    passed: bool = True
    failures: List[str] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    timestamp: str = field(default_factory=lambda: datetime.now().isoformat())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema": REPORT_SCHEMA_VERSION,
            "scene": self.scene,
            "resolution": self.resolution,
            "pipeline": self.pipeline,
            "residuals": self.residuals.to_dict(),
            "thresholds": dict(self.thresholds),
            "pass": self.passed,
            "failures": list(self.failures),
            "metadata": dict(self.metadata),
            REPORT_TIMESTAMP_KEY: self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RunReport":
        schema = data.get("schema")
        if schema != REPORT_SCHEMA_VERSION:
            raise ValueError(f"Unsupported report schema {schema!r}")
        return cls(
            scene=data["scene"],
            resolution=int(data["resolution"]),
            pipeline=data["pipeline"],
            residuals=ResidualReport.from_dict(data.get("residuals", {})),
            thresholds={k: float(v) for k, v in data.get("thresholds", {}).items()},
            passed=bool(data["pass"]),
            failures=list(data.get("failures", [])),
            metadata=dict(data.get("metadata", {})),
            timestamp=data.get(REPORT_TIMESTAMP_KEY, ""),
        )


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def report_to_json(report: RunReport) -> str:
    """Deterministic JSON text of a report (sorted keys, LF newlines, trailing newline)."""
    return json.dumps(report.to_dict(), indent=2, sort_keys=True, default=_json_default) + "\n"


def save_report_json(report: RunReport, output_path: Union[str, Path]) -> Path:
    """Save a run report as JSON.

    Parameters
    ----------
    report : RunReport
        Report to save.
    output_path : Union[str, Path]
        Output file path (``.json`` is appended if missing).

    Returns
    -------
    Path
        Path to the saved file.
    """
    output_path = Path(output_path)
    if output_path.suffix != ".json":
        output_path = output_path.with_suffix(".json")
    output_path.parent.mkdir(parents=True, exist_ok=True)
    with open(output_path, "w", newline="\n") as f:
        f.write(report_to_json(report))
    logger.info(f"Saved report to {output_path}")
    return output_path


def load_report_json(input_path: Union[str, Path]) -> RunReport:
    with open(Path(input_path), "r") as f:
        return RunReport.from_dict(json.load(f))


def strip_timestamp(data: Mapping[str, Any]) -> Dict[str, Any]:
    """Copy of a report dictionary without its timestamp."""
    return {k: v for k, v in data.items() if k != REPORT_TIMESTAMP_KEY}


def generate_summary_report(reports: List[RunReport]) -> str:
    """Generate a text summary of run reports.

    Parameters
    ----------
    reports : List[RunReport]
        Reports to summarize.

    Returns
    -------
    str
        Formatted table, one block per report.
    """
    lines = [
        "=" * 70,
        "SPINFORM RUN SUMMARY",
        "=" * 70,
        "",
    ]
    for report in reports:
        status = "PASS" if report.passed else "FAIL"
        lines.append(f"Scene: {report.scene}  [{report.pipeline}, {report.resolution} per axis]")
        lines.append("-" * 50)
        lines.append(f"  {'residual':<28}{'max':>12}{'threshold':>14}  ")
        for name in report.residuals:
            entry = report.residuals[name]
            threshold = report.thresholds.get(name)
            flag = "!" if name in report.failures else " "
            threshold_text = f"{threshold:>14.3e}" if threshold is not None else f"{'-':>14}"
            lines.append(f"  {name:<28}{entry.max:>12.3e}{threshold_text} {flag}")
        lines.append(f"  Status: {status}")
        lines.append("")
    lines.append("=" * 70)
    return "\n".join(lines)
