import json
import logging
import math
from dataclasses import asdict, dataclass, field
from enum import Enum, auto
from typing import Any, Dict, List, Optional, Sequence

from src.reporting.formatting import format_number, rows_to_csv, rows_to_table

logger = logging.getLogger("HeinzConstants.Report")

POINT_COLUMNS = ("label", "kind", "x", "lhs", "rhs", "margin", "budget", "pass")

class PointKind(Enum):
    """What a verification point compares."""
    INEQUALITY = auto()
    IDENTITY = auto()
    POSITIVITY = auto()

@dataclass
class VerificationPoint:
    """One checked instance of an inequality or identity.

    For inequalities ``lhs <= rhs`` the margin is ``rhs - lhs``; for
    identities it is ``-|lhs - rhs|``. The point passes when
    ``margin >= -budget``.
    """
    x: List[float]
    lhs: float
    rhs: float
    margin: float
    budget: float
    label: str = ""
    kind: PointKind = PointKind.INEQUALITY

    @classmethod
    def inequality(cls, x: Sequence[float], lhs: float, rhs: float,
                   budget: float, label: str = "") -> 'VerificationPoint':
        """Record ``lhs <= rhs`` up to ``budget``."""
        return cls(
            x=[float(v) for v in x],
            lhs=float(lhs),
            rhs=float(rhs),
            margin=float(rhs) - float(lhs),
            budget=float(budget),
            label=label,
            kind=PointKind.INEQUALITY
        )

    @classmethod
    def identity(cls, x: Sequence[float], lhs: float, rhs: float,
                 budget: float, label: str = "") -> 'VerificationPoint':
        """Record ``lhs == rhs`` up to ``budget``."""
        return cls(
            x=[float(v) for v in x],
            lhs=float(lhs),
            rhs=float(rhs),
            margin=-abs(float(lhs) - float(rhs)),
            budget=float(budget),
            label=label,
            kind=PointKind.IDENTITY
        )

    @property
    def passed(self) -> bool:
        return self.margin >= -self.budget

    @property
    def discrepancy(self) -> float:
        return abs(self.lhs - self.rhs)

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['kind'] = self.kind.name
        data['pass'] = self.passed
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'VerificationPoint':
        data = dict(data)
        data.pop('pass', None)
        data['kind'] = PointKind[data.get('kind', PointKind.INEQUALITY.name)]
        # "inf" strings come back from to_json
        for key in ('lhs', 'rhs', 'margin', 'budget'):
            data[key] = float(data[key])
        return cls(**data)

@dataclass
class ReportSummary:
    """Worst-case view of a report."""
    min_margin: Optional[float]
    worst_index: Optional[int]
    worst_label: str
    passed: bool
    points: int
    failures: int

@dataclass
class VerificationReport:
    """Collection of verification points with a pass/fail summary."""
    name: str
    points: List[VerificationPoint] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    def add(self, point: VerificationPoint) -> None:
        if not point.passed:
            logger.warning(
                f"{self.name}: point {point.label or point.x} fails "
                f"(margin {point.margin:.3e}, budget {point.budget:.3e})"
            )
        self.points.append(point)

    def extend(self, other: 'VerificationReport') -> None:
        """Append all points of another report."""
        for point in other.points:
            self.add(point)

    @property
    def passed(self) -> bool:
        return all(point.passed for point in self.points)

    @property
    def summary(self) -> ReportSummary:
        if not self.points:
            return ReportSummary(None, None, "", True, 0, 0)
        # worst point: closest to (or furthest past) its budget
        worst = min(range(len(self.points)),
                    key=lambda i: self.points[i].margin + self.points[i].budget)
        return ReportSummary(
            min_margin=min(point.margin for point in self.points),
            worst_index=worst,
            worst_label=self.points[worst].label,
            passed=self.passed,
            points=len(self.points),
            failures=sum(1 for point in self.points if not point.passed)
        )

    def to_dict(self) -> Dict[str, Any]:
        summary = self.summary
        return {
            'name': self.name,
            'metadata': self.metadata,
            'points': [point.to_dict() for point in self.points],
            'summary': {
                'min_margin': summary.min_margin,
                'worst_index': summary.worst_index,
                'worst_label': summary.worst_label,
                'pass': summary.passed,
                'points': summary.points,
                'failures': summary.failures
            }
        }

    def to_json(self) -> str:
        """Convert report to a JSON string.

        Keys are sorted so identical reports serialize to identical bytes.

        Returns:
            str: JSON representation of the report
        """
        return json.dumps(_finite(self.to_dict()), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, json_str: str) -> 'VerificationReport':
        """Create a report from its JSON string.

        Args:
            json_str: JSON produced by :meth:`to_json`

        Returns:
            VerificationReport: Report object
        """
        data = json.loads(json_str)
        return cls(
            name=data['name'],
            points=[VerificationPoint.from_dict(p) for p in data['points']],
            metadata=data.get('metadata', {})
        )

    def rows(self) -> List[List[Any]]:
        return [[
            point.label,
            point.kind.name,
            " ".join(format_number(v) for v in point.x),
            point.lhs,
            point.rhs,
            point.margin,
            point.budget,
            point.passed
        ] for point in self.points]

    def to_csv(self) -> str:
        """Render points as CSV with a header row."""
        return rows_to_csv(POINT_COLUMNS, self.rows())

    def to_table(self) -> str:
        """Render points as a text table followed by a summary line."""
        summary = self.summary
        status = "PASS" if summary.passed else "FAIL"
        return (rows_to_table(POINT_COLUMNS, self.rows())
                + f"{self.name}: {status} ({summary.failures}/{summary.points} failed)\n")

def merge_reports(name: str, reports: Sequence[VerificationReport],
                  metadata: Optional[Dict[str, Any]] = None) -> VerificationReport:
    """Concatenate several reports into one."""
    merged = VerificationReport(name=name, metadata=dict(metadata or {}))
    for report in reports:
        merged.points.extend(report.points)
    return merged

def _finite(value: Any) -> Any:
    # JSON has no inf/nan
    if isinstance(value, float) and not math.isfinite(value):
        return None if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_finite(v) for v in value]
    return value
