from __future__ import annotations

from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class TestResult:
    """Outcome of one hypothesis test.

    ``calibration_id`` names the critical-value table that produced the
    p-value, or is ``"asymptotic"`` for the normal-threshold symmetry test.
    ``details`` carries test-specific diagnostics (weights, component
    statistics) and is empty for goodness-of-fit tests.
    """

    __test__ = False  # keep pytest from collecting this class

    kind: str
    statistic: float
    tail: str
    p_value: float | None
    reject: bool
    alpha: float
    calibration_id: str
    n: int
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)
