"""Critical-value tables and their JSON file format."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import CalibrationMismatchError, DomainError

FORMAT_VERSION = 1


@dataclass(frozen=True, eq=False)
class CriticalValueTable:
    """Sorted null statistics for one (test kind, n) pair."""

    kind: str
    n: int
    n_calib: int
    seed: int
    tail: str
    stats: np.ndarray
    version: int = FORMAT_VERSION
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        stats = np.asarray(self.stats, dtype=np.float64)
        if stats.ndim != 1 or stats.size != self.n_calib:
            raise CalibrationMismatchError("stats length does not match n_calib")
        if np.any(np.diff(stats) < 0):
            raise CalibrationMismatchError("stats must be sorted ascending")
        if self.tail not in ("lower", "upper"):
            raise DomainError("tail must be 'lower' or 'upper'")
        stats.setflags(write=False)
        object.__setattr__(self, "stats", stats)

    @property
    def table_id(self) -> str:
        return f"{self.kind}-n{self.n}-N{self.n_calib}-seed{self.seed}"

    def critical_value(self, alpha: float) -> float:
        """Rejection threshold at level ``alpha`` in the table's tail direction."""
        if not 0.0 < alpha < 1.0:
            raise DomainError("alpha must lie in (0, 1)")
        q = 1.0 - alpha if self.tail == "upper" else alpha
        return float(np.quantile(self.stats, q))

    def __eq__(self, other):
        if not isinstance(other, CriticalValueTable):
            return NotImplemented
        return (self.kind, self.n, self.n_calib, self.seed, self.tail, self.version,
                self.params) == (other.kind, other.n, other.n_calib, other.seed, other.tail,
                                 other.version, other.params) and \
            np.array_equal(self.stats, other.stats)

    def dumps(self) -> str:
        head = {"version": self.version, "kind": self.kind, "n": self.n,
                "n_calib": self.n_calib, "seed": self.seed, "tail": self.tail}
        if self.params:
            head["params"] = self.params
        body = ",\n".join(format(float(v), ".17g") for v in self.stats)
        text = json.dumps(head, indent=1)
        return text[:-2] + ',\n "stats": [\n' + body + "\n ]\n}\n"

    @classmethod
    def loads(cls, text: str) -> "CriticalValueTable":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CalibrationMismatchError(f"table is not valid JSON: {exc}") from None
        missing = {"version", "kind", "n", "n_calib", "seed", "tail", "stats"} - set(doc)
        if missing:
            raise CalibrationMismatchError(f"table is missing field(s) {sorted(missing)}")
        if doc["version"] != FORMAT_VERSION:
            raise CalibrationMismatchError(f"unsupported table version {doc['version']}")
        return cls(kind=doc["kind"], n=int(doc["n"]), n_calib=int(doc["n_calib"]),
                   seed=int(doc["seed"]), tail=doc["tail"],
                   stats=np.array(doc["stats"], dtype=np.float64),
                   version=doc["version"], params=doc.get("params", {}))

    def save(self, path, force: bool = False) -> Path:
        path = Path(path)
        if path.exists() and not force:
            raise FileExistsError(f"{path} exists; pass force=True to overwrite")
        path.write_text(self.dumps())
        return path

    @classmethod
    def load(cls, path) -> "CriticalValueTable":
        return cls.loads(Path(path).read_text())
