"""Power studies: rejection rates of several tests over a list of alternatives."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import SpecError
from ..gof import mc_p_values
from ..stat_core import std_normal_quantile
from ..symmetry import DEFAULT_SEARCH, SYMMETRY_KINDS, WeightSearchConfig
from . import alternatives
from .calibration import DEFAULT_CALIB, MIN_CALIB, batch_test_statistics, calibrate_many, normalize_tag
from .engine import derive_seed, map_blocks, simulate_matrix


@dataclass(frozen=True)
class AlternativeCase:
    label: str
    spec: alternatives.Alternative
    n: int


@dataclass(frozen=True)
class PowerStudyConfig:
    alternatives: tuple
    tests: tuple
    alpha: float = 0.05
    n_reps: int = 10_000
    n_calib: int = DEFAULT_CALIB
    seed: int = 0
    #: "asymptotic" (standard normal threshold) or "mc" for Tt/Ts/Tc
    symmetry_calibration: str = "asymptotic"
    search: WeightSearchConfig = field(default=DEFAULT_SEARCH)

    def __post_init__(self):
        if self.n_reps < 100:
            raise SpecError("n_reps must be at least 100")
        if not 0.0 < self.alpha < 1.0:
            raise SpecError("alpha must lie in (0, 1)")
        if self.n_calib < MIN_CALIB:
            raise SpecError(f"n_calib must be at least {MIN_CALIB}")
        if self.symmetry_calibration not in ("asymptotic", "mc"):
            raise SpecError("symmetry_calibration must be 'asymptotic' or 'mc'")
        if not self.alternatives:
            raise SpecError("alternatives must not be empty")
        if not self.tests:
            raise SpecError("tests must not be empty")

    @classmethod
    def from_dict(cls, doc: dict) -> "PowerStudyConfig":
        if not isinstance(doc, dict):
            raise SpecError("config: expected a JSON object")
        known = {"alternatives", "tests", "alpha", "n_reps", "n_calib", "seed",
                 "symmetry_calibration", "search", "description"}
        unknown = set(doc) - known
        if unknown:
            raise SpecError(f"config: unknown field(s) {sorted(unknown)}")
        for req in ("alternatives", "tests"):
            if req not in doc:
                raise SpecError(f"config.{req}: required field is missing")
        alts = doc["alternatives"]
        if not isinstance(alts, list) or not alts:
            raise SpecError("config.alternatives: expected a non-empty list")
        cases = []
        for i, item in enumerate(alts):
            where = f"config.alternatives[{i}]"
            if not isinstance(item, dict):
                raise SpecError(f"{where}: expected an object with label, spec, n")
            for req in ("spec", "n"):
                if req not in item:
                    raise SpecError(f"{where}.{req}: required field is missing")
            n = item["n"]
            if not isinstance(n, int) or isinstance(n, bool) or n < 3:
                raise SpecError(f"{where}.n: expected an integer >= 3, got {n!r}")
            spec = alternatives.from_json(item["spec"], f"{where}.spec")
            cases.append(AlternativeCase(str(item.get("label", spec.label())), spec, n))
        tests = doc["tests"]
        if not isinstance(tests, list) or not tests:
            raise SpecError("config.tests: expected a non-empty list of test tags")
        tags = []
        for i, t in enumerate(tests):
            try:
                tags.append(normalize_tag(t))
            except ValueError:
                raise SpecError(f"config.tests[{i}]: unknown test {t!r}") from None
        kwargs = {}
        for key, typ in (("alpha", float), ("n_reps", int), ("n_calib", int), ("seed", int)):
            if key in doc:
                v = doc[key]
                if isinstance(v, bool) or not isinstance(v, (int, float)) or \
                        (typ is int and not float(v).is_integer()):
                    raise SpecError(f"config.{key}: expected {typ.__name__}, got {v!r}")
                kwargs[key] = typ(v)
        if "symmetry_calibration" in doc:
            kwargs["symmetry_calibration"] = doc["symmetry_calibration"]
        if "search" in doc:
            s = doc["search"]
            if not isinstance(s, dict):
                raise SpecError("config.search: expected an object")
            try:
                kwargs["search"] = WeightSearchConfig(**{**DEFAULT_SEARCH.__dict__, **s})
            except (TypeError, ValueError) as exc:
                raise SpecError(f"config.search: {exc}") from None
        try:
            return cls(alternatives=tuple(cases), tests=tuple(tags), **kwargs)
        except SpecError as exc:
            raise SpecError(f"config: {exc}") from None

    @classmethod
    def load(cls, path) -> "PowerStudyConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise SpecError(f"config is not valid JSON: {exc}") from None
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return {
            "alternatives": [{"label": c.label, "spec": c.spec.to_json(), "n": c.n}
                             for c in self.alternatives],
            "tests": list(self.tests),
            "alpha": self.alpha,
            "n_reps": self.n_reps,
            "n_calib": self.n_calib,
            "seed": self.seed,
            "symmetry_calibration": self.symmetry_calibration,
            "search": self.search.__dict__.copy(),
        }


@dataclass(frozen=True)
class PowerRow:
    label: str
    test: str
    rate: float
    se: float
    reps: int


@dataclass(frozen=True)
class PowerTable:
    rows: tuple

    def rate(self, label: str, test: str) -> float:
        for r in self.rows:
            if r.label == label and r.test == test:
                return r.rate
        raise KeyError((label, test))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "test", "rate", "se", "reps"])
        for r in self.rows:
            w.writerow([r.label, r.test, f"{r.rate:.6f}", f"{r.se:.6f}", r.reps])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"rows": [r.__dict__ for r in self.rows]}, indent=1) + "\n"


def _calibration_seed(seed: int, n: int) -> int:
    return derive_seed(seed, "calibration", n)


def power_study(config: PowerStudyConfig, *, threads: int | None = None,
                tables: dict | None = None, progress=None) -> PowerTable:
    """Rejection rate of each test on each alternative.

    Replicate ``r`` of every alternative is drawn from substream ``(seed, r)``
    and every test sees the same replicate data. Null tables are built per
    sample size from a seed derived from ``config.seed`` and cached in
    ``tables`` (keyed by ``(tag, n)``) when a dict is supplied.
    """
    tables = {} if tables is None else tables
    cfg = config.search
    sym_asym = config.symmetry_calibration == "asymptotic"
    crit = std_normal_quantile(1.0 - config.alpha)
    rows = []
    for case in config.alternatives:
        need = [t for t in config.tests
                if not (sym_asym and t in SYMMETRY_KINDS) and (t, case.n) not in tables]
        if need:
            built = calibrate_many(need, case.n, config.n_calib,
                                   _calibration_seed(config.seed, case.n),
                                   threads=threads, cfg=cfg)
            for t, tab in built.items():
                tables[(t, case.n)] = tab
        X = simulate_matrix(case.spec, case.n, config.n_reps, config.seed, threads=threads)
        stats = map_blocks(lambda B: batch_test_statistics(B, config.tests, cfg), X, threads)
        for t in config.tests:
            if sym_asym and t in SYMMETRY_KINDS:
                rejected = stats[t] > crit
            else:
                tab = tables[(t, case.n)]
                rejected = mc_p_values(tab.stats, stats[t], tab.tail) <= config.alpha
            rate = float(np.mean(rejected))
            se = math.sqrt(rate * (1.0 - rate) / config.n_reps)
            rows.append(PowerRow(case.label, t, rate, se, config.n_reps))
        if progress is not None:
            progress(case)
    return PowerTable(tuple(rows))
