"""Monte Carlo null calibration of every supported test statistic."""
from __future__ import annotations

import numpy as np

from ..errors import DomainError, SampleSizeError
from ..gof import GofKind, batch_statistics
from ..symmetry import DEFAULT_SEARCH, SYMMETRY_KINDS, WeightSearchConfig, symmetry_rows
from .engine import STANDARD_NORMAL, map_blocks, simulate_matrix
from .tables import CriticalValueTable

MIN_CALIB = 1000
DEFAULT_CALIB = 50_000

TEST_TAGS = tuple(k.value for k in GofKind) + SYMMETRY_KINDS


def normalize_tag(tag) -> str:
    if isinstance(tag, GofKind):
        return tag.value
    t = str(tag)
    for s in SYMMETRY_KINDS:
        if t.lower() == s.lower():
            return s
    return GofKind.parse(t).value


def tail_of(tag: str) -> str:
    return "upper" if tag in SYMMETRY_KINDS else GofKind(tag).tail


def min_n(tag: str) -> int:
    return 2 if tag in SYMMETRY_KINDS else 3


def batch_test_statistics(X: np.ndarray, tags, cfg: WeightSearchConfig = DEFAULT_SEARCH) -> dict:
    """Statistic arrays for a mix of normality and symmetry tags."""
    tags = [normalize_tag(t) for t in tags]
    gof_tags = [t for t in tags if t not in SYMMETRY_KINDS]
    sym_tags = [t for t in tags if t in SYMMETRY_KINDS]
    out = {}
    if gof_tags:
        out.update({k.value: v for k, v in batch_statistics(X, gof_tags).items()})
    if sym_tags:
        out.update(symmetry_rows(X, sym_tags, cfg))
    return {t: out[t] for t in tags}


def calibrate_many(kinds, n: int, n_calib: int = DEFAULT_CALIB, seed: int = 0, *,
                   threads: int | None = None,
                   cfg: WeightSearchConfig = DEFAULT_SEARCH) -> dict[str, CriticalValueTable]:
    """Tables for several kinds from one shared set of N(0, 1) samples.

    Each table equals what :func:`calibrate` returns for that kind alone.
    """
    tags = [normalize_tag(k) for k in kinds]
    if n_calib < MIN_CALIB:
        raise SampleSizeError(f"n_calib must be at least {MIN_CALIB}, got {n_calib}")
    for t in tags:
        if n < min_n(t):
            raise SampleSizeError(f"{t} cannot be calibrated for n={n}")
        if (t == "SW" and n > 5000) or (t == "mSW" and 2 * n > 5000):
            raise SampleSizeError(f"{t} is not supported for n={n}")
    X = simulate_matrix(STANDARD_NORMAL, n, n_calib, seed, threads=threads)
    stats = map_blocks(lambda B: batch_test_statistics(B, tags, cfg), X, threads)
    tables = {}
    for t in tags:
        params = cfg.params() if t == "Tc" else {}
        tables[t] = CriticalValueTable(kind=t, n=n, n_calib=n_calib, seed=int(seed),
                                       tail=tail_of(t), stats=np.sort(stats[t]), params=params)
    return tables


def calibrate(kind, n: int, n_calib: int = DEFAULT_CALIB, seed: int = 0, *,
              threads: int | None = None,
              cfg: WeightSearchConfig = DEFAULT_SEARCH) -> CriticalValueTable:
    """Null distribution of ``kind`` at sample size ``n`` from ``n_calib``
    standard normal samples; replicate ``r`` uses substream ``(seed, r)``."""
    tag = normalize_tag(kind)
    if tag not in TEST_TAGS:
        raise DomainError(f"unsupported test {kind!r}")
    return calibrate_many([tag], n, n_calib, seed, threads=threads, cfg=cfg)[tag]
