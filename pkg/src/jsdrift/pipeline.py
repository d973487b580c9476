"""Cohort pipeline: hourly bucketing, missingness handling, reference building.

The preparation sequence is: drop features that are too sparse across the
whole dataset, bucket each patient to an hourly matrix, fill gaps with the
patient's own feature means where enough data exists, then fill what remains
with cohort means (dropping features that are overwhelmingly absent in either
cohort). The fully imputed control matrices feed the reference model and
nothing else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from collections.abc import Mapping, Sequence

import numpy as np

from .errors import ImputationImpossibleError, InvalidInputError
from .kde import DEFAULT_GRID_POINTS, DensityOnGrid, Grid, build_grid, kde_on_grid, silverman_bandwidth
from .observations import COHORTS, ObservationTable
from .validation import check_fraction

SCHEMA_VERSION = 1
DEFAULT_HORIZON = 48


@dataclass(frozen=True)
class HourlyMatrix:
    """One patient's observations bucketed to hours; NaN marks missing cells."""

    patient_id: str
    features: tuple[str, ...]
    values: np.ndarray  # shape (horizon, n_features)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] != len(self.features):
            raise InvalidInputError(
                f"matrix shape {values.shape} does not match {len(self.features)} features"
            )
        if values.shape[0] < 2:
            raise InvalidInputError("hourly matrix needs a horizon of at least 2")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def horizon(self) -> int:
        return int(self.values.shape[0])

    def column(self, feature_id: str) -> np.ndarray:
        return self.values[:, self.features.index(feature_id)]

    def hour_values(self, hour_index: int) -> dict[str, float]:
        """Present values for one hour as a feature -> value mapping."""
        row = self.values[hour_index]
        return {f: float(v) for f, v in zip(self.features, row) if not math.isnan(v)}


@dataclass(frozen=True)
class FeatureReference:
    """Reference density and summary statistics for a single feature."""

    density: DensityOnGrid
    bandwidth: float
    n_samples: int
    sample_mean: float
    sample_sd: float

    @property
    def grid(self) -> Grid:
        return self.density.grid


@dataclass(frozen=True)
class ReferenceModel:
    """Per-feature control-cohort densities plus build metadata."""

    features: tuple[str, ...]
    entries: Mapping[str, FeatureReference]
    schema_version: int = SCHEMA_VERSION
    created_at: str = ""
    source_rows: int = 0
    thresholds: Mapping[str, float] = field(default_factory=dict)
    dropped_features: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.features:
            raise InvalidInputError("reference model needs at least one feature")
        missing = [f for f in self.features if f not in self.entries]
        if missing:
            raise InvalidInputError(f"reference model lacks entries for {missing}")
        object.__setattr__(self, "entries", dict(self.entries))
        object.__setattr__(self, "thresholds", dict(self.thresholds))

    def __contains__(self, feature_id: str) -> bool:
        return feature_id in self.entries

    def __len__(self) -> int:
        return len(self.features)


def bucket_hourly(
    obs: ObservationTable,
    patient_id: str,
    horizon: int = DEFAULT_HORIZON,
    features: Sequence[str] | None = None,
) -> HourlyMatrix:
    """Bucket one patient's rows to ``floor(hour)``; the latest value wins.

    Observations at or beyond ``horizon`` are excluded. Columns follow
    ``features`` when given, else the table's feature order.
    """
    rows = obs.rows_for(patient_id)
    feats = tuple(features) if features is not None else obs.features()
    index = {f: j for j, f in enumerate(feats)}
    values = np.full((horizon, len(feats)), np.nan)
    best_hour = np.full((horizon, len(feats)), -np.inf)
    for row in rows:
        j = index.get(row.feature_id)
        if j is None:
            continue
        i = int(math.floor(row.hour))
        if i >= horizon:
            continue
        if row.hour >= best_hour[i, j]:  # >= so the later row wins ties
            best_hour[i, j] = row.hour
            values[i, j] = row.value
    return HourlyMatrix(patient_id, feats, values)


def drop_sparse_features(
    obs: ObservationTable,
    threshold: float = 0.25,
    horizon: int = DEFAULT_HORIZON,
) -> tuple[ObservationTable, list[str]]:
    """Remove features whose missing fraction across the dataset exceeds ``threshold``.

    A feature's missing fraction is computed over every patient's hourly
    buckets within the horizon: 1 - (buckets with at least one observation) /
    (n_patients * horizon).
    """
    check_fraction(threshold, "threshold")
    patients = obs.patients()
    total = len(patients) * horizon
    if total == 0:
        return obs, []
    present: dict[str, set[tuple[str, int]]] = {f: set() for f in obs.features()}
    for row in obs.rows:
        i = int(math.floor(row.hour))
        if i < horizon:
            present[row.feature_id].add((row.patient_id, i))
    dropped = [f for f, cells in present.items() if 1.0 - len(cells) / total > threshold]
    return obs.without_features(dropped), dropped


def patient_mean_impute(matrix: HourlyMatrix, min_present: float = 0.25) -> HourlyMatrix:
    """Fill missing cells with the patient's own feature mean.

    Columns whose present fraction is below ``min_present`` are left alone;
    they are handled (or dropped) at the cohort level.
    """
    check_fraction(min_present, "min_present")
    values = matrix.values.copy()
    horizon = matrix.horizon
    for j in range(values.shape[1]):
        col = values[:, j]
        present = ~np.isnan(col)
        n_present = int(present.sum())
        if n_present == horizon or n_present / horizon < min_present:
            continue
        if n_present:
            col[~present] = col[present].mean()
    return HourlyMatrix(matrix.patient_id, matrix.features, values)


def cohort_mean_impute(
    matrices: Sequence[HourlyMatrix],
    labels: Mapping[str, str],
    sparse_threshold: float = 0.75,
) -> tuple[list[HourlyMatrix], list[str]]:
    """Drop cohort-sparse features, then fill every gap with the cohort mean.

    A feature missing more than ``sparse_threshold`` of its cells within
    either cohort is removed from all matrices. Remaining missing cells are
    filled with the mean of that feature over the patient's own cohort, so
    the output matrices are fully dense.
    """
    check_fraction(sparse_threshold, "sparse_threshold")
    if not matrices:
        return [], []
    features = matrices[0].features
    for m in matrices[1:]:
        if m.features != features:
            raise InvalidInputError("matrices must share one feature set")
    unlabeled = [m.patient_id for m in matrices if labels.get(m.patient_id) not in COHORTS]
    if unlabeled:
        raise InvalidInputError(f"patients without a cohort label: {unlabeled}")

    by_cohort: dict[str, np.ndarray] = {}
    for cohort in sorted({labels[m.patient_id] for m in matrices}):
        stack = np.vstack([m.values for m in matrices if labels[m.patient_id] == cohort])
        by_cohort[cohort] = stack

    dropped = []
    for j, feature in enumerate(features):
        for stack in by_cohort.values():
            missing = float(np.isnan(stack[:, j]).mean())
            if missing > sparse_threshold:
                dropped.append(feature)
                break

    kept = [f for f in features if f not in dropped]
    kept_idx = [features.index(f) for f in kept]
    means: dict[str, np.ndarray] = {}
    for cohort, stack in by_cohort.items():
        cols = stack[:, kept_idx]
        present = ~np.isnan(cols)
        counts = present.sum(axis=0)
        if np.any(counts == 0):
            bad = [kept[k] for k in np.flatnonzero(counts == 0)]
            raise ImputationImpossibleError(
                f"cohort {cohort!r} has no observed values for {bad}"
            )
        means[cohort] = np.where(present, cols, 0.0).sum(axis=0) / counts

    out = []
    for m in matrices:
        values = m.values[:, kept_idx].copy()
        mu = means[labels[m.patient_id]]
        gaps = np.isnan(values)
        values[gaps] = np.broadcast_to(mu, values.shape)[gaps]
        out.append(HourlyMatrix(m.patient_id, tuple(kept), values))
    return out, dropped


def build_reference(
    control_matrices: Sequence[HourlyMatrix],
    grid_points: int = DEFAULT_GRID_POINTS,
    thresholds: Mapping[str, float] | None = None,
    dropped_features: Sequence[str] = (),
    source_rows: int | None = None,
) -> ReferenceModel:
    """Pool all control patients' hourly values per feature and fit a KDE.

    Matrices must be dense (post-imputation) and share one feature set. The
    pooled samples are sorted before estimation so the result is bitwise
    independent of patient order.
    """
    if not control_matrices:
        raise InvalidInputError("control cohort is empty")
    features = control_matrices[0].features
    for m in control_matrices[1:]:
        if m.features != features:
            raise InvalidInputError("control matrices must share one feature set")
    stack = np.vstack([m.values for m in control_matrices])
    if np.isnan(stack).any():
        raise InvalidInputError("control matrices must be dense (impute first)")

    entries = {}
    for j, feature in enumerate(features):
        pooled = np.sort(stack[:, j])
        h = silverman_bandwidth(pooled)
        grid = build_grid(pooled, h, grid_points)
        density, _ = kde_on_grid(pooled, h, grid)
        sd = float(pooled.std(ddof=1)) if pooled.size > 1 else 0.0
        entries[feature] = FeatureReference(
            density=density,
            bandwidth=h,
            n_samples=int(pooled.size),
            sample_mean=float(pooled.mean()),
            sample_sd=sd,
        )
    return ReferenceModel(
        features=features,
        entries=entries,
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        source_rows=int(stack.size) if source_rows is None else int(source_rows),
        thresholds=dict(thresholds or {}),
        dropped_features=tuple(dropped_features),
    )
