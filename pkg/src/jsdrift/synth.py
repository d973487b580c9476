"""Seeded synthetic cohort generator with a known step drift.

Control patients draw every present hourly value from a per-feature normal
distribution. Treatment patients are generated identically until the drift
onset hour, after which the configured features shift by a fixed number of
standard deviations. Each patient derives its own RNG stream from the seed,
so generation is reproducible and independent of patient order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections.abc import Mapping

import numpy as np

from .errors import InvalidInputError
from .observations import COHORT_CONTROL, COHORT_TREATMENT, Observation, ObservationTable
from .registry import FeatureRegistry, default_registry

DEFAULT_DRIFT_FEATURES = (
    "heart_rate",
    "temperature",
    "wbc",
    "calcium",
    "hemoglobin",
    "sodium",
)


@dataclass(frozen=True)
class FeatureStats:
    mean: float
    sd: float

    def __post_init__(self):
        if not np.isfinite(self.mean):
            raise InvalidInputError("feature mean must be finite")
        if not (np.isfinite(self.sd) and self.sd > 0):
            raise InvalidInputError("feature sd must be positive")


@dataclass(frozen=True)
class DriftSpec:
    onset_hour: int = 24
    features: tuple[str, ...] = DEFAULT_DRIFT_FEATURES
    shift_sds: float = 2.0


@dataclass(frozen=True)
class SynthConfig:
    features: Mapping[str, FeatureStats]
    n_control: int = 200
    n_treatment: int = 20
    horizon: int = 48
    missingness: float | Mapping[str, float] = 0.15
    drift: DriftSpec = field(default_factory=DriftSpec)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "features", dict(self.features))
        if not self.features:
            raise InvalidInputError("config needs at least one feature")
        if self.n_control < 0 or self.n_treatment < 0:
            raise InvalidInputError("cohort sizes must be non-negative")
        if self.horizon < 2:
            raise InvalidInputError("horizon must be at least 2")
        if not 0 <= self.drift.onset_hour < self.horizon:
            raise InvalidInputError(
                f"onset_hour must lie in [0, {self.horizon}), got {self.drift.onset_hour}"
            )
        unknown = [f for f in self.drift.features if f not in self.features]
        if unknown:
            raise InvalidInputError(f"drift features not in config: {unknown}")
        for feature in self.features:
            rate = self.missing_rate(feature)
            if not 0.0 <= rate < 1.0:
                raise InvalidInputError(f"missingness for {feature!r} must lie in [0, 1)")

    def missing_rate(self, feature_id: str) -> float:
        if isinstance(self.missingness, Mapping):
            return float(self.missingness.get(feature_id, 0.0))
        return float(self.missingness)


# Defaults: measured cohort statistics where available, plausible adult ICU
# reference values elsewhere.
DEFAULT_FEATURE_STATS: dict[str, FeatureStats] = {
    "gcs_total": FeatureStats(14.6, 0.7),
    "spo2": FeatureStats(97.0, 2.0),
    "heart_rate": FeatureStats(86.7, 16.2),
    "respiratory_rate": FeatureStats(18.5, 3.0),
    "temperature": FeatureStats(98.4, 0.9),
    "alt": FeatureStats(32.0, 16.0),
    "albumin": FeatureStats(3.6, 0.6),
    "alkaline_phosphatase": FeatureStats(85.0, 28.0),
    "anion_gap": FeatureStats(10.0, 3.0),
    "ast": FeatureStats(36.0, 20.0),
    "bicarbonate": FeatureStats(24.0, 3.0),
    "bilirubin": FeatureStats(0.8, 0.3),
    "bun": FeatureStats(18.0, 9.0),
    "calcium": FeatureStats(8.9, 0.7),
    "chloride": FeatureStats(103.0, 4.0),
    "creatinine": FeatureStats(0.9, 0.3),
    "glucose": FeatureStats(126.0, 35.0),
    "hematocrit": FeatureStats(35.0, 6.0),
    "hemoglobin": FeatureStats(11.5, 2.0),
    "inr": FeatureStats(1.2, 0.3),
    "magnesium": FeatureStats(2.0, 0.3),
    "platelets": FeatureStats(220.0, 90.0),
    "potassium": FeatureStats(4.0, 0.5),
    "protein": FeatureStats(6.5, 0.9),
    "prothrombin_time": FeatureStats(14.0, 2.5),
    "sodium": FeatureStats(138.0, 4.0),
    "wbc": FeatureStats(10.2, 3.5),
}


def default_config(registry: FeatureRegistry | None = None, **overrides) -> SynthConfig:
    """Config covering the full registry with the stock statistics."""
    registry = registry or default_registry()
    stats = {}
    for fid in registry.ids():
        if fid not in DEFAULT_FEATURE_STATS:
            raise InvalidInputError(f"no default statistics for feature {fid!r}")
        stats[fid] = DEFAULT_FEATURE_STATS[fid]
    return SynthConfig(features=stats, **overrides)


def _patient_rows(
    config: SynthConfig, patient_id: str, cohort_code: int, index: int
) -> list[Observation]:
    rng = np.random.default_rng([config.seed, cohort_code, index])
    shifted = set(config.drift.features) if cohort_code == 1 else set()
    rows = []
    for hour in range(config.horizon):
        for feature, stats in config.features.items():
            if rng.random() < config.missing_rate(feature):
                continue
            mean = stats.mean
            if feature in shifted and hour >= config.drift.onset_hour:
                mean += config.drift.shift_sds * stats.sd
            value = rng.normal(mean, stats.sd)
            rows.append(Observation(patient_id, float(hour), feature, float(value)))
    return rows


def generate_cohort(config: SynthConfig) -> ObservationTable:
    """Generate the labeled control + treatment observation table."""
    rows: list[Observation] = []
    labels: dict[str, str] = {}
    for i in range(config.n_control):
        pid = f"c{i:04d}"
        rows.extend(_patient_rows(config, pid, 0, i))
        labels[pid] = COHORT_CONTROL
    for i in range(config.n_treatment):
        pid = f"t{i:04d}"
        rows.extend(_patient_rows(config, pid, 1, i))
        labels[pid] = COHORT_TREATMENT
    return ObservationTable(tuple(rows), labels)
