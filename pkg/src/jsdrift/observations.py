"""Long-format observation tables: one row per (patient, hour, feature, value)."""

from __future__ import annotations

from dataclasses import dataclass, field
from collections.abc import Iterable, Mapping

import numpy as np

from .errors import InvalidInputError, PatientNotFoundError

COHORT_CONTROL = "control"
COHORT_TREATMENT = "treatment"
COHORTS = (COHORT_CONTROL, COHORT_TREATMENT)


@dataclass(frozen=True)
class Observation:
    patient_id: str
    hour: float
    feature_id: str
    value: float


@dataclass(frozen=True)
class ObservationTable:
    """Validated collection of observations plus optional cohort labels.

    ``cohort_labels`` maps patient ids to ``"control"`` or ``"treatment"``;
    patients absent from the mapping are unlabeled.
    """

    rows: tuple[Observation, ...]
    cohort_labels: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cohort_labels", dict(self.cohort_labels))
        for row in self.rows:
            if not np.isfinite(row.value):
                raise InvalidInputError(f"non-finite value for {row.patient_id}/{row.feature_id}")
            if not np.isfinite(row.hour) or row.hour < 0:
                raise InvalidInputError(f"hour must be >= 0, got {row.hour}")
        for pid, label in self.cohort_labels.items():
            if label not in COHORTS:
                raise InvalidInputError(f"unknown cohort label {label!r} for patient {pid!r}")

    def __len__(self) -> int:
        return len(self.rows)

    def patients(self) -> tuple[str, ...]:
        """Distinct patient ids in first-appearance order."""
        return tuple(dict.fromkeys(row.patient_id for row in self.rows))

    def features(self) -> tuple[str, ...]:
        """Distinct feature ids in first-appearance order."""
        return tuple(dict.fromkeys(row.feature_id for row in self.rows))

    def rows_for(self, patient_id: str) -> tuple[Observation, ...]:
        rows = tuple(row for row in self.rows if row.patient_id == patient_id)
        if not rows:
            raise PatientNotFoundError(patient_id)
        return rows

    def label_of(self, patient_id: str) -> str | None:
        return self.cohort_labels.get(patient_id)

    def without_features(self, feature_ids: Iterable[str]) -> "ObservationTable":
        drop = set(feature_ids)
        return ObservationTable(
            tuple(row for row in self.rows if row.feature_id not in drop),
            self.cohort_labels,
        )

    def restrict_patients(self, patient_ids: Iterable[str]) -> "ObservationTable":
        keep = set(patient_ids)
        return ObservationTable(
            tuple(row for row in self.rows if row.patient_id in keep),
            {pid: lab for pid, lab in self.cohort_labels.items() if pid in keep},
        )

    def without_patients(self, patient_ids: Iterable[str]) -> "ObservationTable":
        drop = set(patient_ids)
        return ObservationTable(
            tuple(row for row in self.rows if row.patient_id not in drop),
            {pid: lab for pid, lab in self.cohort_labels.items() if pid not in drop},
        )
