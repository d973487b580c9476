"""Online two-period sliding-window divergence scoring against a reference.

Each pushed hour pairs with the previous one to form a per-feature window of
at most two values. Every feature with at least one present value gets its
own narrow KDE on the reference grid and a Jensen-Shannon divergence against
the reference density; the per-hour comprehensive score is the mean over the
features that could be scored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from collections.abc import Mapping

from .divergence import comprehensive_score, jsd
from .errors import InvalidInputError, OutOfOrderError, UnknownFeatureError
from .kde import kde_on_grid, silverman_bandwidth
from .pipeline import HourlyMatrix, ReferenceModel


@dataclass(frozen=True)
class ScoreRecord:
    """Scores for one patient-hour.

    ``comprehensive`` is None when every feature was skipped (no values in
    the window); such records carry ``features_used == 0``.
    """

    patient_id: str
    hour_index: int
    per_feature: Mapping[str, float]
    comprehensive: float | None
    features_used: int
    features_skipped: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "per_feature", dict(self.per_feature))
        if self.features_used != len(self.per_feature):
            raise InvalidInputError("features_used must match the number of scored features")


class StreamingScorer:
    """Single-patient scorer; hours must be pushed in consecutive order.

    Instances are single-owner: drive each one sequentially. Distinct
    patients' scorers may run in parallel against one shared reference.
    """

    def __init__(self, reference: ReferenceModel, patient_id: str):
        self.reference = reference
        self.patient_id = patient_id
        self.last_hour_index = -1
        self.clip_count = 0
        self._prev: dict[str, float | None] = {f: None for f in reference.features}
        self._cur: dict[str, float | None] = {f: None for f in reference.features}

    def push_hour(
        self, hour_index: int, values: Mapping[str, float | None]
    ) -> ScoreRecord | None:
        """Buffer one hour of values and score the two-hour window.

        Returns None for the first buffered hour. Hours with a gap must be
        pushed explicitly as all-missing mappings; the scorer never invents
        time.
        """
        if hour_index != self.last_hour_index + 1:
            raise OutOfOrderError(
                f"expected hour {self.last_hour_index + 1}, got {hour_index}"
            )
        unknown = [f for f in values if f not in self.reference.entries]
        if unknown:
            raise UnknownFeatureError(", ".join(unknown))
        for f, v in values.items():
            if v is not None and not math.isfinite(v):
                raise InvalidInputError(f"non-finite value for feature {f!r}")

        first = self.last_hour_index < 0
        self._prev = self._cur
        self._cur = {f: values.get(f) for f in self.reference.features}
        self.last_hour_index = hour_index
        if first:
            return None

        scores: dict[str, float] = {}
        skipped: list[str] = []
        for feature in self.reference.features:
            window = [v for v in (self._prev[feature], self._cur[feature]) if v is not None]
            if not window:
                skipped.append(feature)
                continue
            entry = self.reference.entries[feature]
            h = silverman_bandwidth(window)
            density, n_clipped = kde_on_grid(window, h, entry.grid)
            self.clip_count += n_clipped
            scores[feature] = jsd(entry.density, density)

        return ScoreRecord(
            patient_id=self.patient_id,
            hour_index=hour_index,
            per_feature=scores,
            comprehensive=comprehensive_score(scores) if scores else None,
            features_used=len(scores),
            features_skipped=tuple(skipped),
        )


def score_patient(reference: ReferenceModel, matrix: HourlyMatrix) -> list[ScoreRecord]:
    """Batch-score a bucketed patient; equivalent to sequential pushes.

    Returns one record per hour from index 1 onward, excluding hours where
    no feature had a value in the window.
    """
    if matrix.horizon < 2:
        raise InvalidInputError("scoring needs a horizon of at least 2")
    scorer = StreamingScorer(reference, matrix.patient_id)
    records = []
    for hour_index in range(matrix.horizon):
        record = scorer.push_hour(hour_index, matrix.hour_values(hour_index))
        if record is not None and record.features_used > 0:
            records.append(record)
    return records
