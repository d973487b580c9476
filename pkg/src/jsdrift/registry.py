"""Feature registry: the ordered set of vitals and labs the pipeline knows about."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInputError, UnknownFeatureError


@dataclass(frozen=True)
class Feature:
    feature_id: str
    display_name: str
    unit: str
    kind: str  # "vital" or "lab"


@dataclass(frozen=True)
class FeatureRegistry:
    """Ordered collection of features with unique, non-empty ids."""

    features: tuple[Feature, ...]
    _by_id: dict[str, Feature] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.features:
            raise InvalidInputError("registry must contain at least one feature")
        by_id: dict[str, Feature] = {}
        for feat in self.features:
            if not feat.feature_id:
                raise InvalidInputError("feature ids must be non-empty")
            if feat.feature_id in by_id:
                raise InvalidInputError(f"duplicate feature id: {feat.feature_id!r}")
            by_id[feat.feature_id] = feat
        object.__setattr__(self, "_by_id", by_id)

    def ids(self) -> tuple[str, ...]:
        return tuple(f.feature_id for f in self.features)

    def get(self, feature_id: str) -> Feature:
        try:
            return self._by_id[feature_id]
        except KeyError:
            raise UnknownFeatureError(feature_id) from None

    def __contains__(self, feature_id: str) -> bool:
        return feature_id in self._by_id

    def __len__(self) -> int:
        return len(self.features)

    def __iter__(self):
        return iter(self.features)


_VITALS = [
    ("gcs_total", "Glasgow Coma Score total", "score"),
    ("spo2", "Oxygen saturation (SpO2)", "%"),
    ("heart_rate", "Heart rate", "beats/min"),
    ("respiratory_rate", "Respiratory rate", "breaths/min"),
    ("temperature", "Temperature", "degF"),
]

_LABS = [
    ("alt", "Alanine aminotransferase", "U/L"),
    ("albumin", "Albumin", "g/dL"),
    ("alkaline_phosphatase", "Alkaline phosphatase", "U/L"),
    ("anion_gap", "Anion gap", "mmol/L"),
    ("ast", "Aspartate aminotransferase", "U/L"),
    ("bicarbonate", "Bicarbonate", "mmol/L"),
    ("bilirubin", "Bilirubin", "mg/dL"),
    ("bun", "Blood urea nitrogen", "mg/dL"),
    ("calcium", "Calcium", "mg/dL"),
    ("chloride", "Chloride", "mmol/L"),
    ("creatinine", "Creatinine", "mg/dL"),
    ("glucose", "Glucose", "mg/dL"),
    ("hematocrit", "Hematocrit", "%"),
    ("hemoglobin", "Hemoglobin", "g/dL"),
    ("inr", "International normalized ratio", "ratio"),
    ("magnesium", "Magnesium", "mg/dL"),
    ("platelets", "Platelets", "10^3/uL"),
    ("potassium", "Potassium", "mmol/L"),
    ("protein", "Protein", "g/dL"),
    ("prothrombin_time", "Prothrombin time", "s"),
    ("sodium", "Sodium", "mmol/L"),
    ("wbc", "White blood cell count", "10^3/uL"),
]


def default_registry() -> FeatureRegistry:
    """The stock registry: 5 vitals and 22 labs."""
    feats = [Feature(fid, name, unit, "vital") for fid, name, unit in _VITALS]
    feats += [Feature(fid, name, unit, "lab") for fid, name, unit in _LABS]
    return FeatureRegistry(tuple(feats))
