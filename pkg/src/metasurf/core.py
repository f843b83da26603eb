"""Domain vocabulary: studies, quality scales, estimates and intervals.

All types are immutable after construction and safe to share across threads
or processes. Study tables are validated once via :func:`validate_table` and
then passed around as :class:`StudyTable` values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence, Union

import numpy as np

from .errors import (
    EmptyTable,
    InvalidStudy,
    MixedQualityScales,
    NonPositiveSE,
)

# Normal-theory 95% interval multiplier. Fixed by convention: every interval
# in this package is estimate +/- 1.96 * SE, nothing else.
Z95 = 1.96
CONFIDENCE_LEVEL = 0.95


@dataclass(frozen=True)
class OrdinalScale:
    """An ordered, named quality scale, e.g. risk-of-bias levels.

    ``levels`` are listed from worst to best; ``ideal`` names the extreme
    level that represents the perfect study (defaults to the last, i.e.
    best, level). Numeric scores count steps away from the non-ideal
    extreme, so the worst level always scores 0 and the ideal level scores
    ``len(levels) - 1``.
    """

    levels: tuple[str, ...]
    ideal: str = ""

    def __post_init__(self):
        levels = tuple(self.levels)
        object.__setattr__(self, "levels", levels)
        if not levels:
            raise ValueError("ordinal scale needs at least one level")
        if len(set(levels)) != len(levels):
            raise ValueError(f"duplicate levels in scale: {levels}")
        ideal = self.ideal or levels[-1]
        object.__setattr__(self, "ideal", ideal)
        if ideal not in (levels[0], levels[-1]):
            raise ValueError(
                f"ideal level {ideal!r} must be one of the scale's extremes"
            )

    def index(self, level: str) -> int:
        try:
            return self.levels.index(level)
        except ValueError:
            raise ValueError(f"level {level!r} not in scale {self.levels}") from None

    def score(self, level: str) -> int:
        """Equally spaced score: 0 at the worst extreme, step 1 towards the ideal."""
        i = self.index(level)
        if self.ideal == self.levels[-1]:
            return i
        return len(self.levels) - 1 - i

    @property
    def ideal_score(self) -> int:
        return len(self.levels) - 1


@dataclass(frozen=True)
class NumericQuality:
    """A real-valued design-quality score (e.g. Z on a 0-10 scale)."""

    score: float


@dataclass(frozen=True)
class OrdinalQuality:
    """A level on a declared ordinal quality scale."""

    level: str
    scale: OrdinalScale


DesignQuality = Union[NumericQuality, OrdinalQuality]


@dataclass(frozen=True)
class IdealPoint:
    """The design-quality value of the hypothetical perfect study."""

    target: DesignQuality

    @classmethod
    def numeric(cls, value: float) -> "IdealPoint":
        return cls(NumericQuality(float(value)))

    @classmethod
    def ordinal(cls, scale: OrdinalScale, level: str | None = None) -> "IdealPoint":
        return cls(OrdinalQuality(level if level is not None else scale.ideal, scale))


@dataclass(frozen=True)
class ConfidenceInterval:
    """Normal-theory 95% interval, always estimate +/- 1.96 * SE."""

    lower: float
    upper: float
    level: float = CONFIDENCE_LEVEL

    @classmethod
    def from_normal(cls, estimate: float, se: float) -> "ConfidenceInterval":
        return cls(estimate - Z95 * se, estimate + Z95 * se)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class PooledEstimate:
    """A pooled mean effect with its heterogeneity diagnostics.

    ``tau2`` is the between-study variance (0 for a fixed-effect pool) and
    ``q_stat`` is Cochran's Q computed with fixed-effect weights.
    """

    estimate: float
    se: float
    ci: ConfidenceInterval
    tau2: float
    q_stat: float
    k: int


@dataclass(frozen=True)
class Study:
    """One published result: effect estimate, standard error, design quality.

    ``covariates`` carries optional scientific factors as (name, value)
    pairs in a fixed declared order; nothing in this package conditions on
    them unless they are explicitly included in a design matrix.
    """

    id: str
    effect: float
    se: float
    quality: DesignQuality
    covariates: tuple[tuple[str, float], ...] = ()

    def covariate_names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.covariates)


@dataclass(frozen=True)
class StudyTable:
    """A validated, immutable collection of studies sharing one quality scale.

    Construct via :func:`validate_table`; operations that subset an already
    validated table may build instances directly. A table may be empty only
    as the result of subsetting (validate_table refuses empty input);
    estimators raise on empty tables.
    """

    studies: tuple[Study, ...]

    def __len__(self) -> int:
        return len(self.studies)

    def __iter__(self) -> Iterator[Study]:
        return iter(self.studies)

    def __getitem__(self, i: int) -> Study:
        return self.studies[i]

    @property
    def k(self) -> int:
        return len(self.studies)

    @cached_property
    def effects(self) -> np.ndarray:
        return np.array([s.effect for s in self.studies], dtype=float)

    @cached_property
    def ses(self) -> np.ndarray:
        return np.array([s.se for s in self.studies], dtype=float)

    @property
    def quality_kind(self) -> str | None:
        """'numeric', 'ordinal', or None for an empty table."""
        if not self.studies:
            return None
        return "numeric" if isinstance(self.studies[0].quality, NumericQuality) else "ordinal"

    @property
    def scale(self) -> OrdinalScale | None:
        if self.quality_kind != "ordinal":
            return None
        return self.studies[0].quality.scale

    @cached_property
    def numeric_scores(self) -> np.ndarray:
        if self.quality_kind != "numeric":
            raise MixedQualityScales("table does not carry numeric quality scores")
        return np.array([s.quality.score for s in self.studies], dtype=float)

    @property
    def levels(self) -> tuple[str, ...]:
        if self.quality_kind != "ordinal":
            raise MixedQualityScales("table does not carry ordinal quality levels")
        return tuple(s.quality.level for s in self.studies)

    @property
    def covariate_names(self) -> tuple[str, ...]:
        if not self.studies:
            return ()
        return self.studies[0].covariate_names()

    def covariate_matrix(self) -> np.ndarray:
        """k x m matrix of scientific covariates in declared column order."""
        return np.array(
            [[v for _, v in s.covariates] for s in self.studies], dtype=float
        ).reshape(len(self.studies), len(self.covariate_names))

    def subset(self, indices: Sequence[int]) -> "StudyTable":
        return StudyTable(tuple(self.studies[i] for i in indices))


def _check_study(study: Study) -> None:
    if not (math.isfinite(study.se) and study.se > 0):
        raise NonPositiveSE(f"study {study.id!r}: se must be positive and finite, got {study.se!r}")
    if not math.isfinite(study.effect):
        raise InvalidStudy(f"study {study.id!r}: effect must be finite, got {study.effect!r}")
    if isinstance(study.quality, NumericQuality):
        if not math.isfinite(study.quality.score):
            raise InvalidStudy(f"study {study.id!r}: quality score must be finite")
    elif isinstance(study.quality, OrdinalQuality):
        if study.quality.level not in study.quality.scale.levels:
            raise InvalidStudy(
                f"study {study.id!r}: level {study.quality.level!r} not in scale "
                f"{study.quality.scale.levels}"
            )
    else:
        raise InvalidStudy(f"study {study.id!r}: unknown quality kind {type(study.quality)}")
    for name, value in study.covariates:
        if not math.isfinite(value):
            raise InvalidStudy(f"study {study.id!r}: covariate {name!r} must be finite")


def validate_table(studies: Iterable[Study] | StudyTable) -> StudyTable:
    """Validate a list of studies into a StudyTable.

    Checks every study's invariants and that all studies share one quality
    kind and (for ordinal data) one scale, plus a consistent covariate
    layout. Idempotent: a StudyTable passes through unchanged.
    """
    if isinstance(studies, StudyTable):
        return studies
    rows = tuple(studies)
    if not rows:
        raise EmptyTable("no studies to analyze")
    for study in rows:
        _check_study(study)
    first = rows[0]
    numeric = isinstance(first.quality, NumericQuality)
    for study in rows[1:]:
        if isinstance(study.quality, NumericQuality) != numeric:
            raise MixedQualityScales("numeric and ordinal quality mixed in one table")
        if not numeric and study.quality.scale != first.quality.scale:
            raise MixedQualityScales(
                f"studies use different ordinal scales: {first.quality.scale.levels} "
                f"vs {study.quality.scale.levels}"
            )
        if study.covariate_names() != first.covariate_names():
            raise InvalidStudy(
                f"study {study.id!r}: covariate columns {study.covariate_names()} "
                f"do not match {first.covariate_names()}"
            )
    return StudyTable(rows)


def check_ideal_compatible(table: StudyTable, ideal: IdealPoint) -> None:
    """Raise unless the ideal point matches the table's quality kind and scale."""
    from .errors import EncodingMismatch

    if table.quality_kind == "numeric" and not isinstance(ideal.target, NumericQuality):
        raise EncodingMismatch("numeric table needs a numeric ideal point")
    if table.quality_kind == "ordinal":
        if not isinstance(ideal.target, OrdinalQuality):
            raise EncodingMismatch("ordinal table needs an ordinal ideal point")
        if ideal.target.scale != table.scale:
            raise EncodingMismatch("ideal point declared on a different ordinal scale")
        if ideal.target.level not in ideal.target.scale.levels:
            raise EncodingMismatch(f"ideal level {ideal.target.level!r} not in scale")
