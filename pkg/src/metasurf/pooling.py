"""Literature-synthesis estimators: fixed-effect and DerSimonian-Laird
random-effects pooling, plus quality-threshold subsetting.

Formulas (inverse-variance convention):

    w_i   = 1 / s_i^2
    mu    = sum(w_i * psi_i) / sum(w_i)          SE = sum(w_i)^(-1/2)
    Q     = sum(w_i * (psi_i - mu)^2)
    tau^2 = max(0, (Q - (k - 1)) / (sum(w) - sum(w^2)/sum(w)))   (DL)

Random-effects re-pools with weights 1 / (s_i^2 + tau^2); Q is always the
fixed-effect-stage statistic.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .core import ConfidenceInterval, NumericQuality, PooledEstimate, StudyTable
from .errors import EmptyTable, OrdinalQualityUnsupported, TooFewStudies


class PoolingMethod(Enum):
    FIXED_EFFECT = "fixed_effect"
    RANDOM_EFFECTS_DL = "random_effects_dl"


def _weighted_pool(effects: np.ndarray, variances: np.ndarray) -> tuple[float, float, float]:
    """Return (estimate, se, q) for inverse-variance weights 1/variances."""
    w = 1.0 / variances
    sw = float(w.sum())
    mu = float(w @ effects) / sw
    q = float(w @ (effects - mu) ** 2)
    return mu, sw ** -0.5, q


def fixed_effect_pool(table: StudyTable) -> PooledEstimate:
    """Inverse-variance weighted mean under a common-effect assumption."""
    if table.k == 0:
        raise EmptyTable("cannot pool an empty table")
    estimate, se, q = _weighted_pool(table.effects, table.ses ** 2)
    return PooledEstimate(
        estimate=estimate,
        se=se,
        ci=ConfidenceInterval.from_normal(estimate, se),
        tau2=0.0,
        q_stat=q,
        k=table.k,
    )


def dl_tau_squared(table: StudyTable) -> float:
    """DerSimonian-Laird method-of-moments between-study variance.

    Truncated at zero: returns exactly 0 whenever Q <= k - 1.
    """
    if table.k < 2:
        raise TooFewStudies(f"DerSimonian-Laird needs k >= 2 studies, got {table.k}")
    w = 1.0 / table.ses ** 2
    sw = float(w.sum())
    mu = float(w @ table.effects) / sw
    q = float(w @ (table.effects - mu) ** 2)
    c = sw - float(w @ w) / sw
    return max(0.0, (q - (table.k - 1)) / c)


def random_effects_pool(table: StudyTable) -> PooledEstimate:
    """DerSimonian-Laird random-effects pool.

    Reduces exactly to :func:`fixed_effect_pool` when the estimated tau^2
    is zero. The reported Q is the fixed-effect-stage statistic.
    """
    tau2 = dl_tau_squared(table)
    _, _, q = _weighted_pool(table.effects, table.ses ** 2)
    estimate, se, _ = _weighted_pool(table.effects, table.ses ** 2 + tau2)
    return PooledEstimate(
        estimate=estimate,
        se=se,
        ci=ConfidenceInterval.from_normal(estimate, se),
        tau2=tau2,
        q_stat=q,
        k=table.k,
    )


def pool(table: StudyTable, method: PoolingMethod) -> PooledEstimate:
    if method is PoolingMethod.FIXED_EFFECT:
        return fixed_effect_pool(table)
    return random_effects_pool(table)


def threshold_subset(table: StudyTable, min_quality: float, strict: bool = True) -> StudyTable:
    """Keep studies with quality above (strict) or at/above the threshold.

    Only defined for numeric quality; the result may be empty, in which
    case downstream pooling raises.
    """
    if table.k and table.quality_kind != "numeric":
        raise OrdinalQualityUnsupported(
            "thresholding needs numeric quality; filter ordinal tables by level instead"
        )
    if strict:
        keep = [i for i, s in enumerate(table) if s.quality.score > min_quality]
    else:
        keep = [i for i, s in enumerate(table) if s.quality.score >= min_quality]
    return table.subset(keep)


def subgroup(table: StudyTable, level: str) -> StudyTable:
    """Studies at one ordinal level (the level-filter counterpart of thresholding)."""
    if table.k and table.quality_kind != "ordinal":
        raise OrdinalQualityUnsupported("level subsetting needs ordinal quality")
    return table.subset([i for i, s in enumerate(table) if s.quality.level == level])


def i_squared(pooled: PooledEstimate) -> float:
    """Higgins I^2 heterogeneity percentage, max(0, (Q - (k-1)) / Q) * 100.

    Diagnostic only; nothing downstream depends on it.
    """
    if pooled.k < 2 or pooled.q_stat <= 0.0:
        return 0.0
    return max(0.0, (pooled.q_stat - (pooled.k - 1)) / pooled.q_stat) * 100.0
