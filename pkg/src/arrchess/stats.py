"""Match statistics and the evaluation-to-probability conversions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from statistics import NormalDist
from typing import Sequence


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float
    confidence: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.lower <= self.upper <= 1.0:
            raise ValueError(f"bad interval [{self.lower}, {self.upper}]")

    def contains(self, x: float) -> bool:
        return self.lower <= x <= self.upper


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> Interval:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials")
    if not 0.0 < confidence < 1.0:
        raise ValueError("confidence must lie in (0, 1)")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    n = trials
    p = successes / n
    z2 = z * z
    denom = 1 + z2 / n
    centre = (p + z2 / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom
    lower = 0.0 if successes == 0 else max(0.0, centre - half)
    upper = 1.0 if successes == trials else min(1.0, centre + half)
    # guard the point estimate against rounding
    return Interval(min(lower, p), max(upper, p), confidence)


class WinModel(Enum):
    """Two mappings from a pawn-unit evaluation to a signed advantage.

    Neither is a calibrated win probability.  LINEAR divides by four and
    clamps; TANH applies the hyperbolic tangent.  They disagree badly away
    from zero (0.055 vs about 0.217 at +0.22) and are kept side by side.
    """

    LINEAR = "linear"
    TANH = "tanh"


def win_probability(eval_pawns: float, model: WinModel = WinModel.LINEAR) -> float:
    if model is WinModel.LINEAR:
        return max(-1.0, min(1.0, eval_pawns / 4))
    if model is WinModel.TANH:
        return math.tanh(eval_pawns)
    raise ValueError(f"unknown model {model!r}")


def format_pm(mean: float, sd: float) -> str:
    """'+5.1 ± 13.8' style, one decimal, explicit sign on the mean."""
    m = round(mean, 1)
    if m == 0:
        m = 0.0
    return f"{m:+.1f} ± {sd:.1f}"


@dataclass(frozen=True)
class PreRepetitionSummary:
    count: int
    baseline_mean: float
    baseline_sd: float
    comparison_mean: float
    comparison_sd: float
    mean_difference: float

    @property
    def baseline_text(self) -> str:
        return format_pm(self.baseline_mean, self.baseline_sd)

    @property
    def comparison_text(self) -> str:
        return format_pm(self.comparison_mean, self.comparison_sd)

    @property
    def difference_text(self) -> str:
        return f"{round(self.mean_difference, 1) + 0.0:+.1f}"

    def to_dict(self) -> dict:
        return {
            "count": self.count,
            "baseline_mean": self.baseline_mean,
            "baseline_sd": self.baseline_sd,
            "comparison_mean": self.comparison_mean,
            "comparison_sd": self.comparison_sd,
            "mean_difference": self.mean_difference,
            "baseline": self.baseline_text,
            "comparison": self.comparison_text,
        }


def _moments(xs: Sequence[float]) -> tuple[float, float]:
    n = len(xs)
    mean = math.fsum(xs) / n
    var = math.fsum((x - mean) ** 2 for x in xs) / n
    return mean, math.sqrt(var)


def summarize_pre_repetition(baseline: Sequence[float], comparison: Sequence[float]) -> PreRepetitionSummary:
    """Paired summary of two evaluators over the same positions (population SD)."""
    if not baseline or not comparison:
        raise ValueError("score lists must be nonempty")
    if len(baseline) != len(comparison):
        raise ValueError("score lists must have equal length")
    bm, bs = _moments(baseline)
    cm, cs = _moments(comparison)
    return PreRepetitionSummary(len(baseline), bm, bs, cm, cs, cm - bm)
