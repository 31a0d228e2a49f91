"""Input transformation: crisp values, ready-made distributions, or no answer.

A crisp reading on the anchor range is split between the two bracketing
grades proportionally to its distance from their utility anchors, so the
expected utility of the transformed distribution reproduces the reading
exactly. Values outside the anchor range clamp to the nearest extreme
grade. A missing answer becomes the all-zero distribution: total
ignorance, which downstream belief updating reads as zero input mass.
"""

from __future__ import annotations

import bisect
import math

from .errors import ScaleMismatch
from .model import BeliefDistribution, ReferentialScale


class _MissingType:
    """Singleton marker for an absent input (respondent gave no answer)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "MISSING"


MISSING = _MissingType()

#: A raw input: a crisp reading, a pre-distributed assessment, or MISSING.
InputValue = float | int | BeliefDistribution | _MissingType


def missing_distribution(scale: ReferentialScale) -> BeliefDistribution:
    """Total ignorance over ``scale``: every degree zero, mass zero."""
    return BeliefDistribution(scale, tuple(0.0 for _ in scale.grades))


def transform_crisp(value: float, scale: ReferentialScale) -> BeliefDistribution:
    """Distribute a crisp reading over the two grades whose anchors bracket it.

    The output is always complete with at most two nonzero degrees, and
    its expected utility under the anchor values equals ``value`` for any
    value inside the anchor range.
    """
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"crisp input must be finite, got {value!r}")
    anchors = scale.anchors
    degrees = [0.0] * scale.size
    if value <= anchors[0]:
        degrees[0] = 1.0
    elif value >= anchors[-1]:
        degrees[-1] = 1.0
    else:
        # anchors[j] <= value < anchors[j+1]
        j = bisect.bisect_right(anchors, value) - 1
        lower_share = (anchors[j + 1] - value) / (anchors[j + 1] - anchors[j])
        degrees[j] = lower_share
        degrees[j + 1] = 1.0 - lower_share
    return BeliefDistribution(scale, tuple(degrees))


def transform_input(value: InputValue, scale: ReferentialScale) -> BeliefDistribution:
    """Normalise any raw input into a belief distribution over ``scale``."""
    if value is MISSING:
        return missing_distribution(scale)
    if isinstance(value, BeliefDistribution):
        if value.scale != scale:
            raise ScaleMismatch(
                f"distribution is over scale '{value.scale.name}', expected '{scale.name}'"
            )
        return value
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return transform_crisp(value, scale)
    raise TypeError(f"cannot transform input of type {type(value).__name__}")
