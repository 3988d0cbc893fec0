"""Possibility distributions over a measurement axis.

An expert statement is a stack of nested intervals with increasing
confidence.  Confidence is read as necessity: "I am certain at level c that
the value lies in [lo, hi]" pins N([lo, hi]) = c.  The stack converts to a
consonant possibility distribution whose alpha-cuts are the stated
intervals, and from there to interval evidence masses by successive
level differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DistributionError

_CONF_TOL = 1e-9


@dataclass(frozen=True)
class IntervalStatement:
    """One elicited interval with its necessity level."""

    lo: float
    hi: float
    confidence: float


@dataclass(frozen=True)
class PossibilityDistribution:
    """A consonant distribution stored as nested (interval, level) cuts.

    ``cuts`` is ordered from the innermost interval at level 1 outward with
    strictly decreasing levels; the last cut is the support.
    """

    cuts: tuple[tuple[tuple[float, float], float], ...]

    def __post_init__(self):
        if not self.cuts:
            raise DistributionError("a possibility distribution needs at least one cut")
        prev_level = None
        prev_iv = None
        for (lo, hi), level in self.cuts:
            if not (lo <= hi):
                raise DistributionError(f"interval [{lo}, {hi}] is inverted")
            if not (0 < level <= 1):
                raise DistributionError(f"cut level {level} outside (0, 1]")
            if prev_level is not None:
                if level >= prev_level - _CONF_TOL:
                    raise DistributionError("cut levels must strictly decrease outward")
                if lo > prev_iv[0] or hi < prev_iv[1]:
                    raise DistributionError("cuts must be nested outward")
            prev_level, prev_iv = level, (lo, hi)
        if abs(self.cuts[0][1] - 1.0) > _CONF_TOL:
            raise DistributionError("the innermost cut must sit at level 1")

    @property
    def support(self) -> tuple[float, float]:
        return self.cuts[-1][0]

    def possibility(self, lo: float, hi: float) -> float:
        """Pi([lo, hi]): the highest cut level whose interval meets the query."""
        if lo > hi:
            raise DistributionError(f"query interval [{lo}, {hi}] is inverted")
        best = 0.0
        for (a, b), level in self.cuts:
            if a <= hi and b >= lo:
                best = max(best, level)
        return best

    def necessity(self, lo: float, hi: float) -> float:
        """N([lo, hi]) = 1 - Pi(complement).

        A cut [a, b] meets the complement of [lo, hi] exactly when it sticks
        out on either side (a < lo or b > hi).
        """
        if lo > hi:
            raise DistributionError(f"query interval [{lo}, {hi}] is inverted")
        pi_comp = 0.0
        for (a, b), level in self.cuts:
            if a < lo or b > hi:
                pi_comp = max(pi_comp, level)
        return 1.0 - pi_comp

    def to_interval_masses(self) -> list[tuple[tuple[float, float], float]]:
        """Evidence masses on the cut intervals by successive level differences.

        Cut i at level l_i receives m = l_i - l_{i+1} (0 past the support),
        so belief of any interval event equals its necessity and plausibility
        its possibility.
        """
        out = []
        for i, (iv, level) in enumerate(self.cuts):
            nxt = self.cuts[i + 1][1] if i + 1 < len(self.cuts) else 0.0
            mass = level - nxt
            if mass > 0:
                out.append((iv, mass))
        return out

    def belief(self, lo: float, hi: float) -> float:
        """Bel([lo, hi]) over the interval masses; equals necessity exactly."""
        return math.fsum(
            m for (a, b), m in self.to_interval_masses() if lo <= a and b <= hi
        )

    def plausibility(self, lo: float, hi: float) -> float:
        """Pl([lo, hi]) over the interval masses; equals possibility exactly."""
        return math.fsum(
            m for (a, b), m in self.to_interval_masses() if a <= hi and b >= lo
        )


def from_statements(statements: list[IntervalStatement]) -> PossibilityDistribution:
    """Build the consonant distribution encoding each statement's necessity.

    Statements must be nested outward with strictly increasing confidence,
    and the outermost one must be fully certain (confidence 1): everything
    the expert says has to live inside their widest commitment.  With
    statements (I_1, c_1) ... (I_k, c_k=1) the distribution keeps I_1 at
    level 1 and each wider I_{j+1} at level 1 - c_j, which yields
    N(I_j) = c_j for every stated interval.
    """
    if not statements:
        raise DistributionError("at least one interval statement is required")
    sts = list(statements)
    for s in sts:
        if not (s.lo <= s.hi):
            raise DistributionError(f"interval [{s.lo}, {s.hi}] is inverted")
        if not (0 < s.confidence <= 1):
            raise DistributionError(
                f"confidence {s.confidence} outside (0, 1] for [{s.lo}, {s.hi}]"
            )
    for prev, cur in zip(sts, sts[1:]):
        if cur.lo > prev.lo or cur.hi < prev.hi:
            raise DistributionError(
                f"statements must widen outward: [{cur.lo}, {cur.hi}] does not "
                f"contain [{prev.lo}, {prev.hi}]"
            )
        if cur.confidence <= prev.confidence + _CONF_TOL:
            raise DistributionError(
                "confidence must strictly increase with wider intervals "
                f"({cur.confidence} after {prev.confidence})"
            )
    if abs(sts[-1].confidence - 1.0) > _CONF_TOL:
        raise DistributionError(
            f"the widest statement must carry confidence 1, got {sts[-1].confidence}"
        )
    cuts = [((sts[0].lo, sts[0].hi), 1.0)]
    for prev, cur in zip(sts, sts[1:]):
        cuts.append(((cur.lo, cur.hi), 1.0 - prev.confidence))
    return PossibilityDistribution(tuple(cuts))
