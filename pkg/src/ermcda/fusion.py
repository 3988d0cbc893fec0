"""Mass functions, combination rules, and the two-step fusion orchestration.

Step 1 fuses the per-source evaluations of each criterion after reliability
discounting; step 2 fuses the per-criterion results after importance
discounting.  Rules: conjunctive (unnormalized), Dempster, PCR5 (two
sources), PCR6 (n sources, one pass), and the classic rule on free-model
frames where intersections never vanish.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .errors import FrameModeError, FusionError, TotalConflictError
from .frame import FocalElement, Frame, FrameMode

MASS_TOL = 1e-9

#: Combination outputs drop masses below this and renormalize.
PRUNE_EPS = 1e-12


class MassFunction:
    """A basic belief assignment: positive masses on frame elements.

    ``conflict`` is the mass on the empty set and is only ever non-zero on
    unnormalized conjunctive results.  Instances are immutable; rules and
    discounting return new objects.
    """

    __slots__ = ("frame", "_masses", "conflict")

    def __init__(self, frame: Frame, masses, conflict: float = 0.0):
        items = masses.items() if hasattr(masses, "items") else masses
        store: dict[FocalElement, float] = {}
        for el, value in items:
            if not isinstance(el, FocalElement):
                el = frame.parse(el)
            if el.frame.signature != frame.signature:
                raise FusionError(
                    f"element {el.expression()} belongs to a different frame"
                )
            if el.is_empty:
                raise FusionError("mass on the empty set goes in `conflict`")
            el = frame.elements[el.index]
            value = float(value)
            if value <= 0:
                raise FusionError(
                    f"mass for {el.expression()} must be positive, got {value}"
                )
            if el in store:
                raise FusionError(f"duplicate focal element {el.expression()}")
            store[el] = value
        if not 0.0 <= conflict <= 1.0 + MASS_TOL:
            raise FusionError(f"conflict mass {conflict} outside [0, 1]")
        total = math.fsum(store.values()) + conflict
        if abs(total - 1.0) > MASS_TOL:
            raise FusionError(f"masses sum to {total!r}, expected 1")
        if not store and conflict == 0.0:
            raise FusionError("a mass function needs at least one focal element")
        self.frame = frame
        self._masses = dict(sorted(store.items(), key=lambda kv: kv[0].index))
        self.conflict = float(conflict)

    @classmethod
    def vacuous(cls, frame: Frame) -> "MassFunction":
        return cls(frame, {frame.theta: 1.0})

    @classmethod
    def from_expressions(cls, frame: Frame, table: dict[str, float]) -> "MassFunction":
        return cls(frame, {frame.parse(expr): v for expr, v in table.items()})

    def mass(self, element) -> float:
        if not isinstance(element, FocalElement):
            element = self.frame.parse(element)
        return self._masses.get(element, 0.0)

    def items(self) -> list[tuple[FocalElement, float]]:
        """Focal elements with masses, in canonical element order."""
        return list(self._masses.items())

    def focals(self) -> tuple[FocalElement, ...]:
        return tuple(self._masses)

    @property
    def is_vacuous(self) -> bool:
        return self.conflict == 0.0 and set(self._masses) == {self.frame.theta}

    def to_expressions(self) -> dict[str, float]:
        out = {el.expression(): v for el, v in self._masses.items()}
        if self.conflict > 0.0:
            out["∅"] = self.conflict
        return out

    def approx_equals(self, other: "MassFunction", tol: float = MASS_TOL) -> bool:
        if self.frame.signature != other.frame.signature:
            return False
        if abs(self.conflict - other.conflict) > tol:
            return False
        keys = set(self._masses) | set(other._masses)
        return all(abs(self.mass(k) - other.mass(k)) <= tol for k in keys)

    def __len__(self) -> int:
        return len(self._masses)

    def __repr__(self) -> str:
        parts = [f"{el.expression()}: {v:.6g}" for el, v in self._masses.items()]
        if self.conflict:
            parts.append(f"∅: {self.conflict:.6g}")
        return "<MassFunction {" + ", ".join(parts) + "}>"


@dataclass(frozen=True)
class SourceSpec:
    """A source identity with its reliability discount factor."""

    id: str
    reliability: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.reliability <= 1.0:
            raise FusionError(
                f"reliability of source {self.id!r} must lie in [0, 1], "
                f"got {self.reliability}"
            )


def discount(m: MassFunction, alpha: float) -> MassFunction:
    """Classical reliability discounting: m'(A) = α·m(A), rest to Θ."""
    if not 0.0 <= alpha <= 1.0:
        raise FusionError(f"discount factor must lie in [0, 1], got {alpha}")
    if m.conflict:
        raise FusionError("cannot discount an unnormalized mass function")
    if alpha == 1.0:
        return m
    theta = m.frame.theta
    out: dict[FocalElement, float] = {}
    for el, v in m.items():
        if el is not theta:
            out[el] = alpha * v
    out[theta] = alpha * m.mass(theta) + (1.0 - alpha)
    return MassFunction(m.frame, {k: v for k, v in out.items() if v > 0.0})


def _common_frame(ms: list[MassFunction]) -> Frame:
    if len(ms) < 2:
        raise FusionError("combination needs at least two mass functions")
    frame = ms[0].frame
    for m in ms[1:]:
        if m.frame.signature != frame.signature:
            raise FusionError("cannot combine mass functions on different frames")
    for m in ms:
        if m.conflict:
            raise FusionError("combination inputs must be ∅-free")
    return frame


def _build(frame: Frame, out: list[float], conflict: float) -> MassFunction:
    """Assemble a combination result, pruning dust and renormalizing."""
    masses = {
        frame.elements[i]: v for i, v in enumerate(out) if v > PRUNE_EPS
    }
    conflict = conflict if conflict > PRUNE_EPS else 0.0
    total = math.fsum(masses.values()) + conflict
    if total <= 0:
        raise FusionError("combination produced no mass")
    return MassFunction(
        frame,
        {el: v / total for el, v in masses.items()},
        conflict=conflict / total,
    )


def _run_kernel(ms: list[MassFunction], rule: int, backend=None):
    frame = _common_frame(ms)
    indices = [[el.index for el, _ in m.items()] for m in ms]
    masses = [[v for _, v in m.items()] for m in ms]
    return frame, _kernels.combine(rule, frame, indices, masses, backend=backend)


def conjunctive(ms: list[MassFunction], backend=None) -> MassFunction:
    """Unnormalized conjunctive rule; empty intersections accumulate on ∅."""
    frame, (out, conflict) = _run_kernel(ms, _kernels.CONJUNCTIVE, backend)
    return _build(frame, out, conflict)


def dempster(ms: list[MassFunction], backend=None) -> MassFunction:
    """Dempster's rule: conjunctive then conflict normalization (DST only)."""
    frame = _common_frame(ms)
    if frame.mode is not FrameMode.DST:
        raise FrameModeError("Dempster's rule requires a DST frame")
    frame, (out, conflict) = _run_kernel(ms, _kernels.CONJUNCTIVE, backend)
    if conflict >= 1.0 - 1e-12:
        raise TotalConflictError(conflict)
    return _build(frame, out, 0.0)


def pcr6(ms: list[MassFunction], backend=None) -> MassFunction:
    """PCR6: conjunctive agreement plus per-tuple proportional redistribution.

    Not associative; n sources are combined in a single pass over all
    n-tuples of focal elements.
    """
    frame, (out, conflict) = _run_kernel(ms, _kernels.PCR6, backend)
    if conflict > PRUNE_EPS:
        raise FusionError("PCR6 left unredistributed conflict")
    return _build(frame, out, 0.0)


def pcr5(ms: list[MassFunction], backend=None) -> MassFunction:
    """PCR5 for exactly two sources, by its own closed formula.

    For each conflicting pair (A, B): A gains x²y/(x+y) and B gains
    y²x/(x+y) with x = m1(A), y = m2(B).  Coincides with PCR6 on two
    sources; kept separate so the identity is a real cross-check.
    """
    if len(ms) != 2:
        raise FusionError("PCR5 is defined for exactly two sources")
    frame = _common_frame(ms)
    m1, m2 = ms
    out = [0.0] * len(frame.elements)
    for a, x in m1.items():
        for b, y in m2.items():
            c = frame.intersect(a, b)
            if c.is_empty:
                out[a.index] += x * x * y / (x + y)
                out[b.index] += y * y * x / (x + y)
            else:
                out[c.index] += x * y
    return _build(frame, out, 0.0)


def dsm_classic(ms: list[MassFunction], backend=None) -> MassFunction:
    """Conjunctive rule on a free-model frame; intersections never vanish."""
    frame = _common_frame(ms)
    if frame.mode is not FrameMode.DSMT:
        raise FrameModeError("the classic free-model rule requires a DSmT frame")
    frame, (out, conflict) = _run_kernel(ms, _kernels.CONJUNCTIVE, backend)
    if conflict > 0.0:
        raise FusionError("free-model combination produced empty intersections")
    return _build(frame, out, 0.0)


#: Rule names as they appear in scenario documents and CLI flags.
RULES = {
    "conjunctive": conjunctive,
    "dempster": dempster,
    "pcr5": pcr5,
    "pcr6": pcr6,
    "dsm": dsm_classic,
}


def combine_with_rule(rule: str, ms: list[MassFunction], backend=None) -> MassFunction:
    try:
        fn = RULES[rule]
    except KeyError:
        raise FusionError(
            f"unknown rule {rule!r}; expected one of {sorted(RULES)}"
        ) from None
    return fn(ms, backend=backend)


def _shafer_importance(weights: list[float]) -> list[float]:
    top = max(weights)
    if top <= 0:
        raise FusionError("importance weights must contain a positive entry")
    return [w / top for w in weights]


#: Importance factors from criterion weights.  Pluggable seam: the shipped
#: normalization leaves the most important criterion undiscounted, which is
#: known to be a stopgap; register alternatives here.
IMPORTANCE_STRATEGIES = {
    "shafer-discount": _shafer_importance,
    "none": lambda weights: [1.0] * len(weights),
}


@dataclass(frozen=True)
class FusionConfig:
    """Rule and importance-strategy selection for both fusion steps."""

    rule: str = "pcr6"
    importance: str = "shafer-discount"

    def __post_init__(self):
        if self.rule not in RULES:
            raise FusionError(
                f"unknown rule {self.rule!r}; expected one of {sorted(RULES)}"
            )
        if self.importance not in IMPORTANCE_STRATEGIES:
            raise FusionError(
                f"unknown importance strategy {self.importance!r}; "
                f"expected one of {sorted(IMPORTANCE_STRATEGIES)}"
            )


def fuse_sources(
    evaluations: list[tuple[SourceSpec, MassFunction]],
    cfg: FusionConfig,
    backend=None,
) -> MassFunction:
    """Step 1: reliability-discount each source's bba, then combine.

    A single evaluation short-circuits to its discounted bba.  Sources are
    ordered by id so results do not depend on input order.
    """
    if not evaluations:
        raise FusionError("at least one evaluation is required")
    ordered = sorted(evaluations, key=lambda sv: sv[0].id)
    discounted = [discount(m, spec.reliability) for spec, m in ordered]
    if len(discounted) == 1:
        return discounted[0]
    return combine_with_rule(cfg.rule, discounted, backend=backend)


def fuse_criteria(
    per_criterion: list[tuple[str, float, MassFunction]],
    cfg: FusionConfig,
    backend=None,
) -> tuple[MassFunction, dict[str, float]]:
    """Step 2: importance-discount each criterion's bba, then combine.

    ``per_criterion`` holds (leaf id, global weight, step-1 bba) triples with
    weights summing to 1.  Returns the fused bba and the importance factor
    applied to each leaf.
    """
    if not per_criterion:
        raise FusionError("at least one criterion is required")
    ordered = sorted(per_criterion, key=lambda t: t[0])
    weights = [w for _, w, _ in ordered]
    if abs(math.fsum(weights) - 1.0) > 1e-6:
        raise FusionError(f"criterion weights sum to {math.fsum(weights)!r}, expected 1")
    betas = IMPORTANCE_STRATEGIES[cfg.importance](weights)
    factors = {leaf: beta for (leaf, _, _), beta in zip(ordered, betas)}
    discounted = [
        discount(m, beta) for (_, _, m), beta in zip(ordered, betas)
    ]
    if len(discounted) == 1:
        return discounted[0], factors
    return combine_with_rule(cfg.rule, discounted, backend=backend), factors
