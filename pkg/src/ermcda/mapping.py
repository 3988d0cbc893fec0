"""Fuzzy mapping of criterion-axis evaluations onto the decision frame.

Each quantitative criterion carries one trapezoidal membership class per
decision atom.  An evaluation interval turns into masses by surface ratio:
the integral of each class membership over the interval, normalized.  In
free-model (DSmT) frames the min-membership overlap of adjacent classes is
carved out and assigned to their intersection element.  Qualitative criteria
map through authored per-label mass tables discounted by confidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MappingError
from .frame import Atom, FocalElement, Frame, FrameMode
from .fusion import MassFunction, discount


@dataclass(frozen=True)
class Trapezoid:
    """Membership is 0 outside [a, d], 1 on [b, c], linear on the edges.

    a = -inf or d = +inf open the corresponding shoulder (membership 1 all
    the way out); b and c must stay finite.  a = b or c = d give crisp edges.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise MappingError(
                f"trapezoid corners must be ordered: ({self.a}, {self.b}, "
                f"{self.c}, {self.d})"
            )
        if not (math.isfinite(self.b) and math.isfinite(self.c)):
            raise MappingError("trapezoid plateau bounds b, c must be finite")
        if math.isinf(self.a) and self.a > 0:
            raise MappingError("corner a may only be -inf")
        if math.isinf(self.d) and self.d < 0:
            raise MappingError("corner d may only be +inf")

    def membership(self, x: float) -> float:
        if x < self.b:
            if math.isinf(self.a):
                return 1.0
            if x <= self.a:
                return 0.0
            return (x - self.a) / (self.b - self.a)
        if x <= self.c:
            return 1.0
        if math.isinf(self.d):
            return 1.0
        if x >= self.d:
            return 0.0
        return (self.d - x) / (self.d - self.c)

    def knots(self) -> list[float]:
        """Finite breakpoints of the piecewise-linear membership."""
        return [v for v in (self.a, self.b, self.c, self.d) if math.isfinite(v)]


def _segment_points(lo: float, hi: float, traps: list[Trapezoid]) -> list[float]:
    pts = {lo, hi}
    for t in traps:
        for k in t.knots():
            if lo < k < hi:
                pts.add(k)
    return sorted(pts)


def integrate_membership(trap: Trapezoid, lo: float, hi: float) -> float:
    """∫ membership over [lo, hi], exact for the piecewise-linear shape."""
    if lo > hi:
        raise MappingError(f"interval [{lo}, {hi}] is inverted")
    pts = _segment_points(lo, hi, [trap])
    total = 0.0
    for u, v in zip(pts, pts[1:]):
        total += (v - u) * (trap.membership(u) + trap.membership(v)) / 2.0
    return total


def integrate_min_membership(
    t1: Trapezoid, t2: Trapezoid, lo: float, hi: float
) -> float:
    """∫ min(membership₁, membership₂) over [lo, hi], exact.

    Between shared breakpoints both memberships are linear, so min is linear
    except across a single crossing, which is inserted as an extra point.
    """
    if lo > hi:
        raise MappingError(f"interval [{lo}, {hi}] is inverted")
    pts = _segment_points(lo, hi, [t1, t2])
    refined = []
    for u, v in zip(pts, pts[1:]):
        refined.append(u)
        du = t1.membership(u) - t2.membership(u)
        dv = t1.membership(v) - t2.membership(v)
        if du * dv < 0:
            refined.append(u + (v - u) * du / (du - dv))
    refined.append(pts[-1])
    total = 0.0
    for u, v in zip(refined, refined[1:]):
        mu = min(t1.membership(u), t2.membership(u))
        mv = min(t1.membership(v), t2.membership(v))
        total += (v - u) * (mu + mv) / 2.0
    return total


class MappingModel:
    """Ordered fuzzy classes translating one criterion axis to the frame.

    Classes are keyed by atom and ordered by severity rank.  Validation
    enforces disjoint ordered plateaus, no dead zones (membership sums to
    something positive everywhere between the outer plateaus), and overlap
    between adjacent classes only.
    """

    def __init__(self, leaf_id: str, frame: Frame, classes):
        items = list(classes.items()) if hasattr(classes, "items") else list(classes)
        if len(items) != len(frame.atoms):
            raise MappingError(
                f"mapping for {leaf_id!r} needs one class per frame atom "
                f"({len(frame.atoms)}), got {len(items)}"
            )
        resolved: list[tuple[Atom, Trapezoid]] = []
        for atom, trap in items:
            if not isinstance(atom, Atom):
                matches = [a for a in frame.atoms if atom in (a.label, a.id)]
                if not matches:
                    raise MappingError(
                        f"mapping for {leaf_id!r} names unknown atom {atom!r}"
                    )
                atom = matches[0]
            if not isinstance(trap, Trapezoid):
                trap = Trapezoid(*trap)
            resolved.append((atom, trap))
        by_rank = sorted(resolved, key=lambda at: at[0].severity_rank)
        ranks = [a.severity_rank for a, _ in by_rank]
        if ranks != list(range(len(frame.atoms))):
            raise MappingError(
                f"mapping for {leaf_id!r} must cover every atom exactly once"
            )
        self._validate_shape(leaf_id, [t for _, t in by_rank])
        self.leaf_id = leaf_id
        self.frame = frame
        self.classes = tuple(by_rank)

    @staticmethod
    def _validate_shape(leaf_id: str, traps: list[Trapezoid]) -> None:
        for k, (t, u) in enumerate(zip(traps, traps[1:])):
            if not t.c < u.b:
                raise MappingError(
                    f"mapping for {leaf_id!r}: plateaus of classes {k} and "
                    f"{k + 1} must be disjoint and ordered (c={t.c} vs b={u.b})"
                )
            if t.d < u.a:
                raise MappingError(
                    f"mapping for {leaf_id!r}: dead zone between classes "
                    f"{k} and {k + 1} ([{t.d}, {u.a}] has zero membership)"
                )
            if t.d == u.a and t.c != t.d and u.a != u.b:
                raise MappingError(
                    f"mapping for {leaf_id!r}: dead point at {t.d} between "
                    f"classes {k} and {k + 1}"
                )
        for k in range(len(traps) - 2):
            if traps[k].d > traps[k + 2].a:
                raise MappingError(
                    f"mapping for {leaf_id!r}: classes {k} and {k + 2} overlap; "
                    "only adjacent classes may share support"
                )

    @property
    def domain(self) -> tuple[float, float]:
        """The covered span (membership positive somewhere inside)."""
        return self.classes[0][1].a, self.classes[-1][1].d

    def atom_for(self, atom) -> Atom:
        for a, _ in self.classes:
            if a == atom or a.label == atom or a.id == atom:
                return a
        raise MappingError(f"unknown atom {atom!r} in mapping {self.leaf_id!r}")

    def membership(self, atom, x: float) -> float:
        target = self.atom_for(atom)
        for a, t in self.classes:
            if a == target:
                return t.membership(x)
        raise AssertionError("unreachable")


def _raw_components(model: MappingModel, lo: float, hi: float):
    """Per-class weights and adjacent overlaps for one interval.

    Uses areas for real intervals and membership values for points, plus the
    uncovered measure (length or 0/1 for points) outside the model's domain.
    """
    traps = [t for _, t in model.classes]
    if lo == hi:
        areas = [t.membership(lo) for t in traps]
        overlaps = [
            min(t.membership(lo), u.membership(lo)) for t, u in zip(traps, traps[1:])
        ]
        uncovered = 1.0 if math.fsum(areas) == 0.0 else 0.0
        return areas, overlaps, uncovered
    areas = [integrate_membership(t, lo, hi) for t in traps]
    overlaps = [
        integrate_min_membership(t, u, lo, hi) for t, u in zip(traps, traps[1:])
    ]
    start, end = model.domain
    uncovered = max(0.0, min(start, hi) - lo) + max(0.0, hi - max(end, lo))
    return areas, overlaps, uncovered


def map_interval(
    model: MappingModel,
    interval: tuple[float, float],
    slack_to_ignorance: bool = False,
) -> MassFunction:
    """Masses on the frame from one evaluation interval, by surface ratio.

    DST mode normalizes the per-class areas.  Free-model mode assigns each
    adjacent min-membership overlap to the intersection element and subtracts
    it once from each neighbouring class area.  Interval length outside the
    covered domain is an error unless ``slack_to_ignorance`` turns it into
    Θ mass.
    """
    lo, hi = interval
    if lo > hi:
        raise MappingError(f"interval [{lo}, {hi}] is inverted")
    frame = model.frame
    areas, overlaps, uncovered = _raw_components(model, lo, hi)
    if uncovered > 0.0 and not slack_to_ignorance:
        raise MappingError(
            f"interval [{lo}, {hi}] extends outside the mapped domain of "
            f"{model.leaf_id!r}; fix the mapping model or enable slack_to_ignorance"
        )
    weights: dict[FocalElement, float] = {}
    atoms = [a for a, _ in model.classes]
    if frame.mode is FrameMode.DSMT:
        adjusted = list(areas)
        for k, ov in enumerate(overlaps):
            if ov > 0.0:
                adjusted[k] -= ov
                adjusted[k + 1] -= ov
                inter = frame.intersect(
                    frame.atom_element(atoms[k]), frame.atom_element(atoms[k + 1])
                )
                weights[inter] = weights.get(inter, 0.0) + ov
        areas = adjusted
    for atom, area in zip(atoms, areas):
        if area < -1e-9:
            raise MappingError(
                f"negative class weight for {atom.label!r}: {area!r}"
            )
        if area > 0.0:
            el = frame.atom_element(atom)
            weights[el] = weights.get(el, 0.0) + area
    if uncovered > 0.0:
        weights[frame.theta] = weights.get(frame.theta, 0.0) + uncovered
    total = math.fsum(weights.values())
    if total <= 0.0:
        raise MappingError(
            f"interval [{lo}, {hi}] has zero membership in every class of "
            f"{model.leaf_id!r}"
        )
    return MassFunction(
        frame, {el: v / total for el, v in weights.items() if v > 0.0}
    )


def map_interval_mass(
    model: MappingModel,
    interval_masses,
    slack_to_ignorance: bool = False,
) -> MassFunction:
    """Mass-weighted mix of map_interval over ((lo, hi), mass) components."""
    items = list(interval_masses)
    if not items:
        raise MappingError("at least one weighted interval is required")
    total = math.fsum(m for _, m in items)
    if abs(total - 1.0) > 1e-9:
        raise MappingError(f"interval masses sum to {total!r}, expected 1")
    combined: dict[FocalElement, float] = {}
    for j, (iv, m) in enumerate(items):
        if m <= 0:
            raise MappingError(f"interval {j} carries non-positive mass {m}")
        try:
            part = map_interval(model, iv, slack_to_ignorance=slack_to_ignorance)
        except MappingError as exc:
            raise MappingError(f"interval {j}: {exc}") from None
        for el, v in part.items():
            combined[el] = combined.get(el, 0.0) + m * v
    return MassFunction(model.frame, combined)


class QualitativeMapping:
    """Per-label mass tables for a qualitative criterion."""

    def __init__(self, leaf_id: str, frame: Frame, tables: dict[str, dict[str, float]]):
        if not tables:
            raise MappingError(f"qualitative mapping for {leaf_id!r} has no labels")
        parsed: dict[str, MassFunction] = {}
        for label, table in tables.items():
            try:
                parsed[label] = (
                    table
                    if isinstance(table, MassFunction)
                    else MassFunction.from_expressions(frame, table)
                )
            except Exception as exc:
                raise MappingError(
                    f"qualitative mapping for {leaf_id!r}, label {label!r}: {exc}"
                ) from None
        self.leaf_id = leaf_id
        self.frame = frame
        self.tables = parsed

    def labels(self) -> list[str]:
        return sorted(self.tables)


def map_qualitative(
    qm: QualitativeMapping, label: str, confidence: float
) -> MassFunction:
    """The label's authored bba, discounted by the stated confidence."""
    if label not in qm.tables:
        raise MappingError(
            f"unknown label {label!r} for {qm.leaf_id!r}; "
            f"known labels: {qm.labels()}"
        )
    if not 0.0 < confidence <= 1.0:
        raise MappingError(f"confidence must lie in (0, 1], got {confidence}")
    return discount(qm.tables[label], confidence)
