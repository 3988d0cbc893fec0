"""Decision measures and strategies over a final mass function.

Credibility (Bel) reads pessimistically, plausibility (Pl) optimistically,
and the pignistic probability splits masses evenly for a compromise.  The
comparative decision profile tabulates all of them side by side with the
decisions each strategy would take.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import FusionError, TieError
from .frame import FocalElement, Frame, FrameMode
from .fusion import MassFunction

STRATEGIES = ("max-bba", "max-bel", "max-pl", "max-betp")
TIE_BREAKS = ("pessimistic", "optimistic", "error")

#: Exact ties are resolved by tie_break below this gap.
TIE_EPS = 1e-12

#: Gaps under this emit a fragile-decision warning.
NEAR_TIE_THRESHOLD = 0.05


def _check_element(m: MassFunction, a: FocalElement) -> FocalElement:
    if not isinstance(a, FocalElement):
        a = m.frame.parse(a)
    if a.frame.signature != m.frame.signature:
        raise FusionError(f"element {a.expression()} is not on this frame")
    return m.frame.elements[a.index] if not a.is_empty else m.frame.empty


def belief(m: MassFunction, a: FocalElement) -> float:
    """Bel(a): total mass of elements the lattice places inside a."""
    a = _check_element(m, a)
    return math.fsum(v for el, v in m.items() if m.frame.includes(a, el))


def plausibility(m: MassFunction, a: FocalElement) -> float:
    """Pl(a): total mass of elements with non-empty intersection with a."""
    a = _check_element(m, a)
    return math.fsum(v for el, v in m.items() if m.frame.intersects(a, el))


def pignistic(m: MassFunction) -> dict[str, float]:
    """BetP per atom label; needs an ∅-free bba.

    DST mode splits each mass evenly over its atoms.  Free-model elements
    have no atom partition, so masses are split evenly over the Venn regions
    of the element and each region's share evenly over the atoms it names;
    this reduces to the classical transform when atoms are exclusive.
    """
    if m.conflict > 0.0:
        raise FusionError("pignistic transform needs an ∅-free bba; normalize first")
    frame = m.frame
    out = {atom.label: 0.0 for atom in frame.atoms}
    if frame.mode is FrameMode.DST:
        for el, v in m.items():
            ids = el.atom_ids()
            share = v / len(ids)
            for aid in ids:
                out[frame.atoms[aid].label] += share
        return out
    n = len(frame.atoms)
    for el, v in m.items():
        share = v / el.dsm_cardinality()
        for region in range(1, 1 << n):
            if any(t & region == t for t in el.terms):
                ids = [i for i in range(n) if region >> i & 1]
                for aid in ids:
                    out[frame.atoms[aid].label] += share / len(ids)
    return out


@dataclass(frozen=True)
class Decision:
    """One strategy's outcome: the chosen element and its score table."""

    strategy: str
    choice: FocalElement
    scores: dict[str, float]
    tie_break: str
    warnings: tuple[str, ...] = ()


def _severity_key(el: FocalElement) -> tuple:
    sev = max(el.frame.atoms[i].severity_rank for i in el.atom_ids())
    return (sev, -el.index)


def _pick(
    strategy: str,
    candidates: list[tuple[FocalElement, float]],
    tie_break: str,
) -> Decision:
    best = max(v for _, v in candidates)
    tied = [el for el, v in candidates if best - v <= TIE_EPS]
    warnings = []
    if len(tied) > 1:
        if tie_break == "error":
            raise TieError(
                f"{strategy}: tie between {[e.expression() for e in tied]}"
            )
        reverse = tie_break == "pessimistic"
        choice = sorted(tied, key=_severity_key, reverse=reverse)[0]
        warnings.append(
            f"{strategy}: tie between {[e.expression() for e in tied]} broken "
            f"toward {choice.expression()} ({tie_break})"
        )
    else:
        choice = tied[0]
        runners = sorted((v for _, v in candidates), reverse=True)
        if len(runners) > 1 and runners[0] - runners[1] < NEAR_TIE_THRESHOLD:
            warnings.append(
                f"{strategy}: near tie (top gap "
                f"{runners[0] - runners[1]:.4f} < {NEAR_TIE_THRESHOLD})"
            )
    scores = {el.expression(): v for el, v in candidates}
    return Decision(strategy, choice, scores, tie_break, tuple(warnings))


def decide(m: MassFunction, strategy: str, tie_break: str = "pessimistic") -> Decision:
    """Apply one decision strategy to an ∅-free bba.

    max-bba ranges over all frame elements; the belief, plausibility, and
    pignistic strategies rank the atoms.  Ties within 1e-12 are broken by
    severity (pessimistic: most severe wins) or raised, per tie_break.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if tie_break not in TIE_BREAKS:
        raise ValueError(f"unknown tie_break {tie_break!r}; expected one of {TIE_BREAKS}")
    if m.conflict > 0.0:
        raise FusionError("decision needs an ∅-free bba; normalize first")
    frame = m.frame
    if strategy == "max-bba":
        candidates = [(el, m.mass(el)) for el in frame.elements]
    elif strategy == "max-bel":
        candidates = [(frame.atom_element(a), belief(m, frame.atom_element(a))) for a in frame.atoms]
    elif strategy == "max-pl":
        candidates = [
            (frame.atom_element(a), plausibility(m, frame.atom_element(a)))
            for a in frame.atoms
        ]
    else:
        betp = pignistic(m)
        candidates = [(frame.atom_element(a), betp[a.label]) for a in frame.atoms]
    return _pick(strategy, candidates, tie_break)


@dataclass(frozen=True)
class DecisionProfile:
    """The comparative table: m/Bel/Pl per element, BetP per atom, decisions.

    ``conflict`` carries any ∅ mass of the input; rows and measures are then
    computed on the normalized bba and a warning records the normalization.
    """

    frame: Frame
    rows: tuple[tuple[str, float, float, float], ...]
    betp: dict[str, float]
    decisions: dict[str, Decision]
    conflict: float = 0.0
    warnings: tuple[str, ...] = ()

    def row(self, expression: str) -> tuple[str, float, float, float]:
        target = self.frame.parse(expression).expression()
        for r in self.rows:
            if r[0] == target:
                return r
        raise KeyError(expression)

    def to_dict(self) -> dict:
        out = {
            "elements": [
                {"element": e, "mass": m, "bel": b, "pl": p}
                for e, m, b, p in self.rows
            ],
            "betp": dict(self.betp),
            "decisions": {
                name: {
                    "choice": d.choice.expression(),
                    "scores": d.scores,
                    "tie_break": d.tie_break,
                    "warnings": list(d.warnings),
                }
                for name, d in sorted(self.decisions.items())
            },
            "warnings": list(self.warnings),
        }
        if self.conflict:
            out["conflict"] = self.conflict
        return out


def build_profile(m: MassFunction, tie_break: str = "pessimistic") -> DecisionProfile:
    """Tabulate every measure and strategy for one final mass function."""
    warnings: list[str] = []
    conflict = m.conflict
    if conflict > 0.0:
        if conflict >= 1.0 - 1e-12:
            raise FusionError("cannot profile a totally conflicting bba")
        scale = 1.0 / (1.0 - conflict)
        m = MassFunction(
            m.frame, {el: v * scale for el, v in m.items()}
        )
        warnings.append(
            f"∅ mass {conflict:.6g} normalized away for decision measures"
        )
    if m.is_vacuous:
        warnings.append("vacuous bba: maximal ignorance, decisions are arbitrary")
    rows = tuple(
        (el.expression(), m.mass(el), belief(m, el), plausibility(m, el))
        for el in m.frame.elements
    )
    betp = pignistic(m)
    decisions = {s: decide(m, s, tie_break=tie_break) for s in STRATEGIES}
    for d in decisions.values():
        warnings.extend(d.warnings)
    return DecisionProfile(
        frame=m.frame,
        rows=rows,
        betp=betp,
        decisions=decisions,
        conflict=conflict,
        warnings=tuple(warnings),
    )
