"""Evidential reasoning for multi-criteria decision analysis.

Criteria weights come from pairwise comparison matrices, expert inputs are
possibility distributions or qualitative labels, fuzzy interval mapping turns
them into mass functions over a common decision frame, and two fusion steps
(across sources, then across criteria) yield a decision profile.
"""

from .ahp import (
    CriterionNode,
    Hierarchy,
    PairwiseMatrix,
    consistency_ratio,
    derive_weights,
    synthesize,
)
from .decision import Decision, DecisionProfile, build_profile, decide, pignistic
from .errors import (
    ConvergenceError,
    DistributionError,
    ErmcdaError,
    FrameError,
    FrameModeError,
    FusionError,
    MappingError,
    MatrixError,
    ScenarioError,
    StageError,
    TotalConflictError,
)
from .frame import Atom, FocalElement, Frame, FrameMode, build_frame, frame_from_labels
from .fusion import (
    RULES,
    FusionConfig,
    MassFunction,
    SourceSpec,
    combine_with_rule,
    discount,
    fuse_criteria,
    fuse_sources,
)
from .mapping import MappingModel, QualitativeMapping, Trapezoid
from .pipeline import (
    Scenario,
    compare_rules,
    load_scenario,
    run,
    serialize_report,
    serialize_scenario,
)
from .possibility import IntervalStatement, PossibilityDistribution

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "ConvergenceError",
    "CriterionNode",
    "Decision",
    "DecisionProfile",
    "DistributionError",
    "ErmcdaError",
    "FocalElement",
    "Frame",
    "FrameError",
    "FrameMode",
    "FrameModeError",
    "FusionConfig",
    "FusionError",
    "Hierarchy",
    "IntervalStatement",
    "MappingError",
    "MappingModel",
    "MassFunction",
    "MatrixError",
    "PairwiseMatrix",
    "PossibilityDistribution",
    "QualitativeMapping",
    "RULES",
    "Scenario",
    "ScenarioError",
    "SourceSpec",
    "StageError",
    "TotalConflictError",
    "Trapezoid",
    "build_frame",
    "build_profile",
    "combine_with_rule",
    "compare_rules",
    "consistency_ratio",
    "decide",
    "derive_weights",
    "discount",
    "frame_from_labels",
    "fuse_criteria",
    "fuse_sources",
    "load_scenario",
    "pignistic",
    "run",
    "serialize_report",
    "serialize_scenario",
    "synthesize",
    "__version__",
]
