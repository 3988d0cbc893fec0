"""Scenario documents and the end-to-end evaluation pipeline.

A scenario bundles the decision frame, the criteria hierarchy with its
judgment matrices, per-leaf mapping artifacts, sources, and evaluations.
Running it derives weights, maps every evaluation onto the frame, fuses per
criterion across sources (step 1), fuses across criteria (step 2), and
tabulates the decision profile.  Reports embed every intermediate artifact
plus an audit log that can be replayed operation by operation.
"""

from __future__ import annotations

import copy
import csv
import io
import json
import math
from dataclasses import dataclass
from importlib import resources

import jsonschema

from .ahp import (
    BRANCH,
    CR_WARNING_THRESHOLD,
    QUALITATIVE,
    QUANTITATIVE,
    CriterionNode,
    Hierarchy,
    PairwiseMatrix,
    consistency_ratio,
    synthesize,
)
from .decision import STRATEGIES, TIE_BREAKS, build_profile
from .errors import (
    ErmcdaError,
    FrameModeError,
    ScenarioError,
    StageError,
)
from .frame import Atom, Frame, FrameMode, build_frame
from .fusion import (
    IMPORTANCE_STRATEGIES,
    RULES,
    FusionConfig,
    MassFunction,
    SourceSpec,
    combine_with_rule,
    discount,
)
from .mapping import (
    MappingModel,
    QualitativeMapping,
    Trapezoid,
    map_interval_mass,
    map_qualitative,
)
from .possibility import IntervalStatement, from_statements

SCHEMA_VERSION = "ermcda/1"
REPORT_VERSION = "ermcda/report/1"
COMPARE_VERSION = "ermcda/compare/1"

STAGES = ("weights", "mapping", "step1", "step2", "decision")

#: Stages invalidated (transitively) when one stage's inputs change.
DOWNSTREAM = {
    "weights": ("weights", "step2", "decision"),
    "mapping": ("mapping", "step1", "step2", "decision"),
    "step1": ("step1", "step2", "decision"),
    "step2": ("step2", "decision"),
    "decision": ("decision",),
}


def scenario_schema() -> dict:
    """The published JSON schema for scenario documents."""
    text = resources.files("ermcda.data").joinpath("scenario.schema.json").read_text(
        encoding="utf-8"
    )
    return json.loads(text)


@dataclass(frozen=True)
class Evaluation:
    """One source's statement about one leaf criterion."""

    source: str
    criterion: str
    intervals: tuple[IntervalStatement, ...] | None = None
    label: str | None = None
    confidence: float = 1.0

    @property
    def kind(self) -> str:
        return "intervals" if self.intervals is not None else "label"


@dataclass
class Scenario:
    """A fully validated scenario, ready to run."""

    frame: Frame
    hierarchy: Hierarchy
    mappings: dict[str, MappingModel | QualitativeMapping]
    sources: list[SourceSpec]
    evaluations: list[Evaluation]
    fusion: FusionConfig
    strategy: str
    tie_break: str
    slack_to_ignorance: bool

    def source(self, source_id: str) -> SourceSpec:
        for s in self.sources:
            if s.id == source_id:
                return s
        raise KeyError(source_id)

    def leaf_ids(self) -> list[str]:
        return [leaf.id for leaf in self.hierarchy.leaves()]


# -- document parsing ------------------------------------------------------


def _corner_in(value) -> float:
    if value == "-inf":
        return -math.inf
    if value == "inf":
        return math.inf
    return float(value)


def _corner_out(value: float):
    if value == -math.inf:
        return "-inf"
    if value == math.inf:
        return "inf"
    return value


def _schema_errors(doc) -> list[tuple[str, str]]:
    validator = jsonschema.Draft7Validator(scenario_schema())
    found = []
    for err in sorted(validator.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path))):
        path = ".".join(str(p) for p in err.absolute_path) or "$"
        found.append((path, err.message))
    return found


def _parse_hierarchy(node_doc: dict, path: str, errors: list) -> CriterionNode | None:
    node_id = node_doc["id"]
    label = node_doc["label"]
    children_docs = node_doc.get("children")
    if children_docs is not None:
        if "kind" in node_doc:
            errors.append((f"{path}.kind", f"branch {node_id!r} cannot declare a leaf kind"))
        judgments = node_doc.get("judgments")
        if judgments is None:
            errors.append(
                (f"{path}.judgments", f"branch {node_id!r} needs a judgment matrix")
            )
            return None
        children = []
        for i, child_doc in enumerate(children_docs):
            child = _parse_hierarchy(child_doc, f"{path}.children.{i}", errors)
            if child is None:
                return None
            children.append(child)
        try:
            matrix = PairwiseMatrix.from_judgments(len(children), judgments)
        except ErmcdaError as exc:
            errors.append((f"{path}.judgments", f"matrix at {node_id!r}: {exc}"))
            return None
        return CriterionNode(
            id=node_id, label=label, kind=BRANCH, children=children, matrix=matrix
        )
    kind = node_doc.get("kind")
    if kind not in (QUANTITATIVE, QUALITATIVE):
        errors.append(
            (f"{path}.kind", f"leaf {node_id!r} needs kind 'quantitative' or 'qualitative'")
        )
        return None
    if "judgments" in node_doc:
        errors.append((f"{path}.judgments", f"leaf {node_id!r} cannot carry judgments"))
        return None
    return CriterionNode(id=node_id, label=label, kind=kind)


def load_scenario(document) -> Scenario:
    """Validate a scenario document (dict or JSON text) into a Scenario.

    Collects every schema and semantic violation it can before raising one
    ScenarioError listing them all, each anchored to a document path.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ScenarioError([("$", f"not valid JSON: {exc}")]) from None
    errors = _schema_errors(document)
    if errors:
        raise ScenarioError(errors)
    errors = []

    atoms = [Atom(i, lbl, i) for i, lbl in enumerate(document["frame"]["atoms"])]
    mode = FrameMode(document["frame"]["mode"])
    try:
        frame = build_frame(atoms, mode)
    except ErmcdaError as exc:
        raise ScenarioError([("frame", str(exc))]) from None

    root = _parse_hierarchy(document["hierarchy"], "hierarchy", errors)
    hierarchy = None
    if root is not None:
        try:
            hierarchy = Hierarchy(root)
        except ErmcdaError as exc:
            errors.append(("hierarchy", str(exc)))
    if hierarchy is None:
        raise ScenarioError(errors)

    leaves = {leaf.id: leaf for leaf in hierarchy.leaves()}
    mappings: dict[str, MappingModel | QualitativeMapping] = {}
    mapping_docs = document["mappings"]
    for leaf_id in sorted(mapping_docs):
        if leaf_id not in leaves:
            errors.append(
                (f"mappings.{leaf_id}", f"no leaf criterion named {leaf_id!r}")
            )
    for leaf_id, leaf in leaves.items():
        doc = mapping_docs.get(leaf_id)
        if doc is None:
            errors.append(("mappings", f"leaf {leaf_id!r} has no mapping artifact"))
            continue
        if leaf.kind == QUANTITATIVE:
            if "classes" not in doc:
                errors.append(
                    (f"mappings.{leaf_id}", "quantitative leaf needs fuzzy classes")
                )
                continue
            try:
                mappings[leaf_id] = MappingModel(
                    leaf_id,
                    frame,
                    [
                        (c["atom"], Trapezoid(_corner_in(c["a"]), float(c["b"]),
                                              float(c["c"]), _corner_in(c["d"])))
                        for c in doc["classes"]
                    ],
                )
            except ErmcdaError as exc:
                errors.append((f"mappings.{leaf_id}", str(exc)))
        else:
            if "labels" not in doc:
                errors.append(
                    (f"mappings.{leaf_id}", "qualitative leaf needs a label table")
                )
                continue
            try:
                mappings[leaf_id] = QualitativeMapping(leaf_id, frame, doc["labels"])
            except ErmcdaError as exc:
                errors.append((f"mappings.{leaf_id}", str(exc)))

    sources: list[SourceSpec] = []
    seen_sources: set[str] = set()
    for i, sdoc in enumerate(document["sources"]):
        if sdoc["id"] in seen_sources:
            errors.append((f"sources.{i}", f"duplicate source id {sdoc['id']!r}"))
            continue
        seen_sources.add(sdoc["id"])
        try:
            sources.append(SourceSpec(sdoc["id"], float(sdoc.get("reliability", 1.0))))
        except ErmcdaError as exc:
            errors.append((f"sources.{i}", str(exc)))

    evaluations: list[Evaluation] = []
    seen_pairs: set[tuple[str, str]] = set()
    for i, edoc in enumerate(document["evaluations"]):
        path = f"evaluations.{i}"
        src, crit = edoc["source"], edoc["criterion"]
        if src not in seen_sources:
            errors.append((path, f"unknown source {src!r}"))
            continue
        leaf = leaves.get(crit)
        if leaf is None:
            errors.append((path, f"unknown leaf criterion {crit!r}"))
            continue
        if (src, crit) in seen_pairs:
            errors.append((path, f"duplicate evaluation for ({src!r}, {crit!r})"))
            continue
        seen_pairs.add((src, crit))
        if "intervals" in edoc:
            if leaf.kind != QUANTITATIVE:
                errors.append(
                    (path, f"interval evaluation on qualitative leaf {crit!r}")
                )
                continue
            statements = tuple(
                IntervalStatement(float(iv["lo"]), float(iv["hi"]), float(iv["confidence"]))
                for iv in edoc["intervals"]
            )
            try:
                from_statements(list(statements))
            except ErmcdaError as exc:
                errors.append((f"{path}.intervals", str(exc)))
                continue
            evaluations.append(Evaluation(src, crit, intervals=statements))
        else:
            if leaf.kind != QUALITATIVE:
                errors.append(
                    (path, f"label evaluation on quantitative leaf {crit!r}")
                )
                continue
            qm = mappings.get(crit)
            label = edoc["label"]
            confidence = float(edoc.get("confidence", 1.0))
            if isinstance(qm, QualitativeMapping) and label not in qm.tables:
                errors.append(
                    (f"{path}.label", f"unknown label {label!r} for leaf {crit!r}")
                )
                continue
            if not 0.0 < confidence <= 1.0:
                errors.append(
                    (f"{path}.confidence", f"confidence {confidence} outside (0, 1]")
                )
                continue
            evaluations.append(Evaluation(src, crit, label=label, confidence=confidence))

    evaluated = {e.criterion for e in evaluations}
    for leaf_id in leaves:
        if leaf_id not in evaluated:
            errors.append(("evaluations", f"leaf {leaf_id!r} has no evaluations"))

    fusion_doc = document.get("fusion", {})
    fusion = None
    try:
        fusion = FusionConfig(
            rule=fusion_doc.get("rule", "pcr6"),
            importance=fusion_doc.get("importance", "shafer-discount"),
        )
    except ErmcdaError as exc:
        errors.append(("fusion", str(exc)))
    if fusion is not None:
        mode_error = rule_mode_error(fusion.rule, frame.mode)
        if mode_error:
            errors.append(("fusion.rule", mode_error))
        if fusion.rule == "pcr5":
            by_leaf: dict[str, int] = {}
            for e in evaluations:
                by_leaf[e.criterion] = by_leaf.get(e.criterion, 0) + 1
            over = sorted(k for k, v in by_leaf.items() if v > 2)
            if over:
                errors.append(
                    ("fusion.rule", f"pcr5 takes two sources; leaves {over} have more")
                )
            if len(leaves) > 2:
                errors.append(
                    ("fusion.rule", f"pcr5 takes two criteria; hierarchy has {len(leaves)}")
                )

    decision_doc = document.get("decision", {})
    strategy = decision_doc.get("strategy", "max-betp")
    tie_break = decision_doc.get("tie_break", "pessimistic")
    options = document.get("options", {})
    slack = bool(options.get("slack_to_ignorance", False))

    if errors:
        raise ScenarioError(errors)
    return Scenario(
        frame=frame,
        hierarchy=hierarchy,
        mappings=mappings,
        sources=sorted(sources, key=lambda s: s.id),
        evaluations=sorted(evaluations, key=lambda e: (e.criterion, e.source)),
        fusion=fusion,
        strategy=strategy,
        tie_break=tie_break,
        slack_to_ignorance=slack,
    )


def rule_mode_error(rule: str, mode: FrameMode | str) -> str | None:
    """Why a rule cannot run on a frame mode, or None if it can."""
    mode = FrameMode(mode)
    if rule == "dempster" and mode is not FrameMode.DST:
        return "Dempster's rule requires a DST frame"
    if rule == "dsm" and mode is not FrameMode.DSMT:
        return "the free-model rule requires a DSmT frame"
    return None


def _node_doc(node: CriterionNode) -> dict:
    if node.kind == BRANCH:
        return {
            "id": node.id,
            "label": node.label,
            "children": [_node_doc(c) for c in node.children],
            "judgments": node.matrix.to_judgments(),
        }
    return {"id": node.id, "label": node.label, "kind": node.kind}


def _mapping_doc(artifact) -> dict:
    if isinstance(artifact, MappingModel):
        return {
            "classes": [
                {
                    "atom": atom.label,
                    "a": _corner_out(t.a),
                    "b": t.b,
                    "c": t.c,
                    "d": _corner_out(t.d),
                }
                for atom, t in artifact.classes
            ]
        }
    return {
        "labels": {
            label: dict(sorted(bba.to_expressions().items()))
            for label, bba in sorted(artifact.tables.items())
        }
    }


def scenario_to_doc(scenario: Scenario) -> dict:
    """The canonical document: sorted sources/evaluations, sentinel corners."""
    evaluations = []
    for e in scenario.evaluations:
        edoc: dict = {"source": e.source, "criterion": e.criterion}
        if e.kind == "intervals":
            edoc["intervals"] = [
                {"lo": iv.lo, "hi": iv.hi, "confidence": iv.confidence}
                for iv in e.intervals
            ]
        else:
            edoc["label"] = e.label
            edoc["confidence"] = e.confidence
        evaluations.append(edoc)
    return {
        "schema": SCHEMA_VERSION,
        "frame": {
            "mode": scenario.frame.mode.value,
            "atoms": [a.label for a in scenario.frame.atoms],
        },
        "hierarchy": _node_doc(scenario.hierarchy.root),
        "mappings": {
            leaf: _mapping_doc(m) for leaf, m in sorted(scenario.mappings.items())
        },
        "sources": [
            {"id": s.id, "reliability": s.reliability} for s in scenario.sources
        ],
        "evaluations": evaluations,
        "fusion": {
            "rule": scenario.fusion.rule,
            "importance": scenario.fusion.importance,
        },
        "decision": {"strategy": scenario.strategy, "tie_break": scenario.tie_break},
        "options": {"slack_to_ignorance": scenario.slack_to_ignorance},
    }


# -- pipeline stages --------------------------------------------------------


def _bba_doc(m: MassFunction) -> dict[str, float]:
    return m.to_expressions()


def stage_weights(scenario: Scenario) -> dict:
    """Derive local/global weights and consistency ratios for every matrix."""
    try:
        leaf_weights = synthesize(scenario.hierarchy)
    except ErmcdaError as exc:
        raise StageError("weights", scenario.hierarchy.root.id, exc) from exc
    nodes = {}
    consistency = {}
    warnings = []
    audit = []
    for node in scenario.hierarchy.nodes():
        nodes[node.id] = {
            "local": node.local_weight,
            "global": node.global_weight,
        }
        if node.kind == BRANCH:
            try:
                c = consistency_ratio(node.matrix)
            except ErmcdaError as exc:
                raise StageError("weights", node.id, exc) from exc
            consistency[node.id] = {
                "lambda_max": c.lambda_max,
                "ci": c.ci,
                "cr": c.cr,
            }
            if c.cr > CR_WARNING_THRESHOLD:
                warnings.append(
                    f"matrix at {node.id!r}: CR {c.cr:.4f} exceeds {CR_WARNING_THRESHOLD}"
                )
            audit.append(
                {
                    "stage": "weights",
                    "op": "derive-weights",
                    "node": node.id,
                    "weights": [c2.local_weight for c2 in node.children],
                    "cr": c.cr,
                }
            )
    return {
        "leaves": leaf_weights,
        "nodes": nodes,
        "consistency": consistency,
        "warnings": warnings,
        "audit": audit,
    }


def stage_mapping(scenario: Scenario) -> list[dict]:
    """Map every (source, criterion) evaluation onto the decision frame."""
    out = []
    for e in scenario.evaluations:
        artifact = scenario.mappings[e.criterion]
        entity = f"{e.criterion}/{e.source}"
        staircase = None
        try:
            if e.kind == "intervals":
                dist = from_statements(list(e.intervals))
                # published so viewers can draw the distribution and quote
                # per-statement certainty without recomputing anything
                staircase = {
                    "cuts": [[lo, hi, level] for (lo, hi), level in dist.cuts],
                    "necessity": [
                        {"lo": s.lo, "hi": s.hi, "value": dist.necessity(s.lo, s.hi)}
                        for s in e.intervals
                    ],
                }
                bba = map_interval_mass(
                    artifact,
                    dist.to_interval_masses(),
                    slack_to_ignorance=scenario.slack_to_ignorance,
                )
            else:
                bba = map_qualitative(artifact, e.label, e.confidence)
        except ErmcdaError as exc:
            raise StageError("mapping", entity, exc) from exc
        out.append(
            {
                "source": e.source,
                "criterion": e.criterion,
                "bba": bba,
                "staircase": staircase,
                "audit": {
                    "stage": "mapping",
                    "op": "map-evaluation",
                    "source": e.source,
                    "criterion": e.criterion,
                    "output": _bba_doc(bba),
                },
            }
        )
    return out


def stage_step1(scenario: Scenario, mapped: list[dict], rule: str | None = None) -> dict:
    """Fuse each criterion's evaluations across sources after discounting."""
    rule = rule or scenario.fusion.rule
    by_leaf: dict[str, list[dict]] = {}
    for entry in mapped:
        by_leaf.setdefault(entry["criterion"], []).append(entry)
    out = {}
    for leaf in sorted(by_leaf):
        entries = sorted(by_leaf[leaf], key=lambda d: d["source"])
        audit = []
        discounted = []
        for entry in entries:
            spec = scenario.source(entry["source"])
            try:
                d = discount(entry["bba"], spec.reliability)
            except ErmcdaError as exc:
                raise StageError("step1", f"{leaf}/{spec.id}", exc) from exc
            discounted.append(d)
            audit.append(
                {
                    "stage": "step1",
                    "op": "discount",
                    "criterion": leaf,
                    "source": spec.id,
                    "alpha": spec.reliability,
                    "input": _bba_doc(entry["bba"]),
                    "output": _bba_doc(d),
                }
            )
        if len(discounted) == 1:
            fused = discounted[0]
        else:
            try:
                fused = combine_with_rule(rule, discounted)
            except ErmcdaError as exc:
                raise StageError("step1", leaf, exc) from exc
            audit.append(
                {
                    "stage": "step1",
                    "op": "combine",
                    "criterion": leaf,
                    "rule": rule,
                    "inputs": [_bba_doc(d) for d in discounted],
                    "output": _bba_doc(fused),
                }
            )
        out[leaf] = {
            "sources": [entry["source"] for entry in entries],
            "bba": fused,
            "audit": audit,
        }
    return out


def stage_step2(
    scenario: Scenario, weights: dict, step1: dict, rule: str | None = None
) -> dict:
    """Fuse the per-criterion bbas after importance discounting."""
    rule = rule or scenario.fusion.rule
    leaves = sorted(step1)
    w = [weights["leaves"][leaf] for leaf in leaves]
    betas = IMPORTANCE_STRATEGIES[scenario.fusion.importance](w)
    audit = []
    discounted = []
    for leaf, beta in zip(leaves, betas):
        try:
            d = discount(step1[leaf]["bba"], beta)
        except ErmcdaError as exc:
            raise StageError("step2", leaf, exc) from exc
        discounted.append(d)
        audit.append(
            {
                "stage": "step2",
                "op": "discount",
                "criterion": leaf,
                "beta": beta,
                "input": _bba_doc(step1[leaf]["bba"]),
                "output": _bba_doc(d),
            }
        )
    if len(discounted) == 1:
        final = discounted[0]
    else:
        try:
            final = combine_with_rule(rule, discounted)
        except ErmcdaError as exc:
            raise StageError("step2", scenario.hierarchy.root.id, exc) from exc
        audit.append(
            {
                "stage": "step2",
                "op": "combine",
                "rule": rule,
                "inputs": [_bba_doc(d) for d in discounted],
                "output": _bba_doc(final),
            }
        )
    return {
        "final": final,
        "importance": dict(zip(leaves, betas)),
        "audit": audit,
    }


def stage_decision(scenario: Scenario, step2: dict, strategy: str | None = None) -> dict:
    """Build the comparative profile and extract the configured decision."""
    strategy = strategy or scenario.strategy
    if strategy not in STRATEGIES:
        raise StageError(
            "decision", strategy, ValueError(f"unknown strategy {strategy!r}")
        )
    try:
        profile = build_profile(step2["final"], tie_break=scenario.tie_break)
    except ErmcdaError as exc:
        raise StageError("decision", strategy, exc) from exc
    chosen = profile.decisions[strategy]
    return {
        "profile": profile,
        "strategy": strategy,
        "audit": [
            {
                "stage": "decision",
                "op": "decide",
                "strategy": strategy,
                "choice": chosen.choice.expression(),
            }
        ],
    }


def assemble_report(
    scenario: Scenario,
    weights: dict,
    mapped: list[dict],
    step1: dict,
    step2: dict,
    decision: dict,
    lean: bool = False,
) -> dict:
    profile = decision["profile"]
    chosen = profile.decisions[decision["strategy"]]
    report = {
        "schema": REPORT_VERSION,
        "scenario": scenario_to_doc(scenario),
        "rule": scenario.fusion.rule,
        "weights": {
            "leaves": weights["leaves"],
            "nodes": weights["nodes"],
            "consistency": weights["consistency"],
            "warnings": weights["warnings"],
        },
        "importance": step2["importance"],
        "final": {"bba": _bba_doc(step2["final"])},
        "profile": profile.to_dict(),
        "decision": {
            "strategy": decision["strategy"],
            "tie_break": scenario.tie_break,
            "choice": chosen.choice.expression(),
            "warnings": list(chosen.warnings),
        },
    }
    if not lean:
        evaluations = []
        for entry in mapped:
            doc = {
                "source": entry["source"],
                "criterion": entry["criterion"],
                "bba": _bba_doc(entry["bba"]),
            }
            if entry.get("staircase") is not None:
                doc["staircase"] = entry["staircase"]
            evaluations.append(doc)
        report["evaluations"] = evaluations
        report["step1"] = {
            leaf: {"sources": art["sources"], "bba": _bba_doc(art["bba"])}
            for leaf, art in step1.items()
        }
        audit = list(weights["audit"])
        for entry in mapped:
            audit.append(entry["audit"])
        for leaf in sorted(step1):
            audit.extend(step1[leaf]["audit"])
        audit.extend(step2["audit"])
        audit.extend(decision["audit"])
        report["audit"] = audit
    return report


def run(scenario: Scenario, lean: bool = False) -> dict:
    """Execute all five stages and return the full report document."""
    weights = stage_weights(scenario)
    mapped = stage_mapping(scenario)
    step1 = stage_step1(scenario, mapped)
    step2 = stage_step2(scenario, weights, step1)
    decision = stage_decision(scenario, step2)
    return assemble_report(scenario, weights, mapped, step1, step2, decision, lean=lean)


def serialize_report(report: dict) -> str:
    """Canonical, byte-stable JSON serialization."""
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def serialize_scenario(scenario: Scenario) -> str:
    return json.dumps(
        scenario_to_doc(scenario), sort_keys=True, indent=2, ensure_ascii=False
    ) + "\n"


def compare_rules(scenario: Scenario, rules: list[str]) -> dict:
    """Run several rules over shared weights/mapping artifacts, side by side."""
    if len(rules) < 2:
        raise ErmcdaError("rule comparison needs at least two rules")
    for rule in rules:
        if rule not in RULES:
            raise ErmcdaError(f"unknown rule {rule!r}; expected one of {sorted(RULES)}")
        msg = rule_mode_error(rule, scenario.frame.mode)
        if msg:
            raise FrameModeError(f"rule {rule!r}: {msg}")
    weights = stage_weights(scenario)
    mapped = stage_mapping(scenario)
    reports = {}
    for rule in rules:
        rescoped = copy.copy(scenario)
        rescoped.fusion = FusionConfig(rule=rule, importance=scenario.fusion.importance)
        step1 = stage_step1(rescoped, mapped, rule=rule)
        step2 = stage_step2(rescoped, weights, step1, rule=rule)
        decision = stage_decision(rescoped, step2)
        reports[rule] = assemble_report(
            rescoped, weights, mapped, step1, step2, decision
        )
    decisions = {
        strategy: {
            rule: reports[rule]["profile"]["decisions"][strategy]["choice"]
            for rule in rules
        }
        for strategy in STRATEGIES
    }
    warnings = []
    for strategy in STRATEGIES:
        choices = set(decisions[strategy].values())
        if len(choices) > 1:
            warnings.append(
                f"rules disagree under {strategy}: "
                + ", ".join(f"{r}={decisions[strategy][r]}" for r in rules)
            )
    return {
        "schema": COMPARE_VERSION,
        "rules": list(rules),
        "reports": reports,
        "decisions": decisions,
        "divergent": bool(warnings),
        "warnings": warnings,
    }


def replay_audit(report: dict) -> dict[str, float]:
    """Re-execute the audit log and return the reproduced final bba.

    Every discount and combine entry is recomputed from its logged inputs and
    checked against its logged output; a mismatch raises.  The last entry's
    output is the final mass function of the run.
    """
    frame_doc = report["scenario"]["frame"]
    atoms = [Atom(i, lbl, i) for i, lbl in enumerate(frame_doc["atoms"])]
    frame = build_frame(atoms, FrameMode(frame_doc["mode"]))

    def bba_from(doc: dict) -> MassFunction:
        masses = {k: v for k, v in doc.items() if k != "∅"}
        return MassFunction(
            frame,
            {frame.parse(k): v for k, v in masses.items()},
            conflict=doc.get("∅", 0.0),
        )

    def check(expected: dict, actual: MassFunction, entry: dict) -> None:
        produced = actual.to_expressions()
        keys = set(expected) | set(produced)
        for k in keys:
            if abs(expected.get(k, 0.0) - produced.get(k, 0.0)) > 1e-12:
                raise ErmcdaError(
                    f"audit replay diverged at {entry['stage']}/{entry['op']}: "
                    f"{k} {expected.get(k, 0.0)} != {produced.get(k, 0.0)}"
                )

    last_output: dict[str, float] | None = None
    for entry in report.get("audit", []):
        op = entry["op"]
        if op == "discount":
            alpha = entry.get("alpha", entry.get("beta"))
            result = discount(bba_from(entry["input"]), alpha)
            check(entry["output"], result, entry)
            last_output = entry["output"]
        elif op == "combine":
            inputs = [bba_from(doc) for doc in entry["inputs"]]
            result = combine_with_rule(entry["rule"], inputs)
            check(entry["output"], result, entry)
            last_output = entry["output"]
        elif op == "map-evaluation":
            last_output = entry["output"]
    if last_output is None:
        raise ErmcdaError("report has no replayable audit entries")
    return last_output


# -- tabular exports ---------------------------------------------------------

CSV_HEADER = ["rule", "element", "mass", "bel", "pl", "betp"]


def _profile_csv_rows(rule: str, profile_doc: dict) -> list[list[str]]:
    betp = profile_doc["betp"]
    rows = []
    for row in profile_doc["elements"]:
        element = row["element"]
        rows.append(
            [
                rule,
                element,
                repr(row["mass"]),
                repr(row["bel"]),
                repr(row["pl"]),
                repr(betp[element]) if element in betp else "",
            ]
        )
    return rows


def report_to_csv(report: dict) -> str:
    """Profile table as CSV, one row per frame element."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(_profile_csv_rows(report["rule"], report["profile"]))
    return buf.getvalue()


def compare_to_csv(comparison: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rule in comparison["rules"]:
        writer.writerows(
            _profile_csv_rows(rule, comparison["reports"][rule]["profile"])
        )
    return buf.getvalue()


def report_to_text(report: dict) -> str:
    """Human-readable profile table."""
    lines = []
    decision = report["decision"]
    lines.append(
        f"rule: {report['rule']}   strategy: {decision['strategy']}   "
        f"decision: {decision['choice']}"
    )
    lines.append("")
    lines.append(f"{'element':<24}{'mass':>12}{'bel':>12}{'pl':>12}{'betp':>12}")
    betp = report["profile"]["betp"]
    for row in report["profile"]["elements"]:
        el = row["element"]
        betp_cell = f"{betp[el]:>12.6f}" if el in betp else f"{'':>12}"
        lines.append(
            f"{el:<24}{row['mass']:>12.6f}{row['bel']:>12.6f}{row['pl']:>12.6f}"
            + betp_cell
        )
    warnings = list(report["profile"].get("warnings", []))
    if warnings:
        lines.append("")
        lines.extend(f"warning: {w}" for w in warnings)
    return "\n".join(lines) + "\n"


def compare_to_text(comparison: dict) -> str:
    blocks = [report_to_text(comparison["reports"][r]) for r in comparison["rules"]]
    lines = ["\n".join(blocks)]
    lines.append("decisions per strategy:")
    for strategy in STRATEGIES:
        row = comparison["decisions"][strategy]
        lines.append(
            f"  {strategy:<10} "
            + "  ".join(f"{r}={row[r]}" for r in comparison["rules"])
        )
    for w in comparison["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"
