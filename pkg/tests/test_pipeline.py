"""Scenario documents, staged execution, reports, audit replay, and the CLI.

The bundled reference scenario doubles as a regression anchor: its weights
and final decision are asserted against hand-derived values.
"""

import copy
import json

import pytest

from ermcda import (
    FrameModeError,
    ScenarioError,
    compare_rules,
    load_scenario,
    run,
    serialize_report,
    serialize_scenario,
)
from ermcda.cli import main
from ermcda.data import EXAMPLES, load_example
from ermcda.errors import ErmcdaError, StageError
from ermcda.pipeline import (
    DOWNSTREAM,
    STAGES,
    compare_to_csv,
    compare_to_text,
    replay_audit,
    report_to_csv,
    report_to_text,
    rule_mode_error,
    scenario_schema,
)


def reference() -> dict:
    return load_example("reference")


def minimal_doc() -> dict:
    """Single source, single quantitative leaf as the hierarchy root."""
    return {
        "schema": "ermcda/1",
        "frame": {"mode": "DST", "atoms": ["low", "high"]},
        "hierarchy": {"id": "only", "label": "Only criterion", "kind": "quantitative"},
        "mappings": {
            "only": {
                "classes": [
                    {"atom": "low", "a": "-inf", "b": 0, "c": 4, "d": 6},
                    {"atom": "high", "a": 4, "b": 6, "c": 10, "d": "inf"},
                ]
            }
        },
        "sources": [{"id": "solo", "reliability": 1.0}],
        "evaluations": [
            {
                "source": "solo",
                "criterion": "only",
                "intervals": [{"lo": 3, "hi": 7, "confidence": 1.0}],
            }
        ],
    }


def error_paths(exc_info) -> list[str]:
    return [path for path, _ in exc_info.value.errors]


# -- loading and validation --------------------------------------------------


def test_reference_scenario_loads():
    scenario = load_scenario(reference())
    assert scenario.leaf_ids() == ["occupants", "infrastructure", "hazard"]
    assert [s.id for s in scenario.sources] == ["expert-a", "expert-b"]
    assert len(scenario.evaluations) == 6
    assert scenario.fusion.rule == "pcr6"
    assert scenario.strategy == "max-betp"


def test_every_bundled_example_loads_and_runs():
    for name in EXAMPLES:
        report = run(load_scenario(load_example(name)))
        assert report["decision"]["choice"]


def test_scenario_accepts_json_text():
    scenario = load_scenario(json.dumps(reference()))
    assert scenario.leaf_ids() == ["occupants", "infrastructure", "hazard"]


def test_invalid_json_text_reports_root_path():
    with pytest.raises(ScenarioError) as exc:
        load_scenario("{not json")
    assert error_paths(exc) == ["$"]


def test_schema_errors_carry_document_paths():
    doc = reference()
    doc["frame"]["mode"] = "XXX"
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert "frame.mode" in error_paths(exc)

    doc = reference()
    del doc["sources"]
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert error_paths(exc) == ["$"]
    assert "sources" in exc.value.errors[0][1]

    # evaluation item schemas are alternatives, so the path stops at the item
    doc = reference()
    doc["evaluations"][0]["intervals"][0]["confidence"] = "high"
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert "evaluations.0" in error_paths(exc)


def test_unknown_source_rejected():
    doc = reference()
    doc["evaluations"][0]["source"] = "ghost"
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert ("evaluations.0", "unknown source 'ghost'") in exc.value.errors


def test_duplicate_evaluation_rejected():
    doc = reference()
    doc["evaluations"].append(copy.deepcopy(doc["evaluations"][0]))
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert any(
        "duplicate evaluation" in msg and path == "evaluations.6"
        for path, msg in exc.value.errors
    )


def test_leaf_without_evaluations_rejected():
    doc = reference()
    doc["evaluations"] = [
        e for e in doc["evaluations"] if e["criterion"] != "occupants"
    ]
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert ("evaluations", "leaf 'occupants' has no evaluations") in exc.value.errors


def test_unknown_qualitative_label_rejected():
    doc = reference()
    doc["evaluations"][2]["label"] = "palatial"
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert any(
        path == "evaluations.2.label" and "palatial" in msg
        for path, msg in exc.value.errors
    )


def test_interval_evaluation_on_qualitative_leaf_rejected():
    doc = reference()
    doc["evaluations"][2] = {
        "source": "expert-a",
        "criterion": "infrastructure",
        "intervals": [{"lo": 1, "hi": 2, "confidence": 1.0}],
    }
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert any("qualitative leaf" in msg for _, msg in exc.value.errors)


def test_pcr5_arity_is_checked_at_load_time():
    doc = reference()
    doc["fusion"]["rule"] = "pcr5"
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert any(
        path == "fusion.rule" and "two criteria" in msg and "3" in msg
        for path, msg in exc.value.errors
    )


def test_dempster_rejected_on_free_model_frame():
    doc = load_example("free-model")
    doc["fusion"]["rule"] = "dempster"
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert any(
        path == "fusion.rule" and "DST frame" in msg for path, msg in exc.value.errors
    )


def test_bad_judgment_vector_names_the_matrix():
    doc = reference()
    doc["hierarchy"]["judgments"] = [2.0, 3.0]  # 2 children need exactly 1
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert any(
        path == "hierarchy.judgments" and "'sensitivity'" in msg
        for path, msg in exc.value.errors
    )


def test_leaf_with_judgments_rejected():
    doc = minimal_doc()
    doc["hierarchy"]["judgments"] = [1.0]
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert any("cannot carry judgments" in msg for _, msg in exc.value.errors)


def test_mapping_for_unknown_leaf_rejected():
    doc = minimal_doc()
    doc["mappings"]["phantom"] = doc["mappings"]["only"]
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert any(
        path == "mappings.phantom" and "no leaf criterion" in msg
        for path, msg in exc.value.errors
    )


def test_leaf_without_mapping_rejected():
    doc = reference()
    del doc["mappings"]["hazard"]
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    assert ("mappings", "leaf 'hazard' has no mapping artifact") in exc.value.errors


def test_errors_are_collected_not_first_only():
    doc = reference()
    doc["evaluations"][0]["source"] = "ghost"
    del doc["mappings"]["hazard"]
    with pytest.raises(ScenarioError) as exc:
        load_scenario(doc)
    paths = error_paths(exc)
    assert "evaluations.0" in paths and "mappings" in paths


def test_rule_mode_error_table():
    assert rule_mode_error("dempster", "DST") is None
    assert "DST frame" in rule_mode_error("dempster", "DSmT")
    assert rule_mode_error("dsm", "DSmT") is None
    assert "DSmT frame" in rule_mode_error("dsm", "DST")
    for rule in ("conjunctive", "pcr5", "pcr6"):
        assert rule_mode_error(rule, "DST") is None
        assert rule_mode_error(rule, "DSmT") is None


def test_stage_names_and_downstream_closure():
    assert set(DOWNSTREAM) == set(STAGES)
    for stage, invalidated in DOWNSTREAM.items():
        assert invalidated[0] == stage
        # downstream lists preserve pipeline order
        indices = [STAGES.index(s) for s in invalidated]
        assert indices == sorted(indices)


def test_schema_is_a_valid_draft7_document():
    import jsonschema

    jsonschema.Draft7Validator.check_schema(scenario_schema())


# -- canonical serialization -------------------------------------------------


def test_scenario_round_trip_is_canonical():
    scenario = load_scenario(reference())
    text = serialize_scenario(scenario)
    again = load_scenario(json.loads(text))
    assert serialize_scenario(again) == text
    # open shoulders survive the trip as the string corners
    doc = json.loads(text)
    assert doc["mappings"]["occupants"]["classes"][0]["a"] == "-inf"
    assert doc["mappings"]["occupants"]["classes"][-1]["d"] == "inf"


def test_document_order_does_not_change_the_report():
    doc = reference()
    shuffled = copy.deepcopy(doc)
    shuffled["sources"].reverse()
    shuffled["evaluations"].reverse()
    shuffled["mappings"] = dict(reversed(list(shuffled["mappings"].items())))
    a = serialize_report(run(load_scenario(doc)))
    b = serialize_report(run(load_scenario(shuffled)))
    assert a == b


def test_run_is_deterministic_byte_for_byte():
    a = serialize_report(run(load_scenario(reference())))
    b = serialize_report(run(load_scenario(reference())))
    assert a == b


# -- staged execution --------------------------------------------------------


def test_reference_weights_are_the_hand_derived_values():
    report = run(load_scenario(reference()))
    leaves = report["weights"]["leaves"]
    assert leaves["occupants"] == pytest.approx(0.5, abs=1e-9)
    assert leaves["infrastructure"] == pytest.approx(1 / 6, abs=1e-9)
    assert leaves["hazard"] == pytest.approx(1 / 3, abs=1e-9)
    for node in ("sensitivity", "vulnerability"):
        assert report["weights"]["consistency"][node]["cr"] == pytest.approx(
            0.0, abs=1e-12
        )
    assert report["weights"]["warnings"] == []


def test_reference_importance_factors_scale_to_unit_max():
    report = run(load_scenario(reference()))
    imp = report["importance"]
    assert imp["occupants"] == pytest.approx(1.0)
    assert imp["hazard"] == pytest.approx(2 / 3)
    assert imp["infrastructure"] == pytest.approx(1 / 3)


def test_reference_decision_and_mass_balance():
    report = run(load_scenario(reference()))
    assert report["rule"] == "pcr6"
    assert report["decision"]["strategy"] == "max-betp"
    assert report["decision"]["choice"] == "HD3"
    final = report["final"]["bba"]
    assert "∅" not in final
    assert sum(final.values()) == pytest.approx(1.0, abs=1e-9)
    for entry in report["evaluations"]:
        total = sum(v for k, v in entry["bba"].items() if k != "∅")
        assert total == pytest.approx(1.0, abs=1e-9)


def test_reference_profile_brackets_betp_per_atom():
    report = run(load_scenario(reference()))
    profile = report["profile"]
    rows = {row["element"]: row for row in profile["elements"]}
    for atom in ("HD1", "HD2", "HD3", "HD4"):
        row = rows[atom]
        betp = profile["betp"][atom]
        assert row["bel"] <= betp + 1e-12
        assert betp <= row["pl"] + 1e-12


def test_interval_evaluations_publish_their_staircase():
    report = run(load_scenario(reference()))
    by_key = {
        (e["criterion"], e["source"]): e for e in report["evaluations"]
    }
    occ = by_key[("occupants", "expert-a")]
    assert occ["staircase"]["cuts"] == [[8.0, 15.0, 1.0], [5.0, 20.0, 0.25]]
    assert {"lo": 8.0, "hi": 15.0, "value": 0.75} in occ["staircase"]["necessity"]
    # qualitative evaluations have no distribution to draw
    assert "staircase" not in by_key[("infrastructure", "expert-a")]


def test_lean_report_drops_intermediates():
    scenario = load_scenario(reference())
    full = run(scenario)
    lean = run(scenario, lean=True)
    for key in ("evaluations", "step1", "audit"):
        assert key in full and key not in lean
    assert lean["final"] == full["final"]
    assert lean["decision"] == full["decision"]


def test_single_source_single_leaf_passes_through_unchanged():
    report = run(load_scenario(minimal_doc()))
    mapped = report["evaluations"][0]["bba"]
    assert report["step1"]["only"]["bba"] == mapped
    assert report["final"]["bba"] == mapped
    assert mapped == {"low": 0.5, "high": 0.5}
    assert any("tie" in w for w in report["decision"]["warnings"])


def test_runtime_total_conflict_is_a_stage_error():
    doc = minimal_doc()
    doc["sources"].append({"id": "rival", "reliability": 1.0})
    doc["evaluations"] = [
        {
            "source": "solo",
            "criterion": "only",
            "intervals": [{"lo": 1, "hi": 1, "confidence": 1.0}],
        },
        {
            "source": "rival",
            "criterion": "only",
            "intervals": [{"lo": 9, "hi": 9, "confidence": 1.0}],
        },
    ]
    doc["fusion"] = {"rule": "dempster", "importance": "shafer-discount"}
    scenario = load_scenario(doc)
    with pytest.raises(StageError) as exc:
        run(scenario)
    assert "step1" in str(exc.value) and "total conflict" in str(exc.value)


# -- audit replay -------------------------------------------------------------


def test_audit_replay_reproduces_the_final_mass():
    report = run(load_scenario(reference()))
    replayed = replay_audit(report)
    final = report["final"]["bba"]
    assert set(replayed) == set(final)
    for key, value in final.items():
        assert replayed[key] == pytest.approx(value, abs=1e-12)


def test_audit_replay_detects_tampering():
    report = run(load_scenario(reference()))
    combines = [e for e in report["audit"] if e["op"] == "combine"]
    key = next(iter(combines[-1]["output"]))
    combines[-1]["output"][key] += 1e-6
    with pytest.raises(ErmcdaError, match="diverged"):
        replay_audit(report)


def test_audit_replay_needs_audit_entries():
    report = run(load_scenario(reference()), lean=True)
    with pytest.raises(ErmcdaError, match="no replayable audit"):
        replay_audit(report)


# -- rule comparison ----------------------------------------------------------


def test_compare_rules_shares_upstream_artifacts():
    scenario = load_scenario(reference())
    cmp = compare_rules(scenario, ["dempster", "pcr6"])
    assert cmp["rules"] == ["dempster", "pcr6"]
    assert set(cmp["reports"]) == {"dempster", "pcr6"}
    # weights are rule-independent, so both reports must agree on them
    assert (
        cmp["reports"]["dempster"]["weights"] == cmp["reports"]["pcr6"]["weights"]
    )
    assert cmp["reports"]["dempster"]["rule"] == "dempster"
    for strategy, row in cmp["decisions"].items():
        assert set(row) == {"dempster", "pcr6"}


def test_compare_rules_flags_divergent_decisions():
    scenario = load_scenario(load_example("high-conflict"))
    cmp = compare_rules(scenario, ["dempster", "pcr6"])
    assert cmp["decisions"]["max-betp"]["dempster"] == "HD2"
    assert cmp["decisions"]["max-betp"]["pcr6"] == "HD4"
    assert cmp["divergent"] is True
    assert any("rules disagree under max-betp" in w for w in cmp["warnings"])


def test_compare_rules_guards():
    scenario = load_scenario(reference())
    with pytest.raises(ErmcdaError, match="at least two"):
        compare_rules(scenario, ["pcr6"])
    with pytest.raises(ErmcdaError, match="unknown rule"):
        compare_rules(scenario, ["pcr6", "majority"])
    free = load_scenario(load_example("free-model"))
    with pytest.raises(FrameModeError):
        compare_rules(free, ["dempster", "pcr6"])


# -- tabular and text output --------------------------------------------------


def test_report_to_csv_matches_the_profile():
    import csv as csvmod
    import io

    report = run(load_scenario(reference()))
    rows = list(csvmod.reader(io.StringIO(report_to_csv(report))))
    assert rows[0] == ["rule", "element", "mass", "bel", "pl", "betp"]
    body = rows[1:]
    assert len(body) == len(report["profile"]["elements"])
    by_element = {r["element"]: r for r in report["profile"]["elements"]}
    for rule, element, mass, bel, pl, betp in body:
        assert rule == "pcr6"
        assert float(mass) == by_element[element]["mass"]
        assert float(bel) == by_element[element]["bel"]
        assert float(pl) == by_element[element]["pl"]
        if element in report["profile"]["betp"]:
            assert float(betp) == report["profile"]["betp"][element]
        else:
            assert betp == ""


def test_compare_to_csv_stacks_rules():
    import csv as csvmod
    import io

    scenario = load_scenario(reference())
    cmp = compare_rules(scenario, ["dempster", "pcr6"])
    rows = list(csvmod.reader(io.StringIO(compare_to_csv(cmp))))
    per_rule = len(cmp["reports"]["pcr6"]["profile"]["elements"])
    assert len(rows) == 1 + 2 * per_rule
    assert {r[0] for r in rows[1:]} == {"dempster", "pcr6"}


def test_report_to_text_summarizes_the_decision():
    report = run(load_scenario(reference()))
    text = report_to_text(report)
    assert "rule: pcr6" in text
    assert "decision: HD3" in text
    assert "element" in text and "betp" in text


def test_compare_to_text_lists_decisions_per_strategy():
    scenario = load_scenario(load_example("high-conflict"))
    text = compare_to_text(compare_rules(scenario, ["dempster", "pcr6"]))
    assert "decisions per strategy:" in text
    assert "dempster=HD2" in text and "pcr6=HD4" in text
    assert "warning: rules disagree" in text


# -- command-line interface ---------------------------------------------------


@pytest.fixture()
def reference_file(tmp_path):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(reference()), encoding="utf-8")
    return str(path)


def test_cli_validate_ok(reference_file, capsys):
    assert main(["validate", reference_file]) == 0
    out = capsys.readouterr().out
    assert "OK" in out and "3 leaves" in out and "2 sources" in out


def test_cli_validate_failure_lists_paths(tmp_path, capsys):
    doc = reference()
    doc["evaluations"][0]["source"] = "ghost"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["validate", str(path)]) == 1
    err = capsys.readouterr().err
    assert "scenario validation failed" in err
    assert "evaluations.0" in err
    assert "hint" in err


def test_cli_run_text(reference_file, capsys):
    assert main(["run", reference_file]) == 0
    out = capsys.readouterr().out
    assert "decision: HD3" in out


def test_cli_run_json_to_file(reference_file, tmp_path, capsys):
    out_path = tmp_path / "report.json"
    assert main(
        ["run", reference_file, "--format", "json", "--out", str(out_path)]
    ) == 0
    assert capsys.readouterr().out == ""
    report = json.loads(out_path.read_text(encoding="utf-8"))
    assert report["decision"]["choice"] == "HD3"
    assert "audit" in report


def test_cli_run_lean_json(reference_file, capsys):
    assert main(["run", reference_file, "--format", "json", "--lean"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert "audit" not in report and "step1" not in report


def test_cli_run_csv(reference_file, capsys):
    assert main(["run", reference_file, "--format", "csv"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("rule,element,mass,bel,pl,betp")


def test_cli_run_rule_and_strategy_overrides(reference_file, capsys):
    assert main(
        ["run", reference_file, "--format", "json", "--rule", "dempster",
         "--strategy", "max-bel"]
    ) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["rule"] == "dempster"
    assert report["decision"]["strategy"] == "max-bel"


def test_cli_compare_text(reference_file, capsys):
    assert main(["compare", reference_file, "--rules", "dempster,pcr6"]) == 0
    assert "decisions per strategy:" in capsys.readouterr().out


def test_cli_missing_file_is_a_validation_failure(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "absent.json")]) == 1
    assert "cannot read" in capsys.readouterr().err


def test_cli_unparseable_file_is_a_validation_failure(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    assert main(["validate", str(path)]) == 1
    assert "cannot read" in capsys.readouterr().err


def test_cli_runtime_error_exits_two(tmp_path, capsys):
    doc = minimal_doc()
    doc["sources"].append({"id": "rival", "reliability": 1.0})
    doc["evaluations"] = [
        {
            "source": "solo",
            "criterion": "only",
            "intervals": [{"lo": 1, "hi": 1, "confidence": 1.0}],
        },
        {
            "source": "rival",
            "criterion": "only",
            "intervals": [{"lo": 9, "hi": 9, "confidence": 1.0}],
        },
    ]
    doc["fusion"] = {"rule": "dempster", "importance": "shafer-discount"}
    path = tmp_path / "conflict.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    assert main(["run", str(path)]) == 2
    assert "total conflict" in capsys.readouterr().err


def test_cli_compare_frame_mode_clash_exits_two(tmp_path, capsys):
    path = tmp_path / "free.json"
    path.write_text(json.dumps(load_example("free-model")), encoding="utf-8")
    assert main(["compare", str(path), "--rules", "dempster,pcr6"]) == 2
    assert "DST frame" in capsys.readouterr().err
