import json

import pytest

from relwl import CapExceeded, ContractViolation
from relwl.suites import (
    SUITE_IDS,
    run_all,
    run_suite,
    suite_default_config,
    verdict_json,
)


def strip_timing(payload):
    if isinstance(payload, dict):
        return {k: strip_timing(v) for k, v in payload.items() if k != "runtime_ms"}
    if isinstance(payload, list):
        return [strip_timing(v) for v in payload]
    return payload


def test_suite_registry_is_complete():
    assert set(SUITE_IDS) == {
        "thm1", "thm2-witness", "prop3", "thm4", "prop5", "prop9",
        "corollary-2rn", "thmD1", "soundness", "lattice",
    }
    with pytest.raises(ContractViolation):
        run_suite("nope")


def test_prop3_suite_verdict_shape():
    verdict = run_suite("prop3")
    assert verdict["pass"] is True
    assert verdict["schema"] == 1
    assert verdict["evidence"]["rwl_separation_iteration"] == 1
    assert verdict["evidence"]["weak_classes"] == 3
    assert "runtime_ms" in verdict and "version" in verdict


def test_prop5_suite_matches_documented_evidence():
    verdict = run_suite("prop5", {"relations": [3]})
    assert verdict["pass"] is True
    case = verdict["evidence"]["cases"][0]
    assert case["1rwl"] is None
    assert case["stable_at"] == 1
    assert case["isomorphic"] is False
    assert case["2rlwl_distinguished"] is True


def test_fast_suites_pass_with_defaults():
    for suite_id in ("thm2-witness", "prop9", "corollary-2rn", "thmD1"):
        verdict = run_suite(suite_id)
        assert verdict["pass"] is True, (suite_id, verdict["evidence"])


def test_suite_reruns_are_byte_identical_modulo_timing():
    a = run_suite("prop5")
    b = run_suite("prop5")
    assert json.dumps(strip_timing(a), sort_keys=True) == \
        json.dumps(strip_timing(b), sort_keys=True)
    assert verdict_json(a).endswith("\n")


def test_empty_config_equals_default_config():
    a = strip_timing(run_suite("thm2-witness", None))
    b = strip_timing(run_suite("thm2-witness", {}))
    assert a == b
    assert suite_default_config("thm2-witness")["width"] == 16


def test_prop9_cap_refusal_is_error_not_failure():
    with pytest.raises(CapExceeded):
        run_suite("prop9", {"tuple_cap": 1000})
    summary = run_all({"prop9": {"tuple_cap": 1000},
                       "thm1": {"graphs": 2, "seeds": 1},
                       "thm4": {"graphs": 2, "seeds": 1},
                       "soundness": {"pairs": 3},
                       "lattice": {"graphs": 3},
                       "thmD1": {"instances": 2}})
    kinds = {e["suite"]: e["kind"] for e in summary["errors"]}
    assert kinds == {"prop9": "cap-refusal"}
    assert all(v["suite"] != "prop9" for v in summary["suites"])
    assert summary["pass"] is False  # errors block the aggregate pass


def test_run_all_small_config_passes():
    summary = run_all({"thm1": {"graphs": 3, "seeds": 1},
                       "thm4": {"graphs": 3, "seeds": 1},
                       "soundness": {"pairs": 5},
                       "lattice": {"graphs": 5},
                       "thmD1": {"instances": 3}})
    assert summary["pass"] is True
    assert len(summary["suites"]) == 10
    assert summary["errors"] == []


def test_failing_verdicts_carry_replayable_counterexamples():
    # an unattainable (negative) tolerance forces the failure path so the
    # counterexample record format is exercised
    verdict = run_suite("thmD1", {"instances": 2, "tolerance": -1.0})
    assert verdict["pass"] is False
    record = verdict["evidence"]["failures"][0]["counterexample"]
    assert record["edge_tsv"]
    assert "relwl gnn forward" in record["replay"]
