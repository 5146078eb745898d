"""Tests for the claim registry, individual claims and report rendering."""

import json

import pytest

from app.config import settings
from app.services import claims as claims_module
from app.services.claims import (
    Claim,
    ClaimResult,
    UnknownClaimError,
    all_claims,
    claim,
    get_claim,
    run_claim,
)
from app.services.corpus import default_corpus, get_group
from app.services.reports import exit_code, render, render_json, render_text, run_all, summarize, write_report

INFORMATIONAL = {"CHK-18", "CHK-19", "CHK-22"}
PROVABLE = [f"CHK-{i:02d}" for i in range(1, 18)] + ["CHK-20", "CHK-21"]


def test_registry_contents():
    ids = [c.id for c in all_claims()]
    assert ids == sorted(ids)
    assert ids == [f"CHK-{i:02d}" for i in range(1, 23)]
    assert {c.id for c in all_claims() if c.informational} == INFORMATIONAL
    assert all(c.statement for c in all_claims())


def test_unknown_claim():
    with pytest.raises(UnknownClaimError, match="CHK-99"):
        get_claim("CHK-99")


def test_duplicate_registration_is_refused():
    with pytest.raises(ValueError):
        claim("CHK-01", "again", "lemma")(lambda G: ("pass", None))
    assert get_claim("CHK-01").kind == "cited-fact"


@pytest.mark.parametrize("name", ["S3", "Q8", "D8", "S4", "Heis3", "A5", "S3xC4"])
def test_provable_claims_pass_on_small_groups(name):
    G = get_group(name)
    for claim_id in PROVABLE:
        result = run_claim(claim_id, G)
        assert result.status == "pass", (claim_id, name, result.witness)


@pytest.mark.parametrize("claim_id", sorted(INFORMATIONAL))
def test_informational_claims_report_info(claim_id, S4):
    result = run_claim(claim_id, S4)
    assert result.status == "info"
    assert result.witness


def test_theorem_witness_lists_element_orders():
    result = run_claim("CHK-13", get_group("D8"))
    assert result.status == "pass"
    assert any("order 2^3" in v for v in result.witness.values())


def test_class_survey_on_class_three_group():
    result = run_claim("CHK-17", get_group("D8"))
    assert result.status == "pass"
    result = run_claim("CHK-19", get_group("D8"))
    assert result.witness["max class"] == "3"


def test_failing_check_always_has_a_witness(monkeypatch, S3):
    broken = Claim("CHK-99", "never holds", "lemma", lambda G: ("fail", None))
    monkeypatch.setitem(claims_module._REGISTRY, "CHK-99", broken)
    result = run_claim("CHK-99", S3)
    assert result.status == "fail"
    assert result.witness == {"reason": "check failed without a witness"}
    assert exit_code([result]) == 1


def test_informational_status_is_forced(monkeypatch, S3):
    noisy = Claim("CHK-98", "survey", "informational", lambda G: ("pass", None))
    monkeypatch.setitem(claims_module._REGISTRY, "CHK-98", noisy)
    assert run_claim("CHK-98", S3).status == "info"


def test_timings_are_zero_unless_requested(S3):
    assert run_claim("CHK-01", S3).ms == 0


def test_pair_sampling_is_recorded(monkeypatch):
    G = get_group("S4xC3")
    monkeypatch.setattr(settings, "pair_exhaustive_limit", 10)
    monkeypatch.setattr(settings, "pair_sample_count", 50)
    claims_module._pairs.cache_clear()
    try:
        result = run_claim("CHK-15", G)
    finally:
        claims_module._pairs.cache_clear()
    assert result.status == "pass"
    assert result.witness["pairs"].startswith("sampled 50 of ")


# -- reports ------------------------------------------------------------------


def test_run_all_is_sorted_and_deterministic():
    groups = [get_group("S4"), get_group("S3")]
    first = run_all(groups, ["CHK-02", "CHK-01"], jobs=1)
    second = run_all(groups, ["CHK-02", "CHK-01"], jobs=1)
    assert [(r.claim, r.group) for r in first] == [
        ("CHK-01", "S3"), ("CHK-01", "S4"), ("CHK-02", "S3"), ("CHK-02", "S4"),
    ]
    assert render(first) == render(second)
    assert render(first, as_json=True) == render(second, as_json=True)


def test_text_report_layout():
    results = [
        ClaimResult(claim="CHK-01", group="S3", status="pass"),
        ClaimResult(claim="CHK-09", group="X", status="fail", witness={"x": "a b", "reason": "broken"}),
    ]
    lines = render_text(results).splitlines()
    assert lines[0] == "CHK-01  S3         PASS"
    assert lines[1] == "CHK-09  X          FAIL"
    assert lines[2] == "    x: a b"
    assert lines[3] == "    reason: broken"
    assert lines[-1] == "2 checks: 1 pass, 1 fail, 0 info"
    assert summarize(results) == {"pass": 1, "fail": 1, "info": 0}


def test_json_report():
    results = run_all([get_group("Q8")], ["CHK-13"], jobs=1)
    data = json.loads(render_json(results))
    assert data[0]["claim"] == "CHK-13"
    assert data[0]["group"] == "Q8"
    assert data[0]["status"] == "pass"
    assert set(data[0]) == {"claim", "group", "status", "witness", "ms"}


def test_write_report(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "reports_dir", str(tmp_path / "reports"))
    path = write_report("one line", "runs/out.txt")
    assert path == tmp_path / "reports" / "runs" / "out.txt"
    assert path.read_text(encoding="utf-8") == "one line\n"
    absolute = write_report("x\n", str(tmp_path / "abs.txt"))
    assert absolute.read_text(encoding="utf-8") == "x\n"


@pytest.mark.slow
def test_parallel_run_matches_serial():
    groups = [get_group(name) for name in ("S3", "Q8", "A4", "D8")]
    serial = run_all(groups, PROVABLE, jobs=1)
    parallel = run_all(groups, PROVABLE, jobs=2)
    assert render(serial) == render(parallel)


@pytest.mark.slow
def test_no_counterexamples_in_default_corpus():
    results = run_all(default_corpus(), PROVABLE, jobs=1)
    failures = [r for r in results if r.status == "fail"]
    assert not failures, failures[:3]
