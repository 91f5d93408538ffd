"""Harness acceptance: deterministic regeneration and report diffing."""

import filecmp
import json
from pathlib import Path

import pytest

from oracle_harness import cas
from oracle_harness.diff import diff_fixtures
from oracle_harness.generate import MANIFEST, generate_fixtures

REPO = Path(__file__).resolve().parents[2]
COMMITTED = REPO / "fixtures"
PRIMARY_REPORT = REPO / "reports" / "acceptance_summary.json"


def test_ap_reference_values():
    ai = MANIFEST["curves"]["37a1"]
    assert cas.ap_via_character_sum(ai, 2) == -2
    assert cas.ap_via_character_sum(ai, 3) == -3
    assert cas.ap_via_character_sum(ai, 5) == -2
    assert cas.ap_via_character_sum(MANIFEST["curves"]["11a1"], 3) == -1


def test_reduction_reference():
    r = cas.reduction_semistable(MANIFEST["curves"]["37a1"], 37)
    assert r["kodaira"] == "I1" and r["tamagawa"] == 1
    r = cas.reduction_semistable(MANIFEST["curves"]["11a1"], 11)
    assert r["kodaira"] == "I5" and r["tamagawa"] == 5 and r["kind"] == "split-mult"


def test_torsion_reference():
    assert cas.torsion_order(MANIFEST["curves"]["11a1"]) == 5
    assert cas.torsion_order(MANIFEST["curves"]["37a1"]) == 1
    assert cas.torsion_order(MANIFEST["curves"]["15a1"]) == 8


def test_genus_formula():
    assert cas.genus_X0(11) == 1
    assert cas.genus_X0(37) == 2
    assert cas.genus_X0(58) == 6
    assert cas.genus_X0(77) == 7
    assert cas.genus_X0(1) == 0


def test_sha_analytic_is_one_for_rank0():
    for lab in MANIFEST["rank0_curves"]:
        val = cas.sha_analytic(MANIFEST["curves"][lab], 18)
        assert val is not None and abs(float(val) - 1) < 1e-9


def test_regeneration_is_byte_identical(tmp_path):
    d1, d2 = tmp_path / "a", tmp_path / "b"
    generate_fixtures(str(d1))
    generate_fixtures(str(d2))
    for name in ("ap_table", "reduction", "torsion", "period", "lvalue", "dimension", "flags"):
        f1, f2 = d1 / f"{name}.json", d2 / f"{name}.json"
        assert f1.read_bytes() == f2.read_bytes(), name


def test_regeneration_matches_committed(tmp_path):
    if not COMMITTED.exists():
        pytest.skip("no committed fixtures present")
    d = tmp_path / "regen"
    generate_fixtures(str(d))
    for name in ("ap_table", "reduction", "torsion", "period", "lvalue", "dimension", "flags"):
        regen = (d / f"{name}.json").read_bytes()
        committed = (COMMITTED / f"{name}.json").read_bytes()
        assert regen == committed, f"{name} differs from the committed fixture"


def test_diff_against_primary_report():
    if not PRIMARY_REPORT.exists():
        pytest.skip(
            "primary acceptance report missing; run the primary suite "
            "(pytest tests/test_acceptance.py) first"
        )
    discrepancies = diff_fixtures(str(COMMITTED), str(PRIMARY_REPORT))
    assert discrepancies == [], discrepancies


def test_diff_detects_perturbation(tmp_path):
    if not PRIMARY_REPORT.exists():
        pytest.skip("primary acceptance report missing")
    report = json.loads(PRIMARY_REPORT.read_text())
    report["ap_table"]["11a1"]["3"] += 1  # perturb one a_l
    bad = tmp_path / "perturbed.json"
    bad.write_text(json.dumps(report))
    discrepancies = diff_fixtures(str(COMMITTED), str(bad))
    assert len(discrepancies) == 1
    assert discrepancies[0]["key"] == "11a1:3"


def test_diff_tolerates_stated_precision(tmp_path):
    if not PRIMARY_REPORT.exists():
        pytest.skip("primary acceptance report missing")
    report = json.loads(PRIMARY_REPORT.read_text())
    # drop the final reported digit: an error far below the stated precision
    s = report["period"]["11a1"]["omega_plus"]
    report["period"]["11a1"]["omega_plus"] = s[:-1]
    ok = tmp_path / "rounded.json"
    ok.write_text(json.dumps(report))
    discrepancies = diff_fixtures(str(COMMITTED), str(ok))
    assert discrepancies == []
    # but a perturbation at the stated precision is flagged
    report["period"]["11a1"]["omega_plus"] = s[:-8] + "9999999"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(report))
    assert diff_fixtures(str(COMMITTED), str(bad))


def test_schema_mismatch(tmp_path):
    from oracle_harness.diff import SchemaMismatch

    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    with pytest.raises(SchemaMismatch):
        diff_fixtures(str(COMMITTED), str(bad))
