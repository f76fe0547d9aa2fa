"""End-to-end acceptance suite.

Each test enforces one release criterion at its stated tolerance and prints
one PASS line, so `pytest -s tests/test_acceptance.py` doubles as the
sign-off checklist. Expected values are frozen here; the oracles they are
checked against live in oracles.py and are independent of the engine.
"""

import json
import random
import time
from collections import Counter
from fractions import Fraction

import tmforge as tf
from conftest import GOLDEN_DIR, data_bytes, data_path
from generators import random_mitigation_catalog, random_model, random_rule_catalog
from oracles import (
    oracle_analyze,
    oracle_botnet_filter,
    oracle_device_reachable_set,
    parse_dot,
)
from tmforge.cli import main

# Expected finding counts per (zone kind, category) on the reference model.
GOLDEN_ZONE_COUNTS = {
    "iot_device": {"Spoofing": 2, "Tampering": 4, "AuthenticationAbuse": 4},
    "field_gateway": {
        "Spoofing": 3,
        "Tampering": 3,
        "Repudiation": 1,
        "InformationDisclosure": 1,
        "AttackHazard": 1,
        "ElevationOfPrivilege": 1,
    },
    "cloud_gateway": {
        "Spoofing": 6,
        "Tampering": 1,
        "AttackHazard": 9,
        "AuthenticationAbuse": 3,
    },
    "azure_cloud": {
        "Spoofing": 5,
        "Tampering": 6,
        "Repudiation": 13,
        "InformationDisclosure": 7,
        "AttackHazard": 6,
        "ElevationOfPrivilege": 2,
    },
    "consumer": {"InformationDisclosure": 1, "ElevationOfPrivilege": 1},
}

GOLDEN_CATEGORY_TOTALS = {
    "Spoofing": 16,
    "Tampering": 14,
    "Repudiation": 14,
    "AttackHazard": 16,
}
GOLDEN_GRAND_TOTAL = 80


def _report(criterion: str, passed: bool) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'}")


def test_criterion_1_golden_counts(reference_model, catalogs):
    started = time.perf_counter()
    findings = tf.analyze(reference_model, catalogs, "both")
    elapsed = time.perf_counter() - started

    got: dict[str, dict[str, int]] = {}
    for finding in findings:
        zone_kind = reference_model.zone(finding.zone_id).kind.value
        bucket = got.setdefault(zone_kind, {})
        bucket[finding.category.value] = bucket.get(finding.category.value, 0) + 1

    ok = got == GOLDEN_ZONE_COUNTS and elapsed < 1.0
    _report("1 (golden per-zone counts, < 1 s)", ok)
    assert got == GOLDEN_ZONE_COUNTS
    assert elapsed < 1.0, f"analyze took {elapsed:.3f}s"


def test_criterion_2_frequency_totals(reference_findings):
    freq = tf.frequency(reference_findings)
    got = {category.value: count for category, count in freq.per_category.items()}
    ok = (
        all(got[name] == value for name, value in GOLDEN_CATEGORY_TOTALS.items())
        and freq.total == GOLDEN_GRAND_TOTAL
    )
    _report("2 (frequency totals: S16 T14 R14 AH16, total 80)", ok)
    for name, value in GOLDEN_CATEGORY_TOTALS.items():
        assert got[name] == value, name
    assert freq.total == GOLDEN_GRAND_TOTAL


def test_criterion_3_botnet_filter_oracle(reference_model, reference_findings):
    relevant = tf.filter_botnet_relevant(reference_findings, reference_model)
    expected = oracle_botnet_filter(reference_findings, reference_model)
    filter_equal = [f.finding_id for f in relevant] == [f.finding_id for f in expected]

    assessment = tf.assess(reference_model, reference_findings)
    flows = {f.id: f for f in reference_model.flows}
    origins = [
        flows[f.subject_id].source if f.subject_id in flows else f.subject_id
        for f in expected
    ]
    oracle_devices = oracle_device_reachable_set(origins, reference_model)
    devices_equal = assessment.devices_at_risk == oracle_devices

    ok = filter_equal and devices_equal
    _report("3 (botnet filter and devices_at_risk vs oracles)", ok)
    assert filter_equal
    assert devices_equal


def test_criterion_4_mitigation_closure(
    reference_model, reference_findings, catalogs, mitigation_catalog
):
    started = time.perf_counter()
    plan = tf.recommend(reference_findings, mitigation_catalog)
    patched, _ = tf.apply_all(reference_model, plan.mitigations())
    residual_findings = tf.analyze(patched, catalogs, "both")
    closure = residual_findings == [] and plan.coverage_ratio == Fraction(1)

    before = tf.frequency(reference_findings).per_category
    rng = random.Random(424242)
    monotone = True
    mitigations = plan.mitigations()
    for _ in range(200):
        subset = [m for m in mitigations if rng.random() < 0.5]
        subset_model, _ = tf.apply_all(reference_model, subset)
        after = tf.frequency(tf.analyze(subset_model, catalogs, "both")).per_category
        if any(after[c] > before[c] for c in tf.ThreatCategory):
            monotone = False
            break
    elapsed = time.perf_counter() - started

    ok = closure and monotone and elapsed < 10.0
    _report("4 (closure to 0 findings, coverage 1, 200 monotone subsets, < 10 s)", ok)
    assert residual_findings == []
    assert plan.coverage_ratio == Fraction(1)
    assert monotone
    assert elapsed < 10.0, f"closure block took {elapsed:.3f}s"


def test_criterion_5_property_suites(reference_model, catalogs, mitigation_catalog):
    # round-trip identity over >= 500 random small documents
    rng = random.Random(8001)
    documents = 0
    for _ in range(200):
        model = random_model(rng)
        assert tf.load_model(tf.save_model(model)) == model
        documents += 1
    for _ in range(150):
        catalog = random_rule_catalog(rng)
        assert tf.load_rule_catalog(tf.save_rule_catalog(catalog)) == catalog
        documents += 1
    for _ in range(150):
        catalog = random_mitigation_catalog(rng, rule_ids=[f"r{i}" for i in range(4)])
        assert tf.load_mitigation_catalog(tf.save_mitigation_catalog(catalog)) == catalog
        documents += 1
    assert documents >= 500

    # analyze determinism: byte-identical JSON, including across a re-parse
    findings = tf.analyze(reference_model, catalogs, "both")
    freq = tf.frequency(findings)
    first = tf.render_json(findings, None, None, freq)
    reparsed = tf.load_model(tf.save_model(reference_model))
    findings_again = tf.analyze(reparsed, catalogs, "both")
    second = tf.render_json(findings_again, None, None, tf.frequency(findings_again))
    determinism = first == second

    # brute-force matcher equivalence on >= 1000 random cases
    rng = random.Random(8002)
    cases = 0
    for _ in range(1000):
        model = random_model(rng, max_elements=6)
        catalog = random_rule_catalog(rng, max_rules=10)
        got = [
            (f.rule_id, f.subject_id, f.zone_id)
            for f in tf.analyze(model, [catalog], "both")
        ]
        assert got == oracle_analyze(model, [catalog], "both")
        cases += 1
    assert cases >= 1000

    # the category -> property table, all ten rows
    P = tf.SecurityProperty
    C = tf.ThreatCategory
    table = {
        C.SPOOFING: {P.AUTHENTICATION},
        C.TAMPERING: {P.INTEGRITY},
        C.REPUDIATION: {P.NON_REPUDIATION},
        C.INFORMATION_DISCLOSURE: {P.CONFIDENTIALITY},
        C.DENIAL_OF_SERVICE: {P.AVAILABILITY},
        C.ELEVATION_OF_PRIVILEGE: {P.AUTHORIZATION},
        C.AUTHENTICATION_ABUSE: {P.AUTHENTICATION, P.AUTHORIZATION},
        C.REMOTE_CODE_INCLUSION: {P.INTEGRITY, P.NON_REPUDIATION},
        C.ATTACK_HAZARD: {P.AVAILABILITY, P.CONFIDENTIALITY},
        C.MISCELLANEOUS: set(P),
    }
    assert len(table) == 10
    for category, expected in table.items():
        assert tf.classify_violation(category) == expected

    # DOT output parses for >= 100 random models
    rng = random.Random(8003)
    parsed = 0
    for _ in range(100):
        model = random_model(rng)
        parse_dot(tf.render_dot(model))
        parsed += 1
    assert parsed >= 100

    _report("5 (round trips, determinism, matcher oracle, table, DOT)", determinism)
    assert determinism


def test_criterion_6_cli_contract(tmp_path, capsys):
    model_path = data_path("smart_home.tmodel")

    exit_ok = main(["validate", model_path])
    capsys.readouterr()

    bad_model = tmp_path / "broken.tmodel"
    bad_model.write_bytes(
        data_bytes("smart_home.tmodel").replace(b"target: temp_sensor", b"target: ghost")
    )
    exit_invalid = main(["validate", str(bad_model)])
    capsys.readouterr()

    exit_findings = main(["analyze", model_path, "--fail-on-findings"])
    capsys.readouterr()

    exit_usage = main(["analyze", model_path, "--format", "nope"])
    capsys.readouterr()

    exit_missing = main(["validate", str(tmp_path / "absent.tmodel")])
    capsys.readouterr()

    report_path = tmp_path / "report.json"
    main(["analyze", model_path, "--out", str(report_path)])
    capsys.readouterr()
    golden_equal = report_path.read_bytes() == (
        GOLDEN_DIR / "reference_report.json"
    ).read_bytes()

    dot_path = tmp_path / "diagram.dot"
    main(["diagram", model_path, "--out", str(dot_path)])
    capsys.readouterr()
    dot_equal = dot_path.read_bytes() == (GOLDEN_DIR / "reference_diagram.dot").read_bytes()

    ok = (
        exit_ok == 0
        and exit_invalid == 1
        and exit_findings == 2
        and exit_usage == 3
        and exit_missing == 3
        and golden_equal
        and dot_equal
    )
    _report("6 (CLI exit codes 0/1/2/3 and golden files)", ok)
    assert (exit_ok, exit_invalid, exit_findings, exit_usage, exit_missing) == (0, 1, 2, 3, 3)
    assert golden_equal
    assert dot_equal
