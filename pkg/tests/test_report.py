"""Reporting tests: frequency, JSON/markdown/CSV renderers, DOT export."""

import csv
import io
import json
import random

import tmforge as tf
from generators import random_model
from oracles import parse_dot

C = tf.ThreatCategory


class TestFrequency:
    def test_reference_counts(self, reference_findings):
        freq = tf.frequency(reference_findings)
        assert freq.total == 80
        assert freq.per_category[C.SPOOFING] == 16
        assert freq.per_category[C.TAMPERING] == 14
        assert freq.per_category[C.REPUDIATION] == 14
        assert freq.per_category[C.ATTACK_HAZARD] == 16

    def test_empty_findings(self):
        freq = tf.frequency([])
        assert freq.total == 0
        assert all(count == 0 for count in freq.per_category.values())
        assert freq.per_zone == {}
        assert freq.zone_counts("anything") == {}

    def test_totals_are_consistent(self, reference_findings):
        freq = tf.frequency(reference_findings)
        assert freq.total == sum(freq.per_category.values())
        assert freq.total == sum(
            sum(counts.values()) for counts in freq.per_zone.values()
        )

    def test_linearity(self, reference_findings):
        rng = random.Random(5)
        for _ in range(20):
            k = rng.randint(0, len(reference_findings))
            a, b = reference_findings[:k], reference_findings[k:]
            assert tf.frequency(a).total + tf.frequency(b).total == tf.frequency(
                reference_findings
            ).total


class TestRenderJson:
    def test_byte_identical_across_runs(self, reference_model, reference_findings,
                                        mitigation_catalog):
        freq = tf.frequency(reference_findings)
        assessment = tf.assess(reference_model, reference_findings)
        plan = tf.recommend(reference_findings, mitigation_catalog)
        first = tf.render_json(reference_findings, assessment, plan, freq)
        second = tf.render_json(reference_findings, assessment, plan, freq)
        assert first == second

    def test_empty_analysis_is_schema_valid(self):
        data = tf.render_json([], None, None, tf.frequency([]))
        doc = json.loads(data)
        assert doc["findings"] == []
        assert doc["frequency"]["total"] == 0
        assert doc["botnet"] is None
        assert doc["mitigation_plan"] is None

    def test_reference_report_has_eighty_findings(self, reference_findings):
        data = tf.render_json(reference_findings, None, None, tf.frequency(reference_findings))
        doc = json.loads(data)
        assert len(doc["findings"]) == 80

    def test_stamp_is_opt_in(self, reference_findings):
        freq = tf.frequency(reference_findings)
        plain = json.loads(tf.render_json(reference_findings, None, None, freq))
        stamped = json.loads(
            tf.render_json(reference_findings, None, None, freq, stamp="2020-01-01T00:00:00+00:00")
        )
        assert "generated_at" not in plain
        assert stamped["generated_at"] == "2020-01-01T00:00:00+00:00"


class TestRenderMarkdown:
    def test_contains_azure_repudiation_row(self, reference_findings):
        text = tf.render_markdown(
            reference_findings, None, None, tf.frequency(reference_findings)
        )
        assert "| azure_zone | Repudiation | 13 |" in text

    def test_empty_findings_summary(self):
        text = tf.render_markdown([], None, None, tf.frequency([]))
        assert "No threats identified." in text

    def test_crime_legend_lists_all_five_stages(self, reference_model, reference_findings):
        assessment = tf.assess(reference_model, reference_findings)
        text = tf.render_markdown(
            reference_findings, assessment, None, tf.frequency(reference_findings)
        )
        for stage in tf.CrimeStage:
            assert f"| {stage.value} |" in text

    def test_deterministic(self, reference_model, reference_findings, mitigation_catalog):
        freq = tf.frequency(reference_findings)
        assessment = tf.assess(reference_model, reference_findings)
        plan = tf.recommend(reference_findings, mitigation_catalog)
        assert tf.render_markdown(
            reference_findings, assessment, plan, freq
        ) == tf.render_markdown(reference_findings, assessment, plan, freq)


class TestRenderCsv:
    def test_one_row_per_finding(self, reference_findings):
        text = tf.render_csv(reference_findings)
        rows = list(csv.reader(io.StringIO(text)))
        assert len(rows) == 1 + len(reference_findings)
        assert rows[0][0] == "finding_id"

    def test_lf_only(self, reference_findings):
        assert "\r" not in tf.render_csv(reference_findings)


class TestRenderDot:
    def test_reference_model_has_five_clusters(self, reference_model):
        graph = parse_dot(tf.render_dot(reference_model))
        assert len(graph.clusters) == 5
        assert len(graph.nodes) == len(reference_model.elements)
        assert len(graph.edges) == len(reference_model.flows)

    def test_empty_model_is_valid_dot(self):
        graph = parse_dot(tf.render_dot(tf.SystemModel(name="empty")))
        assert graph.clusters == [] and graph.nodes == [] and graph.edges == []

    def test_every_flow_id_is_an_edge_label_once(self, reference_model):
        graph = parse_dot(tf.render_dot(reference_model))
        labels = [attrs.get("label") for _, _, attrs in graph.edges]
        assert sorted(labels) == sorted(f.id for f in reference_model.flows)

    def test_bidirectional_flows_render_dir_both(self, reference_model):
        graph = parse_dot(tf.render_dot(reference_model))
        by_label = {attrs["label"]: attrs for _, _, attrs in graph.edges}
        for flow in reference_model.flows:
            if flow.bidirectional:
                assert by_label[flow.id].get("dir") == "both"
            else:
                assert "dir" not in by_label[flow.id]

    def test_random_models_parse(self):
        rng = random.Random(77)
        for _ in range(120):
            model = random_model(rng)
            graph = parse_dot(tf.render_dot(model))
            assert len(graph.edges) == len(model.flows)

    def test_deterministic(self, reference_model):
        assert tf.render_dot(reference_model) == tf.render_dot(reference_model)


class TestFigure:
    def test_writes_png(self, reference_findings, tmp_path):
        from tmforge.figures import render_frequency_figure

        out = tmp_path / "freq.png"
        render_frequency_figure(tf.frequency(reference_findings), out)
        data = out.read_bytes()
        assert data[:8] == b"\x89PNG\r\n\x1a\n"
        assert len(data) > 1000
