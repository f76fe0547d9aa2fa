"""CLI contract tests: subcommands, exit codes, stdout/stderr discipline."""

import json
import shutil

import pytest

import tmforge as tf
from conftest import GOLDEN_DIR, data_bytes, data_path
from tmforge.cli import main

BROKEN_MODEL = b"""\
schema: model
version: "1.0"
name: broken
zones:
- id: z
  name: z
  kind: iot_device
elements:
- id: a
  name: a
  zone_id: z
  kind: sensor
flows:
- id: ghost-flow
  source: a
  target: ghost
  protocol: x
  encrypted: false
  authenticated: false
  bidirectional: false
"""


class TestValidate:
    def test_shipped_model_exits_zero(self, capsys):
        assert main(["validate", data_path("smart_home.tmodel")]) == 0
        out, err = capsys.readouterr()
        assert out == "" and err == ""

    def test_missing_file_exits_three(self, capsys):
        assert main(["validate", "/no/such/file.tmodel"]) == 3
        assert "i/o error" in capsys.readouterr().err

    def test_invalid_model_exits_one_with_diagnostic(self, tmp_path, capsys):
        path = tmp_path / "broken.tmodel"
        path.write_bytes(BROKEN_MODEL)
        assert main(["validate", str(path)]) == 1
        err = capsys.readouterr().err
        lines = [line for line in err.splitlines() if line]
        assert len(lines) == 1
        assert lines[0].startswith("dangling_endpoint: ghost-flow: ")


class TestAnalyze:
    def test_json_report_with_eighty_findings(self, capsys):
        assert main(["analyze", data_path("smart_home.tmodel")]) == 0
        out, err = capsys.readouterr()
        assert err == ""
        doc = json.loads(out)
        assert len(doc["findings"]) == 80

    def test_fail_on_findings_exits_two(self, capsys):
        code = main(["analyze", data_path("smart_home.tmodel"), "--fail-on-findings"])
        assert code == 2
        # the report is still written
        assert json.loads(capsys.readouterr().out)["frequency"]["total"] == 80

    def test_method_stride_has_no_vast_categories(self, capsys):
        assert main(["analyze", data_path("smart_home.tmodel"), "--method", "stride"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert all(f["method"] == "STRIDE" for f in doc["findings"])
        assert len(doc["findings"]) == 57

    def test_bad_flag_exits_three(self, capsys):
        assert main(["analyze", data_path("smart_home.tmodel"), "--method", "nope"]) == 3
        assert "usage error" in capsys.readouterr().err

    def test_out_writes_file_and_keeps_stdout_clean(self, tmp_path, capsys):
        out_path = tmp_path / "report.json"
        assert main(["analyze", data_path("smart_home.tmodel"), "--out", str(out_path)]) == 0
        captured = capsys.readouterr()
        assert captured.out == ""
        assert json.loads(out_path.read_bytes())["frequency"]["total"] == 80

    def test_csv_format(self, capsys):
        assert main(["analyze", data_path("smart_home.tmodel"), "--format", "csv"]) == 0
        out = capsys.readouterr().out
        assert out.startswith("finding_id,rule_id,")
        assert len(out.strip().splitlines()) == 81

    def test_figure_written_next_to_report(self, tmp_path, capsys):
        figure = tmp_path / "freq.png"
        report = tmp_path / "report.json"
        code = main([
            "analyze", data_path("smart_home.tmodel"),
            "--out", str(report), "--figure", str(figure),
        ])
        assert code == 0
        assert figure.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_invalid_catalog_exits_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.tcatalog"
        bad.write_bytes(b'schema: rule_catalog\nversion: "1.0"\nname: x\nrules:\n- id: r\n')
        code = main([
            "analyze", data_path("smart_home.tmodel"), "--catalog", str(bad),
        ])
        assert code == 1
        assert "schema_mismatch" in capsys.readouterr().err

    def test_data_dir_override(self, tmp_path, capsys, monkeypatch):
        # an override directory may carry just one of the default catalogs;
        # the other falls back to the packaged copy
        empty = b'schema: rule_catalog\nversion: "1.0"\nname: empty stride\nrules: []\n'
        (tmp_path / "stride_core.tcatalog").write_bytes(empty)
        monkeypatch.setenv("TMFORGE_DATA_DIR", str(tmp_path))
        assert main(["analyze", data_path("smart_home.tmodel")]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert len(doc["findings"]) == 23
        assert all(f["method"] == "VAST" for f in doc["findings"])


class TestBotnet:
    def test_devices_at_risk_listed(self, capsys):
        assert main(["botnet", data_path("smart_home.tmodel")]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["botnet"]["devices_at_risk"] == ["temp_sensor", "water_pump", "smart_lock"]
        assert len(doc["botnet"]["relevant"]) == 55

    def test_stage_legend_complete_but_stages_restricted(self, capsys):
        assert main(["botnet", data_path("smart_home.tmodel")]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert sorted(doc["botnet"]["stage_legend"]) == sorted(
            s.value for s in tf.CrimeStage
        )
        for entry in doc["botnet"]["relevant"]:
            assert entry["stages"]
            assert not {"Conception", "Marketing"} & set(entry["stages"])

    def test_mitigated_model_has_empty_assessment(self, tmp_path, capsys):
        patched_path = tmp_path / "patched.tmodel"
        assert main([
            "mitigate", data_path("smart_home.tmodel"),
            "--apply", "--out", str(patched_path),
        ]) == 0
        capsys.readouterr()
        assert main(["botnet", str(patched_path), "--fail-on-findings"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["findings"] == []
        assert doc["botnet"]["relevant"] == []


class TestMitigate:
    def test_plan_covers_everything(self, capsys):
        assert main(["mitigate", data_path("smart_home.tmodel")]) == 0
        doc = json.loads(capsys.readouterr().out)
        plan = doc["mitigation_plan"]
        assert plan["coverage_ratio"] == "1"
        assert plan["residual"] == []
        assert plan["simulation"]["per_category"]["Spoofing"] == {"before": 16, "after": 0}

    def test_apply_then_analyze_is_clean(self, tmp_path, capsys):
        patched_path = tmp_path / "patched.tmodel"
        assert main([
            "mitigate", data_path("smart_home.tmodel"),
            "--apply", "--out", str(patched_path),
        ]) == 0
        capsys.readouterr()
        assert main(["analyze", str(patched_path), "--fail-on-findings"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["findings"] == []

    def test_apply_without_out_is_usage_error(self, capsys):
        assert main(["mitigate", data_path("smart_home.tmodel"), "--apply"]) == 3
        assert "usage error" in capsys.readouterr().err

    def test_empty_mitigation_catalog(self, tmp_path, capsys):
        empty = tmp_path / "none.tmitig"
        empty.write_bytes(
            b'schema: mitigation_catalog\nversion: "1.0"\nname: none\nmitigations: []\n'
        )
        assert main([
            "mitigate", data_path("smart_home.tmodel"), "--mitigations", str(empty),
        ]) == 0
        doc = json.loads(capsys.readouterr().out)
        plan = doc["mitigation_plan"]
        assert plan["coverage_ratio"] == "0"
        assert len(plan["residual"]) == 80


class TestDiagram:
    def test_writes_dot_with_five_clusters(self, tmp_path, capsys):
        out = tmp_path / "model.dot"
        assert main(["diagram", data_path("smart_home.tmodel"), "--out", str(out)]) == 0
        text = out.read_text()
        assert text.count("subgraph") == 5

    def test_two_invocations_identical(self, tmp_path):
        a = tmp_path / "a.dot"
        b = tmp_path / "b.dot"
        assert main(["diagram", data_path("smart_home.tmodel"), "--out", str(a)]) == 0
        assert main(["diagram", data_path("smart_home.tmodel"), "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_unwritable_out_exits_three(self, capsys):
        code = main([
            "diagram", data_path("smart_home.tmodel"),
            "--out", "/no/such/dir/model.dot",
        ])
        assert code == 3


class TestGoldenFiles:
    def test_reference_report_matches_golden(self, tmp_path):
        out = tmp_path / "report.json"
        assert main(["analyze", data_path("smart_home.tmodel"), "--out", str(out)]) == 0
        assert out.read_bytes() == (GOLDEN_DIR / "reference_report.json").read_bytes()

    def test_reference_diagram_matches_golden(self, tmp_path):
        out = tmp_path / "diagram.dot"
        assert main(["diagram", data_path("smart_home.tmodel"), "--out", str(out)]) == 0
        assert out.read_bytes() == (GOLDEN_DIR / "reference_diagram.dot").read_bytes()
