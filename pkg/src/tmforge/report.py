"""Report rendering: frequency statistics, JSON/markdown/CSV reports, DOT export.

Every renderer is pure and deterministic: stable key order, stable row
order, no timestamps or host data unless the caller passes an explicit
stamp. Two runs over the same inputs produce byte-identical output.
"""

from __future__ import annotations

import csv
import io as _stdio
import json
from dataclasses import dataclass, field

from tmforge.botnet import BotnetAssessment, CrimeStage, STAGE_LEGEND
from tmforge.mitigation import MitigationPlan, SimulationResult
from tmforge.model import SystemModel
from tmforge.rules import (
    CATEGORY_METHOD,
    ThreatCategory,
    ThreatFinding,
    ThreatMethod,
    property_sort_key,
)

COUNT_ONLY_MARKER = "provenance: count-only"

_COUNT_ONLY_NOTE = (
    "Rules marked 'provenance: count-only' reconstruct findings that the "
    "upstream assessment reported only as totals; their titles are "
    "plausible reconstructions, their counts are exact."
)
_DERIVED_TOTALS_NOTE = (
    "Per-category totals are derived by summing the per-zone counts encoded "
    "in the rule catalogs."
)


@dataclass(frozen=True)
class FrequencyReport:
    """Finding counts, overall and per zone.

    ``per_category`` covers every category (zero-filled); ``per_zone`` only
    contains zones that actually have findings, and reads as empty for any
    other zone.
    """

    per_category: dict[ThreatCategory, int] = field(default_factory=dict)
    per_zone: dict[str, dict[ThreatCategory, int]] = field(default_factory=dict)
    total: int = 0

    def zone_counts(self, zone_id: str) -> dict[ThreatCategory, int]:
        return dict(self.per_zone.get(zone_id, {}))


def frequency(findings: list[ThreatFinding]) -> FrequencyReport:
    """Exact counting of findings per category and per zone."""
    per_category = {category: 0 for category in ThreatCategory}
    per_zone: dict[str, dict[ThreatCategory, int]] = {}
    for finding in findings:
        per_category[finding.category] += 1
        zone = per_zone.setdefault(finding.zone_id, {})
        zone[finding.category] = zone.get(finding.category, 0) + 1
    return FrequencyReport(per_category=per_category, per_zone=per_zone, total=len(findings))


def _sorted_properties(finding: ThreatFinding) -> list[str]:
    return [p.value for p in sorted(finding.violated_properties, key=property_sort_key)]


def _finding_doc(finding: ThreatFinding) -> dict:
    return {
        "id": finding.finding_id,
        "rule_id": finding.rule_id,
        "subject_id": finding.subject_id,
        "zone_id": finding.zone_id,
        "method": finding.method.value,
        "category": finding.category.value,
        "violated_properties": _sorted_properties(finding),
        "narrative": finding.narrative,
    }


def _frequency_doc(freq: FrequencyReport) -> dict:
    return {
        "total": freq.total,
        "per_category": {c.value: freq.per_category.get(c, 0) for c in ThreatCategory},
        "per_zone": {
            zone_id: {
                c.value: counts[c] for c in ThreatCategory if counts.get(c, 0)
            }
            for zone_id, counts in freq.per_zone.items()
        },
    }


def _stage_values(stages) -> list[str]:
    order = list(CrimeStage)
    return [s.value for s in sorted(stages, key=order.index)]


def _botnet_doc(assessment: BotnetAssessment, model_order: list[str] | None = None) -> dict:
    devices = sorted(assessment.devices_at_risk)
    if model_order is not None:
        position = {eid: i for i, eid in enumerate(model_order)}
        devices.sort(key=lambda eid: position.get(eid, len(position)))
    return {
        "relevant": [
            {
                "finding_id": bf.finding.finding_id,
                "stages": _stage_values(bf.stages),
                "device_reachable": bf.device_reachable,
            }
            for bf in assessment.relevant
        ],
        "chains": [
            {
                "finding_id": chain.finding_id,
                "path": list(chain.path),
                "device_id": chain.device_id,
            }
            for chain in assessment.chains
        ],
        "devices_at_risk": devices,
        "stage_legend": {stage.value: STAGE_LEGEND[stage] for stage in CrimeStage},
    }


def _plan_doc(plan: MitigationPlan, simulation: SimulationResult | None) -> dict:
    doc = {
        "entries": [
            {
                "mitigation_id": entry.mitigation.id,
                "title": entry.mitigation.title,
                "finding_ids": list(entry.finding_ids),
            }
            for entry in plan.entries
        ],
        "residual": list(plan.residual),
        "coverage_ratio": str(plan.coverage_ratio),
    }
    if simulation is not None:
        doc["simulation"] = {
            "per_category": {
                c.value: {"before": before, "after": after}
                for c, (before, after) in simulation.per_category.items()
                if before or after
            },
            "notes": list(simulation.notes),
        }
    return doc


def render_json(
    findings: list[ThreatFinding],
    assessment: BotnetAssessment | None,
    plan: MitigationPlan | None,
    freq: FrequencyReport,
    simulation: SimulationResult | None = None,
    stamp: str | None = None,
    model_order: list[str] | None = None,
) -> bytes:
    """Canonical JSON report. Byte-identical across runs for fixed inputs."""
    doc: dict = {
        "schema": "tmforge.report",
        "version": "1.0",
    }
    if stamp is not None:
        doc["generated_at"] = stamp
    doc["findings"] = [_finding_doc(f) for f in findings]
    doc["frequency"] = _frequency_doc(freq)
    doc["botnet"] = _botnet_doc(assessment, model_order) if assessment is not None else None
    doc["mitigation_plan"] = _plan_doc(plan, simulation) if plan is not None else None
    notes = [_DERIVED_TOTALS_NOTE]
    if any(COUNT_ONLY_MARKER in f.narrative for f in findings):
        notes.append(_COUNT_ONLY_NOTE)
    doc["notes"] = notes
    return (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def render_csv(findings: list[ThreatFinding]) -> str:
    """Findings as comma-delimited rows, one per finding, LF line endings."""
    buffer = _stdio.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["finding_id", "rule_id", "subject_id", "zone_id", "method", "category",
         "violated_properties", "narrative"]
    )
    for finding in findings:
        writer.writerow(
            [
                finding.finding_id,
                finding.rule_id,
                finding.subject_id,
                finding.zone_id,
                finding.method.value,
                finding.category.value,
                ";".join(_sorted_properties(finding)),
                finding.narrative,
            ]
        )
    return buffer.getvalue()


def render_markdown(
    findings: list[ThreatFinding],
    assessment: BotnetAssessment | None,
    plan: MitigationPlan | None,
    freq: FrequencyReport,
    simulation: SimulationResult | None = None,
    stamp: str | None = None,
) -> str:
    """Human-readable report with summary, per-zone tables and plan."""
    lines: list[str] = ["# Threat Analysis Report", ""]

    lines.append("## Summary")
    lines.append("")
    if not findings:
        lines.append("No threats identified.")
        lines.append("")
    else:
        stride = sum(1 for f in findings if f.method is ThreatMethod.STRIDE)
        vast = len(findings) - stride
        lines.append(f"- Total findings: {freq.total}")
        lines.append(f"- STRIDE findings: {stride}")
        lines.append(f"- VAST findings: {vast}")
        if assessment is not None:
            lines.append(f"- Botnet-relevant findings: {len(assessment.relevant)}")
        if plan is not None:
            lines.append(f"- Mitigation coverage: {plan.coverage_ratio}")
        lines.append("")

        lines.append("## Findings by Zone")
        lines.append("")
        lines.append("| Zone | Category | Count |")
        lines.append("| --- | --- | --- |")
        for zone_id, counts in freq.per_zone.items():
            for category in ThreatCategory:
                if counts.get(category, 0):
                    lines.append(f"| {zone_id} | {category.value} | {counts[category]} |")
        lines.append("")

        lines.append("## Findings")
        lines.append("")
        lines.append("| Finding | Zone | Category | Violated properties |")
        lines.append("| --- | --- | --- | --- |")
        for finding in findings:
            props = ", ".join(_sorted_properties(finding))
            lines.append(
                f"| {finding.finding_id} | {finding.zone_id} | {finding.category.value} | {props} |"
            )
        lines.append("")

    if assessment is not None:
        lines.append("## Botnet Assessment")
        lines.append("")
        devices = ", ".join(sorted(assessment.devices_at_risk)) or "none"
        lines.append(f"- Devices at risk: {devices}")
        lines.append(f"- Attack chains: {len(assessment.chains)}")
        lines.append("")
        lines.append("### Lifecycle stage legend")
        lines.append("")
        lines.append("| Stage | Meaning |")
        lines.append("| --- | --- |")
        for stage in CrimeStage:
            lines.append(f"| {stage.value} | {STAGE_LEGEND[stage]} |")
        lines.append("")
        if assessment.relevant:
            lines.append("### Relevant findings")
            lines.append("")
            lines.append("| Finding | Stages |")
            lines.append("| --- | --- |")
            for bf in assessment.relevant:
                stages = ", ".join(_stage_values(bf.stages))
                lines.append(f"| {bf.finding.finding_id} | {stages} |")
            lines.append("")
        if assessment.chains:
            lines.append("### Attack chains")
            lines.append("")
            lines.append("Chains sharing a path are grouped; origins list the findings")
            lines.append("whose subject starts the walk.")
            lines.append("")
            lines.append("| Path | Device | Origin findings |")
            lines.append("| --- | --- | --- |")
            grouped: dict[tuple[str, ...], list[str]] = {}
            for chain in assessment.chains:
                grouped.setdefault(chain.path, []).append(chain.finding_id)
            for path, origins in grouped.items():
                arrow = " -> ".join(path)
                lines.append(f"| {arrow} | {path[-1]} | {', '.join(origins)} |")
            lines.append("")

    if plan is not None:
        lines.append("## Mitigation Plan")
        lines.append("")
        lines.append(f"- Coverage ratio: {plan.coverage_ratio}")
        lines.append(f"- Residual findings: {len(plan.residual)}")
        lines.append("")
        if plan.entries:
            lines.append("| Mitigation | Findings addressed |")
            lines.append("| --- | --- |")
            for entry in plan.entries:
                lines.append(f"| {entry.mitigation.id} | {len(entry.finding_ids)} |")
            lines.append("")
        if plan.residual:
            lines.append("Residual finding ids: " + ", ".join(plan.residual))
            lines.append("")
        if simulation is not None:
            lines.append("### Simulated re-analysis")
            lines.append("")
            lines.append("| Category | Before | After |")
            lines.append("| --- | --- | --- |")
            for category in ThreatCategory:
                before, after = simulation.per_category[category]
                if before or after:
                    lines.append(f"| {category.value} | {before} | {after} |")
            lines.append("")
            for note in simulation.notes:
                lines.append(f"- Note: {note}")
            if simulation.notes:
                lines.append("")

    lines.append("## Notes")
    lines.append("")
    lines.append(f"- {_DERIVED_TOTALS_NOTE}")
    if any(COUNT_ONLY_MARKER in f.narrative for f in findings):
        lines.append(f"- {_COUNT_ONLY_NOTE}")
    if stamp is not None:
        lines.append(f"- Generated at: {stamp}")
    lines.append("")
    return "\n".join(lines)


def _dot_quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def render_dot(model: SystemModel) -> str:
    """DOT digraph: one dashed cluster per zone, one edge per flow.

    Node and edge order follow model order; every flow id appears exactly
    once, as its edge's label. Bidirectional flows render with dir=both.
    """
    lines = [f"digraph {_dot_quote(model.name)} {{"]
    lines.append("  rankdir=LR;")
    lines.append("  node [shape=box];")
    for zone in model.zones:
        lines.append(f"  subgraph {_dot_quote('cluster_' + zone.id)} {{")
        lines.append(f"    label={_dot_quote(zone.name)};")
        lines.append("    style=dashed;")
        lines.append("    color=red;")
        for element in model.elements:
            if element.zone_id == zone.id:
                lines.append(f"    {_dot_quote(element.id)} [label={_dot_quote(element.name)}];")
        lines.append("  }")
    for flow in model.flows:
        attrs = f"label={_dot_quote(flow.id)}"
        if flow.bidirectional:
            attrs += ", dir=both"
        lines.append(f"  {_dot_quote(flow.source)} -> {_dot_quote(flow.target)} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
