"""Mitigation catalogs, plan construction and model patching.

A mitigation is a model patch: it flips element attributes to their hardened
values and/or switches flows to encrypted/authenticated transport. Applying
a mitigation produces a new model; re-analysis on the patched model is how a
plan proves its effect.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from tmforge.model import Element, ElementKind, Flow, SystemModel, ZoneKind
from tmforge.rules import RuleCatalog, ThreatCategory, ThreatFinding, analyze


@dataclass(frozen=True)
class ElementPatch:
    """Set one attribute on every element matched by the selector.

    Exactly one of ``zone_kind``, ``element_kind`` or ``element_id`` is set.
    """

    attribute: str
    value: bool
    zone_kind: ZoneKind | None = None
    element_kind: ElementKind | None = None
    element_id: str | None = None

    def selector_label(self) -> str:
        if self.zone_kind is not None:
            return f"zone_kind={self.zone_kind.value}"
        if self.element_kind is not None:
            return f"element_kind={self.element_kind.value}"
        return f"element_id={self.element_id}"


@dataclass(frozen=True)
class FlowPatch:
    """Switch matching flows to encrypted and/or authenticated transport.

    Flow patches only ever set these flags to True; loosening transport is
    not a mitigation. ``all_flows`` selects everything; ``zone_kind`` selects
    flows with at least one endpoint in a zone of that kind; ``flow_id``
    selects one flow.
    """

    encrypted: bool = False
    authenticated: bool = False
    all_flows: bool = False
    zone_kind: ZoneKind | None = None
    flow_id: str | None = None

    def selector_label(self) -> str:
        if self.all_flows:
            return "all flows"
        if self.zone_kind is not None:
            return f"flows touching zone_kind={self.zone_kind.value}"
        return f"flow_id={self.flow_id}"


@dataclass(frozen=True)
class Mitigation:
    id: str
    title: str
    description: str
    element_patches: tuple[ElementPatch, ...] = ()
    flow_patches: tuple[FlowPatch, ...] = ()
    addresses_rule_ids: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "element_patches", tuple(self.element_patches))
        object.__setattr__(self, "flow_patches", tuple(self.flow_patches))
        object.__setattr__(self, "addresses_rule_ids", frozenset(self.addresses_rule_ids))


@dataclass(frozen=True)
class MitigationCatalog:
    name: str
    mitigations: tuple[Mitigation, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "mitigations", tuple(self.mitigations))

    def mitigation(self, mitigation_id: str) -> Mitigation:
        for m in self.mitigations:
            if m.id == mitigation_id:
                return m
        raise LookupError(f"no mitigation with id {mitigation_id!r}")


@dataclass(frozen=True)
class PlanEntry:
    mitigation: Mitigation
    finding_ids: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "finding_ids", tuple(self.finding_ids))


@dataclass(frozen=True)
class MitigationPlan:
    """Findings matched against a mitigation catalog.

    ``entries`` holds every mitigation that addresses at least one input
    finding, sorted by mitigation id. ``residual`` lists findings no
    mitigation addresses. ``coverage_ratio`` is exact: addressed over total,
    and 1 when there were no findings at all.
    """

    entries: tuple[PlanEntry, ...] = ()
    residual: tuple[str, ...] = ()
    coverage_ratio: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        object.__setattr__(self, "residual", tuple(self.residual))

    def mitigations(self) -> list[Mitigation]:
        return [entry.mitigation for entry in self.entries]


@dataclass(frozen=True)
class SimulationResult:
    """Per-category finding counts before and after applying a plan.

    ``notes`` records patch selectors that matched nothing (no-ops).
    """

    per_category: dict[ThreatCategory, tuple[int, int]]
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_category", dict(self.per_category))
        object.__setattr__(self, "notes", tuple(self.notes))


def recommend(findings: list[ThreatFinding], catalog: MitigationCatalog) -> MitigationPlan:
    """Match every finding to every mitigation that addresses its rule."""
    by_mitigation: dict[str, list[str]] = {}
    addressed: set[str] = set()
    for mitigation in catalog.mitigations:
        matched = [
            f.finding_id for f in findings if f.rule_id in mitigation.addresses_rule_ids
        ]
        if matched:
            by_mitigation[mitigation.id] = matched
            addressed.update(matched)
    entries = tuple(
        PlanEntry(mitigation=catalog.mitigation(mid), finding_ids=tuple(by_mitigation[mid]))
        for mid in sorted(by_mitigation)
    )
    residual = tuple(f.finding_id for f in findings if f.finding_id not in addressed)
    if findings:
        ratio = Fraction(len(findings) - len(residual), len(findings))
    else:
        ratio = Fraction(1)
    return MitigationPlan(entries=entries, residual=residual, coverage_ratio=ratio)


def _element_matches(patch: ElementPatch, element: Element, model: SystemModel) -> bool:
    if patch.element_id is not None:
        return element.id == patch.element_id
    if patch.element_kind is not None:
        return element.kind is patch.element_kind
    return model.zone(element.zone_id).kind is patch.zone_kind


def _flow_matches(patch: FlowPatch, flow: Flow, model: SystemModel) -> bool:
    if patch.all_flows:
        return True
    if patch.flow_id is not None:
        return flow.id == patch.flow_id
    kinds = {
        model.zone_of_element(flow.source).kind,
        model.zone_of_element(flow.target).kind,
    }
    return patch.zone_kind in kinds


def apply_mitigation(
    model: SystemModel,
    mitigation: Mitigation,
    notes: list[str] | None = None,
) -> SystemModel:
    """Return a new model with the mitigation's patches applied.

    The input model is untouched. Applying the same mitigation twice is a
    no-op the second time. A selector that matches nothing leaves the model
    unchanged and, when ``notes`` is given, appends a warning to it.
    """
    elements = list(model.elements)
    flows = list(model.flows)

    for patch in mitigation.element_patches:
        matched = False
        for i, element in enumerate(elements):
            if _element_matches(patch, element, model):
                matched = True
                attrs = dict(element.attributes)
                attrs[patch.attribute] = patch.value
                elements[i] = replace(element, attributes=attrs)
        if not matched and notes is not None:
            notes.append(
                f"mitigation {mitigation.id}: selector {patch.selector_label()} matched nothing"
            )

    for patch in mitigation.flow_patches:
        matched = False
        for i, flow in enumerate(flows):
            if _flow_matches(patch, flow, model):
                matched = True
                updated = flow
                if patch.encrypted:
                    updated = replace(updated, encrypted=True)
                if patch.authenticated:
                    updated = replace(updated, authenticated=True)
                flows[i] = updated
        if not matched and notes is not None:
            notes.append(
                f"mitigation {mitigation.id}: selector {patch.selector_label()} matched nothing"
            )

    return replace(model, elements=tuple(elements), flows=tuple(flows))


def apply_all(
    model: SystemModel, mitigations: list[Mitigation]
) -> tuple[SystemModel, list[str]]:
    """Apply mitigations in order; returns the patched model and no-op notes."""
    notes: list[str] = []
    patched = model
    for mitigation in mitigations:
        patched = apply_mitigation(patched, mitigation, notes)
    return patched, notes


def _count_by_category(findings: list[ThreatFinding]) -> dict[ThreatCategory, int]:
    counts = {category: 0 for category in ThreatCategory}
    for finding in findings:
        counts[finding.category] += 1
    return counts


def simulate_plan(
    model: SystemModel,
    plan: MitigationPlan,
    catalogs: list[RuleCatalog],
    method_filter: str = "both",
) -> SimulationResult:
    """Re-analyze after applying the whole plan and compare counts.

    After-counts are never above before-counts in any category: conditions
    match insecure configuration and patches only harden.
    """
    before = _count_by_category(analyze(model, catalogs, method_filter))
    patched, notes = apply_all(model, plan.mitigations())
    after = _count_by_category(analyze(patched, catalogs, method_filter))
    per_category = {
        category: (before[category], after[category]) for category in ThreatCategory
    }
    return SimulationResult(per_category=per_category, notes=tuple(notes))
