"""Rule catalogs and the threat-finding engine.

A rule is a guarded production: if an element (or flow) sits in a targeted
zone kind, matches the targeted element kinds, and satisfies every
condition, the rule emits one finding for it. Conditions form a conjunction
of positive matches against insecure configuration, so hardening an
attribute can only remove findings, never add them.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from tmforge.model import (
    Element,
    ElementKind,
    Flow,
    SystemModel,
    ZoneKind,
    crosses_boundary,
    inbound_flows,
    incident_flows,
)


class ThreatMethod(str, Enum):
    STRIDE = "STRIDE"
    VAST = "VAST"


class ThreatCategory(str, Enum):
    SPOOFING = "Spoofing"
    TAMPERING = "Tampering"
    REPUDIATION = "Repudiation"
    INFORMATION_DISCLOSURE = "InformationDisclosure"
    DENIAL_OF_SERVICE = "DenialOfService"
    ELEVATION_OF_PRIVILEGE = "ElevationOfPrivilege"
    AUTHENTICATION_ABUSE = "AuthenticationAbuse"
    REMOTE_CODE_INCLUSION = "RemoteCodeInclusion"
    ATTACK_HAZARD = "AttackHazard"
    MISCELLANEOUS = "Miscellaneous"


class SecurityProperty(str, Enum):
    AUTHENTICATION = "Authentication"
    INTEGRITY = "Integrity"
    NON_REPUDIATION = "NonRepudiation"
    CONFIDENTIALITY = "Confidentiality"
    AVAILABILITY = "Availability"
    AUTHORIZATION = "Authorization"


#: Which method each category belongs to. The first six categories are the
#: design-level (STRIDE) taxonomy, the last four the process-level (VAST)
#: grouping.
CATEGORY_METHOD: dict[ThreatCategory, ThreatMethod] = {
    ThreatCategory.SPOOFING: ThreatMethod.STRIDE,
    ThreatCategory.TAMPERING: ThreatMethod.STRIDE,
    ThreatCategory.REPUDIATION: ThreatMethod.STRIDE,
    ThreatCategory.INFORMATION_DISCLOSURE: ThreatMethod.STRIDE,
    ThreatCategory.DENIAL_OF_SERVICE: ThreatMethod.STRIDE,
    ThreatCategory.ELEVATION_OF_PRIVILEGE: ThreatMethod.STRIDE,
    ThreatCategory.AUTHENTICATION_ABUSE: ThreatMethod.VAST,
    ThreatCategory.REMOTE_CODE_INCLUSION: ThreatMethod.VAST,
    ThreatCategory.ATTACK_HAZARD: ThreatMethod.VAST,
    ThreatCategory.MISCELLANEOUS: ThreatMethod.VAST,
}

_VIOLATION_MAP: dict[ThreatCategory, frozenset[SecurityProperty]] = {
    ThreatCategory.SPOOFING: frozenset({SecurityProperty.AUTHENTICATION}),
    ThreatCategory.TAMPERING: frozenset({SecurityProperty.INTEGRITY}),
    ThreatCategory.REPUDIATION: frozenset({SecurityProperty.NON_REPUDIATION}),
    ThreatCategory.INFORMATION_DISCLOSURE: frozenset({SecurityProperty.CONFIDENTIALITY}),
    ThreatCategory.DENIAL_OF_SERVICE: frozenset({SecurityProperty.AVAILABILITY}),
    ThreatCategory.ELEVATION_OF_PRIVILEGE: frozenset({SecurityProperty.AUTHORIZATION}),
    ThreatCategory.AUTHENTICATION_ABUSE: frozenset(
        {SecurityProperty.AUTHENTICATION, SecurityProperty.AUTHORIZATION}
    ),
    ThreatCategory.REMOTE_CODE_INCLUSION: frozenset(
        {SecurityProperty.INTEGRITY, SecurityProperty.NON_REPUDIATION}
    ),
    ThreatCategory.ATTACK_HAZARD: frozenset(
        {SecurityProperty.AVAILABILITY, SecurityProperty.CONFIDENTIALITY}
    ),
    ThreatCategory.MISCELLANEOUS: frozenset(SecurityProperty),
}


def classify_violation(category: ThreatCategory) -> frozenset[SecurityProperty]:
    """Map a threat category to the security properties it violates.

    This is the fixed taxonomy table; rules may narrow it (declare a subset)
    but never widen it.
    """
    return _VIOLATION_MAP[category]


def property_sort_key(prop: SecurityProperty) -> int:
    return list(SecurityProperty).index(prop)


class ConditionKind(str, Enum):
    ELEMENT_ATTRIBUTE_EQUALS = "element_attribute_equals"
    INBOUND_FLOW_UNENCRYPTED = "inbound_flow_unencrypted"
    INBOUND_FLOW_UNAUTHENTICATED = "inbound_flow_unauthenticated"
    ANY_BOUNDARY_CROSSING_FLOW = "any_boundary_crossing_flow"


class RuleSubject(str, Enum):
    ELEMENT = "element"
    FLOW = "flow"


@dataclass(frozen=True)
class Condition:
    """One conjunct of a rule guard.

    ``attribute`` and ``expected`` are set iff ``kind`` is
    ``element_attribute_equals``. An attribute condition only matches when
    the attribute is explicitly declared on the element; absence never
    matches, so models state their security posture explicitly.
    """

    kind: ConditionKind
    attribute: str | None = None
    expected: bool | None = None


@dataclass(frozen=True)
class ThreatRule:
    id: str
    method: ThreatMethod
    category: ThreatCategory
    title: str
    narrative: str
    target_zone_kinds: frozenset[ZoneKind] = frozenset()
    target_element_kinds: frozenset[ElementKind] = frozenset()
    conditions: tuple[Condition, ...] = ()
    violated_properties: frozenset[SecurityProperty] = frozenset()
    mitigation_ids: frozenset[str] = frozenset()
    subject: RuleSubject = RuleSubject.ELEMENT

    def __post_init__(self) -> None:
        object.__setattr__(self, "target_zone_kinds", frozenset(self.target_zone_kinds))
        object.__setattr__(self, "target_element_kinds", frozenset(self.target_element_kinds))
        object.__setattr__(self, "conditions", tuple(self.conditions))
        object.__setattr__(self, "violated_properties", frozenset(self.violated_properties))
        object.__setattr__(self, "mitigation_ids", frozenset(self.mitigation_ids))


@dataclass(frozen=True)
class RuleCatalog:
    name: str
    rules: tuple[ThreatRule, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))


@dataclass(frozen=True)
class ThreatFinding:
    """One identified threat, bound to an element or flow of the model.

    ``zone_id`` is the subject's zone; for flow subjects it is the zone of
    the flow's source element, which keeps channel threats reported under
    the upstream zone.
    """

    rule_id: str
    subject_id: str
    zone_id: str
    category: ThreatCategory
    violated_properties: frozenset[SecurityProperty] = frozenset()
    narrative: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "violated_properties", frozenset(self.violated_properties))

    @property
    def finding_id(self) -> str:
        """Stable identity: a rule fires at most once per subject."""
        return f"{self.rule_id}@{self.subject_id}"

    @property
    def method(self) -> ThreatMethod:
        return CATEGORY_METHOD[self.category]


def _zone_kind_matches(rule: ThreatRule, zone_kind: ZoneKind) -> bool:
    # An empty zone target means "any non-custom zone"; custom zones only
    # match rules that name the custom kind explicitly.
    if rule.target_zone_kinds:
        return zone_kind in rule.target_zone_kinds
    return zone_kind is not ZoneKind.CUSTOM


def _element_kind_matches(rule: ThreatRule, kind: ElementKind) -> bool:
    return not rule.target_element_kinds or kind in rule.target_element_kinds


def _element_condition_holds(condition: Condition, element: Element, model: SystemModel) -> bool:
    if condition.kind is ConditionKind.ELEMENT_ATTRIBUTE_EQUALS:
        declared = element.attributes.get(condition.attribute)
        return declared is not None and declared == condition.expected
    if condition.kind is ConditionKind.INBOUND_FLOW_UNENCRYPTED:
        return any(not f.encrypted for f in inbound_flows(element.id, model))
    if condition.kind is ConditionKind.INBOUND_FLOW_UNAUTHENTICATED:
        return any(not f.authenticated for f in inbound_flows(element.id, model))
    if condition.kind is ConditionKind.ANY_BOUNDARY_CROSSING_FLOW:
        return any(crosses_boundary(f, model) for f in incident_flows(element.id, model))
    raise ValueError(f"unhandled condition kind {condition.kind}")


def _flow_condition_holds(condition: Condition, flow: Flow, model: SystemModel) -> bool:
    # Flow-subject rules read attribute conditions against the source
    # element and the channel conditions against the flow itself.
    if condition.kind is ConditionKind.ELEMENT_ATTRIBUTE_EQUALS:
        source = model.element(flow.source)
        declared = source.attributes.get(condition.attribute)
        return declared is not None and declared == condition.expected
    if condition.kind is ConditionKind.INBOUND_FLOW_UNENCRYPTED:
        return not flow.encrypted
    if condition.kind is ConditionKind.INBOUND_FLOW_UNAUTHENTICATED:
        return not flow.authenticated
    if condition.kind is ConditionKind.ANY_BOUNDARY_CROSSING_FLOW:
        return crosses_boundary(flow, model)
    raise ValueError(f"unhandled condition kind {condition.kind}")


def evaluate_rule(rule: ThreatRule, model: SystemModel) -> list[ThreatFinding]:
    """Emit one finding per matching subject, in model order.

    An empty condition list always fires for matching targets; that is the
    degenerate conjunction and such rules cannot be mitigated away, so the
    shipped catalogs avoid them.
    """
    findings: list[ThreatFinding] = []
    if rule.subject is RuleSubject.ELEMENT:
        for element in model.elements:
            zone = model.zone(element.zone_id)
            if not _zone_kind_matches(rule, zone.kind):
                continue
            if not _element_kind_matches(rule, element.kind):
                continue
            if all(_element_condition_holds(c, element, model) for c in rule.conditions):
                findings.append(
                    ThreatFinding(
                        rule_id=rule.id,
                        subject_id=element.id,
                        zone_id=zone.id,
                        category=rule.category,
                        violated_properties=rule.violated_properties,
                        narrative=rule.narrative,
                    )
                )
    else:
        for flow in model.flows:
            source = model.element(flow.source)
            zone = model.zone(source.zone_id)
            if not _zone_kind_matches(rule, zone.kind):
                continue
            if not _element_kind_matches(rule, source.kind):
                continue
            if all(_flow_condition_holds(c, flow, model) for c in rule.conditions):
                findings.append(
                    ThreatFinding(
                        rule_id=rule.id,
                        subject_id=flow.id,
                        zone_id=zone.id,
                        category=rule.category,
                        violated_properties=rule.violated_properties,
                        narrative=rule.narrative,
                    )
                )
    return findings


def _subject_order(model: SystemModel) -> dict[str, int]:
    # Elements sort by their model position; flows come after all elements,
    # again in model order.
    order = {e.id: i for i, e in enumerate(model.elements)}
    base = len(model.elements)
    for i, flow in enumerate(model.flows):
        order[flow.id] = base + i
    return order


def analyze(
    model: SystemModel,
    catalogs: list[RuleCatalog],
    method_filter: str = "both",
) -> list[ThreatFinding]:
    """Evaluate every catalog rule against the model.

    ``method_filter`` is one of ``"stride"``, ``"vast"`` or ``"both"``.
    The result order is part of the contract: findings sort by the zone's
    position in the model, then the subject's position, then rule id.
    """
    if method_filter not in ("stride", "vast", "both"):
        raise ValueError(f"method_filter must be stride, vast or both, got {method_filter!r}")
    wanted: tuple[ThreatMethod, ...]
    if method_filter == "stride":
        wanted = (ThreatMethod.STRIDE,)
    elif method_filter == "vast":
        wanted = (ThreatMethod.VAST,)
    else:
        wanted = (ThreatMethod.STRIDE, ThreatMethod.VAST)

    findings: list[ThreatFinding] = []
    for catalog in catalogs:
        for rule in catalog.rules:
            if rule.method in wanted:
                findings.extend(evaluate_rule(rule, model))

    zone_order = {z.id: i for i, z in enumerate(model.zones)}
    subject_order = _subject_order(model)
    findings.sort(
        key=lambda f: (zone_order[f.zone_id], subject_order[f.subject_id], f.rule_id)
    )
    return findings


def validate_rule(rule: ThreatRule) -> list[str]:
    """Internal consistency problems of a single rule, as messages."""
    problems = []
    if CATEGORY_METHOD[rule.category] is not rule.method:
        problems.append(
            f"category {rule.category.value} belongs to method "
            f"{CATEGORY_METHOD[rule.category].value}, not {rule.method.value}"
        )
    if not rule.violated_properties:
        problems.append("violated_properties must not be empty")
    extra = rule.violated_properties - classify_violation(rule.category)
    if extra:
        names = ", ".join(sorted(p.value for p in extra))
        problems.append(
            f"violated_properties {names} not permitted for category {rule.category.value}"
        )
    if not rule.mitigation_ids:
        problems.append("mitigation_ids must not be empty")
    for i, condition in enumerate(rule.conditions):
        is_attr = condition.kind is ConditionKind.ELEMENT_ATTRIBUTE_EQUALS
        if is_attr and (condition.attribute is None or condition.expected is None):
            problems.append(f"conditions[{i}]: attribute and expected are required")
        if not is_attr and (condition.attribute is not None or condition.expected is not None):
            problems.append(f"conditions[{i}]: attribute/expected only apply to attribute conditions")
    return problems
