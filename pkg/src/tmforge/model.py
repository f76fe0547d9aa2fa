"""Domain model for zone-based system descriptions.

A system model is a set of trust zones, the elements deployed in them, and
the data flows between those elements. Everything downstream (rule
evaluation, botnet assessment, mitigation planning) is a pure function over
this model, so the types here are treated as immutable values: constructors
freeze their collections and operations always return fresh data.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property


class ZoneKind(str, Enum):
    """Trust-zone classification used for rule targeting."""

    IOT_DEVICE = "iot_device"
    FIELD_GATEWAY = "field_gateway"
    CLOUD_GATEWAY = "cloud_gateway"
    AZURE_CLOUD = "azure_cloud"
    CONSUMER = "consumer"
    CUSTOM = "custom"


class ElementKind(str, Enum):
    """What an element is, architecturally."""

    SENSOR = "sensor"
    ACTUATOR = "actuator"
    EMBEDDED_DEVICE = "embedded_device"
    GATEWAY = "gateway"
    SERVICE_PROCESS = "service_process"
    DATA_STORE = "data_store"
    HUB = "hub"
    ANALYTICS_ENGINE = "analytics_engine"
    EXTERNAL_USER = "external_user"
    MOBILE_APP = "mobile_app"


#: Closed vocabulary of boolean security attributes an element may declare.
#: Attribute names outside this set are validation errors, never silently
#: ignored: a typo in a security posture file must not weaken the analysis.
ATTRIBUTE_VOCABULARY = frozenset(
    {
        "shared_auth_tokens",
        "default_credentials",
        "auditing_enabled",
        "os_patched",
        "secure_boot_enabled",
        "storage_encrypted",
        "queries_authenticated",
        "exposes_unused_services",
        "root_detection_enabled",
        "binaries_obfuscated",
        "rbac_enabled",
    }
)

#: The value of each attribute that counts as the hardened configuration.
#: Mitigation patches only ever move attributes toward these values, which
#: is what makes re-analysis after patching monotonically non-increasing.
SECURE_ATTRIBUTE_VALUES: dict[str, bool] = {
    "shared_auth_tokens": False,
    "default_credentials": False,
    "auditing_enabled": True,
    "os_patched": True,
    "secure_boot_enabled": True,
    "storage_encrypted": True,
    "queries_authenticated": True,
    "exposes_unused_services": False,
    "root_detection_enabled": True,
    "binaries_obfuscated": True,
    "rbac_enabled": True,
}


class ValidationCode(str, Enum):
    DUPLICATE_ID = "duplicate_id"
    DANGLING_ZONE = "dangling_zone"
    DANGLING_ENDPOINT = "dangling_endpoint"
    SELF_FLOW = "self_flow"
    UNKNOWN_ATTRIBUTE = "unknown_attribute"
    UNKNOWN_KIND = "unknown_kind"
    SCHEMA_MISMATCH = "schema_mismatch"


@dataclass(frozen=True)
class ValidationError:
    """One defect found in a model or document.

    ``subject`` is the id of the offending zone/element/flow/rule, or
    ``"document"`` for file-level problems.
    """

    code: ValidationCode
    subject: str
    message: str

    def __str__(self) -> str:
        return f"{self.code.value}: {self.subject}: {self.message}"


@dataclass(frozen=True)
class Zone:
    id: str
    name: str
    kind: ZoneKind


@dataclass(frozen=True)
class Element:
    id: str
    name: str
    zone_id: str
    kind: ElementKind
    attributes: dict[str, bool] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "attributes", dict(self.attributes))


@dataclass(frozen=True)
class Flow:
    """A request/response channel between two elements.

    ``bidirectional`` flows are traversable in both directions for path
    queries and count as inbound at both endpoints.
    """

    id: str
    source: str
    target: str
    protocol: str
    encrypted: bool
    authenticated: bool
    bidirectional: bool


@dataclass(frozen=True)
class SystemModel:
    name: str
    schema_version: str = "1.0"
    zones: tuple[Zone, ...] = ()
    elements: tuple[Element, ...] = ()
    flows: tuple[Flow, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "zones", tuple(self.zones))
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "flows", tuple(self.flows))

    @cached_property
    def _zones_by_id(self) -> dict[str, Zone]:
        return {z.id: z for z in self.zones}

    @cached_property
    def _elements_by_id(self) -> dict[str, Element]:
        return {e.id: e for e in self.elements}

    @cached_property
    def _flows_by_id(self) -> dict[str, Flow]:
        return {f.id: f for f in self.flows}

    def zone(self, zone_id: str) -> Zone:
        try:
            return self._zones_by_id[zone_id]
        except KeyError:
            raise LookupError(f"no zone with id {zone_id!r}") from None

    def element(self, element_id: str) -> Element:
        try:
            return self._elements_by_id[element_id]
        except KeyError:
            raise LookupError(f"no element with id {element_id!r}") from None

    def flow(self, flow_id: str) -> Flow:
        try:
            return self._flows_by_id[flow_id]
        except KeyError:
            raise LookupError(f"no flow with id {flow_id!r}") from None

    def has_element(self, element_id: str) -> bool:
        return element_id in self._elements_by_id

    def has_flow(self, flow_id: str) -> bool:
        return flow_id in self._flows_by_id

    def zone_of_element(self, element_id: str) -> Zone:
        return self.zone(self.element(element_id).zone_id)


def validate_model(model: SystemModel) -> list[ValidationError]:
    """Check every structural invariant of a model.

    Returns an empty list iff the model is valid. Accepts any structurally
    constructed model; the result is deterministic and sorted by
    (code, subject, message). Never raises.
    """
    errors: list[ValidationError] = []

    # Ids must be unique and the zone/element/flow id spaces disjoint.
    seen: dict[str, str] = {}
    for label, items in (
        ("zone", model.zones),
        ("element", model.elements),
        ("flow", model.flows),
    ):
        for item in items:
            if item.id in seen:
                errors.append(
                    ValidationError(
                        ValidationCode.DUPLICATE_ID,
                        item.id,
                        f"{label} id {item.id!r} already used by a {seen[item.id]}",
                    )
                )
            else:
                seen[item.id] = label

    zone_ids = {z.id for z in model.zones}
    element_ids = {e.id for e in model.elements}

    for zone in model.zones:
        if not isinstance(zone.kind, ZoneKind):
            errors.append(
                ValidationError(
                    ValidationCode.UNKNOWN_KIND,
                    zone.id,
                    f"unknown zone kind {zone.kind!r}",
                )
            )

    for element in model.elements:
        if not isinstance(element.kind, ElementKind):
            errors.append(
                ValidationError(
                    ValidationCode.UNKNOWN_KIND,
                    element.id,
                    f"unknown element kind {element.kind!r}",
                )
            )
        if element.zone_id not in zone_ids:
            errors.append(
                ValidationError(
                    ValidationCode.DANGLING_ZONE,
                    element.id,
                    f"zone_id {element.zone_id!r} does not name a zone",
                )
            )
        for attr in sorted(element.attributes):
            if attr not in ATTRIBUTE_VOCABULARY:
                errors.append(
                    ValidationError(
                        ValidationCode.UNKNOWN_ATTRIBUTE,
                        element.id,
                        f"attribute {attr!r} is not in the attribute vocabulary",
                    )
                )

    for flow in model.flows:
        if flow.source == flow.target:
            errors.append(
                ValidationError(
                    ValidationCode.SELF_FLOW,
                    flow.id,
                    f"flow source and target are both {flow.source!r}",
                )
            )
        for endpoint in (flow.source, flow.target):
            if endpoint not in element_ids:
                errors.append(
                    ValidationError(
                        ValidationCode.DANGLING_ENDPOINT,
                        flow.id,
                        f"endpoint {endpoint!r} does not name an element",
                    )
                )

    errors.sort(key=lambda e: (e.code.value, e.subject, e.message))
    # Identical defects reported through two paths collapse to one entry.
    return list(dict.fromkeys(errors))


def crosses_boundary(flow: Flow, model: SystemModel) -> bool:
    """True iff the flow's endpoints sit in different zones.

    Zone identity is what matters, not zone kind: two distinct custom zones
    still form a trust boundary. Raises LookupError for unresolved endpoints.
    """
    source_zone = model.zone_of_element(flow.source)
    target_zone = model.zone_of_element(flow.target)
    return source_zone.id != target_zone.id


def inbound_flows(element_id: str, model: SystemModel) -> list[Flow]:
    """Flows that can carry traffic into the element, in model order.

    A flow is inbound at its target, and at its source too when the flow is
    bidirectional.
    """
    result = []
    for flow in model.flows:
        if flow.target == element_id or (flow.bidirectional and flow.source == element_id):
            result.append(flow)
    return result


def incident_flows(element_id: str, model: SystemModel) -> list[Flow]:
    """Flows touching the element at either endpoint, in model order."""
    return [f for f in model.flows if element_id in (f.source, f.target)]


def successors(element_id: str, model: SystemModel) -> list[str]:
    """Directly reachable neighbour ids, in model flow order.

    Bidirectional flows are traversable both ways. The ordering is part of
    the determinism contract for path queries, not a convenience.
    """
    result = []
    for flow in model.flows:
        if flow.source == element_id:
            result.append(flow.target)
        elif flow.bidirectional and flow.target == element_id:
            result.append(flow.source)
    return result


def device_zone_ids(model: SystemModel) -> set[str]:
    return {z.id for z in model.zones if z.kind is ZoneKind.IOT_DEVICE}


def device_zone_elements(model: SystemModel) -> list[Element]:
    """Elements living in device zones, in model order."""
    zone_ids = device_zone_ids(model)
    return [e for e in model.elements if e.zone_id in zone_ids]


def reaches_device_zone(start: str, model: SystemModel) -> bool:
    """True iff a directed flow path leads from ``start`` into a device zone.

    An element already inside a device zone trivially reaches it. Raises
    LookupError when ``start`` does not resolve.
    """
    targets = {e.id for e in device_zone_elements(model)}
    start_element = model.element(start)
    if start_element.id in targets:
        return True
    visited = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for neighbour in successors(current, model):
            if neighbour in visited:
                continue
            if neighbour in targets:
                return True
            visited.add(neighbour)
            queue.append(neighbour)
    return False


def shortest_path(model: SystemModel, source_id: str, target_id: str) -> list[str] | None:
    """Fewest-hop element path from source to target, or None.

    Deterministic: breadth-first search visiting neighbours in model flow
    order, so equal-length paths tie-break toward earlier flows.
    """
    model.element(source_id)
    model.element(target_id)
    if source_id == target_id:
        return [source_id]
    parent: dict[str, str] = {source_id: source_id}
    queue = deque([source_id])
    while queue:
        current = queue.popleft()
        for neighbour in successors(current, model):
            if neighbour in parent:
                continue
            parent[neighbour] = current
            if neighbour == target_id:
                path = [neighbour]
                while path[-1] != source_id:
                    path.append(parent[path[-1]])
                path.reverse()
                return path
            queue.append(neighbour)
    return None
