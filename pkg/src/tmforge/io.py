"""Reading and writing the structured-text document formats.

Three document kinds share one YAML-subset grammar (see docs/schema.md):
``.tmodel`` system models, ``.tcatalog`` rule catalogs and ``.tmitig``
mitigation catalogs. Loading is strict: unknown keys, duplicate keys, wrong
types and dangling references are errors, because a typo in a security file
must never silently weaken the analysis. Saving is canonical: fixed key
order, sorted sets, UTF-8, LF line endings, byte-identical across runs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import yaml

from tmforge.mitigation import ElementPatch, FlowPatch, Mitigation, MitigationCatalog
from tmforge.model import (
    ATTRIBUTE_VOCABULARY,
    Element,
    ElementKind,
    Flow,
    SystemModel,
    ValidationCode,
    ValidationError,
    Zone,
    ZoneKind,
    validate_model,
)
from tmforge.rules import (
    Condition,
    ConditionKind,
    RuleCatalog,
    RuleSubject,
    SecurityProperty,
    ThreatCategory,
    ThreatMethod,
    ThreatRule,
    property_sort_key,
    validate_rule,
)

SCHEMA_MODEL = "model"
SCHEMA_RULE_CATALOG = "rule_catalog"
SCHEMA_MITIGATION_CATALOG = "mitigation_catalog"

#: Documents must declare this major version; minor additions stay
#: backward compatible and load unchanged.
SUPPORTED_MAJOR = 1

_VERSION_RE = re.compile(r"^(\d+)(?:\.\d+){0,2}$")


@dataclass(frozen=True)
class DocumentHeader:
    schema: str
    version: str


class DocumentError(Exception):
    """A document failed to parse or validate.

    Carries the full list of defects so callers can report all of them.
    """

    def __init__(self, errors: list[ValidationError]):
        self.errors = list(errors)
        super().__init__("; ".join(str(e) for e in self.errors) or "invalid document")


class _StrictLoader(yaml.SafeLoader):
    """SafeLoader that rejects duplicate mapping keys."""


def _construct_mapping_no_duplicates(loader, node, deep=False):
    mapping = {}
    for key_node, value_node in node.value:
        key = loader.construct_object(key_node, deep=deep)
        if key in mapping:
            raise yaml.constructor.ConstructorError(
                None, None, f"duplicate key {key!r}", key_node.start_mark
            )
        mapping[key] = loader.construct_object(value_node, deep=deep)
    return mapping


_StrictLoader.add_constructor(
    yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping_no_duplicates
)


def _mismatch(subject: str, message: str) -> ValidationError:
    return ValidationError(ValidationCode.SCHEMA_MISMATCH, subject, message)


class _Errors:
    def __init__(self) -> None:
        self.items: list[ValidationError] = []

    def add(self, code: ValidationCode, subject: str, message: str) -> None:
        self.items.append(ValidationError(code, subject, message))

    def mismatch(self, subject: str, message: str) -> None:
        self.add(ValidationCode.SCHEMA_MISMATCH, subject, message)

    def raise_if_any(self) -> None:
        if self.items:
            raise DocumentError(self.items)


class _Record:
    """Strict field extraction from one mapping node."""

    def __init__(self, mapping: dict, where: str, errors: _Errors):
        self.mapping = mapping
        self.where = where
        self.errors = errors
        self._taken: set[str] = set()

    def take(self, key: str, kind: type, required: bool = True, default=None):
        self._taken.add(key)
        if key not in self.mapping:
            if required:
                self.errors.mismatch(self.where, f"missing required key {key!r}")
            return default
        value = self.mapping[key]
        if kind is bool:
            if not isinstance(value, bool):
                self.errors.mismatch(self.where, f"key {key!r} must be a boolean")
                return default
        elif kind is str:
            if not isinstance(value, str) or isinstance(value, bool):
                self.errors.mismatch(self.where, f"key {key!r} must be a string")
                return default
        elif kind is list:
            if not isinstance(value, list):
                self.errors.mismatch(self.where, f"key {key!r} must be a list")
                return default
        elif kind is dict:
            if not isinstance(value, dict):
                self.errors.mismatch(self.where, f"key {key!r} must be a mapping")
                return default
        return value

    def finish(self) -> None:
        for key in sorted(set(self.mapping) - self._taken, key=str):
            self.errors.mismatch(self.where, f"unknown key {key!r}")


def _parse_document(data: bytes, expected_schema: str) -> tuple[dict, DocumentHeader]:
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DocumentError([_mismatch("document", f"not valid UTF-8: {exc}")]) from None
    try:
        doc = yaml.load(text, Loader=_StrictLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            detail = getattr(exc, "problem", None) or str(exc)
            message = f"line {mark.line + 1}, column {mark.column + 1}: {detail}"
        else:
            message = str(exc)
        raise DocumentError([_mismatch("document", message)]) from None
    if doc is None:
        raise DocumentError([_mismatch("document", "document is empty")])
    if not isinstance(doc, dict):
        raise DocumentError([_mismatch("document", "top level must be a mapping")])

    errors = _Errors()
    schema = doc.get("schema")
    if not isinstance(schema, str):
        errors.mismatch("document", "missing or non-string 'schema' key")
    elif schema != expected_schema:
        errors.mismatch(
            "document", f"schema is {schema!r}, this loader expects {expected_schema!r}"
        )
    version = doc.get("version")
    if not isinstance(version, str) or not _VERSION_RE.match(version):
        errors.mismatch("document", "missing or malformed 'version' key (want MAJOR[.MINOR[.PATCH]])")
        version = None
    elif int(version.split(".")[0]) != SUPPORTED_MAJOR:
        errors.mismatch(
            "document",
            f"unsupported major version {version!r}, this tool supports major {SUPPORTED_MAJOR}",
        )
    errors.raise_if_any()
    return doc, DocumentHeader(schema=schema, version=version)


def _item_records(doc_record: _Record, key: str, errors: _Errors) -> list[tuple[int, dict]]:
    raw = doc_record.take(key, list, required=True, default=[])
    records = []
    for i, item in enumerate(raw or []):
        if not isinstance(item, dict):
            errors.mismatch(f"{key}[{i}]", "entry must be a mapping")
            continue
        records.append((i, item))
    return records


def _subject_of(item: dict, fallback: str) -> str:
    item_id = item.get("id")
    return item_id if isinstance(item_id, str) and item_id else fallback


def _parse_enum(record: _Record, key: str, enum_cls, errors: _Errors, subject: str,
                code: ValidationCode = ValidationCode.SCHEMA_MISMATCH, required: bool = True,
                default=None):
    raw = record.take(key, str, required=required, default=None)
    if raw is None:
        return default
    try:
        return enum_cls(raw)
    except ValueError:
        allowed = ", ".join(member.value for member in enum_cls)
        errors.add(code, subject, f"{key} {raw!r} is not one of: {allowed}")
        return default


def _parse_enum_list(record: _Record, key: str, enum_cls, errors: _Errors, subject: str,
                     code: ValidationCode = ValidationCode.SCHEMA_MISMATCH) -> list:
    raw = record.take(key, list, required=False, default=[])
    values = []
    for entry in raw or []:
        try:
            values.append(enum_cls(entry))
        except (ValueError, TypeError):
            allowed = ", ".join(member.value for member in enum_cls)
            errors.add(code, subject, f"{key} entry {entry!r} is not one of: {allowed}")
    return values


def _parse_str_list(record: _Record, key: str, errors: _Errors, subject: str) -> list[str]:
    raw = record.take(key, list, required=False, default=[])
    values = []
    for entry in raw or []:
        if isinstance(entry, str) and not isinstance(entry, bool):
            values.append(entry)
        else:
            errors.mismatch(subject, f"{key} entries must be strings, got {entry!r}")
    return values


# ---------------------------------------------------------------- models


def load_model(data: bytes) -> SystemModel:
    """Parse a ``.tmodel`` document.

    The returned model always passes ``validate_model`` with zero errors;
    any parse or validation defect raises DocumentError carrying the full
    error list.
    """
    doc, header = _parse_document(data, SCHEMA_MODEL)
    errors = _Errors()
    record = _Record(doc, "document", errors)
    record.take("schema", str)
    record.take("version", str)
    name = record.take("name", str, default="")

    zones = []
    for i, item in _item_records(record, "zones", errors):
        subject = _subject_of(item, f"zones[{i}]")
        zr = _Record(item, subject, errors)
        zone_id = zr.take("id", str, default=subject)
        zone_name = zr.take("name", str, default="")
        kind = _parse_enum(zr, "kind", ZoneKind, errors, subject, code=ValidationCode.UNKNOWN_KIND)
        zr.finish()
        if zone_id is not None and kind is not None:
            zones.append(Zone(id=zone_id, name=zone_name or "", kind=kind))

    elements = []
    for i, item in _item_records(record, "elements", errors):
        subject = _subject_of(item, f"elements[{i}]")
        er = _Record(item, subject, errors)
        element_id = er.take("id", str, default=subject)
        element_name = er.take("name", str, default="")
        zone_id = er.take("zone_id", str, default="")
        kind = _parse_enum(er, "kind", ElementKind, errors, subject, code=ValidationCode.UNKNOWN_KIND)
        raw_attrs = er.take("attributes", dict, required=False, default={})
        er.finish()
        attributes = {}
        for attr_name in sorted((raw_attrs or {}), key=str):
            attr_value = raw_attrs[attr_name]
            if not isinstance(attr_name, str):
                errors.mismatch(subject, f"attribute names must be strings, got {attr_name!r}")
                continue
            if not isinstance(attr_value, bool):
                errors.mismatch(subject, f"attribute {attr_name!r} must be a boolean")
                continue
            attributes[attr_name] = attr_value
        if element_id is not None and kind is not None:
            elements.append(
                Element(
                    id=element_id,
                    name=element_name or "",
                    zone_id=zone_id or "",
                    kind=kind,
                    attributes=attributes,
                )
            )

    flows = []
    for i, item in _item_records(record, "flows", errors):
        subject = _subject_of(item, f"flows[{i}]")
        fr = _Record(item, subject, errors)
        flow_id = fr.take("id", str, default=subject)
        source = fr.take("source", str, default="")
        target = fr.take("target", str, default="")
        protocol = fr.take("protocol", str, default="")
        encrypted = fr.take("encrypted", bool, default=False)
        authenticated = fr.take("authenticated", bool, default=False)
        bidirectional = fr.take("bidirectional", bool, default=False)
        fr.finish()
        if flow_id is not None:
            flows.append(
                Flow(
                    id=flow_id,
                    source=source or "",
                    target=target or "",
                    protocol=protocol or "",
                    encrypted=bool(encrypted),
                    authenticated=bool(authenticated),
                    bidirectional=bool(bidirectional),
                )
            )

    record.finish()
    errors.raise_if_any()

    model = SystemModel(
        name=name or "",
        schema_version=header.version,
        zones=tuple(zones),
        elements=tuple(elements),
        flows=tuple(flows),
    )
    validation = validate_model(model)
    if validation:
        raise DocumentError(validation)
    return model


def save_model(model: SystemModel) -> bytes:
    """Serialize a model to canonical ``.tmodel`` bytes.

    Raises DocumentError when the model does not validate.
    """
    validation = validate_model(model)
    if validation:
        raise DocumentError(validation)
    doc = {
        "schema": SCHEMA_MODEL,
        "version": model.schema_version,
        "name": model.name,
        "zones": [
            {"id": z.id, "name": z.name, "kind": z.kind.value} for z in model.zones
        ],
        "elements": [
            {
                "id": e.id,
                "name": e.name,
                "zone_id": e.zone_id,
                "kind": e.kind.value,
                "attributes": {k: e.attributes[k] for k in sorted(e.attributes)},
            }
            for e in model.elements
        ],
        "flows": [
            {
                "id": f.id,
                "source": f.source,
                "target": f.target,
                "protocol": f.protocol,
                "encrypted": f.encrypted,
                "authenticated": f.authenticated,
                "bidirectional": f.bidirectional,
            }
            for f in model.flows
        ],
    }
    return _dump(doc)


def _dump(doc: dict) -> bytes:
    text = yaml.safe_dump(
        doc,
        sort_keys=False,
        allow_unicode=True,
        default_flow_style=False,
        width=2**31 - 1,
    )
    return text.encode("utf-8")


# ---------------------------------------------------------------- rule catalogs


def load_rule_catalog(
    data: bytes, mitigations: MitigationCatalog | None = None
) -> RuleCatalog:
    """Parse a ``.tcatalog`` document.

    When ``mitigations`` is given, every mitigation id referenced by a rule
    must resolve against it; dangling references are load errors.
    """
    doc, _header = _parse_document(data, SCHEMA_RULE_CATALOG)
    errors = _Errors()
    record = _Record(doc, "document", errors)
    record.take("schema", str)
    record.take("version", str)
    name = record.take("name", str, default="")

    rules = []
    seen_ids: set[str] = set()
    for i, item in _item_records(record, "rules", errors):
        subject = _subject_of(item, f"rules[{i}]")
        rr = _Record(item, subject, errors)
        rule_id = rr.take("id", str, default=subject)
        method = _parse_enum(rr, "method", ThreatMethod, errors, subject)
        category = _parse_enum(rr, "category", ThreatCategory, errors, subject)
        title = rr.take("title", str, default="")
        narrative = rr.take("narrative", str, required=False, default="")
        rule_subject = _parse_enum(
            rr, "subject", RuleSubject, errors, subject, required=False,
            default=RuleSubject.ELEMENT,
        )
        zone_kinds = _parse_enum_list(
            rr, "target_zone_kinds", ZoneKind, errors, subject, code=ValidationCode.UNKNOWN_KIND
        )
        element_kinds = _parse_enum_list(
            rr, "target_element_kinds", ElementKind, errors, subject,
            code=ValidationCode.UNKNOWN_KIND,
        )
        properties = _parse_enum_list(rr, "violated_properties", SecurityProperty, errors, subject)
        mitigation_ids = _parse_str_list(rr, "mitigation_ids", errors, subject)

        conditions = []
        raw_conditions = rr.take("conditions", list, required=False, default=[])
        for j, raw in enumerate(raw_conditions or []):
            if not isinstance(raw, dict):
                errors.mismatch(subject, f"conditions[{j}] must be a mapping")
                continue
            cr = _Record(raw, subject, errors)
            kind = _parse_enum(cr, "kind", ConditionKind, errors, subject)
            attribute = cr.take("attribute", str, required=False, default=None)
            expected = cr.take("expected", bool, required=False, default=None)
            cr.finish()
            if kind is None:
                continue
            if attribute is not None and attribute not in ATTRIBUTE_VOCABULARY:
                errors.add(
                    ValidationCode.UNKNOWN_ATTRIBUTE,
                    subject,
                    f"conditions[{j}]: attribute {attribute!r} is not in the attribute vocabulary",
                )
                continue
            conditions.append(Condition(kind=kind, attribute=attribute, expected=expected))
        rr.finish()

        if rule_id is None or method is None or category is None:
            continue
        if rule_id in seen_ids:
            errors.add(ValidationCode.DUPLICATE_ID, rule_id, "rule id already used")
            continue
        seen_ids.add(rule_id)
        rule = ThreatRule(
            id=rule_id,
            method=method,
            category=category,
            title=title or "",
            narrative=narrative or "",
            target_zone_kinds=frozenset(zone_kinds),
            target_element_kinds=frozenset(element_kinds),
            conditions=tuple(conditions),
            violated_properties=frozenset(properties),
            mitigation_ids=frozenset(mitigation_ids),
            subject=rule_subject,
        )
        for problem in validate_rule(rule):
            errors.mismatch(rule_id, problem)
        if mitigations is not None:
            known = {m.id for m in mitigations.mitigations}
            for mid in sorted(rule.mitigation_ids - known):
                errors.add(
                    ValidationCode.DANGLING_ENDPOINT,
                    rule_id,
                    f"mitigation id {mid!r} does not resolve in catalog {mitigations.name!r}",
                )
        rules.append(rule)

    record.finish()
    errors.raise_if_any()
    return RuleCatalog(name=name or "", rules=tuple(rules))


def save_rule_catalog(catalog: RuleCatalog) -> bytes:
    zone_order = list(ZoneKind)
    element_order = list(ElementKind)
    doc = {
        "schema": SCHEMA_RULE_CATALOG,
        "version": "1.0",
        "name": catalog.name,
        "rules": [
            {
                "id": r.id,
                "method": r.method.value,
                "category": r.category.value,
                "title": r.title,
                "narrative": r.narrative,
                "subject": r.subject.value,
                "target_zone_kinds": [
                    k.value for k in sorted(r.target_zone_kinds, key=zone_order.index)
                ],
                "target_element_kinds": [
                    k.value for k in sorted(r.target_element_kinds, key=element_order.index)
                ],
                "conditions": [_condition_doc(c) for c in r.conditions],
                "violated_properties": [
                    p.value for p in sorted(r.violated_properties, key=property_sort_key)
                ],
                "mitigation_ids": sorted(r.mitigation_ids),
            }
            for r in catalog.rules
        ],
    }
    return _dump(doc)


def _condition_doc(condition: Condition) -> dict:
    doc = {"kind": condition.kind.value}
    if condition.attribute is not None:
        doc["attribute"] = condition.attribute
    if condition.expected is not None:
        doc["expected"] = condition.expected
    return doc


# ---------------------------------------------------------------- mitigation catalogs


_ELEMENT_SELECTOR_KEYS = ("zone_kind", "element_kind", "element_id")
_FLOW_SELECTOR_KEYS = ("all", "zone_kind", "flow_id")


def load_mitigation_catalog(data: bytes) -> MitigationCatalog:
    """Parse a ``.tmitig`` document."""
    doc, _header = _parse_document(data, SCHEMA_MITIGATION_CATALOG)
    errors = _Errors()
    record = _Record(doc, "document", errors)
    record.take("schema", str)
    record.take("version", str)
    name = record.take("name", str, default="")

    mitigations = []
    seen_ids: set[str] = set()
    for i, item in _item_records(record, "mitigations", errors):
        subject = _subject_of(item, f"mitigations[{i}]")
        mr = _Record(item, subject, errors)
        mitigation_id = mr.take("id", str, default=subject)
        title = mr.take("title", str, default="")
        description = mr.take("description", str, required=False, default="")
        addresses = _parse_str_list(mr, "addresses_rule_ids", errors, subject)

        element_patches = []
        raw_patches = mr.take("element_patches", list, required=False, default=[])
        for j, raw in enumerate(raw_patches or []):
            if not isinstance(raw, dict):
                errors.mismatch(subject, f"element_patches[{j}] must be a mapping")
                continue
            pr = _Record(raw, subject, errors)
            zone_kind = _parse_enum(
                pr, "zone_kind", ZoneKind, errors, subject,
                code=ValidationCode.UNKNOWN_KIND, required=False,
            )
            element_kind = _parse_enum(
                pr, "element_kind", ElementKind, errors, subject,
                code=ValidationCode.UNKNOWN_KIND, required=False,
            )
            element_id = pr.take("element_id", str, required=False, default=None)
            attribute = pr.take("attribute", str, default=None)
            value = pr.take("value", bool, default=None)
            pr.finish()
            selectors = [s for s in (zone_kind, element_kind, element_id) if s is not None]
            if len(selectors) != 1:
                errors.mismatch(
                    subject,
                    f"element_patches[{j}]: exactly one of {', '.join(_ELEMENT_SELECTOR_KEYS)} required",
                )
                continue
            if attribute is None or value is None:
                continue
            if attribute not in ATTRIBUTE_VOCABULARY:
                errors.add(
                    ValidationCode.UNKNOWN_ATTRIBUTE,
                    subject,
                    f"element_patches[{j}]: attribute {attribute!r} is not in the attribute vocabulary",
                )
                continue
            element_patches.append(
                ElementPatch(
                    attribute=attribute,
                    value=value,
                    zone_kind=zone_kind,
                    element_kind=element_kind,
                    element_id=element_id,
                )
            )

        flow_patches = []
        raw_patches = mr.take("flow_patches", list, required=False, default=[])
        for j, raw in enumerate(raw_patches or []):
            if not isinstance(raw, dict):
                errors.mismatch(subject, f"flow_patches[{j}] must be a mapping")
                continue
            pr = _Record(raw, subject, errors)
            all_flows = pr.take("all", bool, required=False, default=False)
            zone_kind = _parse_enum(
                pr, "zone_kind", ZoneKind, errors, subject,
                code=ValidationCode.UNKNOWN_KIND, required=False,
            )
            flow_id = pr.take("flow_id", str, required=False, default=None)
            encrypted = pr.take("encrypted", bool, required=False, default=False)
            authenticated = pr.take("authenticated", bool, required=False, default=False)
            pr.finish()
            selectors = [s for s in (all_flows or None, zone_kind, flow_id) if s is not None]
            if len(selectors) != 1:
                errors.mismatch(
                    subject,
                    f"flow_patches[{j}]: exactly one of {', '.join(_FLOW_SELECTOR_KEYS)} required",
                )
                continue
            if not encrypted and not authenticated:
                errors.mismatch(
                    subject,
                    f"flow_patches[{j}]: at least one of encrypted/authenticated must be true",
                )
                continue
            flow_patches.append(
                FlowPatch(
                    encrypted=bool(encrypted),
                    authenticated=bool(authenticated),
                    all_flows=bool(all_flows),
                    zone_kind=zone_kind,
                    flow_id=flow_id,
                )
            )
        mr.finish()

        if mitigation_id is None:
            continue
        if mitigation_id in seen_ids:
            errors.add(ValidationCode.DUPLICATE_ID, mitigation_id, "mitigation id already used")
            continue
        seen_ids.add(mitigation_id)
        if not element_patches and not flow_patches:
            errors.mismatch(mitigation_id, "mitigation must declare at least one patch")
        mitigations.append(
            Mitigation(
                id=mitigation_id,
                title=title or "",
                description=description or "",
                element_patches=tuple(element_patches),
                flow_patches=tuple(flow_patches),
                addresses_rule_ids=frozenset(addresses),
            )
        )

    record.finish()
    errors.raise_if_any()
    return MitigationCatalog(name=name or "", mitigations=tuple(mitigations))


def save_mitigation_catalog(catalog: MitigationCatalog) -> bytes:
    doc = {
        "schema": SCHEMA_MITIGATION_CATALOG,
        "version": "1.0",
        "name": catalog.name,
        "mitigations": [
            {
                "id": m.id,
                "title": m.title,
                "description": m.description,
                "element_patches": [_element_patch_doc(p) for p in m.element_patches],
                "flow_patches": [_flow_patch_doc(p) for p in m.flow_patches],
                "addresses_rule_ids": sorted(m.addresses_rule_ids),
            }
            for m in catalog.mitigations
        ],
    }
    return _dump(doc)


def _element_patch_doc(patch: ElementPatch) -> dict:
    doc: dict = {}
    if patch.zone_kind is not None:
        doc["zone_kind"] = patch.zone_kind.value
    if patch.element_kind is not None:
        doc["element_kind"] = patch.element_kind.value
    if patch.element_id is not None:
        doc["element_id"] = patch.element_id
    doc["attribute"] = patch.attribute
    doc["value"] = patch.value
    return doc


def _flow_patch_doc(patch: FlowPatch) -> dict:
    doc: dict = {}
    if patch.all_flows:
        doc["all"] = True
    if patch.zone_kind is not None:
        doc["zone_kind"] = patch.zone_kind.value
    if patch.flow_id is not None:
        doc["flow_id"] = patch.flow_id
    if patch.encrypted:
        doc["encrypted"] = True
    if patch.authenticated:
        doc["authenticated"] = True
    return doc


def check_rule_mitigation_references(
    rule_catalogs: list[RuleCatalog], mitigations: MitigationCatalog
) -> list[ValidationError]:
    """Flag rules that name mitigations absent from the given catalog."""
    errors: list[ValidationError] = []
    known_mitigations = {m.id for m in mitigations.mitigations}
    for catalog in rule_catalogs:
        for rule in catalog.rules:
            for mid in sorted(rule.mitigation_ids - known_mitigations):
                errors.append(
                    ValidationError(
                        ValidationCode.DANGLING_ENDPOINT,
                        rule.id,
                        f"mitigation id {mid!r} does not resolve in catalog {mitigations.name!r}",
                    )
                )
    errors.sort(key=lambda e: (e.code.value, e.subject, e.message))
    return errors


def check_addressed_rules(
    mitigations: MitigationCatalog, rule_catalogs: list[RuleCatalog]
) -> list[ValidationError]:
    """Flag mitigations that address rules absent from the loaded catalogs."""
    errors: list[ValidationError] = []
    known_rules = {r.id for catalog in rule_catalogs for r in catalog.rules}
    for mitigation in mitigations.mitigations:
        for rid in sorted(mitigation.addresses_rule_ids - known_rules):
            errors.append(
                ValidationError(
                    ValidationCode.DANGLING_ENDPOINT,
                    mitigation.id,
                    f"addressed rule id {rid!r} does not resolve in the loaded rule catalogs",
                )
            )
    errors.sort(key=lambda e: (e.code.value, e.subject, e.message))
    return errors


def cross_check(
    rule_catalogs: list[RuleCatalog], mitigations: MitigationCatalog
) -> list[ValidationError]:
    """Check references both ways between rule catalogs and a mitigation catalog.

    Rules must only name mitigations that exist, and mitigations must only
    address rules that exist in some loaded catalog. A paired authoring
    check; the CLI deliberately enforces only the mitigation-to-rule
    direction so a partial mitigation catalog yields residual findings
    instead of a load failure.
    """
    errors = check_rule_mitigation_references(rule_catalogs, mitigations)
    errors.extend(check_addressed_rules(mitigations, rule_catalogs))
    errors.sort(key=lambda e: (e.code.value, e.subject, e.message))
    return errors
