"""Botnet exposure assessment over analysis findings.

A finding is botnet-relevant when it weakens device capture (authentication,
integrity, accountability or authorization) and its subject can reach a
device zone over the flow graph. Relevant findings are mapped onto the
machine-observable stages of the botnet lifecycle and expanded into attack
chains that terminate at device-zone elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from tmforge.model import SystemModel, device_zone_elements, reaches_device_zone, shortest_path
from tmforge.rules import SecurityProperty, ThreatCategory, ThreatFinding


class CrimeStage(str, Enum):
    """Botnet lifecycle stages, in lifecycle order.

    Conception and Marketing are attacker-side stages with no observable
    precondition in a system model; they appear in reports for completeness
    but are never assigned to findings.
    """

    CONCEPTION = "Conception"
    RECRUITMENT = "Recruitment"
    INTERACTION = "Interaction"
    MARKETING = "Marketing"
    EXECUTION = "Execution"


#: Stage descriptions used by report legends.
STAGE_LEGEND: dict[CrimeStage, str] = {
    CrimeStage.CONCEPTION: (
        "Attacker-side motivation stage (money, ego, entertainment). "
        "Never assigned to findings."
    ),
    CrimeStage.RECRUITMENT: (
        "Growing the captured fleet. Assigned to findings that violate "
        "authentication or authorization."
    ),
    CrimeStage.INTERACTION: (
        "Establishing and hiding command-and-control contact with captured "
        "devices. Assigned to flow-subject findings and to findings that "
        "violate integrity or non-repudiation."
    ),
    CrimeStage.MARKETING: (
        "Attacker-side stage: selling or renting the capability. Never "
        "assigned to findings."
    ),
    CrimeStage.EXECUTION: (
        "Launching the end attack, for example denial of service. Assigned "
        "to denial-of-service and attack-hazard categories."
    ),
}

#: Properties whose violation can enable device capture.
BOTNET_PROPERTIES = frozenset(
    {
        SecurityProperty.AUTHENTICATION,
        SecurityProperty.INTEGRITY,
        SecurityProperty.NON_REPUDIATION,
        SecurityProperty.AUTHORIZATION,
    }
)


@dataclass(frozen=True)
class BotnetFinding:
    """A relevant finding annotated with lifecycle stages.

    ``device_reachable`` records the reachability predicate that admitted
    the finding; it is True for every finding the filter lets through.
    """

    finding: ThreatFinding
    stages: frozenset[CrimeStage]
    device_reachable: bool

    def __post_init__(self) -> None:
        object.__setattr__(self, "stages", frozenset(self.stages))


@dataclass(frozen=True)
class AttackChain:
    """One walk from a relevant finding to a device-zone element.

    ``path`` lists element ids from the finding's subject (for flow subjects,
    the flow's source element) to the terminal device; it always ends inside
    a device zone by construction.
    """

    finding_id: str
    path: tuple[str, ...]
    device_id: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "path", tuple(self.path))


@dataclass(frozen=True)
class BotnetAssessment:
    relevant: tuple[BotnetFinding, ...] = ()
    chains: tuple[AttackChain, ...] = ()
    devices_at_risk: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "relevant", tuple(self.relevant))
        object.__setattr__(self, "chains", tuple(self.chains))
        object.__setattr__(self, "devices_at_risk", frozenset(self.devices_at_risk))


def _subject_origin(finding: ThreatFinding, model: SystemModel) -> str:
    """Element id where an attacker exploiting the finding stands."""
    if model.has_element(finding.subject_id):
        return finding.subject_id
    if model.has_flow(finding.subject_id):
        return model.flow(finding.subject_id).source
    raise LookupError(f"finding subject {finding.subject_id!r} is not in the model")


def filter_botnet_relevant(
    findings: list[ThreatFinding], model: SystemModel
) -> list[ThreatFinding]:
    """Keep findings that can contribute to device capture.

    A finding passes iff it violates at least one of authentication,
    integrity, non-repudiation or authorization AND its subject reaches a
    device zone. Order is preserved; the filter is idempotent.
    """
    relevant = []
    for finding in findings:
        origin = _subject_origin(finding, model)
        if not finding.violated_properties & BOTNET_PROPERTIES:
            continue
        if not reaches_device_zone(origin, model):
            continue
        relevant.append(finding)
    return relevant


def map_crime_stages(finding: ThreatFinding, model: SystemModel) -> frozenset[CrimeStage]:
    """Lifecycle stages a finding can serve.

    Recruitment: violates authentication or authorization. Interaction: the
    subject is a flow (a channel an implant can ride), the category is a
    code-injection one (Tampering, RemoteCodeInclusion), or the finding
    violates integrity or non-repudiation (undetected modification and
    unaccountable actions are what keep command-and-control hidden).
    Execution: denial-of-service and attack-hazard categories. The union of
    whichever apply; non-empty for every botnet-relevant finding.
    """
    stages = set()
    props = finding.violated_properties
    if props & {SecurityProperty.AUTHENTICATION, SecurityProperty.AUTHORIZATION}:
        stages.add(CrimeStage.RECRUITMENT)
    subject_is_flow = model.has_flow(finding.subject_id)
    if (
        subject_is_flow
        or finding.category in (ThreatCategory.TAMPERING, ThreatCategory.REMOTE_CODE_INCLUSION)
        or props & {SecurityProperty.INTEGRITY, SecurityProperty.NON_REPUDIATION}
    ):
        stages.add(CrimeStage.INTERACTION)
    if finding.category in (ThreatCategory.DENIAL_OF_SERVICE, ThreatCategory.ATTACK_HAZARD):
        stages.add(CrimeStage.EXECUTION)
    return frozenset(stages)


def assess(model: SystemModel, findings: list[ThreatFinding]) -> BotnetAssessment:
    """Full botnet assessment: filter, stage mapping, attack chains.

    For every relevant finding, one chain is built per device-zone element
    reachable from its subject, walking the deterministic shortest path.
    ``devices_at_risk`` is therefore exactly the set of device-zone elements
    reachable from any relevant finding's subject.
    """
    relevant = filter_botnet_relevant(findings, model)
    annotated = tuple(
        BotnetFinding(
            finding=f,
            stages=map_crime_stages(f, model),
            device_reachable=True,
        )
        for f in relevant
    )
    devices = device_zone_elements(model)
    chains: list[AttackChain] = []
    for finding in relevant:
        origin = _subject_origin(finding, model)
        for device in devices:
            path = shortest_path(model, origin, device.id)
            if path is None:
                continue
            chains.append(
                AttackChain(finding_id=finding.finding_id, path=tuple(path), device_id=device.id)
            )
    at_risk = frozenset(chain.device_id for chain in chains)
    return BotnetAssessment(relevant=annotated, chains=tuple(chains), devices_at_risk=at_risk)
