"""tmforge: threat-model-as-code for zone-based system models.

Declare a system as zones, elements and flows; evaluate STRIDE and VAST
rule catalogs against it; assess which findings enable botnet capture of
device-zone elements; and plan mitigations that patch the model so
re-analysis can prove their effect.
"""

from tmforge.botnet import (
    AttackChain,
    BotnetAssessment,
    BotnetFinding,
    CrimeStage,
    STAGE_LEGEND,
    assess,
    filter_botnet_relevant,
    map_crime_stages,
)
from tmforge.io import (
    DocumentError,
    DocumentHeader,
    check_addressed_rules,
    check_rule_mitigation_references,
    cross_check,
    load_mitigation_catalog,
    load_model,
    load_rule_catalog,
    save_mitigation_catalog,
    save_model,
    save_rule_catalog,
)
from tmforge.mitigation import (
    ElementPatch,
    FlowPatch,
    Mitigation,
    MitigationCatalog,
    MitigationPlan,
    PlanEntry,
    SimulationResult,
    apply_all,
    apply_mitigation,
    recommend,
    simulate_plan,
)
from tmforge.model import (
    ATTRIBUTE_VOCABULARY,
    SECURE_ATTRIBUTE_VALUES,
    Element,
    ElementKind,
    Flow,
    SystemModel,
    ValidationCode,
    ValidationError,
    Zone,
    ZoneKind,
    crosses_boundary,
    reaches_device_zone,
    validate_model,
)
from tmforge.report import (
    FrequencyReport,
    frequency,
    render_csv,
    render_dot,
    render_json,
    render_markdown,
)
from tmforge.rules import (
    CATEGORY_METHOD,
    Condition,
    ConditionKind,
    RuleCatalog,
    RuleSubject,
    SecurityProperty,
    ThreatCategory,
    ThreatFinding,
    ThreatMethod,
    ThreatRule,
    analyze,
    classify_violation,
    evaluate_rule,
)

__version__ = "1.0.0"

__all__ = [
    "ATTRIBUTE_VOCABULARY",
    "AttackChain",
    "BotnetAssessment",
    "BotnetFinding",
    "CATEGORY_METHOD",
    "Condition",
    "ConditionKind",
    "CrimeStage",
    "DocumentError",
    "DocumentHeader",
    "Element",
    "ElementKind",
    "ElementPatch",
    "Flow",
    "FlowPatch",
    "FrequencyReport",
    "Mitigation",
    "MitigationCatalog",
    "MitigationPlan",
    "PlanEntry",
    "RuleCatalog",
    "RuleSubject",
    "SECURE_ATTRIBUTE_VALUES",
    "STAGE_LEGEND",
    "SecurityProperty",
    "SimulationResult",
    "SystemModel",
    "ThreatCategory",
    "ThreatFinding",
    "ThreatMethod",
    "ThreatRule",
    "ValidationCode",
    "ValidationError",
    "Zone",
    "ZoneKind",
    "analyze",
    "apply_all",
    "apply_mitigation",
    "assess",
    "check_addressed_rules",
    "check_rule_mitigation_references",
    "classify_violation",
    "cross_check",
    "crosses_boundary",
    "evaluate_rule",
    "filter_botnet_relevant",
    "frequency",
    "load_mitigation_catalog",
    "load_model",
    "load_rule_catalog",
    "map_crime_stages",
    "reaches_device_zone",
    "recommend",
    "render_csv",
    "render_dot",
    "render_json",
    "render_markdown",
    "save_mitigation_catalog",
    "save_model",
    "save_rule_catalog",
    "simulate_plan",
    "validate_model",
]
