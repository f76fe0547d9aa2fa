import sys
from importlib import resources
from pathlib import Path

import pytest

import tmforge as tf

# oracles/generators live next to the tests, not in the package
sys.path.insert(0, str(Path(__file__).resolve().parent))

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def data_bytes(name: str) -> bytes:
    return (resources.files("tmforge") / "data" / name).read_bytes()


def data_path(name: str) -> str:
    return str(resources.files("tmforge") / "data" / name)


@pytest.fixture(scope="session")
def reference_model() -> tf.SystemModel:
    return tf.load_model(data_bytes("smart_home.tmodel"))


@pytest.fixture(scope="session")
def stride_catalog() -> tf.RuleCatalog:
    return tf.load_rule_catalog(data_bytes("stride_core.tcatalog"))


@pytest.fixture(scope="session")
def vast_catalog() -> tf.RuleCatalog:
    return tf.load_rule_catalog(data_bytes("vast_core.tcatalog"))


@pytest.fixture(scope="session")
def catalogs(stride_catalog, vast_catalog) -> list[tf.RuleCatalog]:
    return [stride_catalog, vast_catalog]


@pytest.fixture(scope="session")
def mitigation_catalog() -> tf.MitigationCatalog:
    return tf.load_mitigation_catalog(data_bytes("mitigations_core.tmitig"))


@pytest.fixture(scope="session")
def reference_findings(reference_model, catalogs) -> list[tf.ThreatFinding]:
    return tf.analyze(reference_model, catalogs, "both")
