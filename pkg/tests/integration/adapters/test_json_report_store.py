# ==============================================================================
# ARCHITECTURE: INTEGRATION TEST (ADAPTER LAYER)
# ------------------------------------------------------------------------------
# GOAL: Verify report persistence as JSON files.
# CONSTRAINTS:
#   1. FILE SYSTEM: Use a real temporary directory (pytest tmp_path).
#   2. SCOPE: Save, load, listing and name validation.
# ==============================================================================
import json

import pytest

from src.orbifold.adapters.json_report_store import JsonReportStore
from src.orbifold.domain.models import AcceptanceReport, CheckResult
from src.shared.errors import InvalidSpecError


# --- Fixtures ---
@pytest.fixture
def store(tmp_path):
    return JsonReportStore(tmp_path / "reports")


@pytest.fixture
def sample_report():
    return AcceptanceReport(criteria=[CheckResult.of("root_enumeration", True), CheckResult.of("monodromy", False, "x")])


# -------------------------------------------------------------------


def test_save_writes_one_json_file(store, sample_report):
    """
    Verifies that a saved report lands in <directory>/<name>.json.
    """
    # Arrange & Act
    location = store.save("acceptance", sample_report)

    # Assert
    assert location.endswith("acceptance.json")
    data = json.loads((store.directory / "acceptance.json").read_text(encoding="utf-8"))
    assert data["criteria"][1]["witness"] == "x"


def test_load_round_trips_the_payload(store, sample_report):
    # Arrange
    store.save("acceptance", sample_report)

    # Act
    data = store.load("acceptance")

    # Assert
    assert AcceptanceReport.model_validate(data) == sample_report


def test_save_overwrites_existing_report(store, sample_report):
    store.save("acceptance", sample_report)
    store.save("acceptance", AcceptanceReport(criteria=[]))

    assert store.load("acceptance")["criteria"] == []


def test_list_names_is_sorted(store, sample_report):
    # Arrange
    for name in ("b", "a", "c"):
        store.save(name, sample_report)

    # Act & Assert
    assert store.list_names() == ["a", "b", "c"]


def test_list_names_before_first_save(store):
    assert store.list_names() == []


def test_load_missing_report_raises(store):
    with pytest.raises(FileNotFoundError):
        store.load("nothing")


@pytest.mark.parametrize("name", ["", "../escape", "a/b", ".hidden"])
def test_invalid_names_are_rejected(store, sample_report, name):
    with pytest.raises(InvalidSpecError):
        store.save(name, sample_report)
