"""Reference scenario: smartphone/tablet damage-claim intake."""

from .claims import (
    DAMAGE_TYPES,
    SLOT_ORDER,
    ClaimFrame,
    ClaimRecord,
    ClaimSink,
    ClaimStore,
    MemoryClaimSink,
    UnsubmittableFrame,
    load_jokes,
)
from .phones import PhoneCatalog, PhoneCatalogError, PhoneModel, load_phone_catalog
from .scenario import (
    ALL_FLOW_STATES,
    ASKING,
    CLARIFY_PHONE,
    CONFIRM_ANSWER,
    CONFIRM_SUBMISSION,
    FLOW_STATE,
    ClaimScenario,
    build_scenario,
)

__all__ = [
    "ALL_FLOW_STATES",
    "ASKING",
    "CLARIFY_PHONE",
    "CONFIRM_ANSWER",
    "CONFIRM_SUBMISSION",
    "DAMAGE_TYPES",
    "FLOW_STATE",
    "ClaimFrame",
    "ClaimRecord",
    "ClaimScenario",
    "ClaimSink",
    "ClaimStore",
    "MemoryClaimSink",
    "PhoneCatalog",
    "PhoneCatalogError",
    "PhoneModel",
    "SLOT_ORDER",
    "UnsubmittableFrame",
    "build_scenario",
    "load_jokes",
    "load_phone_catalog",
]
