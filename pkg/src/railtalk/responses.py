"""System response acts: what the dialogue side hands to the generator."""

from __future__ import annotations

from dataclasses import dataclass, field

# Inventory of response kinds; templates are cross-validated against it.
RESPONSE_KINDS = (
    "ACK",
    "PARDON",
    "GREETING",
    "CLARIFY_ROUTE",
    "CLARIFY_DEST",
    "PROPOSE_ROUTE",
    "PARTIAL_ROUTE",
    "CORRECTED_ROUTE",
    "NO_PATH",
    "CONGESTION",
    "CROSSING",
    "CLEARED",
    "NO_ROUTE_TO_CLEAR",
    "DONE_CLOSE",
    "DONE_UNMET",
)


@dataclass(frozen=True)
class ResponseAct:
    kind: str
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in RESPONSE_KINDS:
            raise ValueError(f"unknown response kind {self.kind!r}")
