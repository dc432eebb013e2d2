"""Control and streaming service exposing one simulation session over
WebSocket and HTTP."""

from .protocol import (
    diagnostics_message,
    error_message,
    inspect_result_message,
    state_message,
    state_payload,
    win_message,
)
from .service import Session, create_app

__all__ = [
    "Session",
    "create_app",
    "diagnostics_message",
    "error_message",
    "inspect_result_message",
    "state_message",
    "state_payload",
    "win_message",
]
