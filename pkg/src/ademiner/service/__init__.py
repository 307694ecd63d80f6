"""REST service and session storage."""

from .app import ServiceConfig, create_app
from .sessions import PRELOADED_SESSION_ID, SessionGone, SessionStore

__all__ = [
    "PRELOADED_SESSION_ID",
    "ServiceConfig",
    "SessionGone",
    "SessionStore",
    "create_app",
]
