"""Volatile per-session storage for the annotation workspace.

Uploaded sentences and computed annotations live only in process memory,
keyed by an unguessable id, and disappear when the TTL lapses or the process
exits. Nothing here ever touches disk: user text must not be durably stored.
"""

from __future__ import annotations

import secrets
import threading
import time
from dataclasses import dataclass, field

PRELOADED_SESSION_ID = "preloaded"


class SessionGone(KeyError):
    """Unknown or expired session."""


@dataclass
class Session:
    sid: str
    sentences: list[str]
    created_at: float
    readonly: bool = False
    # model name -> per-sentence event lists (wire-schema objects)
    annotations: dict[str, list[list[dict]]] = field(default_factory=dict)


class SessionStore:
    def __init__(self, ttl_seconds: float = 30 * 60, clock=time.monotonic):
        self.ttl = ttl_seconds
        self._clock = clock
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def create(self, sentences: list[str]) -> str:
        sid = secrets.token_urlsafe(32)  # 256 bits
        with self._lock:
            self._sessions[sid] = Session(sid, sentences, self._clock())
        return sid

    def add_preloaded(self, sentences: list[str], annotations: dict[str, list[list[dict]]]) -> None:
        with self._lock:
            self._sessions[PRELOADED_SESSION_ID] = Session(
                PRELOADED_SESSION_ID,
                sentences,
                created_at=float("inf"),  # never expires
                readonly=True,
                annotations=annotations,
            )

    def get(self, sid: str) -> Session:
        with self._lock:
            session = self._sessions.get(sid)
            if session is None:
                raise SessionGone(sid)
            if not session.readonly and self._clock() - session.created_at > self.ttl:
                del self._sessions[sid]
                raise SessionGone(sid)
            return session

    def sweep(self) -> int:
        """Drop expired sessions; returns how many were removed."""
        now = self._clock()
        with self._lock:
            gone = [
                sid
                for sid, s in self._sessions.items()
                if not s.readonly and now - s.created_at > self.ttl
            ]
            for sid in gone:
                del self._sessions[sid]
        return len(gone)
