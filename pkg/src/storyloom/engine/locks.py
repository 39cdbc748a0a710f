"""Per-session operation lanes.

Within one session all mutating operations are serialized, with one
exception: sample generation and outline generation may overlap each other
(they touch disjoint state). A conflicting call fails fast with
:class:`~storyloom.errors.SessionBusyError` instead of queueing.
"""

from __future__ import annotations

import threading
from contextlib import contextmanager

from ..errors import SessionBusyError

PLAY = "play"
SAMPLES = "samples"
OUTLINE = "outline"

# Which active lanes block a new entrant.
_CONFLICTS = {
    PLAY: {PLAY, SAMPLES, OUTLINE},
    SAMPLES: {PLAY, SAMPLES},
    OUTLINE: {PLAY, OUTLINE},
}


class SessionLanes:
    def __init__(self):
        self._mutex = threading.Lock()
        self._active: dict[str, set[str]] = {}

    @contextmanager
    def acquire(self, session_id: str, lane: str):
        with self._mutex:
            active = self._active.setdefault(session_id, set())
            if active & _CONFLICTS[lane]:
                raise SessionBusyError(
                    f"session {session_id}: another operation is in flight ({', '.join(sorted(active))})"
                )
            active.add(lane)
        try:
            yield
        finally:
            with self._mutex:
                self._active[session_id].discard(lane)
