from __future__ import annotations

from enum import Enum


class Status(str, Enum):
    """I/O status of a facet (a vertex of the dual Gosset polytope)."""

    IN = "I"
    OUT = "O"

    def flipped(self) -> "Status":
        return Status.OUT if self is Status.IN else Status.IN
