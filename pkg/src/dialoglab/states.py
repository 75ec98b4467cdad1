"""Layered dialog states and the priority queue that holds them.

A conversation can be in several states at once (a clarification menu on top
of an open question on top of the overall task). Each state carries a
lifetime in dialog moves so abandoned contexts decay instead of piling up.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Final, Iterator, Mapping

UNBOUNDED: Final = None  # lifetime sentinel: the state never expires


@dataclass(frozen=True, slots=True)
class DialogState:
    """Named conversational context scoping which handlers apply."""

    name: str
    lifetime: int | None = UNBOUNDED  # remaining dialog moves
    priority: int = 0  # higher dispatches first
    payload: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("state name must be non-empty")
        if self.lifetime is not UNBOUNDED and self.lifetime < 0:
            raise ValueError(f"state {self.name!r}: negative lifetime")

    @property
    def expired(self) -> bool:
        return self.lifetime is not UNBOUNDED and self.lifetime <= 0


@dataclass(frozen=True, slots=True)
class StateQueue:
    """Simultaneous dialog states, ordered by (priority desc, recency desc).

    Names are unique: re-adding a name replaces the old entry and restarts
    its lifetime. Expired states never appear.
    """

    entries: tuple[DialogState, ...] = ()

    def __iter__(self) -> Iterator[DialogState]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, name: str) -> bool:
        return any(s.name == name for s in self.entries)

    def get(self, name: str) -> DialogState | None:
        for state in self.entries:
            if state.name == name:
                return state
        return None

    def names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.entries)

    def add(self, state: DialogState) -> "StateQueue":
        """Queue with ``state`` as the most recent entry of its priority band."""
        if state.expired:
            return self.remove(state.name)
        rest = [s for s in self.entries if s.name != state.name]
        idx = 0
        while idx < len(rest) and rest[idx].priority > state.priority:
            idx += 1
        rest.insert(idx, state)
        return StateQueue(tuple(rest))

    def remove(self, name: str) -> "StateQueue":
        return StateQueue(tuple(s for s in self.entries if s.name != name))

    def decremented(self) -> "StateQueue":
        """All bounded lifetimes reduced by one; states reaching zero drop out."""
        survivors = []
        for state in self.entries:
            if state.lifetime is UNBOUNDED:
                survivors.append(state)
                continue
            ticked = replace(state, lifetime=state.lifetime - 1)
            if not ticked.expired:
                survivors.append(ticked)
        return StateQueue(tuple(survivors))

    def snapshot(self) -> tuple[tuple[str, int | None, int], ...]:
        """(name, lifetime, priority) rows in queue order, for comparisons."""
        return tuple((s.name, s.lifetime, s.priority) for s in self.entries)
