"""Rule table assembly and validation.

Three handler tiers: stateless rules checked on every message, per-state
rules checked while their state is active, and fallbacks checked when no
state rule matched. The builder validates the table once; the result is
immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .handlers import Handler


class RegistrationError(ValueError):
    """Rule table construction failed; message names the offending element."""


@dataclass(frozen=True, slots=True)
class RuleTable:
    stateless: tuple[Handler, ...]
    by_state: dict[str, tuple[Handler, ...]]
    fallbacks: tuple[Handler, ...]
    declared_states: frozenset[str]
    known_slots: frozenset[str]

    def handlers_for(self, state_name: str) -> tuple[Handler, ...]:
        return self.by_state.get(state_name, ())


@dataclass
class RuleTableBuilder:
    """Collects handlers and declarations, then validates into a RuleTable."""

    _stateless: list[Handler] = field(default_factory=list)
    _by_state: dict[str, list[Handler]] = field(default_factory=dict)
    _fallbacks: list[Handler] = field(default_factory=list)
    _targets: list[tuple[str, str]] = field(default_factory=list)  # (origin, target)
    _declared: set[str] = field(default_factory=set)
    _slots: set[str] = field(default_factory=set)

    def add_stateless(self, handler: Handler, targets: tuple[str, ...] = ()) -> "RuleTableBuilder":
        self._check_duplicate("<stateless>", self._stateless, handler)
        self._stateless.append(handler)
        self._note_targets("<stateless>", targets)
        return self

    def add_state_handler(
        self, state_name: str, handler: Handler, targets: tuple[str, ...] = ()
    ) -> "RuleTableBuilder":
        handlers = self._by_state.setdefault(state_name, [])
        self._check_duplicate(state_name, handlers, handler)
        handlers.append(handler)
        self._declared.add(state_name)
        self._note_targets(state_name, targets)
        return self

    def add_fallback(self, handler: Handler, targets: tuple[str, ...] = ()) -> "RuleTableBuilder":
        self._check_duplicate("<fallback>", self._fallbacks, handler)
        self._fallbacks.append(handler)
        self._note_targets("<fallback>", targets)
        return self

    def declare_state(self, name: str) -> "RuleTableBuilder":
        """Register a state that carries no handlers of its own (e.g. a frame holder)."""
        self._declared.add(name)
        return self

    def declare_slots(self, names) -> "RuleTableBuilder":
        self._slots.update(names)
        return self

    def build(self) -> RuleTable:
        if not self._fallbacks:
            raise RegistrationError("at least one fallback handler is required")
        for origin, target in self._targets:
            if target not in self._declared:
                raise RegistrationError(
                    f"{origin}: transition to undeclared state {target!r}"
                )
        return RuleTable(
            stateless=tuple(self._stateless),
            by_state={name: tuple(handlers) for name, handlers in self._by_state.items()},
            fallbacks=tuple(self._fallbacks),
            declared_states=frozenset(self._declared),
            known_slots=frozenset(self._slots),
        )

    def _note_targets(self, origin: str, targets: tuple[str, ...]) -> None:
        self._targets.extend((origin, t) for t in targets)

    @staticmethod
    def _check_duplicate(where: str, existing: list[Handler], handler: Handler) -> None:
        for other in existing:
            if other.key == handler.key:
                raise RegistrationError(f"{where}: duplicate handler for key {handler.key!r}")
