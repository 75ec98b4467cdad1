"""Channel adapter contract and capability degradation.

Adapters only translate between channel-native forms and the unified message
types; they hold no dialog logic. A channel that lacks a capability receives
a documented text rendering instead (quick replies become a numbered list).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..messages import ChatAction

CAPABILITIES = ("typing_indicator", "quick_replies", "media")


@dataclass(frozen=True, slots=True)
class ChannelAdapter:
    channel_id: str
    capabilities: frozenset[str] = frozenset(CAPABILITIES)


def degrade_actions(actions, capabilities: frozenset[str]) -> list[ChatAction]:
    """Actions rewritten for a channel with limited capabilities."""
    out: list[ChatAction] = []
    for action in actions:
        if action.kind == "send_typing" and "typing_indicator" not in capabilities:
            continue
        if action.kind == "send_quick_replies" and "quick_replies" not in capabilities:
            lines = [action.text or ""]
            lines += [f"{i + 1}. {label}" for i, (_, label) in enumerate(action.options)]
            out.append(
                ChatAction("send_text", text="\n".join(l for l in lines if l), metadata=dict(action.metadata))
            )
            continue
        out.append(action)
    return out
