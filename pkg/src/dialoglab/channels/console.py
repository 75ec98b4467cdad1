"""Console REPL adapter: lines in, rendered chat actions out.

Quick replies render as a numbered menu; entering the number of a visible
option sends that option's id as a quick-reply payload. Context persists
through the store, so quitting mid-conversation and rerunning resumes the
same dialog states.
"""

from __future__ import annotations

import sys
from typing import IO

from ..context import ContextStore
from ..engine.planner import DialogEngine
from ..messages import (
    ChatAction,
    InboundMessage,
    QuickReplyPayload,
    TextPayload,
    UserKey,
    utc_now,
)

CONSOLE_CHANNEL = "console"


def render_action(action: ChatAction, out: IO[str]) -> list[tuple[str, str]]:
    """Print one action; returns menu options when it displayed a menu."""
    if action.kind == "send_typing":
        print("[bot is typing ...]", file=out)
        return []
    if action.kind == "send_quick_replies":
        if action.text:
            print(f"bot> {action.text}", file=out)
        for i, (_, label) in enumerate(action.options):
            print(f"      {i + 1}. {label}", file=out)
        return list(action.options)
    if action.kind == "request_media":
        print(f"bot> (attachment requested) {action.text or ''}".rstrip(), file=out)
        return []
    print(f"bot> {action.text}", file=out)
    return []


def console_loop(
    engine: DialogEngine,
    store: ContextStore,
    *,
    user_id: str = "local",
    in_stream: IO[str] | None = None,
    out: IO[str] | None = None,
    clock=utc_now,
) -> int:
    """Read lines until end-of-input; returns the number of processed turns."""
    in_stream = in_stream or sys.stdin
    out = out or sys.stdout
    key = UserKey(CONSOLE_CHANNEL, user_id)
    menu: list[tuple[str, str]] = []
    turns = 0

    print("(claim bot console; Ctrl-D to quit)", file=out)
    for line in in_stream:
        text = line.strip()
        if not text:
            continue
        if text.isdigit() and menu:
            index = int(text) - 1
            if not 0 <= index < len(menu):
                print(f"bot> Please pick a number between 1 and {len(menu)}.", file=out)
                continue
            payload = QuickReplyPayload(menu[index][0])
        else:
            payload = TextPayload(text)

        ctx = store.load_or_create(key)
        message = InboundMessage(key, f"console-{ctx.turn_count}", clock(), payload)
        result = engine.run_turn(ctx, message)
        store.save(result.context)
        turns += 1

        menu = []
        for action in result.actions:
            options = render_action(action, out)
            if options:
                menu = options
    return turns
