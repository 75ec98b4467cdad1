"""Channel adapters: console REPL and HTTP webhook."""

from .base import CAPABILITIES, ChannelAdapter, degrade_actions
from .console import console_loop, render_action
from .webhook import MessageGateway, create_app, serve

__all__ = [
    "CAPABILITIES",
    "ChannelAdapter",
    "MessageGateway",
    "console_loop",
    "create_app",
    "degrade_actions",
    "render_action",
    "serve",
]
