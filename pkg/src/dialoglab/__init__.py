"""dialoglab: rule-driven conversational agents with layered dialog states.

The package splits into a reusable framework (messages, nlu, engine,
responder, context, channels, replay) and a reference scenario (claimbot):
an insurance damage-claim intake bot.
"""

__version__ = "0.1.0"
