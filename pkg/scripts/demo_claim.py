#!/usr/bin/env python3
"""Pipe a scripted happy-path claim through the console channel.

    python scripts/demo_claim.py [--language en]
"""

from __future__ import annotations

import argparse
import io
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from dialoglab.channels.console import console_loop
from dialoglab.claimbot import MemoryClaimSink
from dialoglab.config import resolve_config
from dialoglab.context import MemoryStore
from dialoglab.runtime import build_runtime

SCRIPTS = {
    "en": [
        "hi",
        "I want to report a damage",
        "the screen is cracked",
        "yes",
        "it's an iphone",
        "2",
        "0711 2233445",
        "yes",
        "490154203237518",
        "yes",
        "yesterday",
        "yes",
        "I dropped it on the stairs while running for the bus",
        "yes",
        "yes",
    ],
    "de": [
        "hallo",
        "Ich möchte einen Schaden melden",
        "Wasserschaden",
        "ja",
        "Galaxy S9",
        "ja",
        "0711 998877",
        "ja",
        "490154203237518",
        "ja",
        "gestern",
        "ja",
        "Es ist mir beim Abwasch ins Waschbecken gefallen",
        "ja",
        "ja",
    ],
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--language", choices=("en", "de"), default="en")
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        sink = MemoryClaimSink()
        config = resolve_config({"language": args.language, "claims_dir": tmp})
        runtime = build_runtime(config, claims=sink)
        lines = SCRIPTS[args.language]
        for line in lines:
            print(f"you> {line}")
        print("-" * 60)
        console_loop(runtime.engine, MemoryStore(), in_stream=io.StringIO("\n".join(lines) + "\n"))
        records = sink.records()
        print("-" * 60)
        print(f"claims recorded: {[r.claim_id for r in records]}")
        return 0 if records else 1


if __name__ == "__main__":
    raise SystemExit(main())
