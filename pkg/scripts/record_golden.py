#!/usr/bin/env python3
"""Record golden transcripts for the persona suite.

Run after any intentional behavior or template change, then review the diff:

    python scripts/record_golden.py [--suite fixtures/personas] [--golden fixtures/golden]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from dialoglab.claimbot import MemoryClaimSink
from dialoglab.config import resolve_config
from dialoglab.replay import ReplayEnv, load_suite, run_suite, write_golden
from dialoglab.runtime import build_runtime


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--suite", default="fixtures/personas")
    parser.add_argument("--golden", default="fixtures/golden")
    args = parser.parse_args()

    configs = {}

    def env_factory(script) -> ReplayEnv:
        if script.language not in configs:
            configs[script.language] = resolve_config({"language": script.language})
        sink = MemoryClaimSink()
        runtime = build_runtime(configs[script.language], claims=sink)
        return ReplayEnv(engine=runtime.engine, claims=sink)

    reports = run_suite(load_suite(args.suite), env_factory, mode="predicate")
    not_passed = [r.script for r in reports if not r.passed]
    if not_passed:
        print(f"refusing to record golden transcripts; failing scripts: {not_passed}")
        return 1
    for report in reports:
        path = write_golden(report, args.golden)
        print(f"recorded {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
