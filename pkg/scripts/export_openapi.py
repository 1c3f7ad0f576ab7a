#!/usr/bin/env python3
"""Dump the gateway's generated OpenAPI document to docs/openapi.json."""

from __future__ import annotations

import json
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(REPO / "src"))

from intenbot.config import EngineConfig  # noqa: E402
from intenbot.server import create_app  # noqa: E402


def main() -> int:
    app = create_app(EngineConfig())
    doc = app.openapi()
    out = REPO / "docs/openapi.json"
    out.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(doc.get('paths', {}))} paths)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
