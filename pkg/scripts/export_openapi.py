#!/usr/bin/env python3
"""Write the service's OpenAPI description to docs/openapi.json."""

import json
import sys
import tempfile
from pathlib import Path

from exoar.api import create_app

ROOT = Path(__file__).resolve().parent.parent


def main() -> int:
    with tempfile.TemporaryDirectory() as tmp:
        app = create_app(store_dir=tmp, llm_spec="live", base_url="http://localhost")
        spec = app.openapi()
    out = ROOT / "docs" / "openapi.json"
    out.write_text(json.dumps(spec, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
