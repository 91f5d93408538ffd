"""Loading of committed oracle fixtures.

Fixture files are JSON documents with a provenance block; the test-suite
reads them through this module.  The fixture directory resolves, in order:
an explicit argument, the RBSD_FIXTURES environment variable, then the
repository default ./fixtures.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

_REPO_DEFAULT = Path(__file__).resolve().parents[2] / "fixtures"

KINDS = ("ap_table", "reduction", "torsion", "period", "lvalue", "dimension", "flags")


def fixture_dir(explicit: str | None = None) -> Path:
    if explicit:
        return Path(explicit)
    env = os.environ.get("RBSD_FIXTURES")
    if env:
        return Path(env)
    return _REPO_DEFAULT


def load(kind: str, explicit_dir: str | None = None) -> dict:
    path = fixture_dir(explicit_dir) / f"{kind}.json"
    if not path.exists():
        raise FileNotFoundError(f"fixture file {path} missing")
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("kind") != kind:
        raise ValueError(f"{path} has kind {doc.get('kind')!r}, expected {kind!r}")
    return doc


def have_fixtures(explicit_dir: str | None = None) -> bool:
    d = fixture_dir(explicit_dir)
    return all((d / f"{k}.json").exists() for k in KINDS)
