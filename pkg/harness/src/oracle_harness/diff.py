"""Field-by-field comparison of committed fixtures with the primary
package's acceptance report, honoring stated precisions.

The primary emits (see its test-suite) a consolidated JSON report whose
blocks mirror the fixture kinds: {"ap_table": {...}, "reduction": {...},
"torsion": {...}, "period": {...}, "lvalue": {...}, "dimension": {...}}.
An empty returned list means agreement.
"""

from __future__ import annotations

import json
from pathlib import Path


class SchemaMismatch(ValueError):
    pass


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def diff_fixtures(fixture_dir: str, report_path: str) -> list[dict]:
    fdir = Path(fixture_dir)
    report = _load(report_path)
    if not isinstance(report, dict):
        raise SchemaMismatch("report must be a JSON object")
    out: list[dict] = []

    def record(kind, key, expected, got):
        out.append({"kind": kind, "key": key, "fixture": expected, "report": got})

    # exact integer-valued kinds
    for kind, flatten in (("ap_table", True), ("torsion", False), ("dimension", False)):
        fix = _load(fdir / f"{kind}.json")
        rep = report.get(kind)
        if rep is None:
            raise SchemaMismatch(f"report lacks block {kind!r}")
        for key, val in fix["data"].items():
            if flatten:
                for sub, v in val.items():
                    got = rep.get(key, {}).get(sub)
                    if got != v:
                        record(kind, f"{key}:{sub}", v, got)
            else:
                if rep.get(key) != val:
                    record(kind, key, val, rep.get(key))

    # reduction: structured per prime
    fix = _load(fdir / "reduction.json")
    rep = report.get("reduction")
    if rep is None:
        raise SchemaMismatch("report lacks block 'reduction'")
    for label, primes in fix["data"].items():
        for ell, rdata in primes.items():
            got = rep.get(label, {}).get(ell)
            if got is None:
                record("reduction", f"{label}:{ell}", rdata, None)
                continue
            for fieldname, v in rdata.items():
                if got.get(fieldname) != v:
                    record("reduction", f"{label}:{ell}:{fieldname}", v, got.get(fieldname))

    # decimal kinds: agree to the stated precision (Decimal, not float, so
    # the 30-digit statements are actually honored)
    from decimal import Decimal, getcontext

    getcontext().prec = 60
    for kind, keys in (("period", ("omega_plus", "omega_minus")), ("lvalue", ("L1",))):
        fix = _load(fdir / f"{kind}.json")
        rep = report.get(kind)
        if rep is None:
            raise SchemaMismatch(f"report lacks block {kind!r}")
        digits = int(fix.get("precision", 20))
        tol = Decimal(10) ** (-(digits - 2))
        for label, vals in fix["data"].items():
            got = rep.get(label)
            if got is None:
                record(kind, label, vals, None)
                continue
            for key in keys:
                try:
                    a = Decimal(str(vals[key]))
                    b = Decimal(str(got.get(key)))
                except Exception:
                    record(kind, f"{label}:{key}", vals[key], got.get(key))
                    continue
                scale = max(abs(a), Decimal(1))
                if not abs(a - b) <= tol * scale:
                    record(kind, f"{label}:{key}", vals[key], got.get(key))
            for key in set(vals) - set(keys):
                if key in got and got[key] != vals[key]:
                    record(kind, f"{label}:{key}", vals[key], got[key])
    return out
