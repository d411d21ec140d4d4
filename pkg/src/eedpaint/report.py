"""Machine-readable run reports.

Schema (JSON object): ``schema_version``, ``version`` (tool), ``params``
(full parameter echo), ``iterations`` (per-step trace records), ``bounds``
(bound-audit reports), ``timings`` (milliseconds per phase), ``checksums``
(sha256 of input/output files), plus an ``outcome`` summary. A run is
reproducible from the report together with the input files.
"""

import hashlib
import json

SCHEMA_VERSION = 1


def file_sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return "sha256:" + digest.hexdigest()


def build_report(version, params, iterations=None, bounds=None, timings=None,
                 checksums=None, outcome=None):
    """Assemble the report dictionary in canonical key order."""
    return {
        "schema_version": SCHEMA_VERSION,
        "version": version,
        "params": dict(params),
        "iterations": list(iterations) if iterations is not None else [],
        "bounds": [b.to_dict() for b in bounds] if bounds else [],
        "timings": dict(timings) if timings is not None else {},
        "checksums": dict(checksums) if checksums is not None else {},
        "outcome": dict(outcome) if outcome is not None else {},
    }


def dump_report(report, path=None):
    """Serialize to ``path`` or return the JSON text when ``path`` is None.

    Strict JSON: non-finite numbers are rejected (audits encode vacuous
    bounds as null before they get here).
    """
    text = json.dumps(report, indent=2, allow_nan=False)
    if path is None:
        return text
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)
        fh.write("\n")
    return None
