"""Deterministic CSV/JSON emission with an embedded config header.

Identical inputs must produce byte-identical files: floats are rendered
with repr (shortest round-trip), keys are sorted, and no timestamps or
environment details are written.  The worker-count knob is excluded from
the echo because results are bit-stable under it by contract.
"""

from __future__ import annotations

import io
import json
from typing import Dict, Iterable, List, Sequence

from . import __version__

VOLATILE_KEYS = {"threads"}


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def header_lines(config: Dict) -> List[str]:
    lines = [f"# psmod1 {__version__}"]
    for key in sorted(config):
        if key in VOLATILE_KEYS or config[key] is None:
            continue
        lines.append(f"# {key}={_fmt(config[key])}")
    return lines


def render_csv(config: Dict, fieldnames: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    for line in header_lines(config):
        buf.write(line + "\n")
    buf.write(",".join(fieldnames) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def render_json(config: Dict, payload) -> str:
    doc = {
        "artifact": "psmod1",
        "version": __version__,
        "config": {
            k: config[k] for k in sorted(config) if k not in VOLATILE_KEYS and config[k] is not None
        },
        "result": payload,
    }
    return json.dumps(doc, sort_keys=True, indent=2, default=_fmt) + "\n"


def write_text(path, text: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(text)
