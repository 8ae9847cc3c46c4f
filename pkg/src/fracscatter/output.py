"""Result envelopes and deterministic CSV/JSON export.

Floats are serialized with their shortest round-trip decimal representation
(repr), so regression files are diff-stable and re-parse bit-exactly.  The
envelope timestamp honors SOURCE_DATE_EPOCH for reproducible runs.
"""

import csv
import io
import json
import os
import time
from dataclasses import dataclass, field

SCHEMA_VERSION = 1
TOOL_NAME = "fracscatter"


@dataclass
class Table:
    """A named rectangular table; cells are numbers, strings, bools or None."""

    name: str
    columns: list[str]
    rows: list[list]

    def to_dict(self) -> dict:
        return {"name": self.name, "columns": list(self.columns),
                "rows": [list(r) for r in self.rows]}


@dataclass
class ResultEnvelope:
    """Everything one command run produced, including enough to re-run it."""

    command: str
    config: dict
    payload: dict
    anomalies: list = field(default_factory=list)
    version: str = ""
    timestamp: str = ""
    schema: int = SCHEMA_VERSION
    tool: str = TOOL_NAME

    def to_dict(self) -> dict:
        return {
            "schema": self.schema,
            "tool": self.tool,
            "version": self.version,
            "command": self.command,
            "timestamp": self.timestamp,
            "config": self.config,
            "payload": self.payload,
            "anomalies": self.anomalies,
        }


def make_timestamp() -> str:
    """UTC timestamp; SOURCE_DATE_EPOCH (reproducible-builds convention) wins."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_format_cell(v) for v in row])
    return buf.getvalue()


def render_json(envelope: ResultEnvelope) -> str:
    return json.dumps(envelope.to_dict(), indent=2, allow_nan=True) + "\n"


def atomic_write_text(path: str, text: str) -> None:
    """Write via a sibling temp file and rename, so readers never see partials."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    tmp = os.path.join(directory, f".{os.path.basename(path)}.tmp")
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def write_envelope_json(envelope: ResultEnvelope, path: str) -> None:
    atomic_write_text(path, render_json(envelope))


def write_table_csv(table: Table, path: str) -> None:
    atomic_write_text(path, render_csv(table))


def read_envelope(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
