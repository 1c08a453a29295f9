"""Report and machine-readable output helpers shared by the command handlers."""
from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Mapping, Sequence

from qalign.config import OutputFormat


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return "-"
    return str(value)


def print_report(title: str, fields: Mapping[str, Any]) -> None:
    """Human-readable ``key: value`` block on stdout."""

    width = max((len(key) for key in fields), default=0)
    lines = [title]
    lines.extend(f"  {key.ljust(width)} : {format_value(value)}" for key, value in fields.items())
    print("\n".join(lines))


def render_rows(header: Sequence[str], rows: Sequence[Sequence[Any]], fmt: OutputFormat) -> str:
    if fmt is OutputFormat.JSON:
        records = [dict(zip(header, row)) for row in rows]
        return json.dumps(records, indent=2) + "\n"
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(value) if isinstance(value, float) else value for value in row])
    return buffer.getvalue()


def render_mapping(fields: Mapping[str, Any], fmt: OutputFormat) -> str:
    if fmt is OutputFormat.JSON:
        return json.dumps(dict(fields), indent=2) + "\n"
    return render_rows(("metric", "value"), list(fields.items()), OutputFormat.CSV)


def write_text(text: str, path: Path | None) -> None:
    """Write to ``path`` (parents created) or to stdout when no path is given."""

    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
