"""
CSV output with a '#'-prefixed metadata header.

Numbers are written with 17 significant digits so identical runs produce
byte-identical files.
"""

import csv
import io
import logging
import sys
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional, Sequence

from laguerre.config import default_output_path

logger = logging.getLogger(__name__)


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, complex):
        if value.imag == 0:
            return f"{value.real:.17g}"
        return f"{value.real:.17g}{value.imag:+.17g}j"
    if isinstance(value, (float, int)) or hasattr(value, "dtype"):
        if hasattr(value, "dtype") and getattr(value.dtype, "kind", "") == "c":
            return format_value(complex(value))
        return f"{float(value):.17g}"
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def render_table(
    metadata: Mapping[str, Any], header: Sequence[str], rows: Iterable[Sequence[Any]]
) -> str:
    buffer = io.StringIO()
    for key, value in metadata.items():
        buffer.write(f"# {key}={format_value(value)}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buffer.getvalue()


def write_table(
    target: Optional[str],
    command: str,
    metadata: Mapping[str, Any],
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
) -> Optional[Path]:
    """Write to target ('-' for stdout, None for the default output directory)"""
    text = render_table(metadata, header, rows)
    if target == "-":
        sys.stdout.write(text)
        return None
    path = Path(target) if target else default_output_path(command)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")
    return path
