import csv
import io
import json
import os
import sys

from src.config import settings
from src.config.logging import io_logger
from src.utils.errors import OutputError

STDOUT = '-'


def format_cell(value):
    """CSV cell text: reals with 17 significant digits, booleans lower-case, None empty."""
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format(value, settings.FLOAT_FORMAT)
    return str(value)


class ResultWriter:
    """Writer for flat result files (CSV, JSON and the metadata sidecar)."""

    def __init__(self, output_dir=None, fmt=None):
        """Initialize the writer with configuration from settings."""
        self.output_dir = output_dir or settings.OUTPUT_DIR
        self.fmt = fmt or settings.OUTPUT_FORMAT
        if self.fmt not in ('csv', 'json'):
            raise OutputError(f"unknown output format {self.fmt!r}")

    def resolve(self, output, default_name):
        """Target path: `-` for stdout, the given path, or <output_dir>/<default_name>.<fmt>."""
        if output:
            return output
        return os.path.join(self.output_dir, f"{default_name}.{self.fmt}")

    def _ensure_parent(self, path):
        parent = os.path.dirname(os.path.abspath(path))
        try:
            os.makedirs(parent, exist_ok=True)
        except OSError as e:
            io_logger.error(f"Cannot create output directory {parent}: {e}")
            raise OutputError(f"cannot create output directory {parent}: {e}") from e

    def _emit(self, path, text):
        if path == STDOUT:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        self._ensure_parent(path)
        try:
            # newline='' keeps '\n' on every platform
            with open(path, 'w', encoding='utf-8', newline='') as f:
                f.write(text)
        except OSError as e:
            io_logger.error(f"Error writing {path}: {e}")
            raise OutputError(f"cannot write {path}: {e}") from e
        io_logger.info(f"Wrote {path} ({len(text)} bytes)")

    def write_csv(self, path, header, rows):
        """
        Write a header row and records.

        Args:
            path (str): Target file or `-`
            header (list): Column names
            rows (iterable): Records as sequences aligned with the header
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_cell(v) for v in row])
        self._emit(path, buffer.getvalue())

    def write_json(self, path, payload):
        """Write a pydantic model, a list of models or a dict of models as JSON."""
        self._emit(path, to_json(payload) + '\n')

    def write_metadata(self, path, metadata):
        """Sidecar `<path>.meta.json`; skipped when writing to stdout."""
        if path == STDOUT:
            return None
        sidecar = f"{path}.meta.json"
        self._emit(sidecar, json.dumps(metadata, indent=2, sort_keys=True) + '\n')
        return sidecar


def _plain(payload):
    if hasattr(payload, 'json'):
        return json.loads(payload.json())
    if isinstance(payload, dict):
        return {k: _plain(v) for k, v in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [_plain(v) for v in payload]
    return payload


def to_json(payload):
    # json floats use repr, the shortest text that reads back to the same binary64
    return json.dumps(_plain(payload), indent=2)
