"""Reproducible-output plumbing: hashes, atomic writes, worker pools.

Every file the toolkit emits carries the tool version, a hash of the
run configuration, and hashes of its inputs, so runs are diffable and
byte-reproducible.  Output files never contain timestamps.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor

TOOL_VERSION = "0.1.0"

__all__ = [
    "TOOL_VERSION",
    "config_hash",
    "file_hash",
    "atomic_write_text",
    "meta_comment_lines",
    "parallel_map",
    "worker_count",
]


def config_hash(config: dict) -> str:
    """Short stable hash of a JSON-serializable configuration mapping."""
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def file_hash(path) -> str:
    """Short sha256 of a file's bytes."""
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()[:12]


def atomic_write_text(path, text: str) -> None:
    """Write text to ``path`` via a temp file + rename in the same directory."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)  # mkstemp defaults to 0600
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def meta_comment_lines(meta: dict) -> list[str]:
    """Render provenance metadata as '#' comment lines for CSV headers."""
    lines = [f"# tool_version: {TOOL_VERSION}"]
    for key, value in meta.items():
        lines.append(f"# {key}: {value}")
    return lines


def worker_count() -> int:
    """Worker cap from CASIMIR_THREADS (0 or unset = auto)."""
    raw = os.environ.get("CASIMIR_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        return min(8, os.cpu_count() or 1)
    return n


def parallel_map(fn, items):
    """Map preserving input order; threads capped by CASIMIR_THREADS."""
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
