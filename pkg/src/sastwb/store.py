"""Single-file embedded key-value store with JSON values.

Namespaces: explanations, feedback, scans, findings. Writes are serialized
under a lock and flushed atomically (tmp + rename); reads are lock-free on
the in-memory view.
"""

from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Any, Iterator, Optional

NAMESPACES = ("explanations", "feedback", "scans", "findings")


class JsonStore:
    def __init__(self, path: Path | str):
        self._path = Path(path)
        self._lock = threading.RLock()
        if self._path.exists():
            self._data = json.loads(self._path.read_text(encoding="utf-8"))
        else:
            self._data = {}
        for ns in NAMESPACES:
            self._data.setdefault(ns, {})

    @property
    def path(self) -> Path:
        return self._path

    def _flush(self) -> None:
        tmp = self._path.with_suffix(self._path.suffix + ".tmp")
        tmp.write_text(json.dumps(self._data, indent=1, sort_keys=True), encoding="utf-8")
        os.replace(tmp, self._path)

    def get(self, namespace: str, key: str) -> Optional[Any]:
        return self._data[namespace].get(key)

    def put(self, namespace: str, key: str, value: Any) -> None:
        with self._lock:
            self._data[namespace][key] = value
            self._flush()

    def append(self, namespace: str, value: Any) -> str:
        """Append-only insert; returns the assigned sequential id."""
        with self._lock:
            seq = self._data.setdefault("_seq", {}).get(namespace, 0) + 1
            self._data["_seq"][namespace] = seq
            key = f"{seq:08d}"
            self._data[namespace][key] = value
            self._flush()
            return key

    def items(self, namespace: str) -> Iterator[tuple[str, Any]]:
        return iter(sorted(self._data[namespace].items()))

    def count(self, namespace: str) -> int:
        return len(self._data[namespace])
