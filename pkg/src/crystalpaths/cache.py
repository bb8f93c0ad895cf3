"""On-disk JSON cache for R-matrix and energy tables."""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path

ENV_VAR = "CRYSTALPATHS_CACHE"


def _jsonable(key):
    if isinstance(key, (tuple, list)):
        return [_jsonable(k) for k in key]
    if isinstance(key, dict):
        return {str(k): _jsonable(v) for k, v in key.items()}
    return key


class TableCache:
    """Stores one JSON file per (kind, key); writes are atomic."""

    def __init__(self, root: str | os.PathLike | None = None):
        root = root or os.environ.get(ENV_VAR) or Path.home() / ".cache" / "crystalpaths"
        self.root = Path(root)
        self.hits = 0
        self.misses = 0

    def _path(self, kind: str, key) -> Path:
        blob = json.dumps(_jsonable(key), sort_keys=True, separators=(",", ":"))
        digest = hashlib.sha256(blob.encode()).hexdigest()[:24]
        return self.root / f"{kind}-{digest}.json"

    def load(self, kind: str, key):
        path = self._path(kind, key)
        try:
            with open(path) as fh:
                payload = json.load(fh)
        except (OSError, ValueError):
            self.misses += 1
            return None
        if payload.get("key") != _jsonable(key):
            self.misses += 1
            return None
        self.hits += 1
        return payload

    def store(self, kind: str, key, payload: dict) -> None:
        payload = {"key": _jsonable(key), **payload}
        self.root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(payload, fh, sort_keys=True, separators=(",", ":"))
            os.replace(tmp, self._path(kind, key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
