"""Content-addressed JSON result cache.

Keys are sha256 digests of the canonical (sorted-keys) JSON encoding of
(command, config); values are plain JSON files under the cache
directory.  Results are deterministic, so a cache hit is always safe.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

ENV_VAR = "STRATA_LAB_CACHE"


def cache_dir(explicit=None):
    if explicit:
        return Path(explicit)
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


def _key(command: str, config: dict) -> str:
    blob = json.dumps({"command": command, "config": config}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def fetch(directory, command: str, config: dict):
    if directory is None:
        return None
    path = Path(directory) / f"{_key(command, config)}.json"
    if path.exists():
        with open(path) as fh:
            return json.load(fh)
    return None


def store(directory, command: str, config: dict, result):
    if directory is None:
        return
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"{_key(command, config)}.json"
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w") as fh:
        json.dump(result, fh, sort_keys=True, separators=(",", ":"))
    os.replace(tmp, path)
