"""Content-addressed on-disk cache for computed tables.

Enabled by the HILBFOCK_CACHE_DIR environment variable; keys are digests of
the model content hash plus the computation parameters, so cached artifacts
are valid across runs and machines.
"""

from __future__ import annotations

import hashlib
import json
import os


def cache_dir():
    return os.environ.get("HILBFOCK_CACHE_DIR")


def cache_key(model_hash, kind, **params):
    payload = json.dumps({"model": model_hash, "kind": kind, "params": params},
                         sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def load(key):
    root = cache_dir()
    if not root:
        return None
    path = os.path.join(root, key[:2], key + ".json")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError):
        return None


def store(key, obj):
    root = cache_dir()
    if not root:
        return
    sub = os.path.join(root, key[:2])
    os.makedirs(sub, exist_ok=True)
    path = os.path.join(sub, key + ".json")
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, sort_keys=True)
    os.replace(tmp, path)
