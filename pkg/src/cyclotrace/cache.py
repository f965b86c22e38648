"""Persistent result cache: one versioned JSON file per entry.

Entries are keyed by a canonical hash over the computation kind and every
parameter that can affect the value, including precision and truncation
settings; any change of those re-keys the entry.  Numeric payloads are
stored as decimal strings (never floats) so that a stored value reloads
bit-identically on any platform.  Writes go through a directory-level
advisory lock (single writer) and an atomic rename.
"""

import fcntl
import hashlib
import json
import os
import tempfile
import time
from dataclasses import dataclass

SCHEMA_VERSION = 1

#: File name of the directory-level advisory lock.
LOCK_NAME = ".lock"


def _canonical(value):
    """Normalize a parameter value for hashing (strings stay, ints become
    strings, bools/None get stable spellings; floats are refused because
    their repr is platform-dependent at the margins)."""
    if isinstance(value, bool) or value is None:
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    if isinstance(value, float):
        raise TypeError(
            "cache parameters must be ints or preformatted decimal "
            "strings, not floats: %r" % value)
    raise TypeError("unsupported cache parameter type: %r" % type(value))


def params_hash(kind, params):
    """Canonical sha256 over the computation kind and its full parameter set."""
    blob = json.dumps(
        {"kind": str(kind),
         "params": {str(k): _canonical(v) for k, v in params.items()}},
        sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _check_payload(node, path="payload"):
    if isinstance(node, dict):
        for k, v in node.items():
            _check_payload(v, "%s.%s" % (path, k))
    elif isinstance(node, (list, tuple)):
        for i, v in enumerate(node):
            _check_payload(v, "%s[%d]" % (path, i))
    elif isinstance(node, (float, int)) and not isinstance(node, bool):
        raise TypeError(
            "%s: cache payload numbers must be decimal strings" % path)
    elif not isinstance(node, (str, bool, type(None))):
        raise TypeError("%s: unsupported payload type %r" % (path, type(node)))


@dataclass(frozen=True)
class CacheEntry:
    schema_version: int
    kind: str
    params_hash: str
    payload: dict
    error: dict
    timestamp: float

    def to_json(self):
        return {
            "schema_version": self.schema_version,
            "kind": self.kind,
            "params_hash": self.params_hash,
            "payload": self.payload,
            "error": self.error,
            "timestamp": repr(self.timestamp),
        }


class CacheStore:
    """Directory of one-file-per-entry JSON results, filename = hash."""

    def __init__(self, directory):
        self.directory = directory

    def _path(self, digest):
        return os.path.join(self.directory, digest + ".json")

    def get(self, kind, params):
        """Return the stored CacheEntry or None (version mismatch = miss)."""
        digest = params_hash(kind, params)
        try:
            with open(self._path(digest), "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, ValueError):
            return None
        if raw.get("schema_version") != SCHEMA_VERSION:
            return None
        if raw.get("kind") != str(kind) or raw.get("params_hash") != digest:
            return None
        return CacheEntry(raw["schema_version"], raw["kind"],
                          raw["params_hash"], raw.get("payload", {}),
                          raw.get("error", {}), float(raw.get("timestamp", 0)))

    def put(self, kind, params, payload, error=None):
        """Store an entry (decimal-string payload) and return it."""
        _check_payload(payload)
        if error:
            _check_payload(error, "error")
        digest = params_hash(kind, params)
        entry = CacheEntry(SCHEMA_VERSION, str(kind), digest, payload,
                           error or {}, time.time())
        os.makedirs(self.directory, exist_ok=True)
        lock_path = os.path.join(self.directory, LOCK_NAME)
        with open(lock_path, "a+") as lock:
            fcntl.flock(lock.fileno(), fcntl.LOCK_EX)
            try:
                fd, tmp = tempfile.mkstemp(dir=self.directory,
                                           suffix=".tmp")
                try:
                    with os.fdopen(fd, "w", encoding="utf-8") as fh:
                        json.dump(entry.to_json(), fh, sort_keys=True,
                                  indent=1)
                        fh.write("\n")
                    os.replace(tmp, self._path(digest))
                except BaseException:
                    if os.path.exists(tmp):
                        os.unlink(tmp)
                    raise
            finally:
                fcntl.flock(lock.fileno(), fcntl.LOCK_UN)
        return entry
