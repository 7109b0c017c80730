"""
On-disk cache for resolutions and Ext modules.

One JSON file per (canonical ideal, characteristic, engine version). Each file holds the
payload and a sha256 of its canonical serialization; a mismatch means the entry is ignored
and recomputed. Writes go to a temp file in the same directory, then os.replace, so a
concurrent reader sees either the old entry or the new one.

Cache trouble never changes results: every failure is logged as a warning, and an I/O
error switches the cache off for the rest of the run.
"""
import hashlib
import json
import logging
import os
import tempfile

from complexes import SquarefreeIdeal
from errors import CacheError
from linalg import FieldSpec

logger = logging.getLogger(__name__)

ENGINE_VERSION = "1"


def _canonical_sha256_hex(data) -> str:
    raw = json.dumps(data, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(raw).hexdigest()


def cache_key(ideal: SquarefreeIdeal, fld: FieldSpec) -> str:
    material = f"{ideal.canonical_json()}|{fld.characteristic}|{ENGINE_VERSION}"
    return hashlib.sha256(material.encode("utf-8")).hexdigest()


class ResolutionCache:
    def __init__(self, directory: str):
        self.directory = directory
        self.enabled = True
        try:
            os.makedirs(directory, exist_ok=True)
        except OSError as e:
            self._disable(e)

    def _disable(self, error: Exception) -> None:
        logger.warning("cache disabled (%s): %s", self.directory, error)
        self.enabled = False

    def path_for(self, ideal: SquarefreeIdeal, fld: FieldSpec) -> str:
        return os.path.join(self.directory, cache_key(ideal, fld) + ".json")

    def _read(self, path: str) -> dict:
        try:
            with open(path, "r", encoding="utf-8") as f:
                entry = json.load(f)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise CacheError(f"unreadable cache entry {path}: {e}") from e
        if not isinstance(entry, dict) or "payload" not in entry or "checksum" not in entry:
            raise CacheError(f"cache entry {path} is missing its payload or checksum")
        if _canonical_sha256_hex(entry["payload"]) != entry["checksum"]:
            raise CacheError(f"checksum mismatch in cache entry {path}")
        return entry["payload"]

    def load(self, ideal: SquarefreeIdeal, fld: FieldSpec) -> dict | None:
        """The stored payload, or None on a miss (corrupt entries count as misses)."""
        if not self.enabled:
            return None
        path = self.path_for(ideal, fld)
        if not os.path.exists(path):
            return None
        try:
            payload = self._read(path)
        except CacheError as e:
            logger.warning("%s; recomputing", e)
            return None
        except OSError as e:
            self._disable(e)
            return None
        logger.info("cache hit: %s", os.path.basename(path))
        return payload

    def store(self, ideal: SquarefreeIdeal, fld: FieldSpec, payload: dict) -> None:
        if not self.enabled:
            return
        entry = {"checksum": _canonical_sha256_hex(payload), "payload": payload}
        path = self.path_for(ideal, fld)
        try:
            fd, tmp = tempfile.mkstemp(prefix=".entry_", suffix=".json", dir=self.directory)
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as f:
                    json.dump(entry, f, sort_keys=True, separators=(",", ":"))
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.remove(tmp)
                raise
        except OSError as e:
            self._disable(e)
            return
        logger.info("cache store: %s", os.path.basename(path))


def open_cache(directory: str | None) -> ResolutionCache | None:
    return ResolutionCache(directory) if directory else None
