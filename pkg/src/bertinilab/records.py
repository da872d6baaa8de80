"""Run records and the JSON result cache.

Every CLI command writes a RunRecord; re-running with the same parameters
and seed reproduces the payload bit for bit.  The cache directory is taken
from BERTINI_CACHE_DIR (default ./.bertinilab_cache) and is keyed by a
content hash of (command, params, seed).
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, asdict
from importlib import resources
from pathlib import Path

from . import __version__


def cache_dir(override: str | None = None) -> Path:
    root = override or os.environ.get("BERTINI_CACHE_DIR") or ".bertinilab_cache"
    p = Path(root)
    p.mkdir(parents=True, exist_ok=True)
    return p


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def content_key(command: str, params: dict, seed: int | None) -> str:
    blob = canonical_json({"command": command, "params": params, "seed": seed})
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


@dataclass
class RunRecord:
    command: str
    params: dict
    seed: int | None
    version: str
    wall_time_s: float
    payload: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunRecord":
        doc = json.loads(text)
        return cls(command=doc["command"], params=doc["params"],
                   seed=doc["seed"], version=doc["version"],
                   wall_time_s=doc["wall_time_s"], payload=doc["payload"])


def write_record(record: RunRecord, directory: str | None = None) -> Path:
    d = cache_dir(directory) / "records"
    d.mkdir(parents=True, exist_ok=True)
    key = content_key(record.command, record.params, record.seed)
    path = d / f"{record.command}-{key}.json"
    path.write_text(record.to_json())
    return path


def load_record(path: str) -> RunRecord:
    return RunRecord.from_json(Path(path).read_text())


def run_and_record(command: str, params: dict, seed: int | None,
                   fn, directory: str | None = None):
    """Execute fn() -> payload dict, wrap it in a validated RunRecord,
    persist it, and return (record, path)."""
    t0 = time.time()
    payload = fn()
    rec = RunRecord(command=command, params=params, seed=seed,
                    version=__version__, wall_time_s=time.time() - t0,
                    payload=payload)
    validate_record(rec)
    path = write_record(rec, directory)
    return rec, path


# -- checkpoints for resumable censuses ---------------------------------

def checkpoint_path(command: str, params: dict, seed: int | None,
                    directory: str | None = None) -> Path:
    d = cache_dir(directory) / "checkpoints"
    d.mkdir(parents=True, exist_ok=True)
    return d / f"{command}-{content_key(command, params, seed)}.json"


def save_checkpoint(path: Path, state: dict) -> None:
    tmp = path.with_suffix(".tmp")
    tmp.write_text(canonical_json(state))
    tmp.replace(path)


def load_checkpoint(path: Path) -> dict | None:
    if path.exists():
        return json.loads(path.read_text())
    return None


# -- schema --------------------------------------------------------------

def runrecord_schema() -> dict:
    text = resources.files("bertinilab").joinpath(
        "data/runrecord.schema.json").read_text()
    return json.loads(text)


def validate_record(record: RunRecord) -> None:
    import jsonschema
    jsonschema.validate(json.loads(record.to_json()), runrecord_schema())
