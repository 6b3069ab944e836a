"""
Provenance stamps carried by every output file.
"""
import hashlib
import json
import os
from dataclasses import dataclass
from typing import Dict, Optional

import pandas as pd

from config import VERSION, RunConfig

HEADER_PREFIX = "# "


def config_hash(config: RunConfig, version: str = VERSION) -> str:
    """Digest of the effective configuration and the program version."""
    canonical = json.dumps({"version": version, "config": config.to_dict()}, sort_keys=True,
                           separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class Provenance:
    version: str
    seed: Optional[int]
    config_hash: str

    @classmethod
    def for_run(cls, config: RunConfig, seed: Optional[int] = None) -> "Provenance":
        return cls(VERSION, seed, config_hash(config))

    def header(self) -> str:
        seed = "none" if self.seed is None else str(self.seed)
        return f"{HEADER_PREFIX}version={self.version} seed={seed} config_hash={self.config_hash}"

    def as_dict(self) -> Dict[str, str]:
        return {"version": self.version, "seed": self.seed, "config_hash": self.config_hash}

    @classmethod
    def from_dict(cls, data: Dict) -> "Provenance":
        return cls(str(data.get("version", "")), data.get("seed"), str(data.get("config_hash", "")))


def read_header(path: str) -> Optional[Provenance]:
    """Parse the provenance line of a CSV written by write_csv, if present."""
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline().rstrip("\n")
    if not first.startswith(HEADER_PREFIX):
        return None
    fields = dict(part.split("=", 1) for part in first[len(HEADER_PREFIX):].split() if "=" in part)
    seed = fields.get("seed")
    return Provenance(fields.get("version", ""), None if seed in (None, "none") else int(seed),
                      fields.get("config_hash", ""))


def write_csv(frame: pd.DataFrame, path: str, provenance: Provenance, float_format: str = "%.12g") -> None:
    """Write a table with the provenance line on top."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(provenance.header() + "\n")
        frame.to_csv(f, index=False, float_format=float_format, lineterminator="\n")
