"""Model packages: binary weight files, JSON manifest, local registry.

Package directory layout (documented byte-exactly):

    <registry>/<package-name>/
        manifest.json          - schema_version, name, version, processors
        <processor>.bin        - weights for one processor

Weight file format, all integers little-endian:

    bytes 0-7    magic "BIOPKG1\\n"
    u32          length of the UTF-8 JSON meta blob
    bytes        meta blob (model kind, vocabularies, hyperparameters)
    u32          number of arrays
    per array:
        u16      name length, then the UTF-8 name
        u8       ndim, then ndim x u32 dimensions
        bytes    float32 little-endian values, C order

The manifest stores a SHA-256 checksum per weight file; loading verifies it
and fails with the offending file name on mismatch.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
from pathlib import Path

import numpy as np

from .charlm import CharLm
from .errors import ConfigError, PackageError
from .lemmatizer import Lemmatizer
from .ner import NerModel
from .depparser import ParserModel
from .segmenter import SegmenterModel
from .tagger import TaggerModel

MAGIC = b"BIOPKG1\n"
SCHEMA_VERSION = 1
REGISTRY_ENV = "BIOPIPE_REGISTRY"

MODEL_KINDS = {
    "tokenize": SegmenterModel,
    "pos": TaggerModel,
    "lemma": Lemmatizer,
    "depparse": ParserModel,
    "ner": NerModel,
    "charlm": CharLm,
}


def _collect_arrays(model) -> dict[str, np.ndarray]:
    arrays = {name: p.data for name, p in model.params().items()}
    if hasattr(model, "extra_params"):
        arrays.update({name: p.data for name, p in model.extra_params().items()})
    if hasattr(model, "extra_arrays"):
        arrays.update(model.extra_arrays())
    return arrays


def write_weights(model, path) -> None:
    meta_blob = json.dumps(model.meta(), ensure_ascii=False, sort_keys=True).encode("utf-8")
    arrays = _collect_arrays(model)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(meta_blob)))
        fh.write(meta_blob)
        fh.write(struct.pack("<I", len(arrays)))
        for name in sorted(arrays):
            arr = np.ascontiguousarray(arrays[name], dtype="<f4")
            name_b = name.encode("utf-8")
            fh.write(struct.pack("<H", len(name_b)))
            fh.write(name_b)
            fh.write(struct.pack("<B", arr.ndim))
            for dim in arr.shape:
                fh.write(struct.pack("<I", dim))
            fh.write(arr.tobytes())


def read_weights(path):
    """Returns (meta dict, {name: float64 array})."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[: len(MAGIC)] != MAGIC:
        raise PackageError(f"{path}: not a weight file (bad magic)")
    off = len(MAGIC)

    def take(fmt):
        nonlocal off
        size = struct.calcsize(fmt)
        vals = struct.unpack_from(fmt, blob, off)
        off += size
        return vals[0]

    meta_len = take("<I")
    meta = json.loads(blob[off : off + meta_len].decode("utf-8"))
    off += meta_len
    arrays = {}
    for _ in range(take("<I")):
        name_len = take("<H")
        name = blob[off : off + name_len].decode("utf-8")
        off += name_len
        ndim = take("<B")
        shape = tuple(take("<I") for _ in range(ndim))
        count = int(np.prod(shape)) if shape else 1
        arr = np.frombuffer(blob, dtype="<f4", count=count, offset=off).reshape(shape)
        off += count * 4
        arrays[name] = arr.astype(np.float64)
    return meta, arrays


def _instantiate(meta, arrays):
    kind = meta.get("kind")
    cls = MODEL_KINDS.get(kind)
    if cls is None:
        raise PackageError(f"unknown processor kind {kind!r}")
    model = cls.from_meta(meta)
    params = dict(model.params())
    if hasattr(model, "extra_params"):
        params.update(model.extra_params())
    extra = {}
    for name, arr in arrays.items():
        if name in params:
            if params[name].data.shape != arr.shape:
                raise PackageError(f"array {name} has shape {arr.shape}, expected {params[name].data.shape}")
            params[name].data = arr
        else:
            extra[name] = arr
    missing = set(params) - set(arrays)
    if missing:
        raise PackageError(f"weight file is missing arrays: {sorted(missing)}")
    if extra and hasattr(model, "set_extra_arrays"):
        model.set_extra_arrays(extra)
    return model


def _sha256(path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()


def save_package(models: dict, path, name: str, version: str = "1.0") -> None:
    """Write one weight file per processor plus the checksummed manifest."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    processors = {}
    for proc, model in models.items():
        fname = f"{proc}.bin"
        write_weights(model, root / fname)
        processors[proc] = {"file": fname, "sha256": _sha256(root / fname)}
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "name": name,
        "version": version,
        "processors": processors,
    }
    (root / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def add_to_package(model, proc: str, path, name: str, version: str = "1.0") -> None:
    """Write or overwrite one processor inside a package directory."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    manifest_path = root / "manifest.json"
    if manifest_path.is_file():
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        if manifest.get("schema_version") != SCHEMA_VERSION:
            raise PackageError(f"{root}: cannot extend a package with schema {manifest.get('schema_version')}")
    else:
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "name": name,
            "version": version,
            "processors": {},
        }
    fname = f"{proc}.bin"
    write_weights(model, root / fname)
    manifest["processors"][proc] = {"file": fname, "sha256": _sha256(root / fname)}
    manifest_path.write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def load_package(path) -> dict:
    """Load every processor in a package; checksums and schema are enforced."""
    root = Path(path)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise PackageError(f"{root}: no manifest.json")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    if manifest.get("schema_version") != SCHEMA_VERSION:
        raise PackageError(
            f"{root}: manifest schema {manifest.get('schema_version')} "
            f"not supported (expected {SCHEMA_VERSION})"
        )
    models = {}
    for proc, entry in manifest["processors"].items():
        fpath = root / entry["file"]
        if not fpath.is_file():
            raise PackageError(f"{root}: processor {proc} lists missing file {entry['file']}")
        digest = _sha256(fpath)
        if digest != entry["sha256"]:
            raise PackageError(f"checksum mismatch for {fpath}")
        meta, arrays = read_weights(fpath)
        models[proc] = _instantiate(meta, arrays)
    return models


def registry_root(explicit=None) -> Path:
    """Resolve the registry directory: explicit flag, else environment."""
    if explicit:
        return Path(explicit)
    env = os.environ.get(REGISTRY_ENV)
    if env:
        return Path(env)
    raise ConfigError(
        f"no model registry configured; pass --registry or set {REGISTRY_ENV}"
    )


def list_packages(registry) -> list[str]:
    root = Path(registry)
    if not root.is_dir():
        return []
    return sorted(p.name for p in root.iterdir() if (p / "manifest.json").is_file())


def resolve_package(registry, name: str) -> Path:
    root = Path(registry)
    candidate = root / name
    if not (candidate / "manifest.json").is_file():
        available = ", ".join(list_packages(registry)) or "none"
        raise ConfigError(f"unknown package {name!r}; available: {available}")
    return candidate
