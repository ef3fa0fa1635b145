"""
Model snapshots: binary parameter values plus a YAML manifest.

Layout, all little-endian:

    header     magic "SICM", version u16, kind u8, P u16, L u16,
               num_signals u16, seed u64, parameter count u16
    parameter  name length u16, UTF-8 name, role u8, ndim u8,
               dims u32 each, values as (re, im) float64 pairs
"""
import logging
import math
import pathlib
import numpy as np
import yaml

from fdsic.cxnn import Role
from fdsic.data.codec import COMPLEX, BinaryReader, sidecar_path
from fdsic.errors import DatasetFormatError, FdsicError
from fdsic.models.architectures import build
from fdsic.models.kinds import ModelKind, ModelSpec

LOGGER = logging.getLogger(__name__)

MAGIC = b"SICM"
VERSION = 1
ROLE_CODES = {Role.SHARED: 0, Role.ADAPTIVE: 1}

HEADER = np.dtype([
    ("magic", "S4"),
    ("version", "<u2"),
    ("kind", "u1"),
    ("P", "<u2"),
    ("L", "<u2"),
    ("num_signals", "<u2"),
    ("seed", "<u8"),
    ("param_count", "<u2"),
])
PARAM_HEAD = np.dtype([("role", "u1"), ("ndim", "u1")])


def model_manifest(model):
    """Return the name, shape and role of every parameter."""
    spec = model.spec
    return {
        "format": MAGIC.decode(),
        "version": VERSION,
        "kind": spec.kind.slug,
        "P": spec.P,
        "L": spec.L,
        "num_signals": spec.num_signals,
        "seed": spec.seed,
        "parameters": [
            {"name": param.name, "shape": list(param.shape),
             "role": param.role.value}
            for param in model.parameters()
        ],
    }


def save_model(model, path):
    """Write a network's parameters and manifest.

    Returns:
        pathlib.Path of the snapshot
    """
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    spec = model.spec
    header = np.zeros((), dtype=HEADER)
    header["magic"] = MAGIC
    header["version"] = VERSION
    header["kind"] = spec.kind
    header["P"] = spec.P
    header["L"] = spec.L
    header["num_signals"] = spec.num_signals
    header["seed"] = spec.seed
    header["param_count"] = len(model.params)

    chunks = [header.tobytes()]
    for param in model.parameters():
        name = param.name.encode("utf-8")
        head = np.zeros((), dtype=PARAM_HEAD)
        head["role"] = ROLE_CODES[param.role]
        head["ndim"] = param.ndim
        chunks += [
            np.array(len(name), dtype="<u2").tobytes(),
            name,
            head.tobytes(),
            np.array(param.shape, dtype="<u4").tobytes(),
            param.data.astype(COMPLEX).tobytes(),
        ]
    path.write_bytes(b"".join(chunks))
    with sidecar_path(path).open("w", encoding="utf-8") as manifest:
        yaml.safe_dump(model_manifest(model), manifest, sort_keys=False)
    LOGGER.info("Saved %s model to %s", spec.kind.name, path)
    return path


def _read_header(reader):
    header = reader.take_one(HEADER, "header")
    if header["magic"] != MAGIC:
        raise DatasetFormatError(
            f"expected magic {MAGIC!r}, found {bytes(header['magic'])!r}", 0
        )
    if header["version"] != VERSION:
        raise DatasetFormatError(
            f"unsupported version {header['version']}",
            HEADER.fields["version"][1],
        )
    return header


def load_model(path):
    """Rebuild a network from a snapshot written by save_model.

    Raises:
        DatasetFormatError: malformed file or parameters that do not fit
            the recorded model spec
    """
    reader = BinaryReader(pathlib.Path(path).read_bytes())
    header = _read_header(reader)
    try:
        spec = ModelSpec(
            ModelKind(int(header["kind"])),
            int(header["P"]),
            int(header["L"]),
            int(header["num_signals"]),
            int(header["seed"]),
        )
    except ValueError as err:
        raise DatasetFormatError(f"invalid model spec: {err}",
                                 HEADER.fields["kind"][1]) from err
    if not spec.kind.neural:
        raise DatasetFormatError(f"{spec.kind.name} has no snapshot",
                                 HEADER.fields["kind"][1])

    model = build(spec)
    roles = {code: role for role, code in ROLE_CODES.items()}
    values = {}
    for _ in range(int(header["param_count"])):
        start = reader.offset
        length = int(reader.take_one("<u2", "name length"))
        raw_name = reader.take("u1", length, "name").tobytes()
        name = raw_name.decode("utf-8", "replace")
        head = reader.take_one(PARAM_HEAD, "parameter header")
        shape = tuple(int(dim) for dim in
                      reader.take("<u4", int(head["ndim"]), "shape"))
        count = math.prod(shape)
        data = reader.take(COMPLEX, count, f"values of {name}")
        param = model.params.get(name)
        if param is None or roles.get(int(head["role"])) is not param.role:
            raise DatasetFormatError(f"unexpected parameter {name!r}", start)
        values[name] = data.reshape(shape)
    reader.expect_end()
    try:
        model.load(values)
    except (KeyError, FdsicError) as err:
        raise DatasetFormatError(f"parameters do not match: {err}",
                                 0) from err
    LOGGER.debug("Loaded %s from %s", spec.kind.name, path)
    return model
