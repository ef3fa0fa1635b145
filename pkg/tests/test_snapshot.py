"""Model snapshot tests."""
import numpy as np
import pytest
import yaml

from fdsic.data.codec import sidecar_path
from fdsic.errors import DatasetFormatError
from fdsic.models import ModelKind, load_model, save_model
from fdsic.models.snapshot import HEADER
# Fixtures are imported by name so pytest can resolve them.
from model_fixtures import setup_small_nets


@pytest.mark.parametrize("kind", [ModelKind.GLOBAL_H, ModelKind.ADAPTIVE_H,
                                  ModelKind.PARALLEL_H])
def test_round_trip(kind, small_nets, tmp_path):
    """A loaded network has the same spec and bitwise parameters."""
    model = small_nets[kind]
    for param in model.parameters():
        param.data += 0.25j
    path = save_model(model, tmp_path/f"{kind.slug}.sicm")
    loaded = load_model(path)
    assert loaded.spec == model.spec
    for name, values in model.snapshot().items():
        assert np.array_equal(loaded.params[name].data, values)
        assert loaded.params[name].role is model.params[name].role


def test_manifest(small_nets, tmp_path):
    """The YAML manifest lists every parameter with shape and role."""
    path = save_model(small_nets[ModelKind.PARALLEL_H], tmp_path/"p.sicm")
    manifest = yaml.safe_load(sidecar_path(path).read_text(encoding="utf-8"))
    assert manifest["kind"] == "parallel"
    assert (manifest["P"], manifest["L"]) == (3, 4)
    assert manifest["parameters"][-1] == {
        "name": "kernels", "shape": [10, 3, 4], "role": "adaptive",
    }


def _corrupt(path, offset, value):
    data = bytearray(path.read_bytes())
    data[offset] = value
    path.write_bytes(bytes(data))


def test_bad_kind(small_nets, tmp_path):
    """Baseline or unknown kinds cannot be loaded."""
    path = save_model(small_nets[ModelKind.GLOBAL_H], tmp_path/"g.sicm")
    offset = HEADER.fields["kind"][1]
    _corrupt(path, offset, int(ModelKind.MEMORY_POLY))
    with pytest.raises(DatasetFormatError, match="no snapshot"):
        load_model(path)
    _corrupt(path, offset, 99)
    with pytest.raises(DatasetFormatError) as excinfo:
        load_model(path)
    assert excinfo.value.offset == offset


def test_bad_magic(small_nets, tmp_path):
    """Dataset files are not model snapshots."""
    path = save_model(small_nets[ModelKind.GLOBAL_H], tmp_path/"g.sicm")
    _corrupt(path, 3, ord("D"))
    with pytest.raises(DatasetFormatError, match="SICM"):
        load_model(path)


def test_truncated(small_nets, tmp_path):
    """Missing parameter values are reported."""
    path = save_model(small_nets[ModelKind.ADAPTIVE_H], tmp_path/"a.sicm")
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(DatasetFormatError, match="truncated"):
        load_model(path)


def test_oversized_shape(small_nets, tmp_path):
    """Dimensions whose product exceeds the file are reported, not read."""
    path = save_model(small_nets[ModelKind.GLOBAL_H], tmp_path/"g.sicm")
    data = bytearray(path.read_bytes())
    # First parameter: name length, name, role, ndim, then its dims.
    length = int.from_bytes(data[HEADER.itemsize:HEADER.itemsize + 2],
                            "little")
    ndim_at = HEADER.itemsize + 2 + length + 1
    dims_at = ndim_at + 1
    data[ndim_at] = 4
    data[dims_at:dims_at + 16] = b"\xff" * 16
    path.write_bytes(bytes(data))
    with pytest.raises(DatasetFormatError, match="truncated values"):
        load_model(path)
