"""SI-SDR sweep tests."""
import threading
import pytest

from fdsic.models import ModelKind, TrainConfig, point_seed, sdr_sweep
from fdsic.models import sweep
# Fixtures are imported by name so pytest can resolve them.
from data_fixtures import setup_short_ofdm


@pytest.fixture(name="tiny_sweep")
def setup_tiny_sweep(short_ofdm):
    """Keyword arguments of a sweep that runs in seconds."""
    return {
        "seeds": (0,),
        "train_config": TrainConfig(epochs=5, log_every=5),
        "ofdm": short_ofdm,
        "order": 2,
        "memory": 4,
    }


def test_rows_ordered(tiny_sweep):
    """One row per kind and grid point, kind-major."""
    rows = sdr_sweep(sdr_grid=(10.0, 20.0), **tiny_sweep)
    assert [(row.kind, row.sdr_db) for row in rows] == [
        ("parallel", 10.0), ("parallel", 20.0),
        ("memory_poly", 10.0), ("memory_poly", 20.0),
    ]
    assert all(row.repeats == 1 for row in rows)


def test_single_point(tiny_sweep):
    """A one-point grid gives one row per kind."""
    rows = sdr_sweep((ModelKind.MEMORY_POLY, ModelKind.LINEAR_FIR),
                     sdr_grid=[15], **tiny_sweep)
    assert [row.kind for row in rows] == ["memory_poly", "linear_fir"]
    assert rows[0].mean_mse_db < rows[1].mean_mse_db


def test_parallel_threads(mocker, tiny_sweep):
    """Parallel sweeps start one thread per grid point.

    Note: 'mocker' is a fixture provided by the pytest-mock package.
    """
    spy = mocker.spy(threading.Thread, "start")
    parallel = sdr_sweep(sdr_grid=(8.0, 12.0, 16.0), parallel=True,
                         **tiny_sweep)
    assert spy.call_count == 3
    serial = sdr_sweep(sdr_grid=(8.0, 12.0, 16.0), **tiny_sweep)
    assert parallel == serial


def test_repeats_average(tiny_sweep):
    """Means are taken over every seed."""
    tiny_sweep["seeds"] = (0, 1)
    rows = sdr_sweep((ModelKind.MEMORY_POLY,), sdr_grid=[10.0],
                     **tiny_sweep)
    assert rows[0].repeats == 2


def test_empty_grid(tiny_sweep):
    """An empty grid is rejected."""
    with pytest.raises(ValueError):
        sdr_sweep(sdr_grid=[], **tiny_sweep)


def test_errors_propagate(tiny_sweep):
    """A failing grid point fails the sweep."""
    with pytest.raises(ValueError):
        sdr_sweep(sdr_grid=[10.0, 1.0], parallel=True, **tiny_sweep)


def test_points_draw_own_data(mocker, tiny_sweep):
    """Each grid point draws its own data, whatever grid it is part of.

    Note: 'mocker' is a fixture provided by the pytest-mock package.
    """
    spy = mocker.spy(sweep, "generate_hammerstein")
    rows = sdr_sweep((ModelKind.MEMORY_POLY,), sdr_grid=(10.0, 20.0),
                     **tiny_sweep)
    seeds = [call.args[2] for call in spy.call_args_list]
    assert seeds == [point_seed(0, 10.0), point_seed(0, 20.0)]
    assert len(set(seeds)) == 2
    alone = sdr_sweep((ModelKind.MEMORY_POLY,), sdr_grid=(20.0,),
                      **tiny_sweep)
    assert alone[0] == rows[1]


def test_point_seed():
    """Per-point seeds differ across SI-SDR values and repeats."""
    seeds = {point_seed(seed, sdr) for seed in (0, 1) for sdr in (5, 10)}
    assert len(seeds) == 4
    assert point_seed(3, 12.5) == point_seed(3, 12.5)
