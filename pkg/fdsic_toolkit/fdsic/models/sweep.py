"""Normalized MSE of several model kinds over a grid of SI-SDR values."""
import logging
import threading
from dataclasses import dataclass
import numpy as np

from fdsic import config, seeding
from fdsic.data import Taxonomy, generate_hammerstein
from fdsic.errors import FdsicError
from fdsic.models.architectures import build
from fdsic.models.kinds import ModelKind, ModelSpec
from fdsic.models.training import TrainConfig, fit

LOGGER = logging.getLogger(__name__)

DEFAULT_KINDS = (ModelKind.PARALLEL_H, ModelKind.MEMORY_POLY)


@dataclass(frozen=True)
class SweepRow:
    """Mean normalized MSE of one kind at one SI-SDR."""

    kind: str
    sdr_db: float
    mean_mse_db: float
    repeats: int


def _score(kind, dataset, seed, train_config, order, memory):
    model = build(ModelSpec(kind, order, memory, len(dataset.records), seed))
    if kind.neural:
        return fit(model, dataset, train_config).window_db("train_db")
    return model.fit(dataset).mse_db


def point_seed(seed, si_sdr0):
    """Derive the data and init seed of one repeat at one SI-SDR.

    The key is the SI-SDR in hundredths of a dB, so a grid point draws the
    same data whatever grid it is part of and no two points share data.
    """
    return seeding.derive_seed(seed, seeding.SWEEP,
                               round(float(si_sdr0) * 100))


def sweep_point(kinds, si_sdr0, seeds, train_config=None, ofdm=None,
                order=config.NONLINEAR_ORDER, memory=config.KERNEL_SIZE):
    """Score every kind on fresh varNL+varSI data at one SI-SDR.

    One dataset is generated per seed, keyed by point_seed, and shared by
    all kinds.  A network scores the mean of its last logged training
    MSEs, a baseline its least-squares MSE.

    Returns:
        list of SweepRow, one per kind
    """
    train_config = train_config or TrainConfig()
    scores = {kind: [] for kind in kinds}
    for repeat_seed in seeds:
        seed = point_seed(repeat_seed, si_sdr0)
        dataset = generate_hammerstein(
            Taxonomy.VAR_NL_VAR_SI, si_sdr0, seed, ofdm=ofdm
        )
        for kind in kinds:
            scores[kind].append(
                _score(kind, dataset, seed, train_config, order, memory)
            )
    rows = [SweepRow(kind.slug, float(si_sdr0), float(np.mean(values)),
                     len(values))
            for kind, values in scores.items()]
    for row in rows:
        LOGGER.info("SI-SDR %.1f dB, %s: %.2f dB", row.sdr_db, row.kind,
                    row.mean_mse_db)
    return rows


def sdr_sweep(model_kinds=DEFAULT_KINDS, sdr_grid=config.SDR_GRID,
              seeds=(0,), train_config=None, ofdm=None,
              order=config.NONLINEAR_ORDER, memory=config.KERNEL_SIZE,
              parallel=False):
    """Sweep the SI-SDR grid for every model kind.

    Args:
        model_kinds: ModelKind members to score
        sdr_grid: SI-SDR values in dB, nonempty
        seeds: master seeds of the repeats, turned into per-point seeds by
            point_seed
        train_config: TrainConfig of the neural fits
        ofdm: OfdmConfig of the generated packets
        order: nonlinear order P of networks and polynomial
        memory: linear order L
        parallel: run grid points on separate threads

    Returns:
        list of SweepRow ordered by kind, then grid position
    """
    sdr_grid = [float(value) for value in sdr_grid]
    if not sdr_grid:
        raise ValueError("the SI-SDR grid is empty")
    kinds = [ModelKind(kind) for kind in model_kinds]
    seeds = list(seeds)
    results = {}
    failures = []

    def run(si_sdr0):
        """Score one grid point, keeping any error for the caller."""
        try:
            results[si_sdr0] = sweep_point(kinds, si_sdr0, seeds,
                                           train_config, ofdm, order, memory)
        except (FdsicError, ValueError) as err:
            LOGGER.error("SI-SDR %.1f dB failed: %s", si_sdr0, err)
            failures.append(err)

    if parallel:
        threads = [threading.Thread(target=run, args=(si_sdr0,))
                   for si_sdr0 in sdr_grid]
        for thread in threads:
            thread.start()
        for thread in threads:
            thread.join()
    else:
        for si_sdr0 in sdr_grid:
            run(si_sdr0)
            if failures:
                break
    if failures:
        raise failures[0]

    return [row for kind in kinds for si_sdr0 in sdr_grid
            for row in results[si_sdr0] if row.kind == kind.slug]
