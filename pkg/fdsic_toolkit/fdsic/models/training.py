"""
Full-batch training, test-time adaptation and evaluation.

fit() trains every parameter on the training records.  adapt() keeps the
SHARED weights, restarts the ADAPTIVE ones from their initial values and
trains them on new records.  Both log the normalized MSE every log_every
epochs; the value logged for an epoch is the loss of its forward pass,
before that epoch's update.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional
import numpy as np

from fdsic import config
from fdsic.cxnn import AdamState, Role, adam_step, backward, mse_db
from fdsic.cxnn import mse_loss
from fdsic.errors import DivergenceError, ShapeError
from fdsic.models.baselines import require_hammerstein

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer schedule of one fit or adapt call."""

    epochs: int = config.EPOCHS
    lr: float = config.LEARNING_RATE
    log_every: int = config.LOG_EVERY
    full_batch: bool = True

    def __post_init__(self):
        """Check the schedule."""
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.log_every < 1:
            raise ValueError(f"log_every must be >= 1, got {self.log_every}")
        if self.lr <= 0.0:
            raise ValueError(f"lr must be > 0, got {self.lr}")
        if not self.full_batch:
            raise ValueError("only full-batch training is supported")

    def logs_at(self, epoch):
        """Whether an epoch (counted from 0) produces a trace row."""
        return epoch % self.log_every == 0 or epoch == self.epochs - 1


class TraceRow(NamedTuple):
    """Normalized MSE of one logged epoch; None where not measured."""

    epoch: int
    train_db: Optional[float] = None
    test_db: Optional[float] = None


@dataclass
class TrainTrace:
    """Logged MSE curve of one model plus its final state."""

    kind: str
    rows: list = field(default_factory=list)
    final_train_db: Optional[float] = None
    final_test_db: Optional[float] = None
    snapshot: dict = field(default_factory=dict)

    def merge(self, other):
        """Combine two traces of the same model row by row.

        Values of self win where both traces measured the same column at
        the same epoch; the final values and snapshot of other are kept
        where self has none.
        """
        by_epoch = {row.epoch: row for row in other.rows}
        for row in self.rows:
            theirs = by_epoch.get(row.epoch, TraceRow(row.epoch))
            by_epoch[row.epoch] = TraceRow(
                row.epoch,
                _first(row.train_db, theirs.train_db),
                _first(row.test_db, theirs.test_db),
            )
        return TrainTrace(
            self.kind,
            [by_epoch[epoch] for epoch in sorted(by_epoch)],
            _first(self.final_train_db, other.final_train_db),
            _first(self.final_test_db, other.final_test_db),
            self.snapshot or other.snapshot,
        )

    def window_db(self, column, rows=config.FINAL_WINDOW):
        """Return the mean in dB of the last logged values of a column.

        It smooths the epoch-to-epoch jitter of full-batch Adam that the
        final values carry.

        Args:
            column: "train_db" or "test_db"
            rows: number of logged values averaged

        Returns:
            float, or None when the column was never logged
        """
        values = [getattr(row, column) for row in self.rows
                  if getattr(row, column) is not None][-rows:]
        return float(np.mean(values)) if values else None


def _first(value, fallback):
    return fallback if value is None else value


def _targets(dataset):
    return dataset.outputs[..., np.newaxis]


def _check_signals(model, dataset):
    require_hammerstein(dataset)
    adaptive = model.parameters(Role.ADAPTIVE)
    if adaptive and len(dataset.records) != model.spec.num_signals:
        raise ShapeError(
            f"{model.kind.name} is sized for {model.spec.num_signals} "
            f"signals, dataset has {len(dataset.records)}"
        )


def evaluate(model, dataset):
    """Return mse_db of the model's prediction on a dataset.

    Parameters are not changed.
    """
    _check_signals(model, dataset)
    targets = _targets(dataset)
    return mse_db(targets - model.forward(dataset.inputs).data, targets)


def _optimize(model, dataset, train_config, frozen, column, monitor=None):
    """Run the Adam loop and return the logged rows.

    Args:
        column: "train_db" or "test_db", the row field the loss goes to
        monitor: dataset evaluated into test_db at logged epochs

    Raises:
        DivergenceError: the loss stopped being finite
    """
    inputs, targets = dataset.inputs, _targets(dataset)
    params = model.parameters()
    state = AdamState(lr=train_config.lr)
    rows = []
    for epoch in range(train_config.epochs):
        residual = targets - model.forward(inputs)
        loss = mse_loss(residual)
        if not math.isfinite(float(loss)):
            raise DivergenceError(epoch, float(loss))
        if train_config.logs_at(epoch):
            values = {column: mse_db(residual, targets)}
            if monitor is not None:
                values["test_db"] = evaluate(model, monitor)
            rows.append(TraceRow(epoch, **values))
            LOGGER.info("%s epoch %d: %s", model.kind.name, epoch,
                        ", ".join(f"{key} {value:.2f}"
                                  for key, value in values.items()))
        adam_step(params, backward(loss, params), state, frozen)
    return rows


def _finish(model, dataset, epochs):
    final = evaluate(model, dataset)
    if not math.isfinite(final):
        raise DivergenceError(epochs, final)
    return final


def fit(model, dataset, train_config=None, test_dataset=None):
    """Train all parameters of a network on a Hammerstein dataset.

    Args:
        model: HammersteinNet
        dataset: training Dataset
        train_config: TrainConfig, defaults to TrainConfig()
        test_dataset: optional Dataset evaluated at every logged epoch

    Returns:
        TrainTrace with train rows, the final train MSE and a snapshot
    """
    train_config = train_config or TrainConfig()
    _check_signals(model, dataset)
    if test_dataset is not None:
        _check_signals(model, test_dataset)
    rows = _optimize(model, dataset, train_config, frozenset(), "train_db",
                     test_dataset)
    trace = TrainTrace(
        model.kind.slug,
        rows,
        final_train_db=_finish(model, dataset, train_config.epochs),
        snapshot=model.snapshot(),
    )
    if test_dataset is not None:
        trace.final_test_db = evaluate(model, test_dataset)
    LOGGER.info("%s fitted: %.2f dB", model.kind.name, trace.final_train_db)
    return trace


def adapt(model, test_dataset, train_config=None):
    """Re-fit the ADAPTIVE weights of a trained network to new records.

    SHARED weights stay bitwise unchanged.  A network without ADAPTIVE
    weights is only evaluated and its trace has no rows.

    Returns:
        TrainTrace with test rows and the final test MSE
    """
    train_config = train_config or TrainConfig()
    _check_signals(model, test_dataset)
    trace = TrainTrace(model.kind.slug)
    if model.parameters(Role.ADAPTIVE):
        model.reinitialize(Role.ADAPTIVE)
        trace.rows = _optimize(model, test_dataset, train_config,
                               frozenset({Role.SHARED}), "test_db")
    trace.final_test_db = _finish(model, test_dataset, train_config.epochs)
    trace.snapshot = model.snapshot()
    LOGGER.info("%s adapted: %.2f dB", model.kind.name, trace.final_test_db)
    return trace
