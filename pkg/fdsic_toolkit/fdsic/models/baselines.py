"""
Least-squares baselines: the memory polynomial and the linear FIR.

y[k] = sum_{p=1..P} sum_{l=0..L-1} a[p, l] s[k-l] |s[k-l]|^(p-1)

The linear FIR is the P = 1 case and shares every line of code with the
polynomial.
"""
import logging
from dataclasses import dataclass
import numpy as np

from fdsic import config
from fdsic.cxnn import mse_db
from fdsic.data import SystemKind, Taxonomy
from fdsic.errors import InputShapeError, NumericError
from fdsic.errors import UnsupportedSystemError
from fdsic.models.kinds import ModelKind

LOGGER = logging.getLogger(__name__)


def memory_poly_basis(samples, order, memory):
    """Build the regression matrix of one signal.

    Column (p - 1) * memory + l holds s[k - l] |s[k - l]|^(p - 1), with
    zero history before the first sample.

    Args:
        samples: complex array [time]
        order: nonlinear order P
        memory: linear order L

    Returns:
        complex array [time, order * memory]
    """
    samples = np.asarray(samples, dtype=np.complex128).ravel()
    if memory > samples.size:
        raise InputShapeError(
            f"memory {memory} exceeds {samples.size} samples"
        )
    columns = np.zeros((samples.size, order * memory), dtype=np.complex128)
    magnitude = np.abs(samples)
    for power in range(order):
        term = samples * magnitude ** power
        for lag in range(memory):
            columns[lag:, power * memory + lag] = term[:samples.size - lag]
    return columns


def solve_least_squares(columns, target, ridge=config.RIDGE):
    """Solve the ridge-regularized normal equations.

    Columns are scaled to unit norm before solving so one ridge value
    conditions every order; the coefficients are returned unscaled.

    Raises:
        NumericError: singular or non-finite system
    """
    norms = np.linalg.norm(columns, axis=0)
    norms[norms == 0.0] = 1.0
    scaled = columns / norms
    gram = scaled.conj().T @ scaled
    gram += ridge * np.eye(gram.shape[0])
    try:
        coefficients = np.linalg.solve(gram, scaled.conj().T @ target)
    except np.linalg.LinAlgError as err:
        raise NumericError(f"normal equations are singular: {err}") from err
    if not np.all(np.isfinite(coefficients)):
        raise NumericError("least-squares solution is not finite")
    return coefficients / norms


@dataclass(frozen=True, eq=False)
class BaselineFit:
    """Fitted coefficients and the achieved normalized MSE.

    Attributes:
        coefficients: [fits, P * L]; one row when fitted jointly, one per
            file ID otherwise
        per_file: whether each file ID has its own row
        mse_db: normalized MSE over the whole dataset
    """

    coefficients: np.ndarray
    per_file: bool
    mse_db: float


def require_hammerstein(dataset):
    """Reject datasets of the Wiener system option."""
    if dataset.system is not SystemKind.HAMMERSTEIN:
        raise UnsupportedSystemError(
            f"{dataset.system.name} data cannot be fitted by a "
            "Hammerstein model"
        )


def default_per_file(dataset):
    """Fit jointly only when every record shares the same system."""
    return dataset.taxonomy is not Taxonomy.INV_NL_INV_SI


class MemoryPolynomial:
    """Memory polynomial with the fit/evaluate surface of the networks.

    Jointly fitted coefficients are reused on new data; per-file fits are
    re-solved on the data they are evaluated on.  A LINEAR_FIR is fitted
    per file ID unless told otherwise.
    """

    def __init__(self, order, memory, per_file=None,
                 kind=ModelKind.MEMORY_POLY):
        """Configure the orders and the joint/per-file rule."""
        if order < 1 or memory < 1:
            raise ValueError("order and memory must be >= 1")
        self.order = order
        self.memory = memory
        self.per_file = per_file
        self.kind = kind
        self.result = None

    def _per_file(self, dataset):
        if self.per_file is None:
            return (self.kind is ModelKind.LINEAR_FIR
                    or default_per_file(dataset))
        return self.per_file

    def _bases(self, dataset):
        return [memory_poly_basis(signal, self.order, self.memory)
                for signal in dataset.inputs]

    def fit(self, dataset):
        """Solve the coefficients on a dataset.

        Returns:
            BaselineFit
        """
        require_hammerstein(dataset)
        bases = self._bases(dataset)
        targets = dataset.outputs
        if self._per_file(dataset):
            coefficients = np.stack([
                solve_least_squares(columns, target)
                for columns, target in zip(bases, targets)
            ])
        else:
            coefficients = solve_least_squares(
                np.concatenate(bases), targets.ravel()
            )[np.newaxis]
        predictions = self._predict(bases, coefficients)
        self.result = BaselineFit(
            coefficients,
            coefficients.shape[0] > 1,
            mse_db(targets - predictions, targets),
        )
        LOGGER.info("%s (P=%d, L=%d, %s): %.2f dB", self.kind.name,
                    self.order, self.memory,
                    "per file" if self.result.per_file else "joint",
                    self.result.mse_db)
        return self.result

    @staticmethod
    def _predict(bases, coefficients):
        rows = np.resize(np.arange(coefficients.shape[0]), len(bases))
        return np.stack([columns @ coefficients[row]
                         for columns, row in zip(bases, rows)])

    def evaluate(self, dataset):
        """Return the normalized MSE on a dataset in dB.

        Joint coefficients are applied unchanged; a per-file model is
        re-solved on the dataset.
        """
        if self.result is None:
            raise ValueError(f"{self.kind.name} has not been fitted")
        if self.result.per_file:
            refit = MemoryPolynomial(self.order, self.memory, True, self.kind)
            return refit.fit(dataset).mse_db
        targets = dataset.outputs
        predictions = self._predict(self._bases(dataset),
                                    self.result.coefficients)
        return mse_db(targets - predictions, targets)


def memory_poly_fit(dataset, order=config.NONLINEAR_ORDER,
                    memory=config.KERNEL_SIZE, per_file=None):
    """Fit a memory polynomial to a Hammerstein dataset.

    Args:
        dataset: Dataset
        order: nonlinear order P
        memory: linear order L
        per_file: force per-file (True) or joint (False) fitting; by
            default only invariant datasets are fitted jointly

    Returns:
        BaselineFit
    """
    return MemoryPolynomial(order, memory, per_file).fit(dataset)


def linear_fir_fit(dataset, memory=config.KERNEL_SIZE, per_file=None):
    """Fit a linear FIR, the order-1 memory polynomial, per file ID.

    per_file=False forces one joint kernel.
    """
    model = MemoryPolynomial(1, memory, per_file, ModelKind.LINEAR_FIR)
    return model.fit(dataset)
