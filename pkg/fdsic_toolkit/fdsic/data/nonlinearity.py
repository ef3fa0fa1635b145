"""
Memoryless AM/AM nonlinearities and the SI-SDR metric.

PA(s) = arctan(c_f |s|) e^{j arg s} models the soft-limiting power
amplifier, AD(x) = min(|x|, c_g) e^{j arg x} the LNA and A/D range.  Both
parameters are set by calibrating the standalone nonlinearity to a target
SI-SDR on a fixed probe signal.
"""
import enum
import logging
import math
from dataclasses import dataclass
import numpy as np
from scipy import optimize

from fdsic import config
from fdsic.errors import CalibrationError, DegenerateInputError
from fdsic.errors import InputShapeError

LOGGER = logging.getLogger(__name__)


class NonlinearityKind(enum.IntEnum):
    """Nonlinearity families, values are the on-disk codes."""

    PA_ARCTAN = 0
    AD_CLIP = 1


@dataclass(frozen=True)
class NonlinearitySpec:
    """A calibrated nonlinearity."""

    kind: NonlinearityKind
    param: float
    achieved_si_sdr: float

    def __post_init__(self):
        """Check the parameter and the recorded SI-SDR."""
        object.__setattr__(self, "kind", NonlinearityKind(self.kind))
        if not self.param > 0.0:
            raise ValueError(f"nonlinearity parameter must be > 0, "
                             f"got {self.param}")
        if not math.isfinite(self.achieved_si_sdr):
            raise ValueError("achieved SI-SDR must be finite")

    def apply(self, signal):
        """Apply this nonlinearity to an array of samples."""
        return apply_nonlinearity(self.kind, signal, self.param)

    def same_device(self, other):
        """Whether both specs describe the same kind and parameter.

        The achieved SI-SDR is left out: one clip level realizes a
        different SI-SDR on every signal it sees.
        """
        return (self.kind, self.param) == (other.kind, other.param)


def _samples(signal):
    return np.asarray(getattr(signal, "samples", signal),
                      dtype=np.complex128)


def pa_apply(s, c_f):
    """Apply the arctan PA characteristic, elementwise.

    Args:
        s: complex sample or array
        c_f: scale parameter, > 0

    Returns:
        arctan(c_f |s|) e^{j arg s}, with 0 mapped to 0
    """
    s = np.asarray(s, dtype=np.complex128)
    magnitude = np.abs(s)
    gain = np.divide(
        np.arctan(c_f * magnitude),
        magnitude,
        out=np.full(magnitude.shape, float(c_f)),
        where=magnitude > 0.0,
    )
    return (gain * s)[()]


def ad_apply(x, c_g):
    """Clip the magnitude at c_g, keeping the phase, elementwise."""
    x = np.asarray(x, dtype=np.complex128)
    magnitude = np.abs(x)
    gain = np.divide(
        c_g,
        magnitude,
        out=np.ones(magnitude.shape),
        where=magnitude >= c_g,
    )
    return (gain * x)[()]


def apply_nonlinearity(kind, signal, param):
    """Dispatch to pa_apply or ad_apply by kind."""
    if NonlinearityKind(kind) is NonlinearityKind.PA_ARCTAN:
        return pa_apply(signal, param)
    return ad_apply(signal, param)


def si_sdr(estimate, reference):
    """Return the scale-invariant signal-to-distortion ratio in dB.

    The reference is projected onto the estimate with the complex scale
    alpha = <estimate, reference> / ||reference||^2.  The ratio is capped
    at SI_SDR_CAP_DB when the distortion term vanishes.

    Args:
        estimate: ComplexSignal or complex array
        reference: ComplexSignal or complex array of equal length

    Returns:
        SI-SDR in dB
    """
    estimate = _samples(estimate).ravel()
    reference = _samples(reference).ravel()
    if estimate.size != reference.size:
        raise InputShapeError(
            f"length mismatch: {estimate.size} vs {reference.size}"
        )
    reference_energy = np.vdot(reference, reference).real
    if reference_energy == 0.0:
        raise DegenerateInputError("reference signal is all zeros")

    alpha = np.vdot(reference, estimate) / reference_energy
    target = alpha * reference
    distortion = estimate - target
    target_energy = np.vdot(target, target).real
    distortion_energy = np.vdot(distortion, distortion).real
    if distortion_energy == 0.0:
        return config.SI_SDR_CAP_DB
    ratio_db = 10.0 * math.log10(target_energy / distortion_energy)
    return min(ratio_db, config.SI_SDR_CAP_DB)


def measure_si_sdr(kind, param, probe):
    """SI-SDR between a probe and its image under one nonlinearity."""
    samples = _samples(probe)
    return si_sdr(apply_nonlinearity(kind, samples, param), samples)


def sdr_curve(kind, params, probe):
    """Measure the SI-SDR for each parameter value on one probe."""
    return [measure_si_sdr(kind, param, probe) for param in params]


def attainable_range(kind, probe, bracket=config.CALIBRATION_BRACKET):
    """Return the (low, high) SI-SDR reachable over the parameter bracket."""
    ends = sdr_curve(kind, bracket, probe)
    return min(ends), max(ends)


def calibrate(kind, target_si_sdr, probe,
              bracket=config.CALIBRATION_BRACKET,
              max_iter=config.CALIBRATION_MAX_ITER):
    """Find the parameter that gives the target SI-SDR on a probe.

    SI-SDR falls monotonically with c_f for the PA and rises with c_g for
    the clipper, so bisection over log10(param) converges inside the
    bracket.

    Args:
        kind: NonlinearityKind
        target_si_sdr: dB
        probe: unit-power ComplexSignal or array
        bracket: (low, high) parameter search range
        max_iter: bisection iteration limit

    Returns:
        NonlinearitySpec whose achieved SI-SDR is within
        CALIBRATION_TOLERANCE_DB of the target

    Raises:
        CalibrationError: target outside the attainable range, carrying it
    """
    kind = NonlinearityKind(kind)
    samples = _samples(probe)

    def excess(log_param):
        """Return the SI-SDR above target at 10 ** log_param."""
        return measure_si_sdr(kind, 10.0 ** log_param, samples) \
            - target_si_sdr

    low, high = attainable_range(kind, samples, bracket)
    if not low <= target_si_sdr <= high:
        raise CalibrationError(
            f"{kind.name} cannot reach {target_si_sdr:.2f} dB; attainable "
            f"[{low:.2f}, {high:.2f}] dB",
            target=target_si_sdr,
            attainable=(low, high),
        )

    log_low, log_high = np.log10(bracket)
    if excess(log_low) == 0.0:
        log_param = log_low
    elif excess(log_high) == 0.0:
        log_param = log_high
    else:
        try:
            log_param = optimize.bisect(
                excess, log_low, log_high, xtol=1e-12, maxiter=max_iter
            )
        except RuntimeError as err:
            raise CalibrationError(str(err), target=target_si_sdr) from err

    param = float(10.0 ** log_param)
    achieved = measure_si_sdr(kind, param, samples)
    if abs(achieved - target_si_sdr) > config.CALIBRATION_TOLERANCE_DB:
        raise CalibrationError(
            f"{kind.name} calibration ended at {achieved:.3f} dB for a "
            f"{target_si_sdr:.3f} dB target",
            target=target_si_sdr,
            attainable=(low, high),
        )
    LOGGER.debug("Calibrated %s to %.4g for %.2f dB (achieved %.4f dB)",
                 kind.name, param, target_si_sdr, achieved)
    return NonlinearitySpec(kind, param, achieved)
