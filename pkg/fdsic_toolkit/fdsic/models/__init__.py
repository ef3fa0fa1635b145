"""
Models package.

Neural Hammerstein networks, least-squares baselines, training and
adaptation, snapshots and the SI-SDR sweep.
"""
from .architectures import (
    AdaptiveHammerstein,
    GlobalHammerstein,
    HammersteinNet,
    ParallelHammerstein,
    build,
)
from .baselines import (
    BaselineFit,
    MemoryPolynomial,
    linear_fir_fit,
    memory_poly_basis,
    memory_poly_fit,
)
from .kinds import ModelKind, ModelSpec
from .snapshot import load_model, save_model
from .sweep import SweepRow, point_seed, sdr_sweep, sweep_point
from .training import TraceRow, TrainConfig, TrainTrace, adapt, evaluate, fit

__all__ = [
    "AdaptiveHammerstein", "GlobalHammerstein", "HammersteinNet",
    "ParallelHammerstein", "build",
    "BaselineFit", "MemoryPolynomial", "linear_fir_fit",
    "memory_poly_basis", "memory_poly_fit",
    "ModelKind", "ModelSpec", "load_model", "save_model",
    "SweepRow", "point_seed", "sdr_sweep", "sweep_point",
    "TraceRow", "TrainConfig", "TrainTrace", "adapt", "evaluate", "fit",
]
