"""
Experiment harness package.

The click CLI, experiment configurations, CSV traces and run manifests.
"""
from .experiments import (
    Experiment,
    ExperimentConfig,
    config_from_dict,
    load_config,
    run_evaluation,
    run_experiment,
)
from .main import cli_main, run
from .traces import emit_trace, read_trace

__all__ = [
    "Experiment", "ExperimentConfig", "config_from_dict", "load_config",
    "run_evaluation", "run_experiment", "cli_main", "run", "emit_trace",
    "read_trace",
]
