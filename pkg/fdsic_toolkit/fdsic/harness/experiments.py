"""
Experiment configurations and the runs that reproduce each figure.

fig5  invariant Hammerstein data, global network
fig6  invariant nonlinearity with variant channels, global and adaptive
fig7  variant nonlinearity and channels, adaptive and parallel
fig8  SI-SDR sweep of the parallel network and the memory polynomial
gen   datasets only
"""
import dataclasses
import enum
import logging
import pathlib
import numpy as np
import yaml

from fdsic import config, seeding
from fdsic.cxnn import Role
from fdsic.data import (
    NonlinearityKind,
    OfdmConfig,
    SystemKind,
    Taxonomy,
    calibration_probe,
    empirical_pdp,
    generate,
    pdp_from_spec,
    sdr_curve,
    read_dataset,
    write_dataset,
)
from fdsic.errors import ConfigError
from fdsic.harness.manifest import write_manifest, write_results
from fdsic.harness.traces import (
    emit_baselines,
    emit_calibration_curve,
    emit_pdp,
    emit_sweep,
    emit_trace,
)
from fdsic.models import (
    ModelKind,
    ModelSpec,
    TrainConfig,
    adapt,
    build,
    evaluate,
    fit,
    load_model,
    save_model,
    sdr_sweep,
)

LOGGER = logging.getLogger(__name__)


class Experiment(enum.Enum):
    """Experiments the harness can run; values are the CLI names."""

    FIG5_INV = "fig5"
    FIG6_VARSI = "fig6"
    FIG7_VARNL_VARSI = "fig7"
    FIG8_SWEEP = "fig8"
    GEN_ONLY = "gen"

    @classmethod
    def parse(cls, text):
        """Parse a CLI name or member name."""
        key = str(text).strip()
        for member in cls:
            if key.lower() == member.value or key.upper() == member.name:
                return member
        raise ValueError(f"unknown experiment {text!r}")


# Taxonomy and networks of each figure experiment.
FIGURES = {
    Experiment.FIG5_INV: (Taxonomy.INV_NL_INV_SI, (ModelKind.GLOBAL_H,)),
    Experiment.FIG6_VARSI: (Taxonomy.INV_NL_VAR_SI,
                            (ModelKind.GLOBAL_H, ModelKind.ADAPTIVE_H)),
    Experiment.FIG7_VARNL_VARSI: (Taxonomy.VAR_NL_VAR_SI,
                                  (ModelKind.ADAPTIVE_H,
                                   ModelKind.PARALLEL_H)),
}
BASELINES = (ModelKind.LINEAR_FIR, ModelKind.MEMORY_POLY)


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """Everything one harness run depends on."""

    experiment: Experiment
    si_sdr0: float = config.DEFAULT_SI_SDR0
    master_seed: int = 0
    train: TrainConfig = TrainConfig()
    adapt: TrainConfig = None
    output_dir: str = config.OUTPUT_DIR
    system: SystemKind = SystemKind.HAMMERSTEIN
    taxonomy: Taxonomy = Taxonomy.INV_NL_INV_SI
    packet_samples: int = config.PACKET_SAMPLES
    P: int = config.NONLINEAR_ORDER
    L: int = config.KERNEL_SIZE
    train_data: str = None
    test_data: str = None
    sdr_grid: tuple = config.SDR_GRID
    repeats: int = 1
    parallel: bool = False

    def __post_init__(self):
        """Resolve defaults and check the combination."""
        if self.adapt is None:
            object.__setattr__(self, "adapt", self.train)
        low, high = config.SI_SDR0_RANGE
        if not low <= self.si_sdr0 <= high:
            raise ConfigError(
                f"si_sdr0 {self.si_sdr0} dB outside [{low}, {high}]"
            )
        if self.experiment in FIGURES \
                and self.system is not SystemKind.HAMMERSTEIN:
            raise ConfigError("figure experiments need Hammerstein data")
        if self.repeats < 1:
            raise ConfigError("repeats must be >= 1")
        if not self.sdr_grid:
            raise ConfigError("sdr_grid must not be empty")

    @property
    def ofdm(self):
        """Packet layout of generated data."""
        return OfdmConfig(packet_samples=self.packet_samples)

    @property
    def data_taxonomy(self):
        """Taxonomy of the generated data."""
        if self.experiment in FIGURES:
            return FIGURES[self.experiment][0]
        return self.taxonomy

    @property
    def test_seed(self):
        """Master seed of the test data."""
        return self.master_seed + config.TEST_SEED_OFFSET

    def to_dict(self):
        """Return a YAML-friendly mapping of the resolved configuration."""
        train = dataclasses.asdict(self.train)
        adapt_config = dataclasses.asdict(self.adapt)
        return {
            "experiment": self.experiment.value,
            "system": self.system.name[0].lower(),
            "taxonomy": self.data_taxonomy.label(self.system),
            "si_sdr0": float(self.si_sdr0),
            "master_seed": int(self.master_seed),
            "packet_samples": self.packet_samples,
            "model": {"P": self.P, "L": self.L},
            "train": train,
            "adapt": adapt_config,
            "data": {"train": self.train_data, "test": self.test_data},
            "sweep": {"grid": [float(value) for value in self.sdr_grid],
                      "repeats": self.repeats,
                      "parallel": self.parallel},
            "output_dir": str(self.output_dir),
        }


_TOP_KEYS = {"experiment", "system", "taxonomy", "si_sdr0", "master_seed",
             "packet_samples", "model", "train", "adapt", "data", "sweep",
             "output_dir"}
_SECTION_KEYS = {
    "model": {"P", "L"},
    "train": {"epochs", "lr", "log_every", "full_batch"},
    "adapt": {"epochs", "lr", "log_every", "full_batch"},
    "data": {"train", "test"},
    "sweep": {"grid", "repeats", "parallel"},
}


def _check_keys(document):
    if not isinstance(document, dict):
        raise ConfigError("configuration must be a mapping")
    unknown = set(document) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    for section, allowed in _SECTION_KEYS.items():
        value = document.get(section) or {}
        if not isinstance(value, dict):
            raise ConfigError(f"{section} must be a mapping")
        unknown = set(value) - allowed
        if unknown:
            raise ConfigError(
                f"unknown keys in {section}: {', '.join(sorted(unknown))}"
            )


def config_from_dict(document, **overrides):
    """Build an ExperimentConfig from a parsed YAML mapping.

    Keyword overrides (experiment, output_dir, ...) replace file values
    when they are not None.

    Raises:
        ConfigError: unknown keys, bad enum names or invalid values
    """
    if document is None:
        document = {}
    _check_keys(document)
    document = dict(document)
    for key, value in overrides.items():
        if value is not None:
            document[key] = value
    if "experiment" not in document:
        raise ConfigError("no experiment given")
    model = document.get("model") or {}
    data = document.get("data") or {}
    sweep = document.get("sweep") or {}
    try:
        train = TrainConfig(**(document.get("train") or {}))
        adapt_config = document.get("adapt")
        fields = {
            "experiment": Experiment.parse(document["experiment"]),
            "system": SystemKind.parse(document.get("system", "h")),
            "taxonomy": Taxonomy.parse(
                document.get("taxonomy", Taxonomy.INV_NL_INV_SI.label())
            ),
            "train": train,
            "adapt": TrainConfig(**adapt_config) if adapt_config else None,
            "train_data": data.get("train"),
            "test_data": data.get("test"),
        }
        for key in ("si_sdr0", "master_seed", "packet_samples",
                    "output_dir"):
            if key in document:
                fields[key] = document[key]
        fields.update({key: model[key] for key in ("P", "L")
                       if key in model})
        if "grid" in sweep:
            fields["sdr_grid"] = tuple(float(value)
                                       for value in sweep["grid"])
        for key in ("repeats", "parallel"):
            if key in sweep:
                fields[key] = sweep[key]
        return ExperimentConfig(**fields)
    except (TypeError, ValueError) as err:
        raise ConfigError(str(err)) from err


def load_config(path, **overrides):
    """Read an ExperimentConfig from a YAML file."""
    try:
        with pathlib.Path(path).open(encoding="utf-8") as infile:
            document = yaml.safe_load(infile)
    except yaml.YAMLError as err:
        raise ConfigError(f"{path}: {err}") from err
    return config_from_dict(document, **overrides)


def _datasets(cfg, out):
    """Read or generate the train and test datasets.

    Configured input files are only read; generated datasets are written
    to the output directory.
    """
    seeds = {"train": cfg.master_seed, "test": cfg.test_seed,
             "system": cfg.master_seed}
    datasets = {}
    for role, source in (("train", cfg.train_data), ("test", cfg.test_data)):
        if source:
            datasets[role] = read_dataset(source)
            continue
        datasets[role] = generate(
            cfg.system, cfg.data_taxonomy, cfg.si_sdr0, seeds[role],
            system_seed=seeds["system"], ofdm=cfg.ofdm,
        )
        write_dataset(datasets[role], out / f"{role}.sicd")
    return datasets["train"], datasets["test"], seeds


def _run_network(kind, cfg, train_data, test_data, out, baselines=None):
    spec = ModelSpec(kind, cfg.P, cfg.L, len(train_data.records),
                     cfg.master_seed)
    model = build(spec)
    monitor = test_data if kind is ModelKind.GLOBAL_H else None
    trace = fit(model, train_data, cfg.train, test_dataset=monitor)
    save_model(model, out / f"model_{kind.slug}.sicm")
    trace = trace.merge(adapt(model, test_data, cfg.adapt))
    emit_trace(trace, out / f"trace_{kind.slug}.csv", baselines)
    return {
        "final_train_db": trace.final_train_db,
        "final_test_db": trace.final_test_db,
        "window_train_db": trace.window_db("train_db"),
        "window_test_db": trace.window_db("test_db"),
        "shared_weights": model.num_weights(Role.SHARED),
        "adaptive_weights": model.num_weights(Role.ADAPTIVE),
    }


def _run_baselines(cfg, train_data, test_data, out):
    rows, results = [], {}
    for kind in BASELINES:
        model = build(ModelSpec(kind, cfg.P, cfg.L))
        train_db = model.fit(train_data).mse_db
        test_db = model.evaluate(test_data)
        rows.append((kind.slug, train_db, test_db))
        results[kind.slug] = {"final_train_db": train_db,
                              "final_test_db": test_db}
    emit_baselines(rows, out / "baselines.csv")
    return results


def _window_center(window):
    return (window[0] + window[1]) / 2.0


def _run_generation(cfg, out):
    """Write the reference PDP and both calibration curves.

    pdp.csv compares the mean power of PDP_REALIZATIONS fading draws with
    the profile at the centers of the delay spread and dominance windows.
    calibration_curve.csv maps each parameter of the calibration bracket
    to the SI-SDR it gives on the calibration probe.
    """
    target = pdp_from_spec(_window_center(config.RMS_DELAY_SPREAD_NS),
                           _window_center(config.INTERNAL_DOMINANCE_DB))
    mean = empirical_pdp(
        target, config.PDP_REALIZATIONS,
        seeding.derive_seed(cfg.master_seed, seeding.SHARED,
                            seeding.FADING),
    )
    emit_pdp(mean, target, out / "pdp.csv")

    probe = calibration_probe(cfg.ofdm)
    params = np.logspace(*np.log10(config.CALIBRATION_BRACKET),
                         config.CALIBRATION_CURVE_POINTS)
    rows, curves = [], {}
    for kind in NonlinearityKind:
        levels = sdr_curve(kind, params, probe)
        rows.extend((kind.name, float(param), level)
                    for param, level in zip(params, levels))
        curves[kind.name] = {"min_si_sdr_db": min(levels),
                             "max_si_sdr_db": max(levels)}
    emit_calibration_curve(rows, out / "calibration_curve.csv")
    return {"pdp_max_relative_error": float(
        np.max(np.abs(mean - target) / target)), **curves}


def _run_sweep(cfg, out):
    seeds = [cfg.master_seed + repeat for repeat in range(cfg.repeats)]
    rows = sdr_sweep(
        (ModelKind.PARALLEL_H, ModelKind.MEMORY_POLY), cfg.sdr_grid, seeds,
        cfg.train, cfg.ofdm, cfg.P, cfg.L, parallel=cfg.parallel,
    )
    emit_sweep(rows, out / "sweep.csv")
    results = {}
    for row in rows:
        results.setdefault(row.kind, {})[row.sdr_db] = row.mean_mse_db
    return results, {"repeats": seeds}


def run_experiment(cfg, argv=None, command="train"):
    """Run one experiment and write its artifacts to cfg.output_dir.

    Returns:
        results mapping, also written to results.yaml
    """
    out = pathlib.Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    LOGGER.info("Running %s into %s", cfg.experiment.value, out)

    if cfg.experiment is Experiment.FIG8_SWEEP:
        results, seeds = _run_sweep(cfg, out)
    else:
        train_data, test_data, seeds = _datasets(cfg, out)
        if cfg.experiment is Experiment.GEN_ONLY:
            results = _run_generation(cfg, out)
        else:
            results = _run_baselines(cfg, train_data, test_data, out)
            levels = {slug: entry["final_test_db"]
                      for slug, entry in results.items()}
            for kind in FIGURES[cfg.experiment][1]:
                results[kind.slug] = _run_network(
                    kind, cfg, train_data, test_data, out, levels
                )

    write_results(out / "results.yaml", results)
    write_manifest(out / "manifest.yaml", command, cfg.to_dict(), seeds,
                   argv)
    return results


def run_evaluation(model_path, data_path, output_dir, adapt_config=None,
                   argv=None):
    """Evaluate a saved network on a dataset, adapting it first if asked.

    Args:
        model_path: snapshot written by save_model
        data_path: dataset written by write_dataset
        output_dir: directory for evaluation.yaml, the trace and manifest
        adapt_config: TrainConfig of the adaptation, None to only evaluate

    Returns:
        results mapping, also written to evaluation.yaml
    """
    out = pathlib.Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    model = load_model(model_path)
    dataset = read_dataset(data_path)
    results = {"kind": model.kind.slug,
               "dataset": dataset.label,
               "adapted": adapt_config is not None}
    if adapt_config is None:
        results["mse_db"] = evaluate(model, dataset)
    else:
        trace = adapt(model, dataset, adapt_config)
        emit_trace(trace, out / f"trace_{model.kind.slug}.csv")
        results["mse_db"] = trace.final_test_db
    LOGGER.info("%s on %s: %.2f dB", model.kind.name, data_path,
                results["mse_db"])
    write_results(out / "evaluation.yaml", results)
    settings = {
        "model": str(model_path),
        "data": str(data_path),
        "adapt": dataclasses.asdict(adapt_config) if adapt_config else None,
    }
    write_manifest(out / "manifest.yaml", "evaluate", settings,
                   {"model": model.spec.seed,
                    "data": dataset.master_seed}, argv)
    return results
