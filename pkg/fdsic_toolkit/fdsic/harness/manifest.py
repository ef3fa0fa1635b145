"""Run manifests: everything needed to repeat a harness run."""
import importlib.metadata
import logging
import pathlib
import platform
import yaml

import fdsic

LOGGER = logging.getLogger(__name__)

PACKAGES = ("numpy", "scipy", "PyYAML", "click")


def versions():
    """Return the versions of Python, fdsic and its numeric stack."""
    found = {"python": platform.python_version(),
             "fdsic": fdsic.__version__}
    for package in PACKAGES:
        try:
            found[package] = importlib.metadata.version(package)
        except importlib.metadata.PackageNotFoundError:
            found[package] = None
    return found


def write_manifest(path, command, settings, seeds, argv=None):
    """Write a YAML manifest for one run.

    Args:
        path: manifest file to write
        command: CLI subcommand name
        settings: mapping of the full resolved configuration
        seeds: mapping of every seed the run used
        argv: command line, when run from the CLI

    Returns:
        pathlib.Path of the manifest
    """
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {
        "command": command,
        "argv": list(argv) if argv is not None else None,
        "config": settings,
        "seeds": seeds,
        "versions": versions(),
    }
    with path.open("w", encoding="utf-8") as outfile:
        yaml.safe_dump(document, outfile, sort_keys=False)
    LOGGER.info("Wrote manifest %s", path)
    return path


def write_results(path, results):
    """Write a results mapping as YAML."""
    path = pathlib.Path(path)
    with path.open("w", encoding="utf-8") as outfile:
        yaml.safe_dump(results, outfile, sort_keys=False)
    return path
