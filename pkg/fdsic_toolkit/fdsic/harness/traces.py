"""CSV tables written by the harness."""
import csv
import logging
import pathlib

from fdsic import config
from fdsic.models.training import TraceRow

LOGGER = logging.getLogger(__name__)

TRACE_HEADER = ("epoch", "mse_db_train", "mse_db_test")
BASELINE_HEADER = ("kind", "mse_db_train", "mse_db_test")
SWEEP_HEADER = ("kind", "sdr_db", "mean_mse_db", "repeats")
PDP_HEADER = ("tap", "delay_ns", "mean_power", "target_power")
CURVE_HEADER = ("kind", "param", "si_sdr_db")


def format_value(value):
    """Print a float with 12 significant digits, None as empty."""
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _write_table(path, header, rows):
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as outfile:
        writer = csv.writer(outfile, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(value) for value in row])
    LOGGER.info("Wrote %s", path)
    return path


def emit_trace(trace, path, baselines=None):
    """Write a TrainTrace as epoch, mse_db_train, mse_db_test rows.

    baselines maps a baseline slug to its test-data level in dB.  Each
    becomes a constant <slug>_db_test column so one file holds the whole
    curve set.
    """
    baselines = dict(baselines or {})
    header = TRACE_HEADER + tuple(f"{slug}_db_test" for slug in baselines)
    levels = tuple(baselines.values())
    return _write_table(
        path,
        header,
        ((row.epoch, row.train_db, row.test_db, *levels)
         for row in trace.rows),
    )


def _parse_float(text):
    return float(text) if text else None


def read_trace(path):
    """Parse a trace CSV back into TraceRows, skipping baseline columns."""
    with pathlib.Path(path).open(newline="", encoding="utf-8") as infile:
        reader = csv.DictReader(infile)
        fields = tuple(reader.fieldnames or ())
        if fields[:len(TRACE_HEADER)] != TRACE_HEADER:
            raise ValueError(f"{path} is not a trace file")
        return [
            TraceRow(int(line["epoch"]),
                     _parse_float(line["mse_db_train"]),
                     _parse_float(line["mse_db_test"]))
            for line in reader
        ]


def emit_baselines(results, path):
    """Write (kind, train dB, test dB) rows for the baselines."""
    return _write_table(path, BASELINE_HEADER, results)


def emit_sweep(rows, path):
    """Write the SweepRows of an SI-SDR sweep."""
    return _write_table(
        path,
        SWEEP_HEADER,
        ((row.kind, row.sdr_db, row.mean_mse_db, row.repeats)
         for row in rows),
    )


def emit_pdp(mean_power, target_power, path,
             sample_period=config.SAMPLE_PERIOD_NS):
    """Write the empirical and target power per tap and delay."""
    return _write_table(
        path,
        PDP_HEADER,
        ((tap, tap * sample_period, float(mean), float(target))
         for tap, (mean, target) in enumerate(zip(mean_power,
                                                  target_power))),
    )


def emit_calibration_curve(rows, path):
    """Write (kind, param, SI-SDR dB) rows of a calibration curve."""
    return _write_table(path, CURVE_HEADER, rows)
