"""Dataset comparison utilities."""
import numpy as np


def assert_signal_close(actual, expected, rtol=0.0, atol=0.0):
    """Raise assertion if two complex signals differ beyond a tolerance."""
    actual = np.asarray(getattr(actual, "samples", actual))
    expected = np.asarray(getattr(expected, "samples", expected))
    assert actual.shape == expected.shape, (
        f"shape {actual.shape} != {expected.shape}"
    )
    np.testing.assert_allclose(actual, expected, rtol=rtol, atol=atol)


def assert_record_eq(actual, expected):
    """Raise assertion if two file records are not bitwise identical."""
    debug_info = f"file_id = {expected.file_id}"
    assert actual.file_id == expected.file_id, debug_info
    assert actual.noise_seed == expected.noise_seed, debug_info
    assert actual.truth_nl == expected.truth_nl, debug_info
    assert np.array_equal(actual.input.samples, expected.input.samples), (
        f"inputs differ, {debug_info}"
    )
    assert np.array_equal(actual.output.samples, expected.output.samples), (
        f"outputs differ, {debug_info}"
    )
    assert np.array_equal(
        actual.truth_channel.taps, expected.truth_channel.taps
    ), f"channels differ, {debug_info}"


def assert_dataset_eq(actual, expected):
    """Raise assertion if two datasets are not bitwise identical."""
    assert actual.system is expected.system
    assert actual.taxonomy is expected.taxonomy
    assert actual.si_sdr0 == expected.si_sdr0
    assert actual.master_seed == expected.master_seed
    assert len(actual.records) == len(expected.records)
    for record_actual, record_expected in zip(actual.records,
                                              expected.records):
        assert_record_eq(record_actual, record_expected)
