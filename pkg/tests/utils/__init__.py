"""Shared test utilities."""
import pathlib
from .datasets import (
    assert_dataset_eq,
    assert_record_eq,
    assert_signal_close,
)
from .gradcheck import (
    assert_gradients_match,
    numeric_gradient,
)
from .oracles import (
    brute_force_conv,
    brute_force_depthwise,
    brute_force_depthwise_multi,
    reference_hammerstein,
)

# Directory containing unit tests.
TEST_DIR = pathlib.Path(__file__).parent.parent

# Repository root, for experiment configs and style checks.
ROOT_DIR = TEST_DIR.parent

# Short packets keep data generation fast in tests.
SHORT_PACKET = 400
