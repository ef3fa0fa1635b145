"""Configuration for the fdsic package."""
import os

# Baseband sampling of the 20 MHz n-channel.
SAMPLE_RATE = 20e6
SAMPLE_PERIOD_NS = 1e9 / SAMPLE_RATE

# WLAN packet length in samples.
PACKET_SAMPLES = 3218

# SI channel taps, 550 ns to the noise floor.
CHANNEL_TAPS = 12
RMS_DELAY_SPREAD_NS = (20.0, 40.0)
INTERNAL_DOMINANCE_DB = (5.0, 10.0)
MAX_CHANNEL_ATTEMPTS = 100

# Fading draws averaged for the empirical PDP of a gen run.
PDP_REALIZATIONS = 10_000

# Remote signals and receiver noise relative to the SI component.
NOISE_LEVEL_DB = -90.0

# Datasets
FILES_PER_DATASET = 10
DEFAULT_SI_SDR0 = 10.0
SI_SDR0_RANGE = (2.0, 40.0)
SI_SDR_SPREAD_DB = 4.0
CALIBRATION_PROBE_SEED = 0
DATASET_FORMAT_VERSION = 1

# Nonlinearity calibration
CALIBRATION_BRACKET = (1e-3, 1e3)
CALIBRATION_MAX_ITER = 200
CALIBRATION_TOLERANCE_DB = 0.1
SI_SDR_CAP_DB = 150.0
CALIBRATION_CURVE_POINTS = 25

# Models and training
NONLINEAR_ORDER = 8
KERNEL_SIZE = 32
EPOCHS = 10_000
LEARNING_RATE = 0.01
LOG_EVERY = 100
MSE_DB_FLOOR = -300.0
# Logged rows averaged into the reported end-of-training level.
FINAL_WINDOW = 10

# Ridge of the baseline normal equations, relative to unit-norm columns.
# It bounds how far the high polynomial orders chase deep PA saturation.
RIDGE = 3e-7

# Test data is drawn with this offset on the master seed.
TEST_SEED_OFFSET = 1

# SI-SDR sweep grid in dB
SDR_GRID = (5.0, 10.0, 15.0, 20.0, 25.0, 30.0)

# Runtime knobs.  Tests and scripts may override these through the
# environment.
LOG_LEVEL = os.getenv("FDSIC_LOG_LEVEL", "INFO")
OUTPUT_DIR = os.getenv(
    "FDSIC_OUTPUT_DIR",
    os.path.join(os.getcwd(), "var", "runs"),
)
