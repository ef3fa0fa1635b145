"""
Synthetic SI data package.

This package generates OFDM packets, SI channels and calibrated
nonlinearities, assembles them into datasets and stores them on disk.
"""
from .channel import (
    ChannelSpec,
    SIChannel,
    draw_channel_spec,
    draw_taps,
    empirical_pdp,
    pdp_from_spec,
    rms_delay_spread,
    sample_si_channel,
)
from .codec import read_dataset, write_dataset
from .dataset import (
    Dataset,
    FileRecord,
    SystemKind,
    Taxonomy,
    calibration_probe,
    generate,
    generate_hammerstein,
    generate_wiener,
    hammerstein_response,
    receiver_noise,
    shared_clip_signal,
    wiener_response,
)
from .nonlinearity import (
    NonlinearityKind,
    NonlinearitySpec,
    ad_apply,
    apply_nonlinearity,
    attainable_range,
    calibrate,
    measure_si_sdr,
    pa_apply,
    sdr_curve,
    si_sdr,
)
from .waveform import (
    ComplexSignal,
    Constellation,
    OfdmConfig,
    generate_ofdm_packet,
    papr_db,
    qam64_map,
)

__all__ = [
    "ChannelSpec", "SIChannel", "draw_channel_spec", "draw_taps",
    "empirical_pdp", "pdp_from_spec", "rms_delay_spread", "sample_si_channel",
    "read_dataset", "write_dataset",
    "Dataset", "FileRecord", "SystemKind", "Taxonomy", "calibration_probe",
    "generate", "generate_hammerstein", "generate_wiener",
    "hammerstein_response", "receiver_noise", "shared_clip_signal",
    "wiener_response",
    "NonlinearityKind", "NonlinearitySpec", "ad_apply", "apply_nonlinearity",
    "attainable_range", "calibrate", "measure_si_sdr", "pa_apply",
    "sdr_curve", "si_sdr",
    "ComplexSignal", "Constellation", "OfdmConfig", "generate_ofdm_packet",
    "papr_db", "qam64_map",
]
