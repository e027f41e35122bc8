from .latency import (
    NORMALIZED, VALUE_MAP, LatencyEncoderConfig, value_map_from_latencies,
    feature_currents, latency_encode
)
from .receptive_field import (
    ReceptiveFieldConfig, fit_receptive_fields, receptive_field_activations, receptive_field_encode
)
from .scanline import (
    ScanlineEncoderParams, Scanline, ScanlineSet, scanline_generate, clip_line,
    line_pixels, scanline_encode
)
from .storage import (
    EncodingFileError, EncodedSample, save_encoded, load_encoded
)
