"""timetok: tokenize continuous event times into discrete token sequences, and back.

Five strategy families: fixed-precision numeric strings, bit-exact float32
byte tokens, Gregorian calendar tokens (absolute and relative), uniform scale
binning, and residual scalar quantization with exact 1-D K-means codebooks.
"""

__version__ = "0.1.0"

from .bench import (
    BenchReport,
    BenchRow,
    SyntheticConfig,
    analyze,
    compare,
    gen_synthetic,
    reconstruction_rmse,
    tokens_per_value,
)
from .codec_calendar import Resolution
from .codec_quant import BinSpec, Codebook, RsqSpec, bin_fit, kmeans1d_fit, rsq_fit
from .core import (
    Dataset,
    DatasetStats,
    Event,
    EventSequence,
    TimeUnit,
    dataset_stats,
    load_dataset,
    save_dataset,
    validate_consistency,
)
from .errors import TimetokError
from .template import (
    TemplateOrder,
    TokenizerSpec,
    VocabManifest,
    build_manifest,
    decode_value,
    encode_value,
    fit_tokenizer,
    load_spec,
    parse_stream,
    render_sequence,
    save_spec,
)
from .transforms import Histogram, Scale, ScaleKind, histogram, inverse_transform, transform
