from .model import EncoderConfig, VideoEncoder, build_encoder, clips_to_tensor, encode
from .weights import export_weights, import_weights, read_weights_meta

__all__ = [
    "EncoderConfig",
    "VideoEncoder",
    "build_encoder",
    "encode",
    "clips_to_tensor",
    "export_weights",
    "import_weights",
    "read_weights_meta",
]
