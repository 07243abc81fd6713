from .assets import ClipTensor, ClipWindow, CropRect, VideoAsset, probe_asset, read_manifest, write_manifest
from .decode import decode_frames, sample_clip
from .letterbox import detect_letterbox
from .scenes import detect_scene_boundaries, split_and_filter_scenes

__all__ = [
    "VideoAsset",
    "ClipWindow",
    "ClipTensor",
    "CropRect",
    "probe_asset",
    "read_manifest",
    "write_manifest",
    "decode_frames",
    "sample_clip",
    "detect_letterbox",
    "detect_scene_boundaries",
    "split_and_filter_scenes",
]
