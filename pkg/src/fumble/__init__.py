"""Video intentionality toolkit.

Subpackages:
    media       -- decoding, scene splitting, letterbox removal, clip sampling
    data        -- annotations, QC, labels, splits, synthetic corpus
    encoder     -- 3D-convolutional video backbone and weight IO
    pretext     -- self-supervised objectives (speed, context, sorting)
    transfer    -- linear probe, fine-tuning, non-learned baselines
    evaluation  -- benchmark metrics and reports
    service     -- annotation HTTP service and pipeline orchestration
    kernels     -- compiled numeric kernels with numpy fallbacks
"""

__version__ = "0.1.0"
