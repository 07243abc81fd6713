from .api import ServiceConfig, ServiceVideo, create_app
from .gold import assign_gold_checks
from .pipeline import JobConfig, PipelineStageError, run_pipeline
from .store import AnnotationStore, DuplicateAnnotation, StoredAnnotation

__all__ = [
    "AnnotationStore",
    "StoredAnnotation",
    "DuplicateAnnotation",
    "assign_gold_checks",
    "ServiceConfig",
    "ServiceVideo",
    "create_app",
    "JobConfig",
    "PipelineStageError",
    "run_pipeline",
]
