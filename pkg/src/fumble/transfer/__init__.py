from .baselines import ChancePredictor, MiddlePrior, ModePrior, fixed_priors, motion_histogram_baseline
from .finetune import FinetuneConfig, FinetunedModel, anticipation_head, finetune, score_windows
from .flow import dense_flow, flow_histogram
from .probe import ProbeModel, fit_linear_probe

__all__ = [
    "dense_flow",
    "flow_histogram",
    "ProbeModel",
    "fit_linear_probe",
    "FinetuneConfig",
    "FinetunedModel",
    "finetune",
    "anticipation_head",
    "score_windows",
    "motion_histogram_baseline",
    "fixed_priors",
    "ModePrior",
    "MiddlePrior",
    "ChancePredictor",
]
