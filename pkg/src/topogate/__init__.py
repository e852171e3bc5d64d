"""Interpretable time-series classification through sublevel-set
persistence landscapes, a row-gated convolutional classifier, and
critical-point reconstruction of the inputs the model relied on.
"""

from .data import (
    Dataset,
    FoldPlan,
    load_mitbih_csv,
    load_ucr,
    make_dip_dataset,
    make_folds,
    shift_augment,
)
from .landscape import (
    LandscapeGrid,
    LandscapeStack,
    TentFunction,
    landscape_stack,
    normalize_area,
    stack_dataset,
)
from .model import (
    FitReport,
    GatedConvNet,
    GatingWeights,
    ModelConfig,
    TrainConfig,
    evaluate,
    forward,
    init_model,
    loss_and_gradients,
    train,
)
from .persistence import (
    PersistenceDiagram,
    PersistencePair,
    sublevel_diagram,
)
from .reconstruction import (
    LandscapePolyline,
    Reconstruction,
    get_x_values,
    get_y_values,
    level_polylines,
    reconstruct,
    reconstruct_signal,
)
from .selection import SelectionResult, restrict_stack, select_levels
from .signal import CriticalPoint, Signal, critical_points, standardize

__version__ = "0.1.0"

__all__ = [
    "CriticalPoint",
    "Dataset",
    "FitReport",
    "FoldPlan",
    "GatedConvNet",
    "GatingWeights",
    "LandscapeGrid",
    "LandscapePolyline",
    "LandscapeStack",
    "ModelConfig",
    "PersistenceDiagram",
    "PersistencePair",
    "Reconstruction",
    "SelectionResult",
    "Signal",
    "TentFunction",
    "TrainConfig",
    "critical_points",
    "evaluate",
    "forward",
    "get_x_values",
    "get_y_values",
    "init_model",
    "landscape_stack",
    "level_polylines",
    "load_mitbih_csv",
    "load_ucr",
    "loss_and_gradients",
    "make_dip_dataset",
    "make_folds",
    "normalize_area",
    "reconstruct",
    "reconstruct_signal",
    "restrict_stack",
    "select_levels",
    "shift_augment",
    "stack_dataset",
    "standardize",
    "sublevel_diagram",
    "train",
]
