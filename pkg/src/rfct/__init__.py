"""Region-filtering correlation tracking.

Correlation filters whose training samples are filtered by a spatial map,
trained with ADMM and updated with a boosted first-frame weight.
"""

from .config import TrackerConfig, load_config
from .detection import Detection, ScalePyramidConfig
from .evaluation import BoundingBox, SequenceResult, evaluate
from .model_update import UpdateSchedule
from .solver import AdmmState, FilterBank, SolverConfig, train
from .spatial_map import SpatialMap, binary_map, our_map, rquadratic_map
from .tracker import RFCTracker, TrackerState, run_sequence

__version__ = "0.1.0"

__all__ = [
    "AdmmState",
    "BoundingBox",
    "Detection",
    "FilterBank",
    "RFCTracker",
    "ScalePyramidConfig",
    "SequenceResult",
    "SolverConfig",
    "SpatialMap",
    "TrackerConfig",
    "TrackerState",
    "UpdateSchedule",
    "binary_map",
    "evaluate",
    "load_config",
    "our_map",
    "rquadratic_map",
    "run_sequence",
    "train",
]
