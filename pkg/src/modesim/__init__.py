"""Explainable mode-based monitoring over simplicial complexes.

The library models a monitored system as modes (faces) of a simplicial
complex, classifies live state into a point of the complex via a partition
of unity over a cover, quantifies belief about the state with generalised
Dempster-Shafer belief functions, and drives threshold/hysteresis mode
transitions through a replayable discrete-time engine.
"""

from .belief import (
    BeliefFunction,
    BeliefVisualisation,
    MassFunction,
    StatementSet,
    Violation,
    confidence_band,
    from_mass,
    is_normalised,
    plausibility,
    validate,
    visualise,
)
from .cover import (
    Box,
    Cover,
    HalfPlane,
    PartitionOfUnity,
    PolygonRegion,
    Region,
    StateSpace,
    UnionRegion,
    build_pou,
    evaluate,
    localise,
    nerve,
)
from .engine import (
    Engine,
    Event,
    ExplanationRecord,
    Mode,
    OracleReading,
    Scenario,
    StableDomain,
    Trajectory,
    TrajectorySample,
    Zone,
    ZoneAtom,
    explain,
    hysteresis_transition,
    run,
    trajectory_from_json,
    trajectory_to_json,
)
from .errors import (
    CoverageGapError,
    DegeneratePointError,
    EngineError,
    GeometricConsistencyError,
    InvalidInputError,
    InvalidSubsetError,
    InvalidWeightsError,
    ModesimError,
    OutOfDomainError,
    RenderError,
    ResolutionError,
    ZeroConfidenceError,
)
from .simplicial import (
    AbstractComplex,
    Face,
    SimplexPoint,
    carrier_face,
    close_downward,
    in_face,
    is_face,
    layout,
    realize_point,
)

__version__ = "1.0.0"

__all__ = [
    "AbstractComplex",
    "Face",
    "SimplexPoint",
    "carrier_face",
    "close_downward",
    "in_face",
    "is_face",
    "layout",
    "realize_point",
    "BeliefFunction",
    "BeliefVisualisation",
    "MassFunction",
    "StatementSet",
    "Violation",
    "confidence_band",
    "from_mass",
    "is_normalised",
    "plausibility",
    "validate",
    "visualise",
    "Box",
    "Cover",
    "HalfPlane",
    "PartitionOfUnity",
    "PolygonRegion",
    "Region",
    "StateSpace",
    "UnionRegion",
    "build_pou",
    "evaluate",
    "localise",
    "nerve",
    "Engine",
    "Event",
    "ExplanationRecord",
    "Mode",
    "OracleReading",
    "Scenario",
    "StableDomain",
    "Trajectory",
    "TrajectorySample",
    "Zone",
    "ZoneAtom",
    "explain",
    "hysteresis_transition",
    "run",
    "trajectory_from_json",
    "trajectory_to_json",
    "ModesimError",
    "CoverageGapError",
    "DegeneratePointError",
    "EngineError",
    "GeometricConsistencyError",
    "InvalidInputError",
    "InvalidSubsetError",
    "InvalidWeightsError",
    "OutOfDomainError",
    "RenderError",
    "ResolutionError",
    "ZeroConfidenceError",
]
