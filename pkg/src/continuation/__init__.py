from src.continuation.marking import MarkingLabel, canonical_marking, marking_classes, transport_marking
from src.continuation.paths import (
    ConstantPath, MapSegmentPath, ParamPath, ScaledPath, SegmentPath, TangentPath,
    default_plane_path, path_from_spec,
)
from src.continuation.tracking import (
    CycleTrack, TrackBundle, continue_cycles, dlog_from_track, dlog_multiplier, richardson_central,
    track_cycle, track_cycles,
)

__all__ = [
    "MarkingLabel", "canonical_marking", "marking_classes", "transport_marking",
    "ConstantPath", "MapSegmentPath", "ParamPath", "ScaledPath", "SegmentPath", "TangentPath",
    "default_plane_path", "path_from_spec",
    "CycleTrack", "TrackBundle", "continue_cycles", "dlog_from_track", "dlog_multiplier",
    "richardson_central", "track_cycle", "track_cycles",
]
