from src.flow.engine import (
    StalledError,
    StepRejectedError,
    barrier_time,
    evolve,
    flow_speed,
    step,
)
from src.flow.identities import (
    IdentityReport,
    InsufficientSnapshotsError,
    identity_convergence_order,
    identity_refinement_study,
    verify_evolution_identities,
)
from src.flow.params import FlowParams, StepControl
from src.flow.trajectory import (
    FlowTrajectory,
    SnapshotDiagnostics,
    round_radius,
    round_trajectory,
)

__all__ = [
    "FlowParams",
    "FlowTrajectory",
    "IdentityReport",
    "InsufficientSnapshotsError",
    "SnapshotDiagnostics",
    "StalledError",
    "StepControl",
    "StepRejectedError",
    "barrier_time",
    "evolve",
    "flow_speed",
    "identity_convergence_order",
    "identity_refinement_study",
    "round_radius",
    "round_trajectory",
    "step",
    "verify_evolution_identities",
]
