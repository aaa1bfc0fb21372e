"""Rigid curve reconstruction from orthographic multiframe images."""

from ._core import (
    CurveParams,
    Error,
    FrameObservation,
    FramePose,
    NoConvergenceError,
    SolveReport,
    double_quotient,
    observe_scene,
    reconstruct_scene,
    recover_pose,
    residual,
    run_acceptance,
    scene_params,
    solve,
)

__all__ = [
    "CurveParams",
    "Error",
    "FrameObservation",
    "FramePose",
    "NoConvergenceError",
    "SolveReport",
    "double_quotient",
    "observe_scene",
    "reconstruct_scene",
    "recover_pose",
    "residual",
    "run_acceptance",
    "scene_params",
    "solve",
]
