"""Stigmergic pattern formation, tabular learners, and the anytime
intelligence harness, backed by the C++ core."""

from ._core import (
    __version__,
    env_entropy,
    evaluate_ci,
    pattern_complexity,
    random_movement_pattern,
    response_amplitude,
    run_baseline,
    run_cli,
    run_seal,
    run_seal_learned,
    similarity_of_frame,
    torus_distance,
)

__all__ = [
    "__version__",
    "env_entropy",
    "evaluate_ci",
    "pattern_complexity",
    "random_movement_pattern",
    "response_amplitude",
    "run_baseline",
    "run_cli",
    "run_seal",
    "run_seal_learned",
    "similarity_of_frame",
    "torus_distance",
]
