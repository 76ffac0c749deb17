"""Experiment harness: domain-sequence generators, convergence runner, CLI."""

from imlab.harness.sequences import (
    amplitude_law,
    gen_hyperconvex_exterior,
    gen_monotone_sequences,
    gen_wobble_sequence,
    non_monotonicity_witnesses,
)
from imlab.harness.config import ExperimentConfig
from imlab.harness.runner import ConvergenceReport, run_convergence_experiment

__all__ = [
    "amplitude_law",
    "gen_monotone_sequences",
    "gen_wobble_sequence",
    "gen_hyperconvex_exterior",
    "non_monotonicity_witnesses",
    "ExperimentConfig",
    "ConvergenceReport",
    "run_convergence_experiment",
]
