"""Corralling bandit simulations."""

import json
from pathlib import Path

from ._core import (
    ConfigError,
    bregman_divergence,
    ftrl_step,
    lower_median,
    mix_distribution,
    omd_step,
    reference_lines,
    resolve_config,
    rho_ladder,
    run_experiment,
    run_to_directory,
    solve_log_barrier,
    solve_shift,
    theory_beta,
    tsallis_potential,
)

__all__ = [
    "ConfigError",
    "bregman_divergence",
    "ftrl_step",
    "load_config",
    "lower_median",
    "mix_distribution",
    "omd_step",
    "reference_lines",
    "resolve_config",
    "rho_ladder",
    "run_experiment",
    "run_to_directory",
    "solve_log_barrier",
    "solve_shift",
    "theory_beta",
    "tsallis_potential",
]


def load_config(path):
    """Reads a configuration file and returns it resolved, as a dict."""
    return json.loads(resolve_config(Path(path).read_text()))
